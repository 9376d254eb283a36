"""Persona-curated function registries, call parsing, and dispatch.

NPC output embeds in-game actions as trailing ``Function: [{'name': ...,
'arguments': [...]}]`` blocks.  This module pulls those blocks out of raw
model text (tolerating single- or double-quoted pseudo-JSON), validates them
against the NPC's own function table, runs them against the world, and wraps
each outcome as a :class:`FunctionResult` whose text is exactly what gets fed
back to the model.

A call that is unknown to the registry or malformed never touches the world;
every failure is an in-band result string, never an exception.
"""

from __future__ import annotations

import ast
import json
import warnings
from dataclasses import dataclass, field

from .world import (
    ActionResult,
    BlockKind,
    EntityKind,
    ItemKind,
    LOCATION_NAMES,
    MINEABLE_BLOCKS,
    WorldState,
)

_ITEM_NAMES = tuple(item.value for item in ItemKind)
_MINEABLE_NAMES = tuple(kind.value for kind in BlockKind if kind in MINEABLE_BLOCKS)
_MOB_NAMES = (EntityKind.SPIDER.value, EntityKind.ZOMBIE.value, EntityKind.CREEPER.value)


@dataclass(frozen=True)
class FunctionSpec:
    """One callable skill: name, argument domains, and its prompt sentence."""

    name: str
    arg_domains: tuple[frozenset[str], ...]
    description: str

    @property
    def arity(self) -> int:
        return len(self.arg_domains)


FUNCTION_SPECS: dict[str, FunctionSpec] = {
    spec.name: spec
    for spec in (
        FunctionSpec("goToPlayer", (),
                     "Go to the player's location using 'goToPlayer'."),
        FunctionSpec("followPlayer", (),
                     "Follow the player using 'followPlayer'."),
        FunctionSpec("pointToLocation", (frozenset(LOCATION_NAMES),),
                     "Point to a specific location using 'pointToLocation'."),
        FunctionSpec("equipItem", (frozenset(_ITEM_NAMES),),
                     "Equip yourself with an item in your inventory using 'equipItem'."),
        FunctionSpec("dropItem", (frozenset(_ITEM_NAMES),),
                     "Give the player an item in your inventory by using 'dropItem'."),
        FunctionSpec("mineBlock", (frozenset(_MINEABLE_NAMES),),
                     "Mine blocks (only cobblestone, dirt, stone and oak_log) "
                     "by using 'mineBlock'."),
        FunctionSpec("defendSelf", (),
                     "Defend yourself from mobs using function 'defendSelf'."),
        FunctionSpec("attackEntity", (frozenset(_MOB_NAMES),),
                     "Attack mobs using function 'attackEntity'."),
    )
}

ELENA_FUNCTIONS = ("goToPlayer", "followPlayer", "pointToLocation",
                   "equipItem", "dropItem", "mineBlock")
ALARIC_FUNCTIONS = ("goToPlayer", "followPlayer", "equipItem", "dropItem",
                    "mineBlock", "defendSelf", "attackEntity")


@dataclass(frozen=True)
class Registry:
    """Ordered function table for one NPC."""

    npc_name: str
    specs: tuple[FunctionSpec, ...]

    def __post_init__(self) -> None:
        names = [spec.name for spec in self.specs]
        if len(names) != len(set(names)):
            raise ValueError(f"duplicate function names in registry for {self.npc_name}")

    def get(self, name: str) -> FunctionSpec | None:
        for spec in self.specs:
            if spec.name == name:
                return spec
        return None

    def names(self) -> tuple[str, ...]:
        return tuple(spec.name for spec in self.specs)


def build_registry(npc_name: str, function_names: list[str] | tuple[str, ...]) -> Registry:
    specs = []
    for name in function_names:
        spec = FUNCTION_SPECS.get(name)
        if spec is None:
            raise ValueError(f"unknown function {name!r} in registry for {npc_name}")
        specs.append(spec)
    return Registry(npc_name, tuple(specs))


def elena_registry() -> Registry:
    return build_registry("Elena", ELENA_FUNCTIONS)


def alaric_registry() -> Registry:
    return build_registry("Alaric", ALARIC_FUNCTIONS)


@dataclass(frozen=True)
class FunctionCall:
    name: str
    arguments: tuple[str, ...] = ()


@dataclass(frozen=True)
class FunctionResult:
    call: FunctionCall
    ok: bool
    text: str


@dataclass
class ParsedOutput:
    speech: str
    calls: list[FunctionCall] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def format_call(call: FunctionCall) -> str:
    """Render a call in the exact block format the prompts teach."""
    args = ", ".join(f"'{a}'" for a in call.arguments)
    return f"Function: [{{'name':'{call.name}', 'arguments': [{args}]}}]"


def format_calls(calls: list[FunctionCall]) -> str:
    entries = ", ".join(
        f"{{'name':'{c.name}', 'arguments': [{', '.join(repr(a) for a in c.arguments)}]}}"
        for c in calls
    )
    return f"Function: [{entries}]"


def _scan_block(text: str, start: int) -> int | None:
    """Return the index one past the matching ']' for the '[' at ``start``."""
    depth = 0
    quote: str | None = None
    for i in range(start, len(text)):
        ch = text[i]
        if quote:
            if ch == quote:
                quote = None
            continue
        if ch in ("'", '"'):
            quote = ch
        elif ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth == 0:
                return i + 1
    return None


def _parse_entries(block: str) -> list | None:
    for loader in (ast.literal_eval, json.loads):
        try:
            with warnings.catch_warnings():
                # mutated pseudo-JSON can trip escape-sequence warnings
                warnings.simplefilter("ignore")
                value = loader(block)
        except (ValueError, SyntaxError, MemoryError, RecursionError):
            continue
        if isinstance(value, list):
            return value
        return [value] if isinstance(value, dict) else None
    return None


def parse_npc_output(raw: str) -> ParsedOutput:
    """Split raw model text into speech and any embedded function calls.

    Malformed blocks are dropped with a warning; the NPC still talks.
    """
    out = ParsedOutput(speech="")
    pieces: list[str] = []
    cursor = 0
    marker = "Function:"
    while True:
        found = raw.find(marker, cursor)
        if found == -1:
            pieces.append(raw[cursor:])
            break
        pieces.append(raw[cursor:found])
        bracket = raw.find("[", found + len(marker))
        between = raw[found + len(marker):bracket] if bracket != -1 else ""
        if bracket == -1 or between.strip():
            # "Function:" without a block right after it: plain speech.
            pieces.append(raw[found:found + len(marker)])
            cursor = found + len(marker)
            continue
        end = _scan_block(raw, bracket)
        if end is None:
            out.warnings.append("unterminated function block dropped")
            cursor = len(raw)
            continue
        entries = _parse_entries(raw[bracket:end])
        if entries is None:
            out.warnings.append("unparseable function block dropped")
        else:
            for entry in entries:
                call = _coerce_entry(entry, out.warnings)
                if call is not None:
                    out.calls.append(call)
        cursor = end
    out.speech = "".join(pieces).strip()
    return out


def _coerce_entry(entry: object, warnings: list[str]) -> FunctionCall | None:
    if not isinstance(entry, dict):
        warnings.append(f"function entry is not an object: {entry!r}")
        return None
    name = entry.get("name")
    arguments = entry.get("arguments", [])
    if not isinstance(name, str) or not name:
        warnings.append("function entry missing name")
        return None
    if not isinstance(arguments, (list, tuple)) or not all(
        isinstance(a, str) for a in arguments
    ):
        warnings.append(f"function {name} has malformed arguments")
        return None
    return FunctionCall(name, tuple(arguments))


def dispatch(registry: Registry, world: WorldState, actor_id: str,
             call: FunctionCall) -> FunctionResult:
    """Validate a call against the registry and run it against the world.

    All error modes come back as failure results; the world is only touched
    by calls that pass validation.
    """
    spec = registry.get(call.name)
    if spec is None:
        return FunctionResult(call, False, f"unknown function {call.name}")
    if len(call.arguments) != spec.arity:
        return FunctionResult(call, False, "invalid arguments")
    for arg, domain in zip(call.arguments, spec.arg_domains):
        if arg not in domain:
            return FunctionResult(call, False, "invalid arguments")
    result = _invoke(world, actor_id, call)
    return FunctionResult(call, result.ok, result.text)


def _invoke(world: WorldState, actor_id: str, call: FunctionCall) -> ActionResult:
    name, args = call.name, call.arguments
    if name == "goToPlayer":
        return world.go_to_player(actor_id)
    if name == "followPlayer":
        return world.follow_player(actor_id)
    if name == "pointToLocation":
        return world.point_to_location(actor_id, args[0])
    if name == "equipItem":
        return world.equip_item(actor_id, ItemKind(args[0]))
    if name == "dropItem":
        return world.drop_item(actor_id, ItemKind(args[0]))
    if name == "mineBlock":
        return world.mine_block(actor_id, BlockKind(args[0]))
    if name == "defendSelf":
        return world.defend_self(actor_id)
    if name == "attackEntity":
        return world.attack_entity(actor_id, EntityKind(args[0]))
    raise AssertionError(f"spec catalog and dispatch table disagree on {name}")


def render_skill_section(registry: Registry) -> str:
    """The deterministic 'Your skills' paragraph for prompt assembly."""
    base = "You can talk to the player directly."
    if not registry.specs:
        return base
    sentences = " ".join(spec.description for spec in registry.specs)
    return f"{base} To execute your skills generate function calls. {sentences}"
