"""Session orchestration and the append-only structured log.

A session owns one world, one conversation state per NPC, and one quest
tracker.  Player commands come in as small dicts (say / move / mine / place /
attack / open / give / wait), utterances route to the nearest NPC in earshot,
one tick elapses per command, and every observable thing that happens becomes
a log record.  The log plus the seed determine the final state bit-exactly:
``replay`` re-runs the command stream against a replay provider built from
the prompt digests embedded in the log, and ``replay_verify`` checks the
regenerated log byte-for-byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import constants as C
from .backends import Backend, ReplayBackend
from .npc import ConversationState, DEFAULT_K, NpcProfile, load_shipped_profile, take_npc_turn
from .quest import QuestProgress
from .world import (
    ActionResult,
    BlockKind,
    EntityKind,
    ItemKind,
    WorldEvent,
    WorldState,
    create_world,
)

LOG_KINDS = ("utterance", "function_call", "function_return", "subgoal",
             "world_event", "quest_step", "warning")

PLAYER_VERBS = ("say", "move", "mine", "place", "attack", "open", "give", "wait")

NOBODY_HEARS = "no one can hear you"


@dataclass(frozen=True)
class LogRecord:
    session: str
    seq: int
    tick: int
    kind: str
    actor: str
    payload: dict

    def to_line(self) -> str:
        return json.dumps(
            {"session": self.session, "seq": self.seq, "tick": self.tick,
             "kind": self.kind, "actor": self.actor, "payload": self.payload},
            sort_keys=True, separators=(",", ":"),
        )

    @classmethod
    def from_dict(cls, raw: dict) -> "LogRecord":
        return cls(session=raw["session"], seq=raw["seq"], tick=raw["tick"],
                   kind=raw["kind"], actor=raw["actor"], payload=raw["payload"])


@dataclass
class SessionConfig:
    seed: int = 7
    k: int = DEFAULT_K
    turn_budget: int = 200
    tick_budget: int = 5000
    session_id: str | None = None
    profile_paths: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("K must be >= 1")
        if self.turn_budget < 1 or self.tick_budget < 1:
            raise ValueError("budgets must be >= 1")
        if self.session_id is None:
            self.session_id = f"session-{self.seed}"

    def to_payload(self) -> dict:
        return {
            "event": "session_start",
            "seed": self.seed,
            "k": self.k,
            "turn_budget": self.turn_budget,
            "tick_budget": self.tick_budget,
            "profile_paths": list(self.profile_paths),
        }

    @classmethod
    def from_payload(cls, payload: dict, session_id: str) -> "SessionConfig":
        return cls(seed=payload["seed"], k=payload["k"],
                   turn_budget=payload["turn_budget"],
                   tick_budget=payload["tick_budget"],
                   session_id=session_id,
                   profile_paths=tuple(payload.get("profile_paths", ())))


def _load_profiles(config: SessionConfig) -> list[NpcProfile]:
    if config.profile_paths:
        return [NpcProfile.from_file(path) for path in config.profile_paths]
    return [load_shipped_profile("elena"), load_shipped_profile("alaric")]


class Session:
    """One serialized event loop: player commands in, log records out."""

    def __init__(self, config: SessionConfig, backend: Backend):
        self.config = config
        self.backend = backend
        self.world = create_world(config.seed)
        self.progress = QuestProgress()
        self.records: list[LogRecord] = []
        self.finished = False
        self.end_reason: str | None = None
        self.exchanges_total = 0
        self._seq = 0
        self._call_counter = 0
        self.states: dict[str, ConversationState] = {}
        for profile in _load_profiles(config):
            self.states[profile.name] = ConversationState(profile)
        self._log("world_event", "system", self.config.to_payload())
        self._absorb_world_events()  # spawn events

    # --- logging helpers --------------------------------------------------

    def _log(self, kind: str, actor: str, payload: dict) -> LogRecord:
        self._seq += 1
        record = LogRecord(session=self.config.session_id, seq=self._seq,
                           tick=self.world.tick, kind=kind, actor=actor,
                           payload=payload)
        self.records.append(record)
        return record

    def _absorb_world_events(self) -> None:
        """Log buffered world events and feed them to the quest tracker."""
        for event in self.world.drain_events():
            self._log("world_event", event.actor or "world", event.to_payload())
            self._observe(event)

    def _observe(self, event: WorldEvent) -> None:
        for step in self.progress.observe(event):
            self._log("quest_step", "system",
                      {"step": step.letter, "title": step.title})

    # --- command handling ---------------------------------------------------

    def handle_command(self, command: dict) -> list[LogRecord]:
        """Execute one player command; returns the records it appended."""
        if self.finished:
            return []
        start = len(self.records)
        self._log("world_event", "player",
                  {"event": "player_command", "command": command})
        verb = command.get("verb")
        if verb == "say":
            self._handle_say(str(command.get("text", "")))
        elif verb == "move":
            self._simple(self.world.move_entity("player", str(command.get("dir", ""))))
        elif verb == "mine":
            self._simple(self._mine(command))
        elif verb == "place":
            self._simple(self._place(command))
        elif verb == "attack":
            self._simple(self._attack(command))
        elif verb == "open":
            self._simple(self.world.open_chest("player"))
        elif verb == "give":
            self._simple(self._give(command))
        elif verb == "wait":
            pass
        else:
            self._log("warning", "system", {"text": f"unknown verb {verb!r}"})
        self.world.advance_tick()
        self._absorb_world_events()
        self._check_termination()
        return self.records[start:]

    def _simple(self, result) -> None:
        self._absorb_world_events()
        if not result.ok:
            self._log("warning", "system", {"text": result.text})

    def _mine(self, command: dict) -> ActionResult:
        try:
            kind = BlockKind(str(command.get("kind", "")))
        except ValueError:
            return ActionResult(False, f"unknown block kind {command.get('kind')!r}")
        return self.world.mine_block("player", kind)

    def _place(self, command: dict) -> ActionResult:
        try:
            item = ItemKind(str(command.get("kind", "")))
        except ValueError:
            return ActionResult(False, f"unknown item kind {command.get('kind')!r}")
        return self.world.place_block("player", item)

    def _attack(self, command: dict) -> ActionResult:
        kind_raw = command.get("kind")
        kind = None
        if kind_raw is not None:
            try:
                kind = EntityKind(str(kind_raw))
            except ValueError:
                return ActionResult(False, f"unknown entity kind {kind_raw!r}")
        return self.world.attack_entity("player", kind)

    def _give(self, command: dict) -> ActionResult:
        target = self.world.find_by_name(str(command.get("to", "")))
        if target is None:
            return ActionResult(False, f"no one named {command.get('to')!r} nearby")
        try:
            item = ItemKind(str(command.get("item", "")))
        except ValueError:
            return ActionResult(False, f"unknown item kind {command.get('item')!r}")
        return self.world.transfer_item("player", target.id, item)

    def _handle_say(self, text: str) -> None:
        npc = self._nearest_npc_in_earshot()
        if npc is None:
            self._log("utterance", "system", {"text": NOBODY_HEARS})
            return
        self._log("utterance", "player", {"text": text})
        state = self.states[npc.name]
        outcome = take_npc_turn(state, self.world, text, self.backend,
                                k=self.config.k)
        for call, result in zip(outcome.turn.calls, outcome.turn.results):
            self._call_counter += 1
            call_id = f"c{self._call_counter}"
            self._log("function_call", npc.name,
                      {"call_id": call_id, "name": call.name,
                       "arguments": list(call.arguments)})
            self._log("function_return", npc.name,
                      {"call_id": call_id, "ok": result.ok, "text": result.text})
        self._absorb_world_events()  # events from dispatched calls
        self._log("utterance", npc.name, {
            "text": outcome.reply,
            "degraded": outcome.turn.degraded,
            "backend": [ex.to_payload() for ex in outcome.backend_exchanges],
        })
        for warning in outcome.warnings:
            self._log("warning", npc.name, {"text": warning})
        if outcome.sub_goal is not None:
            self._log("subgoal", npc.name, {
                "text": outcome.sub_goal,
                "exchange": outcome.exchange_number,
                "backend": [outcome.sub_goal_exchange.to_payload()],
            })
        self.exchanges_total += 1
        exchange_event = WorldEvent(tick=self.world.tick, kind="exchange",
                                    actor="player", target=npc.name)
        self._log("world_event", "player", exchange_event.to_payload())
        self._observe(exchange_event)

    def _nearest_npc_in_earshot(self):
        player = self.world.player
        candidates = [
            npc for npc in self.world.npcs()
            if npc.alive and player.position.manhattan(npc.position) <= C.HEARING_RANGE
        ]
        if not candidates:
            return None
        return min(candidates,
                   key=lambda npc: (player.position.manhattan(npc.position), npc.name))

    def _check_termination(self) -> None:
        if self.finished:
            return
        if self.progress.complete:
            self._finish("quest_complete")
        elif not self.world.player.alive:
            self._finish("player_death")
        elif self.world.tick >= self.config.tick_budget:
            self._finish("tick_budget_exhausted")
        elif self.exchanges_total >= self.config.turn_budget:
            self._finish("turn_budget_exhausted")

    def _finish(self, reason: str) -> None:
        self.finished = True
        self.end_reason = reason
        self._log("world_event", "system",
                  {"event": "session_end", "reason": reason,
                   "quest": self.progress.to_payload()})


def run_session(config: SessionConfig, player_source, backend: Backend,
                ) -> tuple[list[LogRecord], QuestProgress]:
    """Drive a session from an iterable of player commands until it ends."""
    session = Session(config, backend)
    for command in player_source:
        session.handle_command(command)
        if session.finished:
            break
    if not session.finished:
        session._finish("player_source_exhausted")
    return session.records, session.progress


# --- log I/O ----------------------------------------------------------------


def write_log(records: list[LogRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(record.to_line() + "\n")


def read_log(path: str) -> list[LogRecord]:
    records = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                records.append(LogRecord.from_dict(json.loads(line)))
    return records


class ReplayLogError(Exception):
    pass


def _validate_seqs(records: list[LogRecord]) -> None:
    for expected, record in enumerate(records, start=1):
        if record.seq != expected:
            raise ReplayLogError(f"seq gap at {expected} (found {record.seq})")


def _rebuild_inputs(records: list[LogRecord]) -> tuple[SessionConfig, list[dict], list[dict]]:
    config: SessionConfig | None = None
    commands: list[dict] = []
    tape: list[dict] = []
    for record in records:
        payload = record.payload
        if record.kind == "world_event" and payload.get("event") == "session_start":
            config = SessionConfig.from_payload(payload, record.session)
        elif record.kind == "world_event" and payload.get("event") == "player_command":
            commands.append(payload["command"])
        elif record.kind in ("utterance", "subgoal"):
            tape.extend(payload.get("backend", ()))
    if config is None:
        raise ReplayLogError("log has no session_start record")
    return config, commands, tape


def replay(records: list[LogRecord], seed: int | None = None,
           ) -> tuple[WorldState, QuestProgress, list[LogRecord]]:
    """Reconstruct the final world and quest progress from a session log.

    NPC replies come from a replay provider fed by the prompt digests stored
    in the log, so any divergence from the original run fails loudly.
    """
    if not records:
        return create_world(seed if seed is not None else 0), QuestProgress(), []
    _validate_seqs(records)
    config, commands, tape = _rebuild_inputs(records)
    backend = ReplayBackend(tape)
    session = Session(config, backend)
    for command in commands:
        session.handle_command(command)
        if session.finished:
            break
    if not session.finished:
        session._finish("player_source_exhausted")
    return session.world, session.progress, session.records


def replay_verify(records: list[LogRecord]) -> bool:
    """True iff re-running the log reproduces it byte-for-byte."""
    _, _, regenerated = replay(records)
    original = [record.to_line() for record in records]
    rebuilt = [record.to_line() for record in regenerated]
    return original == rebuilt
