"""Per-NPC conversational agent.

Assembles the layered character prompt (setting, opening story, persona,
backstory, main goal, skills, few-shot examples, constraints, scene, then the
dialogue window), runs the player-to-NPC turn loop, and schedules sub-goal
generation every K completed exchanges.

A turn is two-phase when the model calls functions: the first completion may
emit calls, each call is executed, and the model is queried once more with
every return string injected as a ``Function_Returns:`` line so the spoken
reply reflects what actually happened.  The NPC only ever sees those return
strings, never raw world state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .actions import (
    FunctionCall,
    FunctionResult,
    Registry,
    build_registry,
    dispatch,
    parse_npc_output,
    render_skill_section,
)
from .backends import (
    Backend,
    BackendError,
    PromptDocument,
    PromptMessage,
    ROLE_FUNCTION_RETURN,
    ROLE_NPC,
    ROLE_PLAYER,
    ROLE_SYSTEM,
)
from .world import WorldState

DEFAULT_K = 6
HISTORY_WINDOW = 40
DEGRADED_REPLY = "…"

NO_INVENTION_CONSTRAINT = "Do not invent new NPCs."

SUBGOAL_INSTRUCTION = (
    "Read the recent conversation and respond with a single-sentence sub-goal "
    "for {name} that keeps the conversation aligned with the main goal. "
    "Respond with the sub-goal sentence only."
)


@dataclass
class NpcProfile:
    """Everything that shapes one NPC's prompt, loaded from its config file."""

    name: str
    persona: str
    backstory: str
    main_goal: str
    constraints: list[str]
    scene: str
    opening_story: str
    game_setting: str
    registry: Registry
    few_shot_calls: str
    few_shot_returns: str

    def __post_init__(self) -> None:
        for attr in ("name", "persona", "backstory", "main_goal", "scene",
                     "opening_story", "game_setting", "few_shot_calls",
                     "few_shot_returns"):
            if not getattr(self, attr):
                raise ValueError(f"profile field {attr} must be non-empty")
        if NO_INVENTION_CONSTRAINT not in self.constraints:
            raise ValueError("profile constraints must include the no-invention rule")

    @classmethod
    def from_dict(cls, raw: dict) -> "NpcProfile":
        return cls(
            name=raw["name"],
            persona=raw["persona"],
            backstory=raw["backstory"],
            main_goal=raw["main_goal"],
            constraints=list(raw["constraints"]),
            scene=raw["scene"],
            opening_story=raw["opening_story"],
            game_setting=raw["game_setting"],
            registry=build_registry(raw["name"], raw["functions"]),
            few_shot_calls=raw["few_shots"]["function_calls"],
            few_shot_returns=raw["few_shots"]["function_returns"],
        )

    @classmethod
    def from_file(cls, path: str) -> "NpcProfile":
        with open(path, encoding="utf-8") as handle:
            return cls.from_dict(json.load(handle))


def load_shipped_profile(name: str) -> NpcProfile:
    """Load one of the bundled profiles ("elena" or "alaric")."""
    data = resources.files("questforge").joinpath(f"profiles/{name.lower()}.json")
    return NpcProfile.from_dict(json.loads(data.read_text(encoding="utf-8")))


@dataclass
class ConversationTurn:
    index: int
    speaker: str  # player | npc | system
    text: str
    calls: list[FunctionCall] = field(default_factory=list)
    results: list[FunctionResult] = field(default_factory=list)
    sub_goal: str | None = None
    degraded: bool = False
    warnings: list[str] = field(default_factory=list)


@dataclass
class ConversationState:
    profile: NpcProfile
    turns: list[ConversationTurn] = field(default_factory=list)
    active_sub_goal: str | None = None
    exchange_count: int = 0

    def append(self, turn: ConversationTurn) -> None:
        self.turns.append(turn)

    def next_index(self) -> int:
        return len(self.turns) + 1


def assemble_prompt(state: ConversationState,
                    pending_results: list[FunctionResult]) -> PromptDocument:
    """Pure function of (profile, turns, pending results, active sub-goal)."""
    profile = state.profile
    sections = [
        profile.game_setting,
        f"Opening Story: {profile.opening_story}",
        f"Persona: {profile.persona}",
        f"Backstory: {profile.backstory}",
        f"Main goal: {profile.main_goal}",
        f"Your skills: {render_skill_section(profile.registry)}",
        profile.few_shot_calls,
        profile.few_shot_returns,
        "IMPORTANT: Follow these constraints when you respond to the player:\n"
        + "\n".join(profile.constraints),
        f"Scene: {profile.scene}",
    ]
    messages = [PromptMessage(ROLE_SYSTEM, "\n\n".join(sections))]
    for turn in state.turns[-HISTORY_WINDOW:]:
        if turn.speaker == "player":
            messages.append(PromptMessage(ROLE_PLAYER, turn.text))
        elif turn.speaker == "npc":
            messages.append(PromptMessage(ROLE_NPC, turn.text))
        else:
            messages.append(PromptMessage(ROLE_SYSTEM, turn.text))
    for result in pending_results:
        messages.append(PromptMessage(ROLE_FUNCTION_RETURN, result.text))
    if state.active_sub_goal:
        messages.append(PromptMessage(ROLE_SYSTEM, f"[Sub-goal] {state.active_sub_goal}"))
    return PromptDocument(tuple(messages))


@dataclass
class BackendExchange:
    """One completed provider call, kept for the session tape."""

    digest: str
    reply: str

    def to_payload(self) -> dict:
        return {"digest": self.digest, "reply": self.reply}


@dataclass
class TurnOutcome:
    turn: ConversationTurn
    reply: str
    backend_exchanges: list[BackendExchange] = field(default_factory=list)
    sub_goal: str | None = None
    sub_goal_exchange: BackendExchange | None = None
    exchange_number: int = 0
    warnings: list[str] = field(default_factory=list)


def take_npc_turn(state: ConversationState, world: WorldState,
                  player_utterance: str, backend: Backend,
                  k: int = DEFAULT_K) -> TurnOutcome:
    """Run one player-to-NPC exchange, dispatching any function calls.

    Already-dispatched world mutations are kept even when the provider fails
    mid-turn; the NPC then answers with a degraded placeholder reply.
    """
    actor = world.find_by_name(state.profile.name)
    if actor is None or not actor.alive:
        raise ValueError(f"NPC {state.profile.name} cannot take a turn")

    state.append(ConversationTurn(state.next_index(), "player", player_utterance))
    exchanges: list[BackendExchange] = []

    def ask(doc: PromptDocument) -> str:
        reply = backend.complete(doc)
        exchanges.append(BackendExchange(doc.digest(), reply))
        return reply

    turn = ConversationTurn(state.next_index(), "npc", DEGRADED_REPLY)
    try:
        raw = ask(assemble_prompt(state, []))
    except BackendError as exc:
        turn.degraded = True
        turn.warnings.append(f"backend failure: {exc}")
    else:
        parsed = parse_npc_output(raw)
        turn.calls = parsed.calls
        turn.warnings.extend(parsed.warnings)
        turn.results = [
            dispatch(state.profile.registry, world, actor.id, call)
            for call in parsed.calls
        ]
        if turn.results:
            try:
                follow_up = ask(assemble_prompt(state, turn.results))
            except BackendError as exc:
                turn.degraded = True
                turn.warnings.append(f"backend failure: {exc}")
            else:
                reparsed = parse_npc_output(follow_up)
                if reparsed.calls:
                    turn.warnings.append(
                        "dropped function calls issued in the result phase"
                    )
                turn.text = reparsed.speech or parsed.speech
        else:
            turn.text = parsed.speech
    state.append(turn)
    state.exchange_count += 1

    outcome = TurnOutcome(turn=turn, reply=turn.text, backend_exchanges=exchanges,
                          exchange_number=state.exchange_count,
                          warnings=list(turn.warnings))
    if state.exchange_count % k == 0:
        try:
            goal, goal_exchange = generate_sub_goal(state, backend)
        except BackendError as exc:
            outcome.warnings.append(f"sub-goal generation failed: {exc}")
        else:
            outcome.sub_goal = goal
            outcome.sub_goal_exchange = goal_exchange
    return outcome


def subgoal_prompt(state: ConversationState, k: int = DEFAULT_K) -> PromptDocument:
    profile = state.profile
    header = "\n".join([
        f"You are guiding the NPC {profile.name} in a Minecraft quest game.",
        f"Main goal: {profile.main_goal}",
        SUBGOAL_INSTRUCTION.format(name=profile.name),
    ])
    messages = [PromptMessage(ROLE_SYSTEM, header)]
    recent = [t for t in state.turns if t.speaker in ("player", "npc")][-2 * k:]
    for turn in recent:
        role = ROLE_PLAYER if turn.speaker == "player" else ROLE_NPC
        messages.append(PromptMessage(role, turn.text))
    return PromptDocument(tuple(messages))


def generate_sub_goal(state: ConversationState, backend: Backend,
                      k: int = DEFAULT_K) -> tuple[str, BackendExchange]:
    """Ask the provider for a fresh steering sub-goal; only valid at the K cadence."""
    if state.exchange_count <= 0 or state.exchange_count % k != 0:
        raise ValueError(
            f"sub-goal generation only runs every {k} exchanges "
            f"(exchange_count={state.exchange_count})"
        )
    doc = subgoal_prompt(state, k)
    reply = backend.complete(doc)
    lines = [line.strip() for line in reply.strip().splitlines() if line.strip()]
    goal = lines[0] if lines else reply.strip()
    state.active_sub_goal = goal
    return goal, BackendExchange(doc.digest(), reply)
