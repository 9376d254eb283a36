"""Seven-step quest state machine and completion-funnel analytics.

The quest is an ordered ladder: talk to Elena, collect materials, build the
path, fight the island spiders, talk to Alaric, find the sword, hand it over.
A step only stamps once every earlier step has stamped (strict prefix rule),
which is what makes the funnel monotone.  Progress folds over the same event
stream the session log stores, so replaying a log reproduces the live result.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

from . import constants as C
from .world import PLACEABLE_ITEMS, Position, WorldEvent, in_island_region

# Player must be holding at least this many path blocks to count as having
# collected materials.
MATERIALS_THRESHOLD = 16
# Spiders spawned within this Manhattan radius of Alaric are the ones the
# player must clear.
SPIDER_RADIUS = 10

_PLACEABLE_NAMES = frozenset(item.value for item in PLACEABLE_ITEMS)


class QuestStep(Enum):
    TALK_ELENA = ("a", "talk to Elena")
    COLLECT_MATERIALS = ("b", "collect materials")
    BUILD_PATH = ("c", "build path to island")
    FIGHT_SPIDERS = ("d", "fight spiders")
    TALK_ALARIC = ("e", "talk to Alaric")
    FIND_SWORD = ("f", "find the sword")
    GIVE_SWORD = ("g", "give sword to Alaric")

    @property
    def letter(self) -> str:
        return self.value[0]

    @property
    def title(self) -> str:
        return self.value[1]

    @classmethod
    def from_letter(cls, letter: str) -> "QuestStep":
        for step in cls:
            if step.letter == letter:
                return step
        raise ValueError(f"unknown quest step {letter!r}")


STEP_ORDER: tuple[QuestStep, ...] = tuple(QuestStep)


@dataclass
class QuestProgress:
    """Per-session completion state; stamps are the tick a step completed at."""

    completed: dict[QuestStep, int | None] = field(
        default_factory=lambda: {step: None for step in STEP_ORDER}
    )
    terminally_failed: bool = False

    # predicate latches; once a condition has held it stays satisfied
    _satisfied: set[QuestStep] = field(default_factory=set)
    _placeable_held: int = 0
    _blocks_placed: int = 0
    _alaric_spawn: Position | None = None
    _pending_spiders: set[str] = field(default_factory=set)
    _saw_spiders: bool = False

    @property
    def complete(self) -> bool:
        return self.completed[QuestStep.GIVE_SWORD] is not None

    def stamped(self, step: QuestStep) -> bool:
        return self.completed[step] is not None

    def observe(self, event: WorldEvent) -> list[QuestStep]:
        """Fold one event; returns any steps that stamped because of it."""
        self._fold(event)
        if self.terminally_failed:
            return []
        newly: list[QuestStep] = []
        for step in STEP_ORDER:
            if self.completed[step] is not None:
                continue
            if step not in self._satisfied:
                break  # prefix rule: nothing later may stamp either
            self.completed[step] = event.tick
            newly.append(step)
        return newly

    # --- predicate folding ----------------------------------------------

    def _fold(self, event: WorldEvent) -> None:
        kind = event.kind
        if kind == "spawn":
            self._fold_spawn(event)
        elif kind == "exchange":
            if event.target == "Elena":
                self._satisfied.add(QuestStep.TALK_ELENA)
            elif event.target == "Alaric":
                self._satisfied.add(QuestStep.TALK_ALARIC)
        elif kind in ("pickup", "mine"):
            if event.actor == "player":
                self._gain_items(event.item, event.count or 1)
        elif kind == "transfer":
            if event.target == "player":
                self._gain_items(event.item, event.count or 1)
            if event.actor == "player":
                self._lose_items(event.item, event.count or 1)
            if (event.actor == "player" and event.target == "alaric"
                    and event.item == "diamond_sword"):
                self._satisfied.add(QuestStep.GIVE_SWORD)
        elif kind == "drop":
            if event.actor == "player":
                self._lose_items(event.item, event.count or 1)
        elif kind == "place":
            if event.actor == "player":
                self._lose_items(event.item, event.count or 1)
                self._blocks_placed += 1
        elif kind == "move":
            if (event.actor == "player" and event.position is not None
                    and self._blocks_placed >= 1
                    and in_island_region(Position(*event.position))):
                self._satisfied.add(QuestStep.BUILD_PATH)
        elif kind == "death":
            self._fold_death(event)

    def _fold_spawn(self, event: WorldEvent) -> None:
        if event.position is None:
            return
        pos = Position(*event.position)
        if event.actor == "alaric":
            self._alaric_spawn = pos
        elif event.entity_kind == "spider" and self._alaric_spawn is not None:
            if pos.manhattan(self._alaric_spawn) <= SPIDER_RADIUS:
                self._pending_spiders.add(event.actor or "")
                self._saw_spiders = True

    def _fold_death(self, event: WorldEvent) -> None:
        self._pending_spiders.discard(event.target or "")
        if self._saw_spiders and not self._pending_spiders:
            self._satisfied.add(QuestStep.FIGHT_SPIDERS)
        if event.target == "alaric" and not self.stamped(QuestStep.TALK_ALARIC):
            # The island mobs got to Alaric first; the quest can no longer
            # be finished in this session.
            self.terminally_failed = True

    def _gain_items(self, item: str | None, count: int) -> None:
        if item in _PLACEABLE_NAMES:
            self._placeable_held += count
            if self._placeable_held >= MATERIALS_THRESHOLD:
                self._satisfied.add(QuestStep.COLLECT_MATERIALS)
        if item == "diamond_sword":
            self._satisfied.add(QuestStep.FIND_SWORD)

    def _lose_items(self, item: str | None, count: int) -> None:
        if item in _PLACEABLE_NAMES:
            self._placeable_held = max(0, self._placeable_held - count)

    def to_payload(self) -> dict:
        return {
            "completed": {s.letter: self.completed[s] for s in STEP_ORDER},
            "terminally_failed": self.terminally_failed,
        }


@dataclass
class FunnelReport:
    """Per-step session counts plus the overall success rate (the Figure-2 analogue)."""

    per_step: dict[QuestStep, int]
    total: int
    skipped: int
    success_rate: float
    rate_undefined: bool

    def to_dict(self) -> dict:
        return {
            "per_step": {s.letter: self.per_step[s] for s in STEP_ORDER},
            "total": self.total,
            "skipped": self.skipped,
            "success_rate": self.success_rate,
            "rate_undefined": self.rate_undefined,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def render_table(self, bar_width: int = 40) -> str:
        """Aligned plain-text bar table, one row per quest step."""
        peak = max(self.per_step.values(), default=0)
        lines = []
        for step in STEP_ORDER:
            count = self.per_step[step]
            bar = "#" * (count if peak <= bar_width
                         else round(count * bar_width / peak))
            lines.append(f"({step.letter}) {step.title:<24} {count:>4}  {bar}")
        rate = "n/a" if self.rate_undefined else f"{self.success_rate * 100:.1f}%"
        lines.append(f"total sessions: {self.total}    success rate: {rate}")
        if self.skipped:
            lines.append(f"skipped (malformed): {self.skipped}")
        return "\n".join(lines)


_REQUIRED_FIELDS = ("session", "seq", "tick", "kind", "actor", "payload")


def _session_steps(records: list[dict]) -> set[QuestStep]:
    steps: set[QuestStep] = set()
    for record in records:
        if not isinstance(record, dict):
            raise ValueError("log record is not an object")
        for fieldname in _REQUIRED_FIELDS:
            if fieldname not in record:
                raise ValueError(f"log record missing field {fieldname!r}")
        if record["kind"] == "quest_step":
            steps.add(QuestStep.from_letter(record["payload"]["step"]))
    return steps


def funnel(session_logs: list[list[dict]], warn=None) -> FunnelReport:
    """Count, per quest step, how many sessions completed it.

    ``session_logs`` is one parsed record list per session.  A session whose
    records do not parse is skipped (with a warning callback) and counted in
    the report's ``skipped`` field.
    """
    per_step = {step: 0 for step in STEP_ORDER}
    total = 0
    skipped = 0
    for index, records in enumerate(session_logs):
        try:
            steps = _session_steps(records)
        except (ValueError, KeyError, TypeError) as exc:
            skipped += 1
            if warn is not None:
                warn(f"session {index}: {exc}")
            continue
        total += 1
        for step in steps:
            per_step[step] += 1
    completions = per_step[QuestStep.GIVE_SWORD]
    rate_undefined = total == 0
    success_rate = 0.0 if rate_undefined else completions / total
    return FunnelReport(per_step=per_step, total=total, skipped=skipped,
                        success_rate=success_rate, rate_undefined=rate_undefined)
