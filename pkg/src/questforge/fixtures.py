"""Synthetic 28-session corpus reproducing the reported quest funnel.

All 28 sessions reach Elena; 24 collect materials, 18 build the path, 13 make
it to Alaric, and 7 finish the quest, for the reported 25% success rate.  The
spider-fight and find-sword counts are not reported as prose numbers, so the
corpus pins them at 13 and 7, which keeps the funnel monotone.

Each synthetic session is a small but fully well-formed session log: the
records carry the canonical fields and strictly increasing sequence numbers,
so the corpus also doubles as parser food for the analytics layer.
"""

from __future__ import annotations

import json

from .quest import STEP_ORDER, QuestStep

FUNNEL_TARGETS: dict[QuestStep, int] = {
    QuestStep.TALK_ELENA: 28,
    QuestStep.COLLECT_MATERIALS: 24,
    QuestStep.BUILD_PATH: 18,
    QuestStep.FIGHT_SPIDERS: 13,
    QuestStep.TALK_ALARIC: 13,
    QuestStep.FIND_SWORD: 7,
    QuestStep.GIVE_SWORD: 7,
}

TOTAL_SESSIONS = 28


def _session_records(session_index: int) -> list[dict]:
    session_id = f"funnel-{session_index:03d}"
    records: list[dict] = []
    seq = 0
    tick = 0

    def add(kind: str, actor: str, payload: dict) -> None:
        nonlocal seq, tick
        seq += 1
        tick += 3
        records.append({"session": session_id, "seq": seq, "tick": tick,
                        "kind": kind, "actor": actor, "payload": payload})

    add("world_event", "system", {"event": "session_start", "seed": session_index,
                                  "k": 6, "turn_budget": 200, "tick_budget": 5000,
                                  "profile_paths": []})
    add("utterance", "player", {"text": "hello"})
    add("utterance", "Elena", {"text": "Please help my friend Alaric!",
                               "degraded": False, "backend": []})
    for step in STEP_ORDER:
        if FUNNEL_TARGETS[step] >= session_index:
            add("quest_step", "system", {"step": step.letter, "title": step.title})
    reason = ("quest_complete"
              if FUNNEL_TARGETS[QuestStep.GIVE_SWORD] >= session_index
              else "turn_budget_exhausted")
    add("world_event", "system", {"event": "session_end", "reason": reason})
    return records


def build_funnel_corpus(total: int = TOTAL_SESSIONS) -> list[list[dict]]:
    """One parsed record list per synthetic session, funnel-shaped."""
    return [_session_records(i) for i in range(1, total + 1)]


def write_funnel_corpus(directory: str, total: int = TOTAL_SESSIONS) -> list[str]:
    """Write the corpus as one JSONL log file per session."""
    paths = []
    for index, records in enumerate(build_funnel_corpus(total), start=1):
        path = f"{directory}/funnel-{index:03d}.jsonl"
        with open(path, "w", encoding="utf-8") as handle:
            for record in records:
                handle.write(json.dumps(record, sort_keys=True,
                                        separators=(",", ":")) + "\n")
        paths.append(path)
    return paths
