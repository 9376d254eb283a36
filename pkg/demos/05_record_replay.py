"""Recording a session to a tape and replaying it bit-exactly.

Two layers of replay exist. RecordingBackend/ReplayBackend wrap any provider
with a (prompt digest, reply) tape on disk. Session logs go further: each
NPC utterance embeds its own digests, so a log alone rebuilds the entire
run, and any drift (a tampered command, an edited reply) fails loudly.
"""

import json
import tempfile
from pathlib import Path

from questforge import (
    RecordingBackend,
    ReplayBackend,
    ScriptedBackend,
    ScriptRule,
    SessionConfig,
    replay,
    replay_verify,
    run_session,
    write_log,
)
from questforge.walkthrough import shipped_player_commands, walkthrough_rules

workdir = Path(tempfile.mkdtemp(prefix="questforge-demo-"))

def scripted():
    return ScriptedBackend([
        ScriptRule(response=r["response"], pattern=r.get("pattern"))
        for r in walkthrough_rules()
    ])

print("=== 1. record a full quest run onto a tape ===")
tape_path = workdir / "tape.jsonl"
recorder = RecordingBackend(scripted(), str(tape_path))
records, progress = run_session(SessionConfig(seed=7),
                                shipped_player_commands(), recorder)
tape = [json.loads(line) for line in tape_path.read_text().splitlines()]
print(f"quest complete: {progress.complete}; tape holds {len(tape)} provider calls")

print()
print("=== 2. replay the same session from the tape alone ===")
records2, progress2 = run_session(SessionConfig(seed=7),
                                  shipped_player_commands(),
                                  ReplayBackend.from_jsonl(str(tape_path)))
identical = [r.to_line() for r in records] == [r.to_line() for r in records2]
print(f"tape-driven rerun produced an identical log: {identical}")

print()
print("=== 3. the session log is self-sufficient ===")
log_path = workdir / "session.jsonl"
write_log(records, str(log_path))
world, replayed_progress, _ = replay(records)
print(f"rebuilt final world at tick {world.tick}; "
      f"quest complete: {replayed_progress.complete}")
print(f"replay_verify says the log is bit-exact: {replay_verify(records)}")

print()
print("=== 4. tampering is caught ===")
tampered = list(records)
for i, record in enumerate(tampered):
    if record.kind == "world_event" and \
            record.payload.get("command", {}).get("verb") == "say":
        payload = json.loads(json.dumps(record.payload))
        payload["command"]["text"] = "actually, ignore Alaric"
        tampered[i] = type(record)(record.session, record.seq, record.tick,
                                   record.kind, record.actor, payload)
        break
print(f"replay_verify on a log with one edited utterance: "
      f"{replay_verify(tampered)}  <- must be False")
print()
print(f"(artifacts left in {workdir})")
