"""The shipped walkthrough: a whole quest, no network, a few milliseconds.

Runs the bundled player script against the bundled backend script and
narrates the quest milestones as they land.
"""

import time

from questforge import ScriptedBackend, ScriptRule, SessionConfig, run_session
from questforge.walkthrough import shipped_player_commands, walkthrough_rules

backend = ScriptedBackend([
    ScriptRule(response=r["response"], pattern=r.get("pattern"))
    for r in walkthrough_rules()
])
commands = shipped_player_commands()
print(f"player script: {len(commands)} commands "
      f"({sum(1 for c in commands if c['verb'] == 'say')} of them spoken)")

started = time.perf_counter()
records, progress = run_session(SessionConfig(seed=7), commands, backend)
elapsed = time.perf_counter() - started

print()
print("=== transcript and milestones ===")
for record in records:
    if record.kind == "utterance" and record.actor != "system":
        print(f"  [{record.actor}] {record.payload['text']}")
    elif record.kind == "function_call":
        print(f"      -> {record.payload['name']}({', '.join(record.payload['arguments'])})")
    elif record.kind == "function_return":
        print(f"      <- {record.payload['text']}")
    elif record.kind == "quest_step":
        print(f"  *** step ({record.payload['step']}) {record.payload['title']} "
              f"at tick {record.tick} ***")

print()
print(f"quest complete: {progress.complete}")
print(f"{len(records)} log records, {records[-1].tick} ticks, "
      f"{elapsed * 1000:.1f} ms wall clock")
print(f"ended because: {records[-1].payload['reason']}")
