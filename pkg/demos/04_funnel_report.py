"""Quest-completion funnel analytics over the shipped 28-session corpus.

Each session log contributes one count per quest step it completed; the
prefix rule makes the funnel monotone by construction. The synthetic corpus
is shaped to the reference distribution: every player talks to Elena, fewer
survive each later step, and a quarter finish.
"""

from questforge import funnel
from questforge.fixtures import build_funnel_corpus

corpus = build_funnel_corpus()
print(f"{len(corpus)} synthetic session logs, "
      f"{sum(len(records) for records in corpus)} records in total")
print()

report = funnel(corpus)
print(report.render_table())
print()
print("as JSON:")
print(report.to_json())

print()
print("=== robustness: malformed sessions are skipped, not fatal ===")
corpus[3] = [{"this is": "not a log record"}]
messages = []
report = funnel(corpus, warn=messages.append)
print("warning:", messages[0])
print(f"valid={report.total} skipped={report.skipped} "
      f"rate={report.success_rate:.3f}")
