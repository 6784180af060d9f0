"""Percentile cuts, union/intersection of subsets, and the report table.

A percentile cut sorts valid rows ascending by (score, id) and keeps the
first floor(p * n_valid) — for NLL-style scores, lower is more plausible,
so p=0.2 keeps the 20% the external model trusts most.  Cuts from
different scorers can then be combined with plain set algebra.
"""

import numpy as np

from pairsift import (
    Corpus,
    PairRecord,
    ScorerKind,
    build_report,
    filter_by_percentile,
    filter_by_z,
    intersect,
    percentile_count,
    render_report,
    union,
)
from pairsift.scoring import ScoreTable

# floor(p * n) is computed exactly: the count for p=0.6 must not round
# below the integer just because binary 0.6 is a hair under 3/5.
for p in (0.2, 0.4, 0.6, 0.8):
    print(f"floor({p} * 1403985) = {percentile_count(p, 1403985)}")

rng = np.random.default_rng(11)
n = 2000
records = tuple(
    PairRecord(f"p{i:04d}", round(float(rng.uniform(1, 20)), 3), "w " * 5,
               round(float(rng.uniform(1, 20)), 3), "w " * 5)
    for i in range(n)
)
corpus = Corpus(records)
ids = sorted(corpus.ids())
table = ScoreTable(ids, {
    ScorerKind.EXTERNAL_NLL: rng.normal(4.0, 1.0, n),
    ScorerKind.SPEECH_SPEECH: rng.normal(1.0, 0.3, n),
})

best_nll = filter_by_percentile(table, ScorerKind.EXTERNAL_NLL, 0.2)
calm_ss = filter_by_z(table, ScorerKind.SPEECH_SPEECH, 0.5)
print(f"\n20% NLL cut:        {len(best_nll)} pairs")
print(f"0.5 z speech-speech: {len(calm_ss)} pairs")

either = union(best_nll, calm_ss)
both = intersect(best_nll, calm_ss)
print(f"union:        {len(either)} pairs")
print(f"intersection: {len(both)} pairs")
print("inclusion-exclusion:",
      len(either) + len(both) == len(best_nll) + len(calm_ss))

report = build_report(
    corpus, table,
    [best_nll, calm_ss, either, both],
    reference=best_nll,
    labels=["20% nll", "0.5 z ss", "union", "intersection"],
    reference_label="20% nll",
)
print()
print(render_report(report, "md").decode())
