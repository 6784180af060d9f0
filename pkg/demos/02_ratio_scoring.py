"""Score pairs with the four length-ratio scorers and merge external NLL.

Each ratio compares the two sides of a pair (always source/target):
token/token, seconds/token, seconds/seconds, token/seconds.  A pair whose
denominator is zero (say, an empty target transcript) gets an INVALID
cell, not an infinity — downstream filters then treat it as unscorable.
"""

import io

from pairsift import (
    Corpus,
    PairRecord,
    RATIO_KINDS,
    ScorerKind,
    ingest_external_scores,
    score_corpus,
    write_score_table,
)

corpus = Corpus((
    PairRecord("a", 3.0, "un deux trois", 3.2, "one two three"),
    PairRecord("b", 6.0, "ceci est une phrase un peu longue", 2.0, "short"),
    PairRecord("c", 4.5, "phrase normale ici", 4.4, ""),     # empty target
    PairRecord("d", 2.0, "bon", 8.0, "a very long target sentence here"),
))

table = score_corpus(corpus, RATIO_KINDS)
for kind in RATIO_KINDS:
    cells = {pid: table.get(pid, kind) for pid in table.ids}
    print(f"{kind.value:14s}", {k: (round(v, 3) if v is not None else "INVALID")
                                for k, v in cells.items()})

# NLL scores come from an external model run; they arrive as a score TSV
# and are merged by id.  Ids missing from the file become INVALID cells.
nll_file = b"id\tnll\na\t1.31\nb\t4.96\nd\t2.05\nzz\t0.4\n"
result = ingest_external_scores(table, nll_file)
print("\nnll column:", {pid: result.table.get(pid, ScorerKind.EXTERNAL_NLL)
                        for pid in result.table.ids})
print("ids only in the file:", result.unknown_ids)
print("ids the file did not cover:", result.missing_ids)

buf = io.BytesIO()
write_score_table(result.table, buf)
print("\nfull score file:")
print(buf.getvalue().decode(), end="")
