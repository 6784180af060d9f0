"""Score manifest pairs with a sequence model and emit a score TSV.

The output honors the core score-file contract exactly: header
``id<TAB>nll``, one row per manifest pair in manifest order, where ``nll``
is the mean per-target-token negative log-likelihood (summed NLL would
correlate with length and turn the percentile filter into a length
filter).  Pairs the model cannot score keep their row with an empty nll
cell — the core reads that as INVALID — and the reason lands in a sidecar
``id<TAB>error`` TSV, so nothing is ever silently dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .scorers import Scorer

MANIFEST_HEADER = (
    "id\tsrc_audio\tsrc_duration_s\tsrc_text\ttgt_audio\ttgt_duration_s\ttgt_text"
)


@dataclass(frozen=True)
class TextPair:
    id: str
    src_text: str
    tgt_text: str


def read_pairs(path: str | Path) -> list[TextPair]:
    """Read the text columns of a manifest, in file order.

    The adapter consumes manifests strictly: a structurally broken file is
    a caller error, not something to score around.
    """
    data = Path(path).read_bytes()
    lines = data.decode("utf-8").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != MANIFEST_HEADER:
        raise ValueError("not a manifest: bad or missing header")
    pairs: list[TextPair] = []
    seen: set[str] = set()
    for line_no, line in enumerate(lines[1:], start=2):
        cells = line.split("\t")
        if len(cells) != 7:
            raise ValueError(f"line {line_no}: expected 7 columns, got {len(cells)}")
        pair_id = cells[0]
        if not pair_id:
            raise ValueError(f"line {line_no}: empty id")
        if pair_id in seen:
            raise ValueError(f"line {line_no}: duplicate id {pair_id!r}")
        seen.add(pair_id)
        pairs.append(TextPair(pair_id, cells[3], cells[6]))
    return pairs


@dataclass(frozen=True)
class ScoreRun:
    """Outcome of one scoring pass."""

    n_scored: int
    n_failed: int
    out_path: Path
    errors_path: Path


def _score_one(scorer: Scorer, pair: TextPair) -> tuple[str | None, str | None]:
    """Returns (rendered nll, error reason); exactly one is set."""
    try:
        total, count = scorer.score(pair.src_text, pair.tgt_text)
    except Exception as exc:  # a model failure must not kill the run
        return None, f"model failure: {exc}"
    if count <= 0:
        return None, "nothing to score: zero target tokens"
    nll = -float(total) / count
    if not math.isfinite(nll):
        return None, f"non-finite nll {nll!r}"
    if nll < 0:
        return None, f"negative nll {nll!r}: model assigned probability > 1"
    return repr(nll + 0.0), None


def score_pairs(
    manifest: str | Path,
    scorer: Scorer,
    out: str | Path,
    batch_size: int = 1000,
) -> ScoreRun:
    """Score every manifest pair; write the score TSV and error sidecar.

    Pairs are scored one at a time inside batches, so batch composition
    cannot change any per-pair score; ``batch_size`` only frames the work.
    Deterministic whenever the scorer is.
    """
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    pairs = read_pairs(manifest)
    if getattr(scorer, "needs_fit", False):
        scorer.fit(pair.tgt_text for pair in pairs)

    out = Path(out)
    errors_path = out.with_name(out.name + ".errors")
    score_lines = ["id\tnll"]
    error_lines = ["id\terror"]
    n_failed = 0
    for start in range(0, len(pairs), batch_size):
        for pair in pairs[start : start + batch_size]:
            rendered, reason = _score_one(scorer, pair)
            if reason is None:
                score_lines.append(f"{pair.id}\t{rendered}")
            else:
                score_lines.append(f"{pair.id}\t")  # sentinel: INVALID cell
                error_lines.append(f"{pair.id}\t{reason}")
                n_failed += 1
    out.write_bytes(("\n".join(score_lines) + "\n").encode("utf-8"))
    errors_path.write_bytes(("\n".join(error_lines) + "\n").encode("utf-8"))
    return ScoreRun(
        n_scored=len(pairs) - n_failed,
        n_failed=n_failed,
        out_path=out,
        errors_path=errors_path,
    )
