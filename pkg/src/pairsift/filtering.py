"""Turn score columns into clean subsets.

Two selection mechanisms, plus set algebra to combine them:

* z-threshold — standardize a column to ``z = |x - mean| / std`` (mean and
  population std over the valid cells of the column being filtered) and
  keep rows with ``z <= tau``.
* percentile cut — sort valid rows ascending by (score, id) and keep the
  first ``floor(p * n_valid)``.

INVALID cells never enter statistics and never enter a subset: a pair
that cannot be scored cannot be attested clean.  All reductions run in
ascending-id order with exact (compensated) summation, so results do not
depend on input order or parallelism.

Subset specs form a tiny expression language used by the CLI and reports::

    z:<scorer>:<tau>   pct:<scorer>:<p>   union(<spec>,<spec>)   intersect(<spec>,<spec>)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import BinaryIO

import numpy as np

from .errors import (
    EmptySubsetError,
    MissingRecordError,
    NoValidScoresError,
    SpecParseError,
    SubsetMismatchError,
)
from .manifest import Corpus, _as_bytes, _write_bytes
from .scoring import ScorerKind, ScoreTable


@dataclass(frozen=True)
class CorpusStats:
    """Mean and population standard deviation of one score column."""

    scorer: ScorerKind
    mean: float
    std: float
    n_valid: int
    n_invalid: int


def compute_stats(table: ScoreTable, scorer: ScorerKind) -> CorpusStats:
    """Exact-summation mean and population std over the valid cells.

    ``math.fsum`` gives a correctly rounded sum independent of evaluation
    order, so two runs (or any parallel schedule) agree bit for bit.
    """
    col = table.column(scorer)
    valid = col[~np.isnan(col)]
    n_valid = int(valid.size)
    if n_valid == 0:
        raise NoValidScoresError(f"column {scorer.value} has no valid scores")
    mean = math.fsum(valid) / n_valid
    var = math.fsum((valid - mean) ** 2) / n_valid
    return CorpusStats(
        scorer=scorer,
        mean=mean,
        std=math.sqrt(var),
        n_valid=n_valid,
        n_invalid=table.n_rows - n_valid,
    )


def z_score(x: float, stats: CorpusStats) -> float:
    """Absolute standardized deviation ``|x - mean| / std``.

    A degenerate column (std 0) maps its own value to 0; any other value
    is infinitely many "standard deviations" away, hence the inf sentinel.
    """
    if stats.std == 0.0:
        return 0.0 if x == stats.mean else math.inf
    return abs(x - stats.mean) / stats.std


# --- subset specs ----------------------------------------------------------


class SubsetSpec:
    """Base of the small filter-expression tree."""

    __slots__ = ()


@dataclass(frozen=True)
class ZThreshold(SubsetSpec):
    scorer: ScorerKind
    tau: float

    def __post_init__(self) -> None:
        if not self.tau > 0:
            raise ValueError("tau must be positive")


@dataclass(frozen=True)
class PercentileCut(SubsetSpec):
    scorer: ScorerKind
    p: float

    def __post_init__(self) -> None:
        if not 0 < self.p <= 1:
            raise ValueError("p must be in (0, 1]")


@dataclass(frozen=True)
class SpecUnion(SubsetSpec):
    left: SubsetSpec
    right: SubsetSpec


@dataclass(frozen=True)
class SpecIntersection(SubsetSpec):
    left: SubsetSpec
    right: SubsetSpec


def format_spec(spec: SubsetSpec) -> str:
    if isinstance(spec, ZThreshold):
        return f"z:{spec.scorer.value}:{spec.tau!r}"
    if isinstance(spec, PercentileCut):
        return f"pct:{spec.scorer.value}:{spec.p!r}"
    if isinstance(spec, SpecUnion):
        return f"union({format_spec(spec.left)},{format_spec(spec.right)})"
    if isinstance(spec, SpecIntersection):
        return f"intersect({format_spec(spec.left)},{format_spec(spec.right)})"
    raise TypeError(f"not a SubsetSpec: {spec!r}")


def _split_top_level(body: str, where: str) -> tuple[str, str]:
    depth = 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            return body[:i], body[i + 1 :]
    raise SpecParseError(f"expected a top-level comma in {where!r}")


def parse_spec(text: str) -> SubsetSpec:
    """Parse the CLI spec grammar; raises :class:`SpecParseError`."""
    s = text.strip()
    for name, node in (("union", SpecUnion), ("intersect", SpecIntersection)):
        if s.startswith(name + "("):
            if not s.endswith(")"):
                raise SpecParseError(f"unbalanced parentheses in {text!r}")
            left, right = _split_top_level(s[len(name) + 1 : -1], text)
            return node(parse_spec(left), parse_spec(right))
    parts = s.split(":")
    if len(parts) != 3:
        raise SpecParseError(f"bad spec {text!r}")
    op, scorer_name, value = (part.strip() for part in parts)
    try:
        scorer = ScorerKind.from_name(scorer_name)
    except ValueError as exc:
        raise SpecParseError(str(exc)) from None
    try:
        number = float(value)
    except ValueError:
        raise SpecParseError(f"bad number {value!r} in {text!r}") from None
    try:
        if op == "z":
            return ZThreshold(scorer, number)
        if op == "pct":
            return PercentileCut(scorer, number)
    except ValueError as exc:
        raise SpecParseError(str(exc)) from None
    raise SpecParseError(f"unknown filter {op!r} in {text!r}")


# --- subsets ----------------------------------------------------------------


@dataclass(frozen=True)
class Subset:
    """A sorted set of retained pair ids plus how it was produced.

    ``spec`` and ``source_size`` are ``None`` for subsets loaded from bare
    id-list files, which carry no provenance.
    """

    ids: tuple[str, ...]
    spec: SubsetSpec | None = None
    source_size: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "ids", tuple(self.ids))
        if any(self.ids[i] >= self.ids[i + 1] for i in range(len(self.ids) - 1)):
            raise ValueError("subset ids must be sorted and unique")

    def __len__(self) -> int:
        return len(self.ids)

    def id_set(self) -> frozenset[str]:
        """Build a set view; callers doing repeated lookups should keep it."""
        return frozenset(self.ids)


def percentile_count(p: float | str | Fraction, n_valid: int) -> int:
    """Exact ``floor(p * n_valid)`` with p taken at decimal face value.

    A float ``p`` is interpreted through its shortest decimal repr, so
    ``0.6 * 1403985`` counts as 842391 even though the binary double 0.6
    times 1403985 falls a hair below the integer.
    """
    frac = Fraction(str(p)) if isinstance(p, float) else Fraction(p)
    return int(frac * n_valid // 1)


def filter_by_z(table: ScoreTable, scorer: ScorerKind, tau: float) -> Subset:
    """Keep valid rows within ``tau`` standard deviations of the mean.

    Statistics always come from the table being filtered.
    """
    if not tau > 0:
        raise ValueError("tau must be positive")
    stats = compute_stats(table, scorer)
    col = table.column(scorer)
    valid = ~np.isnan(col)
    if stats.std == 0.0:
        keep = valid
    else:
        with np.errstate(invalid="ignore"):
            keep = valid & (np.abs(col - stats.mean) / stats.std <= tau)
    ids = tuple(np.asarray(table.ids)[keep].tolist())
    return Subset(ids, ZThreshold(scorer, tau), table.n_rows)


def filter_by_percentile(table: ScoreTable, scorer: ScorerKind, p: float) -> Subset:
    """Keep the lowest-scoring ``floor(p * n_valid)`` rows.

    Rows sort ascending by (score, id); the id tie-break makes the cut
    deterministic when scores repeat.
    """
    if not 0 < p <= 1:
        raise ValueError("p must be in (0, 1]")
    col = table.column(scorer)
    valid_idx = np.flatnonzero(~np.isnan(col))
    n_valid = int(valid_idx.size)
    if n_valid == 0:
        raise NoValidScoresError(f"column {scorer.value} has no valid scores")
    ids_arr = np.asarray(table.ids)
    order = np.lexsort((ids_arr[valid_idx], col[valid_idx]))
    take = valid_idx[order[: percentile_count(p, n_valid)]]
    ids = tuple(np.sort(ids_arr[take]).tolist())
    return Subset(ids, PercentileCut(scorer, p), table.n_rows)


def _check_same_source(a: Subset, b: Subset) -> int | None:
    if (
        a.source_size is not None
        and b.source_size is not None
        and a.source_size != b.source_size
    ):
        raise SubsetMismatchError(
            f"subsets come from corpora of size {a.source_size} and {b.source_size}"
        )
    return a.source_size if a.source_size is not None else b.source_size


def _combined_spec(
    a: Subset, b: Subset, node: type[SpecUnion] | type[SpecIntersection]
) -> SubsetSpec | None:
    if a.spec is None or b.spec is None:
        return None
    return node(a.spec, b.spec)


def union(a: Subset, b: Subset) -> Subset:
    size = _check_same_source(a, b)
    ids = tuple(sorted(a.id_set() | b.id_set()))
    return Subset(ids, _combined_spec(a, b, SpecUnion), size)


def intersect(a: Subset, b: Subset) -> Subset:
    size = _check_same_source(a, b)
    ids = tuple(sorted(a.id_set() & b.id_set()))
    return Subset(ids, _combined_spec(a, b, SpecIntersection), size)


def overlap_pct(a: Subset, b: Subset) -> float:
    """Percentage of ``a``'s ids that also appear in ``b``."""
    if len(a) == 0:
        raise EmptySubsetError("overlap against an empty subset is undefined")
    shared = len(a.id_set() & b.id_set())
    return 100.0 * shared / len(a)


def materialize(subset: Subset, corpus: Corpus) -> Corpus:
    """Extract the subset's records from a corpus, sorted by id."""
    by_id = corpus.by_id()
    records = []
    for pair_id in subset.ids:
        rec = by_id.get(pair_id)
        if rec is None:
            raise MissingRecordError(pair_id)
        records.append(rec)
    return Corpus(tuple(records), corpus.source_label, corpus.target_label)


def evaluate_spec(spec: SubsetSpec, table: ScoreTable) -> Subset:
    """Evaluate a spec tree against one score table."""
    if isinstance(spec, ZThreshold):
        return filter_by_z(table, spec.scorer, spec.tau)
    if isinstance(spec, PercentileCut):
        return filter_by_percentile(table, spec.scorer, spec.p)
    if isinstance(spec, SpecUnion):
        return union(evaluate_spec(spec.left, table), evaluate_spec(spec.right, table))
    if isinstance(spec, SpecIntersection):
        return intersect(
            evaluate_spec(spec.left, table), evaluate_spec(spec.right, table)
        )
    raise TypeError(f"not a SubsetSpec: {spec!r}")


# --- subset files -----------------------------------------------------------


def write_subset(subset: Subset, dest: str | Path | BinaryIO) -> int:
    """One id per line, ascending, trailing newline; returns the id count."""
    data = "".join(pair_id + "\n" for pair_id in subset.ids)
    _write_bytes(data.encode("utf-8"), dest)
    return len(subset)


def read_subset(source: str | Path | bytes | BinaryIO) -> Subset:
    """Read an id-list file; ids are de-duplicated and re-sorted."""
    data = _as_bytes(source)
    text = data.decode("utf-8")
    ids = frozenset(line for line in text.split("\n") if line != "")
    return Subset(tuple(sorted(ids)))
