"""Results tables: subset sizes, overlap against a reference, score stats.

The TSV rendering carries exactly the columns downstream tooling consumes
(`label`, `spec`, `n_pairs`, `overlap_pct`); the Markdown rendering adds a
per-scorer statistics table for human reading.  Both are pure functions of
the report object.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .filtering import Subset, compute_stats, format_spec, overlap_pct
from .manifest import Corpus
from .scoring import ScorerKind, ScoreTable

Z_HISTOGRAM_BINS = 50
Z_HISTOGRAM_CAP = 5.0


@dataclass(frozen=True)
class ReportRow:
    label: str
    spec: str
    n_pairs: int
    overlap: float | None  # vs the reference subset; None when no reference


@dataclass(frozen=True)
class ColumnSummary:
    """Distribution summary of one score column's z-values.

    ``z_counts`` has one entry per regular bin over ``[0, z_max]`` where
    ``z_max`` is the observed maximum capped at :data:`Z_HISTOGRAM_CAP`;
    ``z_overflow`` counts values beyond the cap.  Together they sum to
    ``n_valid``.
    """

    scorer: ScorerKind
    mean: float | None
    std: float | None
    n_valid: int
    n_invalid: int
    z_max: float
    z_counts: tuple[int, ...]
    z_overflow: int


@dataclass(frozen=True)
class FilterReport:
    corpus_size: int
    rows: tuple[ReportRow, ...]
    reference_label: str | None
    columns: tuple[ColumnSummary, ...]


def _summarize_column(table: ScoreTable, scorer: ScorerKind) -> ColumnSummary:
    col = table.column(scorer)
    valid = col[~np.isnan(col)]
    n_valid = int(valid.size)
    n_invalid = table.n_rows - n_valid
    if n_valid == 0:
        return ColumnSummary(scorer, None, None, 0, n_invalid, 0.0, (), 0)
    stats = compute_stats(table, scorer)
    if stats.std == 0.0:
        z = np.zeros(n_valid)
    else:
        z = np.abs(valid - stats.mean) / stats.std
    upper = min(float(z.max()), Z_HISTOGRAM_CAP)
    if upper == 0.0:
        counts = [n_valid] + [0] * (Z_HISTOGRAM_BINS - 1)
        overflow = 0
    else:
        hist, _ = np.histogram(z, bins=Z_HISTOGRAM_BINS, range=(0.0, upper))
        counts = hist.tolist()
        overflow = int((z > upper).sum())
    return ColumnSummary(
        scorer=scorer,
        mean=stats.mean,
        std=stats.std,
        n_valid=n_valid,
        n_invalid=n_invalid,
        z_max=upper,
        z_counts=tuple(int(c) for c in counts),
        z_overflow=overflow,
    )


def build_report(
    corpus: Corpus,
    table: ScoreTable,
    subsets: Sequence[Subset],
    reference: Subset | None = None,
    labels: Sequence[str] | None = None,
    reference_label: str | None = None,
) -> FilterReport:
    """One row per subset, in input order, plus per-scorer summaries.

    ``labels`` defaults to each subset's spec string.  Overlap is computed
    against ``reference`` when given (and raises for empty subsets, which
    have no defined overlap).
    """
    corpus_ids = set(corpus.ids())
    if labels is not None and len(labels) != len(subsets):
        raise ValueError("labels and subsets must have equal length")
    report_rows: list[ReportRow] = []
    for i, subset in enumerate(subsets):
        stray = set(subset.ids) - corpus_ids
        if stray:
            raise ValueError(
                f"subset {i} has {len(stray)} ids not present in the corpus"
            )
        if labels is not None:
            label = labels[i]
        elif subset.spec is not None:
            label = format_spec(subset.spec)
        else:
            label = f"subset{i + 1}"
        spec_str = format_spec(subset.spec) if subset.spec is not None else "-"
        overlap = overlap_pct(subset, reference) if reference is not None else None
        report_rows.append(ReportRow(label, spec_str, len(subset), overlap))

    summaries = tuple(_summarize_column(table, kind) for kind in table.scorers())
    return FilterReport(
        corpus_size=len(corpus),
        rows=tuple(report_rows),
        reference_label=reference_label if reference is not None else None,
        columns=summaries,
    )


def _fmt_overlap(value: float | None) -> str:
    return "N/A" if value is None else f"{value:.2f}"


def _fmt_stat(value: float | None) -> str:
    return "N/A" if value is None else f"{value:.6g}"


def render_report(report: FilterReport, fmt: str = "tsv") -> bytes:
    """Render to ``tsv`` or ``md``; byte-identical for equal reports."""
    if fmt == "tsv":
        lines = ["label\tspec\tn_pairs\toverlap_pct"]
        for row in report.rows:
            lines.append(
                f"{row.label}\t{row.spec}\t{row.n_pairs}\t{_fmt_overlap(row.overlap)}"
            )
        return ("\n".join(lines) + "\n").encode("utf-8")
    if fmt == "md":
        lines = [
            "# Filter report",
            "",
            f"Corpus size: {report.corpus_size}",
            f"Reference subset: {report.reference_label or 'none'}",
            "",
            "| label | spec | n_pairs | overlap_pct |",
            "| --- | --- | --- | --- |",
        ]
        for row in report.rows:
            lines.append(
                f"| {row.label} | {row.spec} | {row.n_pairs} |"
                f" {_fmt_overlap(row.overlap)} |"
            )
        if report.columns:
            lines += [
                "",
                "## Score columns",
                "",
                "| scorer | mean | std | n_valid | n_invalid |",
                "| --- | --- | --- | --- | --- |",
            ]
            for summary in report.columns:
                lines.append(
                    f"| {summary.scorer.value} | {_fmt_stat(summary.mean)} |"
                    f" {_fmt_stat(summary.std)} | {summary.n_valid} |"
                    f" {summary.n_invalid} |"
                )
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise ValueError(f"unknown report format {fmt!r}")
