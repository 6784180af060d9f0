"""Synthetic corpora with planted noise, and filter quality measurement.

Real mined corpora come with no ground truth, so filter behavior is
benchmarked on generated data where every record is labeled.  The clean
generator draws, per record:

* source token count ``s`` = 1 + Geometric(0.12) — many short utterances
  with a long tail, like real speech segments;
* target token count = ``max(1, round(s * f))`` with ``f`` uniform in
  [0.8, 1.25];
* one speaking rate uniform in [0.3, 0.5] s/token shared by both sides,
  so durations are tokens times rate (quantized to milliseconds).

These constants are frozen: tests recompute expected filter behavior from
them.  Four corruption modes model mined-corpus failure cases, each
detectable by at least one scorer: cross-pair target swaps (misalignment),
prefix truncation, target-duration jitter (x2-x4), and emptied targets.
A record receives at most one corruption.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Mapping

import numpy as np

from .errors import InsufficientRecordsError, MissingRecordError
from .filtering import Subset
from .manifest import Corpus, PairRecord, _as_bytes, _write_bytes

CLEAN = "clean"
SWAP = "swap"
TRUNCATE = "truncate"
JITTER = "jitter"
EMPTY = "empty"
NOISE_KINDS = (SWAP, TRUNCATE, JITTER, EMPTY)
ALL_LABELS = (CLEAN,) + NOISE_KINDS

_SYLLABLES = tuple(c + v for c in "bdgklmnprst" for v in "aeiou")
VOCAB = _SYLLABLES + tuple(a + b for a in _SYLLABLES[:5] for b in _SYLLABLES[:5])

_TOKEN_GEOMETRIC_P = 0.12
_FACTOR_RANGE = (0.8, 1.25)
_RATE_RANGE = (0.3, 0.5)
_JITTER_RANGE = (2.0, 4.0)


def _words(rng: np.random.Generator, counts: np.ndarray) -> list[str]:
    total = int(counts.sum())
    idx = rng.integers(0, len(VOCAB), size=total)
    texts = []
    pos = 0
    for count in counts:
        texts.append(" ".join(VOCAB[j] for j in idx[pos : pos + count]))
        pos += count
    return texts


def generate_clean(n: int, seed: int) -> Corpus:
    """Generate ``n`` well-aligned records, deterministic in ``seed``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = np.random.default_rng(seed)
    src_tok = 1 + rng.geometric(_TOKEN_GEOMETRIC_P, n)
    factor = rng.uniform(*_FACTOR_RANGE, n)
    tgt_tok = np.maximum(1, np.rint(src_tok * factor)).astype(np.int64)
    rate = rng.uniform(*_RATE_RANGE, n)
    src_texts = _words(rng, src_tok)
    tgt_texts = _words(rng, tgt_tok)
    records = tuple(
        PairRecord(
            id=f"pair{i:08d}",
            src_duration=float(src_tok[i] * rate[i]),
            src_text=src_texts[i],
            tgt_duration=float(tgt_tok[i] * rate[i]),
            tgt_text=tgt_texts[i],
        )
        for i in range(n)
    )
    return Corpus(records)


@dataclass(frozen=True)
class NoiseSpec:
    """Per-mode corruption fractions; at most one corruption per record."""

    swap_fraction: float = 0.0
    truncate_fraction: float = 0.0
    duration_jitter_fraction: float = 0.0
    empty_fraction: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        fractions = (
            self.swap_fraction,
            self.truncate_fraction,
            self.duration_jitter_fraction,
            self.empty_fraction,
        )
        if any(not 0 <= f <= 1 for f in fractions):
            raise ValueError("noise fractions must lie in [0, 1]")
        if sum(fractions) > 1 + 1e-12:
            raise ValueError("noise fractions must sum to at most 1")


@dataclass(frozen=True)
class LabeledCorpus:
    """A corpus plus a ground-truth label per pair id."""

    corpus: Corpus
    labels: Mapping[str, str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", dict(self.labels))
        if set(self.labels) != set(self.corpus.ids()):
            raise ValueError("label ids must equal corpus ids")
        bad = {lab for lab in self.labels.values() if lab not in ALL_LABELS}
        if bad:
            raise ValueError(f"unknown labels: {sorted(bad)}")


def _noise_counts(spec: NoiseSpec, n: int) -> tuple[int, int, int, int]:
    n_swap = 2 * int(round(spec.swap_fraction * n / 2))
    n_trunc = int(round(spec.truncate_fraction * n))
    n_jitter = int(round(spec.duration_jitter_fraction * n))
    n_empty = int(round(spec.empty_fraction * n))
    # rounding may overshoot n by a record or two; trim deterministically
    while n_swap + n_trunc + n_jitter + n_empty > n:
        if n_empty > 0:
            n_empty -= 1
        elif n_jitter > 0:
            n_jitter -= 1
        elif n_trunc > 0:
            n_trunc -= 1
        else:
            n_swap -= 2
    return n_swap, n_trunc, n_jitter, n_empty


def inject_noise(corpus: Corpus, spec: NoiseSpec) -> LabeledCorpus:
    """Corrupt a deterministic sample of records, labeling every one.

    Swaps exchange ``tgt_text``/``tgt_duration`` between two records (both
    labeled); truncation keeps a random strict token prefix; jitter
    multiplies the target duration by a uniform [2, 4] factor; empty blanks
    the target transcript.
    """
    n = len(corpus)
    if spec.swap_fraction > 0 and n < 2:
        raise InsufficientRecordsError("swap corruption needs at least 2 records")
    rng = np.random.default_rng(spec.seed)
    n_swap, n_trunc, n_jitter, n_empty = _noise_counts(spec, n)
    order = rng.permutation(n)

    records = list(corpus.records)
    labels = {rec.id: CLEAN for rec in records}

    pos = 0
    for k in range(n_swap // 2):
        i, j = int(order[pos + 2 * k]), int(order[pos + 2 * k + 1])
        a, b = records[i], records[j]
        records[i] = dataclasses.replace(
            a, tgt_text=b.tgt_text, tgt_duration=b.tgt_duration
        )
        records[j] = dataclasses.replace(
            b, tgt_text=a.tgt_text, tgt_duration=a.tgt_duration
        )
        labels[a.id] = labels[b.id] = SWAP
    pos += n_swap

    trunc_idx = [int(i) for i in order[pos : pos + n_trunc]]
    pos += n_trunc
    if trunc_idx:
        lens = np.asarray(
            [len(records[i].tgt_text.split()) for i in trunc_idx], dtype=np.int64
        )
        keep = rng.integers(0, np.maximum(1, lens))
        for i, k in zip(trunc_idx, keep):
            rec = records[i]
            toks = rec.tgt_text.split()
            records[i] = dataclasses.replace(rec, tgt_text=" ".join(toks[: int(k)]))
            labels[rec.id] = TRUNCATE

    jitter_idx = [int(i) for i in order[pos : pos + n_jitter]]
    pos += n_jitter
    if jitter_idx:
        factors = rng.uniform(*_JITTER_RANGE, len(jitter_idx))
        for i, factor in zip(jitter_idx, factors):
            rec = records[i]
            records[i] = dataclasses.replace(
                rec, tgt_duration=rec.tgt_duration * float(factor)
            )
            labels[rec.id] = JITTER

    for i in order[pos : pos + n_empty]:
        rec = records[int(i)]
        records[int(i)] = dataclasses.replace(rec, tgt_text="")
        labels[rec.id] = EMPTY

    noisy = Corpus(tuple(records), corpus.source_label, corpus.target_label)
    return LabeledCorpus(noisy, labels)


@dataclass(frozen=True)
class FilterEval:
    """Confusion summary of the "reject noisy" decision for one subset.

    Rejected means "not in the subset".  Fields with an undefined
    denominator are ``None`` rather than a fake number.
    """

    label: str
    n: int
    tp: int  # noisy and rejected
    fp: int  # clean and rejected
    fn: int  # noisy but kept
    tn: int  # clean and kept
    precision: float | None
    recall: float | None
    f1: float | None
    prevalence: float
    recall_by_kind: Mapping[str, float | None]


def evaluate_filter(
    subset: Subset,
    labeled: LabeledCorpus | Mapping[str, str],
    label: str | None = None,
) -> FilterEval:
    """Score a subset's rejections against ground-truth noise labels."""
    labels = labeled.labels if isinstance(labeled, LabeledCorpus) else labeled
    kept = subset.id_set()
    stray = kept - set(labels)
    if stray:
        raise MissingRecordError(sorted(stray)[0])

    tp = fp = fn = tn = 0
    kind_total: dict[str, int] = {kind: 0 for kind in NOISE_KINDS}
    kind_rejected: dict[str, int] = {kind: 0 for kind in NOISE_KINDS}
    for pair_id, lab in labels.items():
        rejected = pair_id not in kept
        if lab == CLEAN:
            if rejected:
                fp += 1
            else:
                tn += 1
        else:
            kind_total[lab] += 1
            if rejected:
                tp += 1
                kind_rejected[lab] += 1
            else:
                fn += 1

    n = len(labels)
    precision = tp / (tp + fp) if tp + fp else None
    recall = tp / (tp + fn) if tp + fn else None
    if precision is not None and recall is not None and precision + recall > 0:
        f1 = 2 * precision * recall / (precision + recall)
    else:
        f1 = None
    recall_by_kind = {
        kind: (kind_rejected[kind] / kind_total[kind] if kind_total[kind] else None)
        for kind in NOISE_KINDS
    }
    if label is None:
        label = "subset"
    return FilterEval(
        label=label,
        n=n,
        tp=tp,
        fp=fp,
        fn=fn,
        tn=tn,
        precision=precision,
        recall=recall,
        f1=f1,
        prevalence=(tp + fn) / n if n else 0.0,
        recall_by_kind=recall_by_kind,
    )


# --- labels file ------------------------------------------------------------

LABELS_HEADER = "id\tlabel"


def write_labels(labeled: LabeledCorpus, dest: str | Path | BinaryIO) -> int:
    lines = [LABELS_HEADER]
    for pair_id in sorted(labeled.labels):
        lines.append(f"{pair_id}\t{labeled.labels[pair_id]}")
    _write_bytes(("\n".join(lines) + "\n").encode("utf-8"), dest)
    return len(labeled.labels)


def read_labels(source: str | Path | bytes | BinaryIO) -> dict[str, str]:
    text = _as_bytes(source).decode("utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != LABELS_HEADER:
        raise ValueError("bad labels file header")
    labels: dict[str, str] = {}
    for line_no, line in enumerate(lines[1:], start=2):
        cells = line.split("\t")
        if len(cells) != 2 or cells[1] not in ALL_LABELS:
            raise ValueError(f"line {line_no}: bad labels row {line!r}")
        if cells[0] in labels:
            raise ValueError(f"line {line_no}: duplicate id {cells[0]!r}")
        labels[cells[0]] = cells[1]
    return labels
