"""Length-ratio scoring and external score ingestion.

Four ratio scorers compare the two sides of a pair, always oriented
source/target:

* ``text_text``    — source tokens / target tokens
* ``speech_text``  — source audio seconds / target tokens
* ``speech_speech``— source audio seconds / target audio seconds
* ``text_speech``  — source tokens / target audio seconds

A fifth column, ``nll``, is never computed here: it comes from an external
sequence model and is merged in from a score TSV.  A zero denominator
makes a cell INVALID rather than infinite — an empty target transcript is
noise by definition, and INVALID cells are excluded from statistics and
from every subset downstream.

Internally a :class:`ScoreTable` stores one float64 column per scorer with
``NaN`` encoding INVALID; in score TSVs the same cell is an empty string.
"""

from __future__ import annotations

import enum
import unicodedata
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    BadScoreError,
    DuplicateScoreError,
    MalformedScoreRowError,
    NotComputableError,
)
from .manifest import Corpus, PairRecord, _as_bytes, _write_bytes


class TokenMode(enum.Enum):
    WHITESPACE = "ws"
    CHAR = "char"


@dataclass(frozen=True)
class TokenizerConfig:
    """How "number of tokens" is counted.

    NFC normalization is always applied first.  WHITESPACE counts maximal
    non-whitespace runs; CHAR counts non-whitespace code points, for
    languages where whitespace is an unreliable word boundary.
    """

    mode: TokenMode = TokenMode.WHITESPACE


DEFAULT_TOKENIZER = TokenizerConfig()


def token_count(text: str, cfg: TokenizerConfig = DEFAULT_TOKENIZER) -> int:
    text = unicodedata.normalize("NFC", text)
    if cfg.mode is TokenMode.WHITESPACE:
        return len(text.split())
    return sum(1 for ch in text if not ch.isspace())


class ScorerKind(enum.Enum):
    """Closed set of score columns; values are the canonical file names."""

    TEXT_TEXT = "text_text"
    SPEECH_TEXT = "speech_text"
    SPEECH_SPEECH = "speech_speech"
    TEXT_SPEECH = "text_speech"
    EXTERNAL_NLL = "nll"

    @classmethod
    def from_name(cls, name: str) -> "ScorerKind":
        for kind in cls:
            if kind.value == name:
                return kind
        raise ValueError(f"unknown scorer {name!r}")


RATIO_KINDS = (
    ScorerKind.TEXT_TEXT,
    ScorerKind.SPEECH_TEXT,
    ScorerKind.SPEECH_SPEECH,
    ScorerKind.TEXT_SPEECH,
)

# canonical column order in score files
KIND_ORDER = RATIO_KINDS + (ScorerKind.EXTERNAL_NLL,)


class ScoreTable:
    """Per-pair score columns, rows keyed by pair id in ascending order.

    Columns are read-only float64 arrays aligned with ``ids``; ``NaN``
    marks an INVALID cell.  Instances are immutable: merging a new column
    returns a new table.
    """

    __slots__ = ("ids", "_columns", "_provenance", "_index")

    def __init__(
        self,
        ids: Sequence[str],
        columns: Mapping[ScorerKind, np.ndarray],
        provenance: Mapping[ScorerKind, str] | None = None,
    ):
        ids = tuple(ids)
        if any(ids[i] >= ids[i + 1] for i in range(len(ids) - 1)):
            raise ValueError("score table ids must be strictly ascending")
        cols: dict[ScorerKind, np.ndarray] = {}
        for kind, values in columns.items():
            arr = np.asarray(values, dtype=np.float64)
            if arr.shape != (len(ids),):
                raise ValueError(
                    f"column {kind.value} has {arr.shape} values for {len(ids)} ids"
                )
            arr = arr.copy()
            arr.flags.writeable = False
            cols[kind] = arr
        self.ids = ids
        self._columns = cols
        self._provenance = dict(provenance or {})
        self._index = {pair_id: i for i, pair_id in enumerate(ids)}

    @property
    def n_rows(self) -> int:
        return len(self.ids)

    def scorers(self) -> tuple[ScorerKind, ...]:
        return tuple(k for k in KIND_ORDER if k in self._columns)

    def has(self, kind: ScorerKind) -> bool:
        return kind in self._columns

    def column(self, kind: ScorerKind) -> np.ndarray:
        if kind not in self._columns:
            raise KeyError(f"table has no {kind.value} column")
        return self._columns[kind]

    def get(self, pair_id: str, kind: ScorerKind) -> float | None:
        value = self.column(kind)[self._index[pair_id]]
        return None if np.isnan(value) else float(value)

    def provenance(self, kind: ScorerKind) -> str:
        return self._provenance.get(kind, "")

    def with_column(
        self, kind: ScorerKind, values: np.ndarray, provenance: str = ""
    ) -> "ScoreTable":
        columns = dict(self._columns)
        columns[kind] = values
        notes = dict(self._provenance)
        notes[kind] = provenance
        return ScoreTable(self.ids, columns, notes)


def ratio_score(
    record: PairRecord,
    kind: ScorerKind,
    cfg: TokenizerConfig = DEFAULT_TOKENIZER,
) -> float | None:
    """Compute one ratio score for one pair; ``None`` means INVALID.

    Raises :class:`NotComputableError` for ``EXTERNAL_NLL`` — that score is
    ingested from a file, never derived from the record itself.
    """
    if kind is ScorerKind.EXTERNAL_NLL:
        raise NotComputableError("nll is ingested from an external score file")
    if kind is ScorerKind.TEXT_TEXT:
        num: float = float(token_count(record.src_text, cfg))
        den: float = float(token_count(record.tgt_text, cfg))
    elif kind is ScorerKind.SPEECH_TEXT:
        num = record.src_duration
        den = float(token_count(record.tgt_text, cfg))
    elif kind is ScorerKind.SPEECH_SPEECH:
        num = record.src_duration
        den = record.tgt_duration
    else:  # TEXT_SPEECH
        num = float(token_count(record.src_text, cfg))
        den = record.tgt_duration
    if den == 0.0:
        return None
    return num / den


def _token_counts(
    texts: Sequence[str], cfg: TokenizerConfig, threads: int
) -> np.ndarray:
    if threads > 1 and len(texts) > 1:
        chunk = max(1, -(-len(texts) // threads))
        pieces = [texts[i : i + chunk] for i in range(0, len(texts), chunk)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counted = pool.map(lambda p: [token_count(t, cfg) for t in p], pieces)
        out: list[int] = []
        for piece in counted:
            out.extend(piece)
        return np.asarray(out, dtype=np.float64)
    return np.asarray([token_count(t, cfg) for t in texts], dtype=np.float64)


def score_corpus(
    corpus: Corpus,
    kinds: Iterable[ScorerKind] = RATIO_KINDS,
    cfg: TokenizerConfig = DEFAULT_TOKENIZER,
    threads: int = 1,
) -> ScoreTable:
    """Score every pair with the requested ratio scorers.

    Rows come out sorted by id and each cell is a pure function of its own
    record, so the result is identical for any processing order or thread
    count.
    """
    kinds = tuple(kinds)
    if ScorerKind.EXTERNAL_NLL in kinds:
        raise ValueError("nll cannot be computed here; use ingest_external_scores")
    records = sorted(corpus.records, key=lambda rec: rec.id)
    ids = [rec.id for rec in records]

    need_src_tok = any(k in (ScorerKind.TEXT_TEXT, ScorerKind.TEXT_SPEECH) for k in kinds)
    need_tgt_tok = any(k in (ScorerKind.TEXT_TEXT, ScorerKind.SPEECH_TEXT) for k in kinds)
    src_tok = (
        _token_counts([r.src_text for r in records], cfg, threads) if need_src_tok else None
    )
    tgt_tok = (
        _token_counts([r.tgt_text for r in records], cfg, threads) if need_tgt_tok else None
    )
    src_dur = np.asarray([r.src_duration for r in records], dtype=np.float64)
    tgt_dur = np.asarray([r.tgt_duration for r in records], dtype=np.float64)

    numerators = {
        ScorerKind.TEXT_TEXT: src_tok,
        ScorerKind.SPEECH_TEXT: src_dur,
        ScorerKind.SPEECH_SPEECH: src_dur,
        ScorerKind.TEXT_SPEECH: src_tok,
    }
    denominators = {
        ScorerKind.TEXT_TEXT: tgt_tok,
        ScorerKind.SPEECH_TEXT: tgt_tok,
        ScorerKind.SPEECH_SPEECH: tgt_dur,
        ScorerKind.TEXT_SPEECH: tgt_dur,
    }
    columns: dict[ScorerKind, np.ndarray] = {}
    provenance: dict[ScorerKind, str] = {}
    for kind in kinds:
        num, den = numerators[kind], denominators[kind]
        col = np.full(len(ids), np.nan)
        np.divide(num, den, out=col, where=den > 0)
        columns[kind] = col
        provenance[kind] = f"ratio:{cfg.mode.value}"
    return ScoreTable(ids, columns, provenance)


# --- score TSV ------------------------------------------------------------


@dataclass(frozen=True)
class IngestResult:
    """Merged table plus the id mismatches found during ingestion."""

    table: ScoreTable
    unknown_ids: tuple[str, ...]  # in the file, not in the table
    missing_ids: tuple[str, ...]  # in the table, not in the file


def _format_score(value: float) -> str:
    return "" if np.isnan(value) else repr(float(value))


def write_score_table(table: ScoreTable, dest: str | Path | BinaryIO) -> int:
    """Write ``id`` plus one canonical column per scorer; INVALID is empty.

    Deterministic: ids ascending, shortest round-trip float rendering.
    Returns the number of data rows.
    """
    kinds = table.scorers()
    header = "\t".join(["id"] + [k.value for k in kinds])
    cols = [table.column(k) for k in kinds]
    lines = [header]
    for i, pair_id in enumerate(table.ids):
        lines.append("\t".join([pair_id] + [_format_score(col[i]) for col in cols]))
    _write_bytes(("\n".join(lines) + "\n").encode("utf-8"), dest)
    return table.n_rows


def _parse_score_cell(cell: str, line: int) -> float:
    if cell == "":
        return float("nan")  # explicitly-unscored marker
    try:
        value = float(cell)
    except ValueError:
        raise BadScoreError(f"unparseable score {cell!r}", line) from None
    if not np.isfinite(value):
        raise BadScoreError(f"non-finite score {cell!r}", line)
    return value


def _parse_score_file(
    source: str | Path | bytes | BinaryIO,
) -> tuple[list[str], dict[ScorerKind, list[float]]]:
    """Shared reader for score TSVs; returns file-order ids and columns."""
    data = _as_bytes(source)
    lines = data.split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    if not lines:
        raise MalformedScoreRowError("empty file, expected score header", 1)
    try:
        header = lines[0].decode("utf-8").split("\t")
    except UnicodeDecodeError:
        raise MalformedScoreRowError("header is not valid UTF-8", 1) from None
    if not header or header[0] != "id":
        raise MalformedScoreRowError("first column must be 'id'", 1)
    canonical = {k.value: k for k in ScorerKind}
    positions: dict[ScorerKind, int] = {}
    for pos, name in enumerate(header[1:], start=1):
        kind = canonical.get(name)
        if kind is not None:
            if kind in positions:
                raise MalformedScoreRowError(f"column {name!r} repeated", 1)
            positions[kind] = pos
    if not positions:
        raise MalformedScoreRowError("no canonical score columns in header", 1)

    ids: list[str] = []
    seen: set[str] = set()
    columns: dict[ScorerKind, list[float]] = {k: [] for k in positions}
    for line_no, raw in enumerate(lines[1:], start=2):
        try:
            cells = raw.decode("utf-8").split("\t")
        except UnicodeDecodeError:
            raise MalformedScoreRowError("row is not valid UTF-8", line_no) from None
        if len(cells) != len(header):
            raise MalformedScoreRowError(
                f"expected {len(header)} columns, got {len(cells)}", line_no
            )
        pair_id = cells[0]
        if pair_id in seen:
            raise DuplicateScoreError(pair_id, line_no)
        seen.add(pair_id)
        ids.append(pair_id)
        for kind, pos in positions.items():
            columns[kind].append(_parse_score_cell(cells[pos], line_no))
    return ids, columns


def read_score_table(source: str | Path | bytes | BinaryIO) -> ScoreTable:
    """Load a standalone score TSV; rows are re-sorted by id."""
    ids, columns = _parse_score_file(source)
    order = sorted(range(len(ids)), key=lambda i: ids[i])
    sorted_ids = [ids[i] for i in order]
    sorted_cols = {
        kind: np.asarray(values, dtype=np.float64)[order]
        for kind, values in columns.items()
    }
    provenance = {kind: "file" for kind in sorted_cols}
    return ScoreTable(sorted_ids, sorted_cols, provenance)


def ingest_external_scores(
    table: ScoreTable, source: str | Path | bytes | BinaryIO
) -> IngestResult:
    """Merge externally produced score columns into a table, by id.

    The file must carry an ``nll`` column; any other canonically named
    column is merged the same way.  File ids unknown to the table are
    reported, not inserted; table ids absent from the file get INVALID.
    """
    ids, columns = _parse_score_file(source)
    if ScorerKind.EXTERNAL_NLL not in columns:
        raise MalformedScoreRowError("score file has no 'nll' column", 1)

    index = {pair_id: i for i, pair_id in enumerate(table.ids)}
    unknown = [pair_id for pair_id in ids if pair_id not in index]
    file_ids = set(ids)
    missing = [pair_id for pair_id in table.ids if pair_id not in file_ids]

    merged = table
    for kind, values in columns.items():
        col = np.full(table.n_rows, np.nan)
        for pair_id, value in zip(ids, values):
            row = index.get(pair_id)
            if row is not None:
                col[row] = value
        merged = merged.with_column(kind, col, "external")
    return IngestResult(merged, tuple(unknown), tuple(missing))
