"""Manifest I/O for parallel speech/text corpora.

A manifest is a UTF-8 TSV with a fixed 7-column header and one pair per
row::

    id  src_audio  src_duration_s  src_text  tgt_audio  tgt_duration_s  tgt_text

Durations are seconds at millisecond resolution, audio paths are optional
(empty cell means absent), and cells may not contain tabs or newlines —
no quoting scheme exists, so a row with stray separators is malformed.
Writing sorts rows by id and renders durations at exactly three decimals,
which makes the output a pure function of the corpus: equal corpora give
byte-identical files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from io import BytesIO
from pathlib import Path
from typing import BinaryIO, Iterator

from .errors import (
    BadDurationError,
    DuplicateIdError,
    MalformedRowError,
    ManifestError,
)

MANIFEST_COLUMNS = (
    "id",
    "src_audio",
    "src_duration_s",
    "src_text",
    "tgt_audio",
    "tgt_duration_s",
    "tgt_text",
)
MANIFEST_HEADER = "\t".join(MANIFEST_COLUMNS)

_FORBIDDEN_CELL_CHARS = ("\t", "\n")


def _check_cell(value: str, what: str) -> None:
    for ch in _FORBIDDEN_CELL_CHARS:
        if ch in value:
            raise ValueError(f"{what} must not contain tab or newline")


def _quantize_duration(value: float, what: str) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0:
        raise ValueError(f"{what} must be a finite non-negative number of seconds")
    # millisecond resolution; +0.0 folds -0.0 into canonical 0.0
    return round(value, 3) + 0.0


@dataclass(frozen=True, slots=True)
class PairRecord:
    """One mined speech/text pair.

    Durations are quantized to milliseconds on construction so that a
    record survives a manifest round trip unchanged.  Texts may be empty;
    an empty audio path is normalized to ``None``.
    """

    id: str
    src_duration: float
    src_text: str
    tgt_duration: float
    tgt_text: str
    src_audio: str | None = None
    tgt_audio: str | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("pair id must be non-empty")
        _check_cell(self.id, "pair id")
        _check_cell(self.src_text, "src_text")
        _check_cell(self.tgt_text, "tgt_text")
        object.__setattr__(
            self, "src_duration", _quantize_duration(self.src_duration, "src_duration")
        )
        object.__setattr__(
            self, "tgt_duration", _quantize_duration(self.tgt_duration, "tgt_duration")
        )
        for attr in ("src_audio", "tgt_audio"):
            value = getattr(self, attr)
            if value is not None:
                _check_cell(value, attr)
                if value == "":
                    object.__setattr__(self, attr, None)


@dataclass(frozen=True)
class Corpus:
    """An ordered collection of pair records with unique ids.

    ``source_label``/``target_label`` are session metadata (e.g. language
    codes); the manifest format does not persist them.
    """

    records: tuple[PairRecord, ...]
    source_label: str = ""
    target_label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "records", tuple(self.records))
        seen: set[str] = set()
        for rec in self.records:
            if rec.id in seen:
                raise DuplicateIdError(rec.id)
            seen.add(rec.id)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[PairRecord]:
        return iter(self.records)

    def ids(self) -> tuple[str, ...]:
        return tuple(rec.id for rec in self.records)

    def by_id(self) -> dict[str, PairRecord]:
        return {rec.id: rec for rec in self.records}


@dataclass(frozen=True)
class ValidationReport:
    """Pure summary of suspicious-but-parseable record attributes."""

    n_records: int
    empty_src_text: int
    empty_tgt_text: int
    zero_src_duration: int
    zero_tgt_duration: int


@dataclass(frozen=True)
class ParseResult:
    """A parsed corpus plus the rows that were rejected in lenient mode."""

    corpus: Corpus
    issues: tuple[ManifestError, ...] = field(default_factory=tuple)


def _as_bytes(source: str | Path | bytes | BinaryIO) -> bytes:
    if isinstance(source, bytes):
        return source
    if isinstance(source, (str, Path)):
        return Path(source).read_bytes()
    return source.read()


def _write_bytes(data: bytes, dest: str | Path | BinaryIO) -> None:
    if isinstance(dest, (str, Path)):
        Path(dest).write_bytes(data)
    else:
        dest.write(data)


def _parse_duration(cell: str, line: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise BadDurationError(f"unparseable duration {cell!r}", line) from None
    if not math.isfinite(value):
        raise BadDurationError(f"non-finite duration {cell!r}", line)
    if value < 0:
        raise BadDurationError(f"negative duration {cell!r}", line)
    return value


def _parse_row(raw: bytes, line: int) -> PairRecord:
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise MalformedRowError("row is not valid UTF-8", line) from None
    cells = text.split("\t")
    if len(cells) != len(MANIFEST_COLUMNS):
        raise MalformedRowError(
            f"expected {len(MANIFEST_COLUMNS)} columns, got {len(cells)}", line
        )
    pair_id, src_audio, src_dur, src_text, tgt_audio, tgt_dur, tgt_text = cells
    try:
        return PairRecord(
            id=pair_id,
            src_duration=_parse_duration(src_dur, line),
            src_text=src_text,
            tgt_duration=_parse_duration(tgt_dur, line),
            tgt_text=tgt_text,
            src_audio=src_audio or None,
            tgt_audio=tgt_audio or None,
        )
    except ValueError as exc:
        raise MalformedRowError(str(exc), line) from None


def parse_manifest(
    source: str | Path | bytes | BinaryIO,
    strict: bool = False,
    source_label: str = "",
    target_label: str = "",
) -> ParseResult:
    """Parse a manifest TSV.

    In strict mode the first malformed row raises.  In lenient mode (the
    default) malformed rows are skipped and returned as ``issues``, and the
    corpus contains exactly the well-formed rows.  A missing or wrong
    header always raises: the file cannot be interpreted at all.
    """
    data = _as_bytes(source)
    lines = data.split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    if not lines:
        raise MalformedRowError("empty file, expected manifest header", 1)
    try:
        header = lines[0].decode("utf-8")
    except UnicodeDecodeError:
        raise MalformedRowError("header is not valid UTF-8", 1) from None
    if header != MANIFEST_HEADER:
        raise MalformedRowError(f"bad header {header!r}", 1)

    records: list[PairRecord] = []
    issues: list[ManifestError] = []
    seen: dict[str, int] = {}
    for line_no, raw in enumerate(lines[1:], start=2):
        try:
            rec = _parse_row(raw, line_no)
            if rec.id in seen:
                raise DuplicateIdError(rec.id, line_no)
        except ManifestError as exc:
            if strict:
                raise
            issues.append(exc)
            continue
        seen[rec.id] = line_no
        records.append(rec)

    corpus = Corpus(tuple(records), source_label, target_label)
    return ParseResult(corpus, tuple(issues))


def _format_row(rec: PairRecord) -> str:
    return "\t".join(
        (
            rec.id,
            rec.src_audio or "",
            f"{rec.src_duration:.3f}",
            rec.src_text,
            rec.tgt_audio or "",
            f"{rec.tgt_duration:.3f}",
            rec.tgt_text,
        )
    )


def write_manifest(corpus: Corpus, dest: str | Path | BinaryIO) -> int:
    """Write a corpus as a manifest TSV, rows sorted by id.

    Returns the number of data rows written.  Output is byte-deterministic
    for equal corpora.
    """
    ordered = sorted(corpus.records, key=lambda rec: rec.id)
    parts = [MANIFEST_HEADER]
    parts.extend(_format_row(rec) for rec in ordered)
    _write_bytes(("\n".join(parts) + "\n").encode("utf-8"), dest)
    return len(ordered)


def manifest_bytes(corpus: Corpus) -> bytes:
    """Render a corpus to manifest bytes without touching the filesystem."""
    buf = BytesIO()
    write_manifest(corpus, buf)
    return buf.getvalue()


def validate(corpus: Corpus) -> ValidationReport:
    """Count empty transcripts and zero durations; never mutates."""
    empty_src = empty_tgt = zero_src = zero_tgt = 0
    for rec in corpus:
        if rec.src_text == "":
            empty_src += 1
        if rec.tgt_text == "":
            empty_tgt += 1
        if rec.src_duration == 0.0:
            zero_src += 1
        if rec.tgt_duration == 0.0:
            zero_tgt += 1
    return ValidationReport(len(corpus), empty_src, empty_tgt, zero_src, zero_tgt)
