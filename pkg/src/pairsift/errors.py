"""Exception hierarchy for pairsift.

Every data-level failure raises a subclass of :class:`PairsiftError`, so
callers (notably the CLI) can distinguish bad input data from genuine bugs
with a single ``except`` clause.
"""

from __future__ import annotations


class PairsiftError(Exception):
    """Base class for all pairsift data errors."""


# --- manifest parsing -----------------------------------------------------


class ManifestError(PairsiftError):
    """A manifest file violates the manifest TSV contract."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedRowError(ManifestError):
    """Wrong column count, bad encoding, or an otherwise unusable row."""


class BadDurationError(ManifestError):
    """A duration cell is unparseable, non-finite, or negative."""


class DuplicateIdError(ManifestError):
    """The same pair id appears on more than one row."""

    def __init__(self, pair_id: str, line: int | None = None):
        self.pair_id = pair_id
        super().__init__(f"duplicate id {pair_id!r}", line)


# --- score tables ---------------------------------------------------------


class ScoreFileError(PairsiftError):
    """A score TSV violates the score-file contract."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedScoreRowError(ScoreFileError):
    """Structurally broken score row (column count, encoding, header)."""


class DuplicateScoreError(ScoreFileError):
    """The same pair id is scored more than once in one file."""

    def __init__(self, pair_id: str, line: int | None = None):
        self.pair_id = pair_id
        super().__init__(f"duplicate score for id {pair_id!r}", line)


class BadScoreError(ScoreFileError):
    """A score cell does not parse to a finite real."""


class NotComputableError(PairsiftError):
    """The requested scorer cannot be computed from a pair record."""


# --- filtering ------------------------------------------------------------


class NoValidScoresError(PairsiftError):
    """A score column has no valid cells, so mean/std are undefined."""


class SubsetMismatchError(PairsiftError):
    """Set algebra was attempted on subsets of different corpora."""


class EmptySubsetError(PairsiftError):
    """Overlap against an empty subset is undefined."""


class MissingRecordError(PairsiftError):
    """A subset references a pair id the corpus does not contain."""

    def __init__(self, pair_id: str):
        self.pair_id = pair_id
        super().__init__(f"no record with id {pair_id!r}")


class SpecParseError(PairsiftError):
    """A subset-spec string does not match the spec grammar."""


# --- synthetic benchmark --------------------------------------------------


class InsufficientRecordsError(PairsiftError):
    """The corpus is too small for the requested corruption."""
