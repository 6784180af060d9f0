"""pairsift: score and filter noisy parallel speech/text corpora.

The pipeline in one breath: parse a manifest of mined speech/text pairs,
score every pair with length-ratio heuristics (and merge externally
computed NLL scores), standardize each score column, cut subsets by
z-threshold or percentile, combine subsets with union/intersection, and
report subset sizes and overlaps.  A synthetic benchmark with planted,
labeled noise measures how well each filter actually rejects bad pairs.
"""

__version__ = "0.1.0"

from .errors import (
    BadDurationError,
    BadScoreError,
    DuplicateIdError,
    DuplicateScoreError,
    EmptySubsetError,
    InsufficientRecordsError,
    MalformedRowError,
    MalformedScoreRowError,
    ManifestError,
    MissingRecordError,
    NotComputableError,
    NoValidScoresError,
    PairsiftError,
    ScoreFileError,
    SpecParseError,
    SubsetMismatchError,
)
from .filtering import (
    CorpusStats,
    PercentileCut,
    SpecIntersection,
    SpecUnion,
    Subset,
    SubsetSpec,
    ZThreshold,
    compute_stats,
    evaluate_spec,
    filter_by_percentile,
    filter_by_z,
    format_spec,
    intersect,
    materialize,
    overlap_pct,
    parse_spec,
    percentile_count,
    read_subset,
    union,
    write_subset,
    z_score,
)
from .manifest import (
    Corpus,
    PairRecord,
    ParseResult,
    ValidationReport,
    manifest_bytes,
    parse_manifest,
    validate,
    write_manifest,
)
from .report import (
    ColumnSummary,
    FilterReport,
    ReportRow,
    build_report,
    render_report,
)
from .scoring import (
    KIND_ORDER,
    RATIO_KINDS,
    IngestResult,
    ScorerKind,
    ScoreTable,
    TokenizerConfig,
    TokenMode,
    ingest_external_scores,
    ratio_score,
    read_score_table,
    score_corpus,
    token_count,
    write_score_table,
)
from .synthbench import (
    CLEAN,
    EMPTY,
    JITTER,
    NOISE_KINDS,
    SWAP,
    TRUNCATE,
    FilterEval,
    LabeledCorpus,
    NoiseSpec,
    evaluate_filter,
    generate_clean,
    inject_noise,
    read_labels,
    write_labels,
)

__all__ = [name for name in dir() if not name.startswith("_")]
