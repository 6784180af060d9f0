"""Bridge an external sequence model to the pairsift score-file contract."""

__version__ = "0.1.0"

from .adapter import ScoreRun, TextPair, read_pairs, score_pairs
from .scorers import Scorer, ToyBigramScorer, load_scorer

__all__ = [
    "ScoreRun",
    "Scorer",
    "TextPair",
    "ToyBigramScorer",
    "load_scorer",
    "read_pairs",
    "score_pairs",
]
