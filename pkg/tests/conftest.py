"""Shared builders for randomized tests.

Property-style tests draw from seeded numpy generators so every failure is
reproducible; these helpers keep the drawing conventions in one place.
"""

from __future__ import annotations

import numpy as np

from pairsift import Corpus, PairRecord, ScorerKind, ScoreTable

WORDS = ("aba", "beko", "cir", "dun", "elo", "fas", "gem", "hyt", "iro", "jal")


def random_record(rng: np.random.Generator, pair_id: str) -> PairRecord:
    def text() -> str:
        n = int(rng.integers(0, 8))
        return " ".join(WORDS[int(i)] for i in rng.integers(0, len(WORDS), n))

    def duration() -> float:
        return round(float(rng.uniform(0, 30)), 3)

    def audio(side: str) -> str | None:
        return f"{side}/{pair_id}.wav" if rng.random() < 0.5 else None

    return PairRecord(
        id=pair_id,
        src_duration=duration(),
        src_text=text(),
        tgt_duration=duration(),
        tgt_text=text(),
        src_audio=audio("src"),
        tgt_audio=audio("tgt"),
    )


def random_corpus(rng: np.random.Generator, n: int | None = None) -> Corpus:
    if n is None:
        n = int(rng.integers(0, 30))
    width = max(3, len(str(max(n - 1, 0))))
    return Corpus(tuple(random_record(rng, f"r{i:0{width}d}") for i in range(n)))


def random_table(
    rng: np.random.Generator,
    n: int,
    kinds: tuple[ScorerKind, ...] = (ScorerKind.EXTERNAL_NLL,),
    invalid_fraction: float = 0.0,
) -> ScoreTable:
    ids = [f"p{i:07d}" for i in range(n)]
    columns = {}
    for kind in kinds:
        col = rng.uniform(0.1, 10.0, n)
        if invalid_fraction > 0:
            col[rng.random(n) < invalid_fraction] = np.nan
        columns[kind] = col
    return ScoreTable(ids, columns)
