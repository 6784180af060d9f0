"""Scorer implementations and the scorer handle contract.

A scorer is any object with::

    score(source: str, target: str) -> (total_log_likelihood, token_count)

where ``total_log_likelihood`` is the log-probability the model assigns to
the target given the source (<= 0 for a proper model) and ``token_count``
is the number of units that likelihood sums over.  Scoring one pair must
not depend on which other pairs sit in the same batch.

A scorer may additionally expose a truthy ``needs_fit`` plus ``fit(texts)``;
the adapter then fits it on the manifest's target transcripts before
scoring, which keeps the shipped toy model self-contained.
"""

from __future__ import annotations

import importlib
import math
from collections import Counter
from typing import Iterable, Protocol, runtime_checkable


@runtime_checkable
class Scorer(Protocol):
    def score(self, source: str, target: str) -> tuple[float, int]:
        ...


class ToyBigramScorer:
    """Character-bigram language model over target text.

    Plain add-k smoothed bigram estimates; the source side is ignored, so
    the score measures target plausibility under the fitted text
    distribution.  Deliberately tiny: it exists so the adapter and its
    tests run offline, not to compete with a real sequence model.
    """

    BOS = "\x02"
    UNK = "\x00"

    def __init__(self, k: float = 0.5):
        if k <= 0:
            raise ValueError("smoothing k must be positive")
        self.k = k
        self._bigrams: Counter[tuple[str, str]] = Counter()
        self._context: Counter[str] = Counter()
        self._vocab: set[str] = set()
        self._fitted = False

    @property
    def needs_fit(self) -> bool:
        return not self._fitted

    def fit(self, texts: Iterable[str]) -> "ToyBigramScorer":
        for text in texts:
            prev = self.BOS
            for ch in text:
                self._vocab.add(ch)
                self._bigrams[(prev, ch)] += 1
                self._context[prev] += 1
                prev = ch
        self._fitted = True
        return self

    def _log_prob(self, prev: str, ch: str) -> float:
        if ch not in self._vocab:
            ch = self.UNK
        if prev != self.BOS and prev not in self._vocab:
            prev = self.UNK
        v = len(self._vocab) + 1  # + the unseen-character bucket
        num = self._bigrams[(prev, ch)] + self.k
        den = self._context[prev] + self.k * v
        return math.log(num / den)

    def score(self, source: str, target: str) -> tuple[float, int]:
        if not self._fitted:
            raise RuntimeError("ToyBigramScorer.score called before fit")
        total = 0.0
        prev = self.BOS
        for ch in target:
            total += self._log_prob(prev, ch)
            prev = ch
        return total, len(target)


def load_scorer(name: str) -> Scorer:
    """Resolve a ``--scorer`` argument to a scorer instance.

    ``toy-bigram`` builds the shipped toy model (fitted later by the
    adapter); ``plugin:<module-path>`` imports the module and calls its
    ``build_scorer()`` factory.
    """
    if name == "toy-bigram":
        return ToyBigramScorer()
    if name.startswith("plugin:"):
        module_path = name[len("plugin:") :]
        if not module_path:
            raise ValueError("plugin: needs a module path")
        module = importlib.import_module(module_path)
        factory = getattr(module, "build_scorer", None)
        if factory is None:
            raise ValueError(f"module {module_path!r} has no build_scorer()")
        scorer = factory()
        if not isinstance(scorer, Scorer):
            raise ValueError(f"{module_path}.build_scorer() returned a non-scorer")
        return scorer
    raise ValueError(f"unknown scorer {name!r} (want toy-bigram or plugin:<module>)")
