"""Toy bigram model and scorer loading."""

from __future__ import annotations

import math
import sys

import pytest

from nll_adapter import ToyBigramScorer, load_scorer

CLEAN_TEXTS = [
    "the cat sat on the mat",
    "the dog sat on the rug",
    "a cat and a dog",
    "the mat was flat",
]


class TestToyBigram:
    def test_requires_fit(self):
        with pytest.raises(RuntimeError):
            ToyBigramScorer().score("src", "tgt")

    def test_needs_fit_flips(self):
        scorer = ToyBigramScorer()
        assert scorer.needs_fit
        scorer.fit(CLEAN_TEXTS)
        assert not scorer.needs_fit

    def test_total_is_negative_and_count_is_chars(self):
        scorer = ToyBigramScorer().fit(CLEAN_TEXTS)
        total, count = scorer.score("", "the cat")
        assert count == len("the cat")
        assert total < 0

    def test_probabilities_normalize(self):
        # summing P(c | prev) over the whole event space must give 1
        scorer = ToyBigramScorer().fit(CLEAN_TEXTS)
        for prev in ["t", "a", " ", scorer.BOS, scorer.UNK]:
            events = sorted(scorer._vocab) + [scorer.UNK]
            mass = sum(math.exp(scorer._log_prob(prev, ch)) for ch in events)
            assert mass == pytest.approx(1.0, abs=1e-12)

    def test_familiar_text_beats_gibberish(self):
        scorer = ToyBigramScorer().fit(CLEAN_TEXTS)
        familiar, n1 = scorer.score("", "the cat sat")
        gibberish, n2 = scorer.score("", "zq#7!xw&%jk")
        assert familiar / n1 > gibberish / n2

    def test_deterministic(self):
        a = ToyBigramScorer().fit(CLEAN_TEXTS).score("", "the cat")
        b = ToyBigramScorer().fit(CLEAN_TEXTS).score("", "the cat")
        assert a == b

    def test_bad_smoothing_rejected(self):
        with pytest.raises(ValueError):
            ToyBigramScorer(k=0.0)


class TestLoadScorer:
    def test_toy_bigram(self):
        scorer = load_scorer("toy-bigram")
        assert isinstance(scorer, ToyBigramScorer)

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            load_scorer("gpt-5")

    def test_plugin(self, tmp_path):
        module = tmp_path / "fixed_scorer_plugin.py"
        module.write_text(
            "class FixedScorer:\n"
            "    def score(self, source, target):\n"
            "        return -2.0 * len(target), len(target)\n"
            "def build_scorer():\n"
            "    return FixedScorer()\n"
        )
        sys.path.insert(0, str(tmp_path))
        try:
            scorer = load_scorer("plugin:fixed_scorer_plugin")
            assert scorer.score("s", "abcd") == (-8.0, 4)
        finally:
            sys.path.remove(str(tmp_path))

    def test_plugin_without_factory(self, tmp_path):
        module = tmp_path / "empty_plugin.py"
        module.write_text("x = 1\n")
        sys.path.insert(0, str(tmp_path))
        try:
            with pytest.raises(ValueError):
                load_scorer("plugin:empty_plugin")
        finally:
            sys.path.remove(str(tmp_path))

    def test_plugin_missing_module(self):
        with pytest.raises(ImportError):
            load_scorer("plugin:definitely_not_a_module_xyz")
