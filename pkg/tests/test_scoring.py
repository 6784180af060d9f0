"""Ratio scorers, tokenization, and score-table I/O."""

from __future__ import annotations

import dataclasses
import io

import numpy as np
import pytest

from pairsift import (
    BadScoreError,
    DuplicateScoreError,
    MalformedScoreRowError,
    NotComputableError,
    PairRecord,
    ScorerKind,
    TokenizerConfig,
    TokenMode,
    ingest_external_scores,
    ratio_score,
    read_score_table,
    score_corpus,
    token_count,
    write_score_table,
)
from pairsift.scoring import RATIO_KINDS, ScoreTable

from conftest import random_corpus, random_record

WS = TokenizerConfig(TokenMode.WHITESPACE)
CHAR = TokenizerConfig(TokenMode.CHAR)


class TestTokenCount:
    def test_empty_is_zero_in_both_modes(self):
        assert token_count("", WS) == 0
        assert token_count("", CHAR) == 0

    def test_whitespace_runs(self):
        assert token_count("a  b\tc", WS) == 3

    def test_char_mode_skips_whitespace(self):
        assert token_count("ab c", CHAR) == 3

    def test_whitespace_only(self):
        assert token_count(" \t \n ", WS) == 0
        assert token_count(" \t ", CHAR) == 0

    def test_nfc_applied_before_counting(self):
        decomposed = "éclair"  # e + combining acute
        assert token_count(decomposed, CHAR) == token_count("éclair", CHAR) == 6


class TestRatioScore:
    def test_text_text(self):
        rec = PairRecord("a", 1.0, "one two three", 1.0, "uno dos")
        assert ratio_score(rec, ScorerKind.TEXT_TEXT) == 1.5

    def test_speech_speech_symmetry(self):
        rec = PairRecord("a", 4.0, "x", 4.0, "y")
        assert ratio_score(rec, ScorerKind.SPEECH_SPEECH) == 1.0

    def test_speech_text_and_text_speech(self):
        rec = PairRecord("a", 6.0, "one two three", 3.0, "uno dos")
        assert ratio_score(rec, ScorerKind.SPEECH_TEXT) == 3.0
        assert ratio_score(rec, ScorerKind.TEXT_SPEECH) == 1.0

    def test_zero_denominator_is_invalid(self):
        rec = PairRecord("a", 1.0, "one", 0.0, "")
        assert ratio_score(rec, ScorerKind.TEXT_TEXT) is None
        assert ratio_score(rec, ScorerKind.SPEECH_TEXT) is None
        assert ratio_score(rec, ScorerKind.SPEECH_SPEECH) is None
        assert ratio_score(rec, ScorerKind.TEXT_SPEECH) is None

    def test_nll_not_computable(self):
        rec = PairRecord("a", 1.0, "x", 1.0, "y")
        with pytest.raises(NotComputableError):
            ratio_score(rec, ScorerKind.EXTERNAL_NLL)

    def _swapped(self, rec: PairRecord) -> PairRecord:
        return PairRecord(
            id=rec.id,
            src_duration=rec.tgt_duration,
            src_text=rec.tgt_text,
            tgt_duration=rec.src_duration,
            tgt_text=rec.src_text,
        )

    def test_reciprocal_duality(self):
        rng = np.random.default_rng(17)
        checked = 0
        for i in range(300):
            rec = random_record(rng, f"r{i}")
            rev = self._swapped(rec)
            for kind, dual in (
                (ScorerKind.TEXT_TEXT, ScorerKind.TEXT_TEXT),
                (ScorerKind.SPEECH_SPEECH, ScorerKind.SPEECH_SPEECH),
                (ScorerKind.TEXT_SPEECH, ScorerKind.SPEECH_TEXT),
            ):
                fwd = ratio_score(rec, kind)
                back = ratio_score(rev, dual)
                if fwd in (None, 0.0) or back is None:
                    continue
                assert back == pytest.approx(1.0 / fwd, rel=1e-12)
                checked += 1
        assert checked > 100

    def test_duration_scale_law(self):
        rng = np.random.default_rng(23)
        for i in range(100):
            rec = random_record(rng, f"r{i}")
            scaled = dataclasses.replace(
                rec,
                src_duration=rec.src_duration * 2.0,
                tgt_duration=rec.tgt_duration * 2.0,
            )
            ss = ratio_score(rec, ScorerKind.SPEECH_SPEECH)
            if ss is not None:
                # doubling both sides is exact in binary floating point
                assert ratio_score(scaled, ScorerKind.SPEECH_SPEECH) == ss
            st = ratio_score(rec, ScorerKind.SPEECH_TEXT)
            if st is not None:
                assert ratio_score(scaled, ScorerKind.SPEECH_TEXT) == 2.0 * st


class TestScoreCorpus:
    def test_empty_corpus(self):
        table = score_corpus(random_corpus(np.random.default_rng(0), 0))
        assert table.n_rows == 0

    def test_single_record_matches_ratio_score(self):
        rec = PairRecord("a", 2.0, "one two", 4.0, "uno")
        table = score_corpus(
            type(random_corpus(np.random.default_rng(0), 0))((rec,))
        )
        for kind in RATIO_KINDS:
            assert table.get("a", kind) == ratio_score(rec, kind)

    def test_cells_match_per_record_oracle(self):
        # brute force: each cell recomputed independently per record
        rng = np.random.default_rng(29)
        corpus = random_corpus(rng, 1000)
        table = score_corpus(corpus, RATIO_KINDS)
        for rec in corpus:
            for kind in RATIO_KINDS:
                assert table.get(rec.id, kind) == ratio_score(rec, kind)

    def test_order_independent(self):
        rng = np.random.default_rng(31)
        corpus = random_corpus(rng, 100)
        shuffled = type(corpus)(tuple(reversed(corpus.records)))
        a, b = io.BytesIO(), io.BytesIO()
        write_score_table(score_corpus(corpus), a)
        write_score_table(score_corpus(shuffled), b)
        assert a.getvalue() == b.getvalue()

    def test_thread_count_does_not_change_output(self):
        rng = np.random.default_rng(37)
        corpus = random_corpus(rng, 500)
        a, b = io.BytesIO(), io.BytesIO()
        write_score_table(score_corpus(corpus, threads=1), a)
        write_score_table(score_corpus(corpus, threads=4), b)
        assert a.getvalue() == b.getvalue()

    def test_rejects_nll_kind(self):
        with pytest.raises(ValueError):
            score_corpus(random_corpus(np.random.default_rng(0), 1), (ScorerKind.EXTERNAL_NLL,))

    def test_char_tokenizer_changes_ratios(self):
        rec = PairRecord("a", 1.0, "ab cd", 1.0, "x")
        table = score_corpus(
            type(random_corpus(np.random.default_rng(0), 0))((rec,)),
            (ScorerKind.TEXT_TEXT,),
            CHAR,
        )
        assert table.get("a", ScorerKind.TEXT_TEXT) == 4.0


def make_table(ids, nll=None):
    cols = {}
    if nll is not None:
        cols[ScorerKind.EXTERNAL_NLL] = np.asarray(nll, dtype=float)
    else:
        cols[ScorerKind.TEXT_TEXT] = np.ones(len(ids))
    return ScoreTable(tuple(ids), cols)


class TestScoreFile:
    def test_roundtrip_exact(self):
        rng = np.random.default_rng(41)
        corpus = random_corpus(rng, 200)
        table = score_corpus(corpus)
        buf = io.BytesIO()
        write_score_table(table, buf)
        loaded = read_score_table(buf.getvalue())
        assert loaded.ids == table.ids
        for kind in table.scorers():
            np.testing.assert_array_equal(loaded.column(kind), table.column(kind))

    def test_invalid_cell_is_empty_string(self):
        table = make_table(["a"], nll=[float("nan")])
        buf = io.BytesIO()
        write_score_table(table, buf)
        assert buf.getvalue().splitlines()[1] == b"a\t"

    def test_unknown_columns_ignored(self):
        data = b"id\tnll\tcomment\na\t1.5\thello\n"
        table = read_score_table(data)
        assert table.scorers() == (ScorerKind.EXTERNAL_NLL,)
        assert table.get("a", ScorerKind.EXTERNAL_NLL) == 1.5

    def test_no_canonical_columns_rejected(self):
        with pytest.raises(MalformedScoreRowError):
            read_score_table(b"id\tcomment\na\thello\n")


class TestIngest:
    def test_full_coverage(self):
        table = make_table(["a", "b"])
        result = ingest_external_scores(table, b"id\tnll\na\t1.0\nb\t2.5\n")
        assert result.unknown_ids == ()
        assert result.missing_ids == ()
        assert result.table.get("a", ScorerKind.EXTERNAL_NLL) == 1.0
        assert result.table.get("b", ScorerKind.EXTERNAL_NLL) == 2.5
        assert result.table.provenance(ScorerKind.EXTERNAL_NLL) == "external"

    def test_no_coverage_reports_all_missing(self):
        table = make_table(["a", "b"])
        result = ingest_external_scores(table, b"id\tnll\nzz\t1.0\n")
        assert result.unknown_ids == ("zz",)
        assert result.missing_ids == ("a", "b")
        assert result.table.get("a", ScorerKind.EXTERNAL_NLL) is None
        assert result.table.get("b", ScorerKind.EXTERNAL_NLL) is None

    def test_duplicate_id_in_file(self):
        with pytest.raises(DuplicateScoreError):
            ingest_external_scores(make_table(["a"]), b"id\tnll\na\t1.0\na\t2.0\n")

    def test_non_finite_score_rejected(self):
        for bad in (b"nan", b"inf", b"-inf"):
            with pytest.raises(BadScoreError):
                ingest_external_scores(
                    make_table(["a"]), b"id\tnll\na\t" + bad + b"\n"
                )

    def test_unparseable_score_rejected(self):
        with pytest.raises(BadScoreError):
            ingest_external_scores(make_table(["a"]), b"id\tnll\na\tx1\n")

    def test_malformed_row(self):
        with pytest.raises(MalformedScoreRowError) as exc_info:
            ingest_external_scores(make_table(["a"]), b"id\tnll\na\t1.0\textra\n")
        assert exc_info.value.line == 2

    def test_requires_nll_column(self):
        with pytest.raises(MalformedScoreRowError):
            ingest_external_scores(make_table(["a"]), b"id\ttext_text\na\t1.0\n")

    def test_empty_cell_means_invalid(self):
        table = make_table(["a", "b"])
        result = ingest_external_scores(table, b"id\tnll\na\t\nb\t2.0\n")
        assert result.table.get("a", ScorerKind.EXTERNAL_NLL) is None
        assert result.table.get("b", ScorerKind.EXTERNAL_NLL) == 2.0
        assert result.missing_ids == ()

    def test_extra_canonical_column_merged(self):
        table = make_table(["a"])
        result = ingest_external_scores(table, b"id\tnll\tspeech_speech\na\t1.0\t0.9\n")
        assert result.table.get("a", ScorerKind.SPEECH_SPEECH) == 0.9

    def test_nll_scores_kept_exactly(self):
        rng = np.random.default_rng(43)
        ids = [f"p{i:04d}" for i in range(500)]
        values = rng.uniform(0, 20, 500)
        lines = ["id\tnll"] + [f"{i}\t{float(v)!r}" for i, v in zip(ids, values)]
        result = ingest_external_scores(
            make_table(ids), ("\n".join(lines) + "\n").encode()
        )
        got = result.table.column(ScorerKind.EXTERNAL_NLL)
        np.testing.assert_array_equal(got, values)
