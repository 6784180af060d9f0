"""score_pairs mechanics: ordering, sentinels, batching, CLI."""

from __future__ import annotations

import math

import pytest

from nll_adapter import read_pairs, score_pairs
from nll_adapter.cli import run

HEADER = "id\tsrc_audio\tsrc_duration_s\tsrc_text\ttgt_audio\ttgt_duration_s\ttgt_text"


def write_manifest(path, rows):
    lines = [HEADER]
    for pair_id, src, tgt in rows:
        lines.append(f"{pair_id}\t\t1.000\t{src}\t\t1.000\t{tgt}")
    path.write_bytes(("\n".join(lines) + "\n").encode())


class PerfectScorer:
    """Assigns probability 1 to every token."""

    def score(self, source, target):
        return 0.0, max(len(target), 1)


class MemorylessScorer:
    """Fixed per-character log-likelihood; order and context never matter."""

    def __init__(self, logp=-1.5):
        self.logp = logp

    def score(self, source, target):
        return self.logp * len(target), len(target)


class ExplodingScorer:
    def __init__(self, bad_ids):
        self.bad = bad_ids

    def score(self, source, target):
        if target == "boom":
            raise RuntimeError("synthetic model failure")
        return -1.0 * len(target), len(target)


class TestReadPairs:
    def test_reads_in_manifest_order(self, tmp_path):
        path = tmp_path / "m.tsv"
        write_manifest(path, [("b", "s1", "t1"), ("a", "s2", "t2")])
        pairs = read_pairs(path)
        assert [p.id for p in pairs] == ["b", "a"]
        assert pairs[1].src_text == "s2"

    def test_rejects_bad_header(self, tmp_path):
        path = tmp_path / "m.tsv"
        path.write_bytes(b"wrong\theader\n")
        with pytest.raises(ValueError):
            read_pairs(path)

    def test_rejects_bad_rows(self, tmp_path):
        path = tmp_path / "m.tsv"
        path.write_bytes((HEADER + "\nonly\tthree\tcells\n").encode())
        with pytest.raises(ValueError):
            read_pairs(path)

    def test_rejects_duplicate_ids(self, tmp_path):
        path = tmp_path / "m.tsv"
        write_manifest(path, [("a", "x", "y"), ("a", "x", "y")])
        with pytest.raises(ValueError):
            read_pairs(path)


class TestScorePairs:
    def test_rows_in_manifest_order_with_header(self, tmp_path):
        manifest = tmp_path / "m.tsv"
        write_manifest(manifest, [("z9", "s", "tt"), ("a1", "s", "tt")])
        score_pairs(manifest, MemorylessScorer(), tmp_path / "out.tsv")
        lines = (tmp_path / "out.tsv").read_text().splitlines()
        assert lines[0] == "id\tnll"
        assert [line.split("\t")[0] for line in lines[1:]] == ["z9", "a1"]

    def test_mean_per_token_normalization(self, tmp_path):
        manifest = tmp_path / "m.tsv"
        write_manifest(manifest, [("a", "s", "abcd")])
        score_pairs(manifest, MemorylessScorer(-2.0), tmp_path / "out.tsv")
        line = (tmp_path / "out.tsv").read_text().splitlines()[1]
        assert float(line.split("\t")[1]) == 2.0

    def test_uniform_model_gives_log_vocab_size(self, tmp_path):
        # P = 1/V per token, any target -> nll exactly ln V
        vocab_size = 128

        class UniformScorer:
            def score(self, source, target):
                return len(target) * math.log(1.0 / vocab_size), len(target)

        manifest = tmp_path / "m.tsv"
        write_manifest(manifest, [("a", "s", "abc"), ("b", "s", "different words")])
        score_pairs(manifest, UniformScorer(), tmp_path / "out.tsv")
        rows = (tmp_path / "out.tsv").read_text().splitlines()[1:]
        for row in rows:
            assert float(row.split("\t")[1]) == pytest.approx(
                math.log(vocab_size), rel=1e-12
            )

    def test_duplicated_target_same_mean_nll(self, tmp_path):
        # memoryless model: mean per-token nll is length-invariant
        manifest = tmp_path / "m.tsv"
        write_manifest(
            manifest, [("once", "s", "hello world"), ("twice", "s", "hello world" * 2)]
        )
        score_pairs(manifest, MemorylessScorer(-1.25), tmp_path / "out.tsv")
        rows = dict(
            line.split("\t")
            for line in (tmp_path / "out.tsv").read_text().splitlines()[1:]
        )
        assert abs(float(rows["once"]) - float(rows["twice"])) <= 1e-9

    def test_unscorable_pairs_get_sentinel_and_sidecar(self, tmp_path):
        manifest = tmp_path / "m.tsv"
        write_manifest(
            manifest,
            [("ok", "s", "fine"), ("empty", "s", ""), ("fails", "s", "boom")],
        )
        outcome = score_pairs(manifest, ExplodingScorer({"fails"}), tmp_path / "out.tsv")
        assert (outcome.n_scored, outcome.n_failed) == (1, 2)
        score_lines = (tmp_path / "out.tsv").read_text().splitlines()
        assert score_lines[1:] == ["ok\t1.0", "empty\t", "fails\t"]
        error_lines = outcome.errors_path.read_text().splitlines()
        assert error_lines[0] == "id\terror"
        assert error_lines[1].startswith("empty\t")
        assert error_lines[2].startswith("fails\tmodel failure")

    def test_negative_nll_routed_to_sidecar(self, tmp_path):
        class OverconfidentScorer:
            def score(self, source, target):
                return 3.0, len(target)  # probability > 1: not a distribution

        manifest = tmp_path / "m.tsv"
        write_manifest(manifest, [("a", "s", "xy")])
        outcome = score_pairs(manifest, OverconfidentScorer(), tmp_path / "out.tsv")
        assert outcome.n_failed == 1

    def test_non_finite_routed_to_sidecar(self, tmp_path):
        class NanScorer:
            def score(self, source, target):
                return math.nan, len(target)

        manifest = tmp_path / "m.tsv"
        write_manifest(manifest, [("a", "s", "xy")])
        assert score_pairs(manifest, NanScorer(), tmp_path / "out.tsv").n_failed == 1

    def test_batch_size_does_not_change_output(self, tmp_path):
        manifest = tmp_path / "m.tsv"
        write_manifest(
            manifest, [(f"p{i}", "s", f"target text {i}") for i in range(37)]
        )
        outs = []
        for batch_size in (1, 7, 1000):
            out = tmp_path / f"out-{batch_size}.tsv"
            score_pairs(manifest, MemorylessScorer(), out, batch_size=batch_size)
            outs.append(out.read_bytes())
        assert outs[0] == outs[1] == outs[2]

    def test_bad_batch_size(self, tmp_path):
        manifest = tmp_path / "m.tsv"
        write_manifest(manifest, [("a", "s", "t")])
        with pytest.raises(ValueError):
            score_pairs(manifest, MemorylessScorer(), tmp_path / "out.tsv", 0)


class TestCli:
    def test_end_to_end_toy_bigram(self, tmp_path, capsys):
        manifest = tmp_path / "m.tsv"
        write_manifest(
            manifest,
            [(f"p{i}", "src words", "plain target words here") for i in range(10)],
        )
        out = tmp_path / "scores.tsv"
        code = run(["--manifest", str(manifest), "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "id\tnll"
        assert len(lines) == 11
        assert (tmp_path / "scores.tsv.errors").exists()

    def test_usage_error(self):
        assert run(["--manifest", "x.tsv"]) == 1  # --out missing

    def test_missing_manifest_is_data_error(self, tmp_path):
        code = run(["--manifest", str(tmp_path / "nope.tsv"),
                    "--out", str(tmp_path / "o.tsv")])
        assert code == 2

    def test_unknown_scorer_is_data_error(self, tmp_path):
        manifest = tmp_path / "m.tsv"
        write_manifest(manifest, [("a", "s", "t")])
        code = run(["--manifest", str(manifest), "--out", str(tmp_path / "o.tsv"),
                    "--scorer", "nonsense"])
        assert code == 2
