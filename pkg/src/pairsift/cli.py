"""Command-line pipeline: validate -> score -> stats -> filter -> combine
-> materialize -> report, plus synthetic-benchmark commands.

Stages compose through files rather than one monolithic run command, so an
expensive external scoring step (the ``nll`` column) can be slotted in
between ``score`` and ``filter``.  Exit codes: 0 success, 1 usage error,
2 data error.  Logs go to stderr; outputs are byte-deterministic for equal
inputs and flags.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from typing import IO, Sequence

from . import __version__, filtering, manifest, report, scoring, synthbench
from .errors import PairsiftError

_RATIO_NAMES = [k.value for k in scoring.RATIO_KINDS]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairsift",
        description="Score and filter noisy parallel speech/text corpora.",
    )
    parser.add_argument("--version", action="version", version=f"pairsift {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse a manifest and summarize its quality")
    p.add_argument("manifest")
    p.add_argument("--strict", action="store_true", help="abort on the first bad row")

    p = sub.add_parser("score", help="compute ratio scores into a score TSV")
    p.add_argument("manifest")
    p.add_argument(
        "--scorers",
        default=",".join(_RATIO_NAMES),
        help=f"comma-separated subset of: {', '.join(_RATIO_NAMES)}",
    )
    p.add_argument("--tokenizer", choices=["ws", "char"], default="ws")
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads; output is identical for any value")
    p.add_argument("--strict", action="store_true")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("stats", help="print mean/std of one score column")
    p.add_argument("scores")
    p.add_argument("--scorer", required=True)

    p = sub.add_parser("filter", help="evaluate a subset spec against a score TSV")
    p.add_argument("scores")
    p.add_argument("--spec", required=True,
                   help="e.g. z:text_text:0.5, pct:nll:0.2, union(...,...)")
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads; output is identical for any value")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("combine", help="union or intersect two subset files")
    p.add_argument("--op", choices=["union", "intersect"], required=True)
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("materialize", help="extract a subset's rows from a manifest")
    p.add_argument("manifest")
    p.add_argument("subset")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("report", help="subset sizes and overlap vs a reference")
    p.add_argument("manifest")
    p.add_argument("scores")
    p.add_argument("--subset", action="append", default=[], metavar="LABEL=FILE",
                   help="repeatable; label plus subset file")
    p.add_argument("--reference", metavar="LABEL",
                   help="label of the subset overlaps are measured against")
    p.add_argument("--format", choices=["tsv", "md"], default="tsv")
    p.add_argument("-o", "--output", help="write here instead of stdout")

    p = sub.add_parser("synth", help="synthetic corpora with planted noise")
    synth_sub = p.add_subparsers(dest="synth_command", required=True)

    g = synth_sub.add_parser("gen", help="generate a clean synthetic manifest")
    g.add_argument("-n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output", required=True)

    g = synth_sub.add_parser("corrupt", help="inject labeled noise into a manifest")
    g.add_argument("manifest")
    g.add_argument("--swap", type=float, default=0.0)
    g.add_argument("--truncate", type=float, default=0.0)
    g.add_argument("--jitter", type=float, default=0.0)
    g.add_argument("--empty", type=float, default=0.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output", required=True)
    g.add_argument("--labels", required=True, help="where to write the labels TSV")

    g = synth_sub.add_parser("eval", help="precision/recall of a subset vs labels")
    g.add_argument("subset")
    g.add_argument("labels")
    g.add_argument("--label", default="subset", help="name used in the output")

    return parser


def _fmt_opt(value: float | None) -> str:
    return "N/A" if value is None else repr(value)


def _parse_scorers(arg: str) -> list[scoring.ScorerKind]:
    kinds = []
    for name in arg.split(","):
        name = name.strip()
        if not name:
            continue
        kind = scoring.ScorerKind.from_name(name)
        if kind is scoring.ScorerKind.EXTERNAL_NLL:
            raise ValueError("nll is ingested, not computed; see ingest docs")
        kinds.append(kind)
    if not kinds:
        raise ValueError("no scorers requested")
    return kinds


def _cmd_validate(args, out: IO[str], err: IO[str]) -> int:
    result = manifest.parse_manifest(args.manifest, strict=args.strict)
    rep = manifest.validate(result.corpus)
    print(f"records: {rep.n_records}", file=out)
    print(f"empty_src_text: {rep.empty_src_text}", file=out)
    print(f"empty_tgt_text: {rep.empty_tgt_text}", file=out)
    print(f"zero_src_duration: {rep.zero_src_duration}", file=out)
    print(f"zero_tgt_duration: {rep.zero_tgt_duration}", file=out)
    print(f"rejected_rows: {len(result.issues)}", file=out)
    for issue in result.issues:
        print(f"  {issue}", file=out)
    return 0


def _cmd_score(args, out: IO[str], err: IO[str]) -> int:
    kinds = _parse_scorers(args.scorers)
    cfg = scoring.TokenizerConfig(scoring.TokenMode(args.tokenizer))
    result = manifest.parse_manifest(args.manifest, strict=args.strict)
    if result.issues:
        print(f"skipped {len(result.issues)} malformed rows", file=err)
    table = scoring.score_corpus(result.corpus, kinds, cfg, threads=args.threads)
    rows = scoring.write_score_table(table, args.output)
    print(f"scored {rows} pairs -> {args.output}", file=err)
    return 0


def _cmd_stats(args, out: IO[str], err: IO[str]) -> int:
    table = scoring.read_score_table(args.scores)
    kind = scoring.ScorerKind.from_name(args.scorer)
    stats = filtering.compute_stats(table, kind)
    print(f"scorer: {kind.value}", file=out)
    print(f"mean: {stats.mean!r}", file=out)
    print(f"std: {stats.std!r}", file=out)
    print(f"n_valid: {stats.n_valid}", file=out)
    print(f"n_invalid: {stats.n_invalid}", file=out)
    return 0


def _cmd_filter(args, out: IO[str], err: IO[str]) -> int:
    spec = filtering.parse_spec(args.spec)
    table = scoring.read_score_table(args.scores)
    subset = filtering.evaluate_spec(spec, table)
    filtering.write_subset(subset, args.output)
    print(f"kept {len(subset)} of {table.n_rows} pairs -> {args.output}", file=err)
    return 0


def _cmd_combine(args, out: IO[str], err: IO[str]) -> int:
    left = filtering.read_subset(args.left)
    right = filtering.read_subset(args.right)
    op = filtering.union if args.op == "union" else filtering.intersect
    combined = op(left, right)
    filtering.write_subset(combined, args.output)
    print(f"{args.op}: {len(combined)} ids -> {args.output}", file=err)
    return 0


def _cmd_materialize(args, out: IO[str], err: IO[str]) -> int:
    result = manifest.parse_manifest(args.manifest)
    subset = filtering.read_subset(args.subset)
    sliced = filtering.materialize(subset, result.corpus)
    rows = manifest.write_manifest(sliced, args.output)
    print(f"materialized {rows} pairs -> {args.output}", file=err)
    return 0


def _cmd_report(args, out: IO[str], err: IO[str]) -> int:
    result = manifest.parse_manifest(args.manifest)
    table = scoring.read_score_table(args.scores)
    labels: list[str] = []
    subsets: list[filtering.Subset] = []
    for item in args.subset:
        label, sep, path = item.partition("=")
        if not sep or not label or not path:
            raise ValueError(f"--subset wants LABEL=FILE, got {item!r}")
        labels.append(label)
        subsets.append(filtering.read_subset(path))
    reference = None
    if args.reference is not None:
        if args.reference not in labels:
            raise ValueError(f"--reference {args.reference!r} is not a subset label")
        reference = subsets[labels.index(args.reference)]
    rep = report.build_report(
        result.corpus,
        table,
        subsets,
        reference,
        labels=labels,
        reference_label=args.reference,
    )
    payload = report.render_report(rep, args.format)
    if args.output:
        manifest._write_bytes(payload, args.output)
        print(f"report -> {args.output}", file=err)
    else:
        out.write(payload.decode("utf-8"))
    return 0


def _cmd_synth(args, out: IO[str], err: IO[str]) -> int:
    if args.synth_command == "gen":
        corpus = synthbench.generate_clean(args.n, args.seed)
        manifest.write_manifest(corpus, args.output)
        print(f"generated {len(corpus)} pairs -> {args.output}", file=err)
        return 0
    if args.synth_command == "corrupt":
        result = manifest.parse_manifest(args.manifest)
        spec = synthbench.NoiseSpec(
            swap_fraction=args.swap,
            truncate_fraction=args.truncate,
            duration_jitter_fraction=args.jitter,
            empty_fraction=args.empty,
            seed=args.seed,
        )
        labeled = synthbench.inject_noise(result.corpus, spec)
        manifest.write_manifest(labeled.corpus, args.output)
        synthbench.write_labels(labeled, args.labels)
        noisy = sum(1 for lab in labeled.labels.values() if lab != synthbench.CLEAN)
        print(f"corrupted {noisy} of {len(labeled.corpus)} pairs", file=err)
        return 0
    # eval
    subset = filtering.read_subset(args.subset)
    labels = synthbench.read_labels(args.labels)
    ev = synthbench.evaluate_filter(subset, labels, label=args.label)
    print(f"label: {ev.label}", file=out)
    print(f"n: {ev.n}", file=out)
    print(f"rejected: {ev.tp + ev.fp}", file=out)
    print(f"prevalence: {ev.prevalence!r}", file=out)
    print(f"precision: {_fmt_opt(ev.precision)}", file=out)
    print(f"recall: {_fmt_opt(ev.recall)}", file=out)
    print(f"f1: {_fmt_opt(ev.f1)}", file=out)
    for kind, value in ev.recall_by_kind.items():
        if value is not None:
            print(f"recall[{kind}]: {value!r}", file=out)
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "score": _cmd_score,
    "stats": _cmd_stats,
    "filter": _cmd_filter,
    "combine": _cmd_combine,
    "materialize": _cmd_materialize,
    "report": _cmd_report,
    "synth": _cmd_synth,
}


def run(
    argv: Sequence[str],
    stdin: IO[str] | None = None,
    stdout: IO[str] | None = None,
    stderr: IO[str] | None = None,
) -> int:
    """Dispatch one CLI invocation; returns the process exit code."""
    out = stdout if stdout is not None else sys.stdout
    err = stderr if stderr is not None else sys.stderr
    parser = _build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(list(argv))
    except SystemExit as exc:
        # argparse handles --help/--version (code 0) and usage errors itself
        return 0 if exc.code == 0 else 1
    try:
        return _COMMANDS[args.command](args, out, err)
    except KeyError as exc:
        print(f"error: {exc.args[0] if exc.args else exc}", file=err)
        return 2
    except (PairsiftError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=err)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))
