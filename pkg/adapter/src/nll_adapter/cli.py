"""Command-line entry point: manifest in, score TSV + error sidecar out."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .adapter import score_pairs
from .scorers import load_scorer


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairsift-nll",
        description="Compute per-pair mean-per-token NLL scores for a manifest.",
    )
    parser.add_argument("--manifest", required=True, help="input manifest TSV")
    parser.add_argument("--out", required=True,
                        help="output score TSV; the error sidecar is <out>.errors")
    parser.add_argument("--batch-size", type=int, default=1000)
    parser.add_argument(
        "--scorer", default="toy-bigram",
        help="toy-bigram (fitted on the manifest's target texts) or "
             "plugin:<module-path> exposing build_scorer()",
    )
    return parser


def run(argv: Sequence[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        scorer = load_scorer(args.scorer)
        outcome = score_pairs(args.manifest, scorer, args.out, args.batch_size)
    except (ValueError, ImportError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(
        f"scored {outcome.n_scored} pairs, {outcome.n_failed} routed to "
        f"{outcome.errors_path}",
        file=sys.stderr,
    )
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))
