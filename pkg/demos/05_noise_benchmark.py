"""Plant labeled noise in a synthetic corpus and measure each filter.

Real mined corpora never tell you which pairs are bad, so filter quality
is measured on generated data: corrupt a known fraction of records, run a
filter, and score the "reject noisy" decision.  Each corruption mode is
visible to at least one scorer — emptied targets make the text-text ratio
INVALID, duration jitter moves the speech-speech ratio far from the clean
mode, swaps scramble both.
"""

from pairsift import (
    NoiseSpec,
    RATIO_KINDS,
    ScorerKind,
    evaluate_filter,
    filter_by_z,
    generate_clean,
    inject_noise,
    score_corpus,
)

clean = generate_clean(5000, seed=42)
spec = NoiseSpec(
    swap_fraction=0.05,
    truncate_fraction=0.05,
    duration_jitter_fraction=0.05,
    empty_fraction=0.05,
    seed=43,
)
labeled = inject_noise(clean, spec)
n_noisy = sum(1 for lab in labeled.labels.values() if lab != "clean")
print(f"corpus: {len(labeled.corpus)} pairs, {n_noisy} corrupted "
      f"(prevalence {n_noisy / len(labeled.corpus):.2f})\n")

table = score_corpus(labeled.corpus, RATIO_KINDS)

header = f"{'filter':24s} {'precision':>9s} {'recall':>7s} {'f1':>6s}"
print(header)
print("-" * len(header))
for kind in RATIO_KINDS:
    for tau in (0.5, 1.0):
        subset = filter_by_z(table, kind, tau)
        ev = evaluate_filter(subset, labeled, label=f"z:{kind.value}:{tau}")
        fmt = lambda v: f"{v:.3f}" if v is not None else "  n/a"
        print(f"{ev.label:24s} {fmt(ev.precision):>9s} "
              f"{fmt(ev.recall):>7s} {fmt(ev.f1):>6s}")

# which corruption does the speech-speech filter actually catch?
subset = filter_by_z(table, ScorerKind.SPEECH_SPEECH, 0.5)
ev = evaluate_filter(subset, labeled)
print("\nspeech-speech z<=0.5, recall by noise kind:")
for noise_kind, recall in ev.recall_by_kind.items():
    if recall is not None:
        print(f"  {noise_kind:9s} {recall:.3f}")
