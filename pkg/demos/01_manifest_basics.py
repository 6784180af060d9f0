"""Build a tiny corpus by hand, write it as a manifest, and read it back.

The manifest is the single source of truth for pair identity: a 7-column
TSV with durations in seconds.  Writing is deterministic (rows sorted by
id, durations at 3 decimals), so the same corpus always produces the same
bytes.
"""

from pairsift import Corpus, PairRecord, manifest_bytes, parse_manifest, validate

records = (
    PairRecord("utt-002", 4.2, "bonjour tout le monde", 3.1, "hello everyone",
               src_audio="fr/utt-002.wav", tgt_audio="en/utt-002.wav"),
    PairRecord("utt-001", 2.75, "merci beaucoup", 1.9, "thank you very much"),
    PairRecord("utt-003", 5.0, "au revoir", 0.0, ""),  # suspicious pair
)
corpus = Corpus(records, source_label="fr", target_label="en")

data = manifest_bytes(corpus)
print(data.decode(), end="")

# parse(write(C)) is the identity, and the writer sorted the rows for us
result = parse_manifest(data)
print("\nround trip ok:", result.corpus.records == tuple(sorted(records, key=lambda r: r.id)))
print("row order:", result.corpus.ids())

# validation counts the things worth staring at before training on a corpus
report = validate(result.corpus)
print("empty target transcripts:", report.empty_tgt_text)
print("zero target durations:", report.zero_tgt_duration)

# lenient parsing collects bad rows instead of giving up
noisy = data + b"broken\trow\n" + b"utt-009\t\t-4\toops\t\t1.0\tnegative duration\n"
result = parse_manifest(noisy)
print("\nrecovered records:", len(result.corpus))
for issue in result.issues:
    print("rejected ->", issue)
