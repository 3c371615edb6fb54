"""Why the joint model is faster: invocation counting and wall-clock scaling.

The two-model baseline classifies each sentence separately, so its latency
grows with the number of sentences; the joint tagger handles a whole region
in one pass per window.

Run: python3 demos/05_latency.py
"""

from slate import (
    InvocationCounters,
    LabelScheme,
    SentenceClassifierModel,
    SentenceSpan,
    TaggerModel,
    TrainConfig,
    WritingRegion,
    extract_joint,
    extract_two_model,
    load_corpus,
    train_joint,
    train_sentence_classifier,
)
from slate.bench import compare


def region_with_sentences(k: int, total_words: int = 64) -> WritingRegion:
    length = total_words // k
    texts, sents, breaks = [], [], []
    for s in range(k):
        start = s * length
        if start:
            breaks.append(start)
        texts.extend(f"w{s}x{i}" for i in range(length))
        sents.append(SentenceSpan(start, start + length, "task"))
    return WritingRegion.build(f"k{k}", f"k{k}", texts, line_breaks=breaks, sentences=sents)


# 1. Invocation counts are exact: the baseline pays one classifier call per
# predicted sentence, the joint model one tagger call per window no matter
# what. Hand-built models that split exactly at line breaks pin the
# prediction structure so the counts are the point, not model quality.
cfg0 = TrainConfig()
split_seg = TaggerModel(
    scheme=LabelScheme.SENTENCE_BI,
    feature_weights={"brk": {"B": 10.0}, "b": {"I": 0.1}},
    transition_weights={},
    config=cfg0,
)
split_joint = TaggerModel(
    scheme=LabelScheme.SLATE_NTI,
    feature_weights={"brk": {"T": 10.0, "N": 9.0}, "b": {"I": 0.1}},
    transition_weights={},
    config=cfg0,
)
trivial_cls = SentenceClassifierModel(feature_weights={}, bias=-1.0, config=cfg0)

print("sentences  joint tagger calls  baseline classifier calls")
for k in (1, 2, 4, 8, 16, 32):
    region = region_with_sentences(k)
    cj, ct = InvocationCounters(), InvocationCounters()
    extract_joint(split_joint, region, cj)
    extract_two_model(split_seg, trivial_cls, region, ct)
    print(f"{k:9d}  {cj.tagger_calls:18d}  {ct.classifier_calls:25d}")

train = load_corpus("data/corpus.jsonl", "train")
test = load_corpus("data/corpus.jsonl", "test")
cfg = TrainConfig(epochs=5, seed=1)
joint = train_joint(train, LabelScheme.SLATE_NTI, cfg)
segmenter = train_joint(train, LabelScheme.SENTENCE_BI, cfg)
classifier = train_sentence_classifier(
    [(r.word_texts()[s.start : s.end], s.label) for r in train for s in r.gold_sentences],
    cfg,
)

# 2. Wall clock over the bundled test split, honest end-to-end extraction.
print("\ntiming the test split (5 runs)...")
result = compare(
    lambda r, c=None: extract_joint(joint, r, c),
    lambda r, c=None: extract_two_model(segmenter, classifier, r, c),
    test,
    runs=5,
)
print(f"joint      mean {result['joint']['mean_ms']:.3f} ms/region")
print(f"two-model  mean {result['two_model']['mean_ms']:.3f} ms/region")
print(f"two-model / joint = {result['two_model_over_joint']:.2f}x")
