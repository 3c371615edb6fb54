import random

import pytest

from conftest import nontask, region_of, task

from slate.codec import LabelScheme, decode
from slate.document import NONTASK, TASK
from slate.taggers import (
    InvocationCounters,
    SentenceClassifierModel,
    TaggerModel,
    TrainConfig,
    classify_sentence,
    extract_joint,
    extract_two_model,
    load_model,
    predict_labels,
    save_model,
    strip_layout,
    train_joint,
    train_sentence_classifier,
    window_spans,
    word_shape,
)

NTI = LabelScheme.SLATE_NTI
BIO = LabelScheme.SLATE_BIO
BI = LabelScheme.SENTENCE_BI


def toy_corpus():
    r1 = region_of(
        ["buy", "milk", "great", "job"],
        sentences=[task(0, 2), nontask(2, 4)],
        line_breaks=[2],
        bullets=[0],
        region_id="toy-1",
    )
    r2 = region_of(
        ["email", "john", "about", "budget", "meeting", "notes"],
        sentences=[task(0, 4), nontask(4, 6)],
        line_breaks=[4],
        bullets=[0],
        region_id="toy-2",
    )
    return [r1, r2]


CFG = TrainConfig(epochs=5, seed=7)


def test_train_joint_fits_training_data():
    corpus = toy_corpus()
    for scheme in (NTI, BIO, BI):
        model = train_joint(corpus, scheme, CFG)
        for region in corpus:
            predicted = predict_labels(model, region)
            from slate.codec import encode_word_labels

            assert predicted == encode_word_labels(region, scheme), scheme


def test_train_joint_deterministic():
    corpus = toy_corpus()
    m1 = train_joint(corpus, NTI, CFG)
    m2 = train_joint(corpus, NTI, CFG)
    assert m1.feature_weights == m2.feature_weights
    assert m1.transition_weights == m2.transition_weights


def test_train_joint_empty_corpus_rejected():
    with pytest.raises(ValueError, match="empty corpus"):
        train_joint([], NTI, CFG)


def test_predict_single_word_region_gets_begin_label():
    model = train_joint(toy_corpus(), NTI, CFG)
    region = region_of(["zzz"])
    labels = predict_labels(model, region)
    assert labels.labels[0] in {"N", "T"}


def test_predict_output_never_needs_repair():
    rng = random.Random(5)
    model = train_joint(toy_corpus(), NTI, CFG)
    bio_model = train_joint(toy_corpus(), BIO, CFG)
    bi_model = train_joint(toy_corpus(), BI, CFG)
    vocab = ["buy", "milk", "great", "email", "john", "zzz", "qq", "notes"]
    for _ in range(50):
        n = rng.randint(1, 40)
        region = region_of(
            [rng.choice(vocab) for _ in range(n)],
            line_breaks=rng.sample(range(n), min(n, rng.randint(0, 4))),
            bullets=rng.sample(range(n), min(n, rng.randint(0, 3))),
        )
        for model_ in (model, bio_model, bi_model):
            result = decode(predict_labels(model_, region))
            assert result.repairs == ()


def test_window_spans_cut_at_line_breaks():
    n = 300
    region = region_of([f"w{i}" for i in range(n)], line_breaks=[100, 200, 250])
    spans = window_spans(region, max_len=128)
    assert spans == [(0, 100), (100, 200), (200, 300)]
    assert all(hi - lo <= 128 for lo, hi in spans)


def test_window_spans_hard_cut_without_breaks():
    region = region_of([f"w{i}" for i in range(300)])
    spans = window_spans(region, max_len=128)
    assert spans == [(0, 128), (128, 256), (256, 300)]


def test_window_spans_short_region_single_window():
    region = region_of(["a", "b"])
    assert window_spans(region) == [(0, 2)]


def test_predict_long_region_concatenates_windows():
    model = train_joint(toy_corpus(), NTI, CFG)
    n = 400
    region = region_of(
        ["buy" if i % 7 else "milk" for i in range(n)],
        line_breaks=[i for i in range(0, n, 50)],
    )
    counters = InvocationCounters()
    labels = predict_labels(model, region, counters)
    assert len(labels) == n
    assert counters.tagger_calls == len(window_spans(region))
    assert counters.tagger_calls > 1
    assert decode(labels).repairs == ()


def test_train_sentence_classifier_fits_toy_set():
    data = [(["buy", "milk"], TASK), (["great", "job"], NONTASK)]
    model = train_sentence_classifier(data, CFG)
    assert classify_sentence(model, ["buy", "milk"]) == TASK
    assert classify_sentence(model, ["great", "job"]) == NONTASK


def test_train_sentence_classifier_conflicting_labels_no_crash():
    data = [(["hmm"], TASK), (["hmm"], NONTASK)]
    train_sentence_classifier(data, CFG)


def test_train_sentence_classifier_empty_rejected():
    with pytest.raises(ValueError, match="empty corpus"):
        train_sentence_classifier([], CFG)


def test_extract_joint_reproduces_gold_spans():
    corpus = toy_corpus()
    model = train_joint(corpus, NTI, CFG)
    spans = extract_joint(model, corpus[0])
    assert spans == list(corpus[0].gold_sentences[0:1]) + [nontask(2, 4)]
    bio_model = train_joint(corpus, BIO, CFG)
    assert extract_joint(bio_model, corpus[0]) == [task(0, 2)]


def test_extract_joint_rejects_bi_model():
    model = train_joint(toy_corpus(), BI, CFG)
    with pytest.raises(ValueError):
        extract_joint(model, toy_corpus()[0])


def test_extract_joint_nti_partitions_region():
    model = train_joint(toy_corpus(), NTI, CFG)
    region = region_of(["buy", "zz", "qq", "notes", "milk"])
    spans = extract_joint(model, region)
    assert spans[0].start == 0 and spans[-1].end == region.word_count
    for a, b in zip(spans, spans[1:]):
        assert a.end == b.start


def test_extract_two_model_reproduces_gold():
    corpus = toy_corpus()
    seg = train_joint(corpus, BI, CFG)
    sentences = [
        (r.word_texts()[s.start : s.end], s.label)
        for r in corpus
        for s in r.gold_sentences
    ]
    cls = train_sentence_classifier(sentences, CFG)
    for region in corpus:
        assert extract_two_model(seg, cls, region) == [
            task(s.start, s.end) if s.label == TASK else nontask(s.start, s.end)
            for s in region.gold_sentences
        ]


def test_extract_two_model_invocation_counts():
    corpus = toy_corpus()
    seg = train_joint(corpus, BI, CFG)
    cls = train_sentence_classifier(
        [(["buy"], TASK), (["notes"], NONTASK)], CFG
    )
    counters = InvocationCounters()
    spans = extract_two_model(seg, cls, corpus[0], counters)
    assert counters.classifier_calls == len(spans)
    assert counters.tagger_calls == len(window_spans(corpus[0]))


def test_extract_two_model_requires_bi_segmenter():
    model = train_joint(toy_corpus(), NTI, CFG)
    cls = train_sentence_classifier([(["x"], TASK)], CFG)
    with pytest.raises(ValueError):
        extract_two_model(model, cls, toy_corpus()[0])


def test_joint_invocations_count_windows_only():
    corpus = toy_corpus()
    model = train_joint(corpus, NTI, CFG)
    counters = InvocationCounters()
    extract_joint(model, corpus[0], counters)
    assert counters.tagger_calls == 1
    assert counters.classifier_calls == 0


def test_model_save_load_roundtrip(tmp_path):
    model = train_joint(toy_corpus(), NTI, CFG)
    path = tmp_path / "model.json"
    save_model(model, path)
    loaded = load_model(path)
    assert isinstance(loaded, TaggerModel)
    assert loaded == model


def test_classifier_save_load_roundtrip(tmp_path):
    cls = train_sentence_classifier([(["buy"], TASK), (["no"], NONTASK)], CFG)
    path = tmp_path / "cls.json"
    save_model(cls, path)
    loaded = load_model(path)
    assert isinstance(loaded, SentenceClassifierModel)
    assert loaded == cls


def test_model_files_byte_identical_across_runs(tmp_path):
    p1, p2 = tmp_path / "m1.json", tmp_path / "m2.json"
    save_model(train_joint(toy_corpus(), NTI, CFG), p1)
    save_model(train_joint(toy_corpus(), NTI, CFG), p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_load_model_rejects_unknown_format(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"format": "nope", "config": {}}')
    with pytest.raises(ValueError, match="unknown model format"):
        load_model(path)


def test_strip_layout():
    region = region_of(["a", "b"], line_breaks=[1], bullets=[0])
    stripped = strip_layout(region)
    assert stripped.layout.line_break_before == frozenset()
    assert stripped.layout.bullet_before == frozenset()
    assert stripped.words == region.words


def test_word_shape():
    assert word_shape("Hello") == "Xx"
    assert word_shape("ABC") == "X"
    assert word_shape("a1b2") == "xdxd"
    assert word_shape("it's") == "x'x"


def test_train_config_validation():
    with pytest.raises(ValueError):
        TrainConfig(epochs=0)
    with pytest.raises(ValueError):
        TrainConfig(affix_max_len=9)


def test_predictions_deterministic_across_runs():
    corpus = toy_corpus()
    m1 = train_joint(corpus, NTI, CFG)
    m2 = train_joint(corpus, NTI, CFG)
    region = region_of(["buy", "qq", "zz", "notes"])
    assert predict_labels(m1, region) == predict_labels(m2, region)
