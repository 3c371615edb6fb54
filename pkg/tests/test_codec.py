import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import nontask, region_of, task

from slate.codec import (
    BULLET_MARKER,
    BULLET_TOKEN,
    LINE_BREAK_MARKER,
    LINE_BREAK_TOKEN,
    WORD_PIECE,
    LabelScheme,
    WordLabelSequence,
    aggregate_bi,
    aggregate_bio,
    aggregate_nti,
    aggregate_to_words,
    chunk_splitter,
    decode,
    encode_word_labels,
    identity_splitter,
    nti_to_bio,
    project_to_tokens,
    render_with_layout,
)
from slate.document import NONTASK, TASK

BI = LabelScheme.SENTENCE_BI
BIO = LabelScheme.SLATE_BIO
NTI = LabelScheme.SLATE_NTI


# --- rendering -----------------------------------------------------------


def test_render_single_bullet():
    region = region_of(["buy", "milk"], bullets=[0])
    tokens = render_with_layout(region)
    assert [t.text for t in tokens] == [BULLET_TOKEN, "buy", "milk"]
    assert tokens[0].kind == BULLET_MARKER
    assert tokens[0].word_index is None


def test_render_single_break():
    region = region_of(["a", "b"], line_breaks=[1])
    tokens = render_with_layout(region)
    assert [t.text for t in tokens] == ["a", LINE_BREAK_TOKEN, "b"]
    assert tokens[1].kind == LINE_BREAK_MARKER


def test_render_multi_piece_word():
    region = region_of(["hello"])
    tokens = render_with_layout(region, lambda w: [w[:3], w[3:]])
    assert [(t.text, t.word_index) for t in tokens] == [("hel", 0), ("lo", 0)]
    assert all(t.kind == WORD_PIECE for t in tokens)


def test_render_bullet_before_break_on_same_word():
    region = region_of(["a", "b"], line_breaks=[1], bullets=[1])
    tokens = render_with_layout(region)
    assert [t.text for t in tokens] == ["a", BULLET_TOKEN, LINE_BREAK_TOKEN, "b"]


def test_render_marker_spellings_bit_exact():
    assert LINE_BREAK_TOKEN == "</>"
    assert BULLET_TOKEN == "<.>"


def test_render_empty_tokenization_rejected():
    region = region_of(["a"])
    with pytest.raises(ValueError, match="empty tokenization"):
        render_with_layout(region, lambda w: [])


def test_render_nonreconstructing_splitter_rejected():
    region = region_of(["abc"])
    with pytest.raises(ValueError, match="reconstruct"):
        render_with_layout(region, lambda w: ["ab"])


def test_chunk_splitter_reconstructs():
    assert chunk_splitter("abcdefgh", 3) == ["abc", "def", "gh"]
    assert "".join(chunk_splitter("internationalization")) == "internationalization"


# --- encoding ------------------------------------------------------------

FOUR_WORDS = ["buy", "milk", "great", "job"]
GOLD = [task(0, 2), nontask(2, 4)]


def test_encode_nti():
    region = region_of(FOUR_WORDS, sentences=GOLD)
    assert encode_word_labels(region, NTI).labels == ("T", "I", "N", "I")


def test_encode_bio():
    region = region_of(FOUR_WORDS, sentences=GOLD)
    assert encode_word_labels(region, BIO).labels == ("B", "I", "O", "O")


def test_encode_bi():
    region = region_of(FOUR_WORDS, sentences=GOLD)
    assert encode_word_labels(region, BI).labels == ("B", "I", "B", "I")


def test_encode_requires_gold():
    region = region_of(FOUR_WORDS)
    with pytest.raises(ValueError, match="no gold annotations"):
        encode_word_labels(region, NTI)


# --- projection ----------------------------------------------------------


def test_project_beginning_on_first_piece_only():
    region = region_of(["hello"])
    tokens = render_with_layout(region, lambda w: [w[:3], w[3:]])
    out = project_to_tokens(WordLabelSequence(BI, ("B",)), tokens)
    assert out.labels == ("B", "I")


def test_project_marker_inherits_next_first_piece_label():
    region = region_of(["buy", "milk"], bullets=[0], sentences=[task(0, 2)])
    tokens = render_with_layout(region)
    out = project_to_tokens(WordLabelSequence(NTI, ("T", "I")), tokens)
    assert out.labels == ("T", "T", "I")


def test_project_outside_propagates_to_marker():
    region = region_of(["word"], line_breaks=[0])
    tokens = render_with_layout(region)
    out = project_to_tokens(WordLabelSequence(BIO, ("O",)), tokens)
    assert out.labels == ("O", "O")


def test_project_token_word_mismatch_rejected():
    region = region_of(["a", "b"])
    tokens = render_with_layout(region)
    with pytest.raises(ValueError, match="labels"):
        project_to_tokens(WordLabelSequence(BI, ("B",)), tokens)


# --- aggregation ---------------------------------------------------------


def test_aggregate_bi_examples():
    assert aggregate_bi(["I", "B", "I"]) == "B"
    assert aggregate_bi(["I", "I"]) == "I"
    assert aggregate_bi(["B"]) == "B"


def test_aggregate_bio_examples():
    assert aggregate_bio(["I", "B", "O"]) == "B"
    assert aggregate_bio(["I", "O", "O"]) == "O"
    assert aggregate_bio(["I", "O"]) == "I"  # tie prefers continuation


def test_aggregate_nti_examples():
    assert aggregate_nti(["T", "T", "N"]) == "T"
    assert aggregate_nti(["T", "N"]) == "N"  # equal counts fall to N
    assert aggregate_nti(["I", "I", "I"]) == "I"


def test_aggregate_rejects_foreign_labels():
    with pytest.raises(ValueError):
        aggregate_bi(["B", "O"])
    with pytest.raises(ValueError):
        aggregate_bio(["T"])
    with pytest.raises(ValueError):
        aggregate_nti(["B"])
    with pytest.raises(ValueError):
        aggregate_bi([])


def _oracle_bi(labels):
    return "B" if any(l == "B" for l in labels) else "I"


def _oracle_bio(labels):
    if any(l == "B" for l in labels):
        return "B"
    # Mode with the documented tie rule: prefer I over O on equal counts.
    best = max(("I", "O"), key=lambda c: (labels.count(c), c == "I"))
    return best


def _oracle_nti(labels):
    if any(l in "NT" for l in labels):
        return "T" if labels.count("T") > labels.count("N") else "N"
    return "I"


@pytest.mark.parametrize(
    "alphabet,rule,oracle",
    [
        ("BI", aggregate_bi, _oracle_bi),
        ("BIO", aggregate_bio, _oracle_bio),
        ("NTI", aggregate_nti, _oracle_nti),
    ],
)
def test_aggregation_matches_exhaustive_oracle(alphabet, rule, oracle):
    for length in range(1, 5):
        for labels in itertools.product(alphabet, repeat=length):
            assert rule(list(labels)) == oracle(list(labels)), labels


# --- decoding ------------------------------------------------------------


def test_decode_nti_roundtrip_example():
    result = decode(WordLabelSequence(NTI, ("T", "I", "N", "I")))
    assert list(result.spans) == [task(0, 2), nontask(2, 4)]
    assert result.repairs == ()


def test_decode_bio_single_run():
    result = decode(WordLabelSequence(BIO, ("O", "B", "I", "O")))
    assert list(result.spans) == [task(1, 3)]


def test_decode_nti_initial_i_repaired():
    result = decode(WordLabelSequence(NTI, ("I", "I", "N", "I")))
    assert list(result.spans) == [nontask(0, 2), nontask(2, 4)]
    assert len(result.repairs) == 1


def test_decode_bi_initial_i_repaired():
    result = decode(WordLabelSequence(BI, ("I", "I", "B")))
    assert [(s.start, s.end, s.label) for s in result.spans] == [(0, 2, None), (2, 3, None)]
    assert result.repairs


def test_decode_bio_orphan_i_treated_as_o():
    result = decode(WordLabelSequence(BIO, ("O", "I", "B", "I")))
    assert list(result.spans) == [task(2, 4)]
    assert any("orphan" in r for r in result.repairs)


def test_decode_bio_trailing_run_closed():
    result = decode(WordLabelSequence(BIO, ("B", "I")))
    assert list(result.spans) == [task(0, 2)]


def test_decode_all_o_yields_no_spans():
    assert decode(WordLabelSequence(BIO, ("O", "O"))).spans == ()


# --- nti_to_bio ----------------------------------------------------------


def test_nti_to_bio_examples():
    assert nti_to_bio(WordLabelSequence(NTI, ("T", "I", "N", "I"))).labels == ("B", "I", "O", "O")
    assert nti_to_bio(WordLabelSequence(NTI, ("N", "I"))).labels == ("O", "O")
    assert nti_to_bio(WordLabelSequence(NTI, ("T", "N", "T"))).labels == ("B", "O", "B")


def test_nti_to_bio_rejects_other_schemes():
    with pytest.raises(ValueError):
        nti_to_bio(WordLabelSequence(BIO, ("B",)))


# --- round-trip properties ------------------------------------------------


@st.composite
def annotated_regions(draw):
    n = draw(st.integers(min_value=1, max_value=14))
    texts = [
        draw(st.text(alphabet="abcxyz", min_size=1, max_size=8)) for _ in range(n)
    ]
    # Random partition: choose sentence start positions.
    starts = sorted(
        {0}
        | set(draw(st.sets(st.integers(min_value=1, max_value=max(1, n - 1)), max_size=5)))
    )
    starts = [s for s in starts if s < n]
    bounds = starts + [n]
    sentences = []
    for lo, hi in zip(bounds, bounds[1:]):
        label = draw(st.sampled_from([TASK, NONTASK]))
        sentences.append(task(lo, hi) if label == TASK else nontask(lo, hi))
    breaks = draw(st.sets(st.integers(min_value=0, max_value=n - 1), max_size=4))
    bullets = draw(st.sets(st.integers(min_value=0, max_value=n - 1), max_size=4))
    return region_of(texts, sentences=sentences, line_breaks=breaks, bullets=bullets)


@settings(max_examples=120)
@given(annotated_regions())
def test_roundtrip_nti_reproduces_gold(region):
    decoded = decode(encode_word_labels(region, NTI))
    assert decoded.repairs == ()
    assert list(decoded.spans) == [
        task(s.start, s.end) if s.label == TASK else nontask(s.start, s.end)
        for s in region.gold_sentences
    ]


@settings(max_examples=120)
@given(annotated_regions())
def test_roundtrip_bio_reproduces_task_spans(region):
    decoded = decode(encode_word_labels(region, BIO))
    assert decoded.repairs == ()
    assert list(decoded.spans) == [
        task(s.start, s.end) for s in region.gold_sentences if s.label == TASK
    ]


@settings(max_examples=120)
@given(annotated_regions())
def test_roundtrip_bi_reproduces_boundaries(region):
    decoded = decode(encode_word_labels(region, BI))
    assert decoded.repairs == ()
    assert [(s.start, s.end) for s in decoded.spans] == [
        (s.start, s.end) for s in region.gold_sentences
    ]


def _random_splitter(rng):
    def split(word):
        pieces = []
        rest = word
        while rest:
            take = rng.randint(1, min(5, len(rest)))
            pieces.append(rest[:take])
            rest = rest[take:]
        return pieces

    return split


@settings(max_examples=120)
@given(annotated_regions(), st.integers(min_value=0, max_value=2**31))
def test_token_roundtrip_all_schemes_any_split(region, seed):
    rng = random.Random(seed)
    splitter = _random_splitter(rng)
    tokens = render_with_layout(region, splitter)
    for scheme in (BI, BIO, NTI):
        word_labels = encode_word_labels(region, scheme)
        token_labels = project_to_tokens(word_labels, tokens)
        assert aggregate_to_words(token_labels, tokens) == word_labels


@settings(max_examples=120)
@given(st.lists(st.sampled_from("NTI"), min_size=1, max_size=20))
def test_nti_to_bio_preserves_task_spans(labels):
    seq = WordLabelSequence(NTI, tuple(labels))
    via_bio = decode(nti_to_bio(seq)).spans
    direct = [s for s in decode(seq).spans if s.label == TASK]
    assert [(s.start, s.end) for s in via_bio] == [(s.start, s.end) for s in direct]


def test_identity_splitter():
    assert identity_splitter("word") == ["word"]
