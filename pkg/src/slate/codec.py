"""Label schemes for joint sentence segmentation and task extraction.

Three schemes over word (and token) sequences:

* ``SENTENCE_BI``: B marks the first word of every sentence, I everything
  else. Segmentation only; spans carry no task label.
* ``SLATE_BIO``: B marks the first word of a task sentence, I its remaining
  words, O every non-task word. Extracts task spans only.
* ``SLATE_NTI``: T / N mark the first word of a task / non-task sentence,
  I every other word. Full segmentation and classification at once.

Token-level labels produced by a subword model are reduced to word labels
with one deterministic aggregation rule per scheme (``aggregate_bi``,
``aggregate_bio``, ``aggregate_nti``).

Layout metadata is rendered inline with the bit-exact marker spellings
``</>`` (line break) and ``<.>`` (bullet).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Sequence

from .document import NONTASK, TASK, SentenceSpan, WritingRegion

LINE_BREAK_TOKEN = "</>"
BULLET_TOKEN = "<.>"

WORD_PIECE = "word_piece"
LINE_BREAK_MARKER = "line_break_marker"
BULLET_MARKER = "bullet_marker"


class LabelScheme(enum.Enum):
    SENTENCE_BI = "bi"
    SLATE_BIO = "bio"
    SLATE_NTI = "nti"

    @property
    def alphabet(self) -> frozenset[str]:
        return _ALPHABETS[self]

    @property
    def begin_labels(self) -> frozenset[str]:
        """Labels legal on the first word of a region."""
        return _BEGIN[self]

    @property
    def continuation_label(self) -> str:
        """Label given to trailing marker tokens and to non-first pieces of a
        beginning-labeled word."""
        return "O" if self is LabelScheme.SLATE_BIO else "I"

    @classmethod
    def from_string(cls, name: str) -> "LabelScheme":
        key = name.strip().lower()
        for scheme in cls:
            if key in (scheme.value, scheme.name.lower()):
                return scheme
        raise ValueError(f"unknown label scheme: {name!r}")


_ALPHABETS = {
    LabelScheme.SENTENCE_BI: frozenset("BI"),
    LabelScheme.SLATE_BIO: frozenset("BIO"),
    LabelScheme.SLATE_NTI: frozenset("NTI"),
}

# First-word legality: BI forces a sentence start, BIO additionally allows
# starting outside any task, NTI starts with either sentence kind.
_BEGIN = {
    LabelScheme.SENTENCE_BI: frozenset("B"),
    LabelScheme.SLATE_BIO: frozenset("BO"),
    LabelScheme.SLATE_NTI: frozenset("NT"),
}


@dataclass(frozen=True)
class RenderedToken:
    """One model-input token: a subword piece or an inline layout marker."""

    text: str
    kind: str
    word_index: int | None = None


@dataclass(frozen=True)
class WordLabelSequence:
    scheme: LabelScheme
    labels: tuple[str, ...]

    def __post_init__(self):
        bad = [l for l in self.labels if l not in self.scheme.alphabet]
        if bad:
            raise ValueError(f"labels {bad} outside {self.scheme.name} alphabet")

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class TokenLabelSequence:
    scheme: LabelScheme
    labels: tuple[str, ...]

    def __post_init__(self):
        bad = [l for l in self.labels if l not in self.scheme.alphabet]
        if bad:
            raise ValueError(f"labels {bad} outside {self.scheme.name} alphabet")

    def __len__(self) -> int:
        return len(self.labels)


Splitter = Callable[[str], Sequence[str]]


def identity_splitter(text: str) -> list[str]:
    """One word, one piece. The default splitter."""
    return [text]


def chunk_splitter(text: str, max_len: int = 6) -> list[str]:
    """Deterministic fixed-length character chunker, for stress testing the
    aggregation path."""
    return [text[i : i + max_len] for i in range(0, len(text), max_len)]


def render_with_layout(
    region: WritingRegion, splitter: Splitter = identity_splitter
) -> list[RenderedToken]:
    """Render a region into model-input tokens with inline layout markers.

    Before each word: its bullet marker (if any), then its line-break marker
    (if any), then the word's subword pieces. Concatenating the piece texts
    of one word reconstructs the word's text exactly.
    """
    tokens: list[RenderedToken] = []
    for word in region.words:
        i = word.index
        if i in region.layout.bullet_before:
            tokens.append(RenderedToken(BULLET_TOKEN, BULLET_MARKER))
        if i in region.layout.line_break_before:
            tokens.append(RenderedToken(LINE_BREAK_TOKEN, LINE_BREAK_MARKER))
        pieces = list(splitter(word.text))
        if not pieces or any(not p for p in pieces):
            raise ValueError(f"empty tokenization for word {i} ({word.text!r})")
        if "".join(pieces) != word.text:
            raise ValueError(
                f"splitter output {pieces!r} does not reconstruct word {i} ({word.text!r})"
            )
        tokens.extend(RenderedToken(p, WORD_PIECE, i) for p in pieces)
    return tokens


def encode_word_labels(region: WritingRegion, scheme: LabelScheme) -> WordLabelSequence:
    """Encode a region's gold sentences as one label per word."""
    if not region.gold_sentences:
        raise ValueError(f"region {region.region_id} has no gold annotations")
    labels = ["?"] * region.word_count
    for span in region.gold_sentences:
        if scheme is LabelScheme.SENTENCE_BI:
            first, rest = "B", "I"
        elif scheme is LabelScheme.SLATE_BIO:
            first, rest = ("B", "I") if span.label == TASK else ("O", "O")
        else:
            first, rest = ("T", "I") if span.label == TASK else ("N", "I")
        labels[span.start] = first
        for i in range(span.start + 1, span.end):
            labels[i] = rest
    return WordLabelSequence(scheme, tuple(labels))


def project_to_tokens(
    word_labels: WordLabelSequence, tokens: list[RenderedToken]
) -> TokenLabelSequence:
    """Spread word labels over rendered tokens for token-level training.

    Only a word's first piece carries a beginning label (B/T/N); its later
    pieces get the continuation label. Marker tokens inherit the label of the
    next word's first piece, or the continuation label when nothing follows.
    """
    scheme = word_labels.scheme
    word_indices = {t.word_index for t in tokens if t.kind == WORD_PIECE}
    if word_indices != set(range(len(word_labels))):
        raise ValueError(
            f"tokens cover words {sorted(word_indices)} but {len(word_labels)} labels given"
        )

    def first_piece_label(word_index: int) -> str:
        return word_labels.labels[word_index]

    def rest_piece_label(word_index: int) -> str:
        label = word_labels.labels[word_index]
        if label in _BEGIN_ANYWHERE:
            return scheme.continuation_label
        return label

    out: list[str] = []
    seen_first: set[int] = set()
    for pos, tok in enumerate(tokens):
        if tok.kind == WORD_PIECE:
            if tok.word_index in seen_first:
                out.append(rest_piece_label(tok.word_index))
            else:
                seen_first.add(tok.word_index)
                out.append(first_piece_label(tok.word_index))
        else:
            nxt = _next_word_index(tokens, pos)
            if nxt is None:
                out.append(scheme.continuation_label)
            else:
                out.append(first_piece_label(nxt))
    return TokenLabelSequence(scheme, tuple(out))


_BEGIN_ANYWHERE = frozenset("BTN")


def _next_word_index(tokens: list[RenderedToken], pos: int) -> int | None:
    for t in tokens[pos + 1 :]:
        if t.kind == WORD_PIECE:
            return t.word_index
    return None


def _check_alphabet(token_labels: Sequence[str], allowed: frozenset[str]) -> None:
    if not token_labels:
        raise ValueError("empty token label list")
    bad = [l for l in token_labels if l not in allowed]
    if bad:
        raise ValueError(f"labels {bad} outside alphabet {sorted(allowed)}")


def aggregate_bi(token_labels: Sequence[str]) -> str:
    """Sentence-BI reduction: B wins if present anywhere in the word."""
    _check_alphabet(token_labels, _ALPHABETS[LabelScheme.SENTENCE_BI])
    return "B" if "B" in token_labels else "I"


def aggregate_bio(token_labels: Sequence[str]) -> str:
    """BIO reduction: B wins if present, otherwise the most frequent label.

    A mode tie between I and O resolves to I: preferring continuation avoids
    splitting a task in the middle of a word.
    """
    _check_alphabet(token_labels, _ALPHABETS[LabelScheme.SLATE_BIO])
    if "B" in token_labels:
        return "B"
    n_i = sum(1 for l in token_labels if l == "I")
    n_o = len(token_labels) - n_i
    return "I" if n_i >= n_o else "O"


def aggregate_nti(token_labels: Sequence[str]) -> str:
    """NTI reduction: when any beginning label is present, T wins only with a
    strict majority over N; otherwise I."""
    _check_alphabet(token_labels, _ALPHABETS[LabelScheme.SLATE_NTI])
    n_t = sum(1 for l in token_labels if l == "T")
    n_n = sum(1 for l in token_labels if l == "N")
    if n_t or n_n:
        return "T" if n_t > n_n else "N"
    return "I"


_AGGREGATORS = {
    LabelScheme.SENTENCE_BI: aggregate_bi,
    LabelScheme.SLATE_BIO: aggregate_bio,
    LabelScheme.SLATE_NTI: aggregate_nti,
}


def aggregate_to_words(
    token_labels: TokenLabelSequence, tokens: list[RenderedToken]
) -> WordLabelSequence:
    """Reduce token labels to word labels using the scheme's rule. Marker
    tokens take no part in any word's reduction."""
    if len(token_labels) != len(tokens):
        raise ValueError(
            f"{len(token_labels)} labels for {len(tokens)} tokens"
        )
    per_word: dict[int, list[str]] = {}
    for tok, label in zip(tokens, token_labels.labels):
        if tok.kind == WORD_PIECE:
            per_word.setdefault(tok.word_index, []).append(label)
    if per_word and sorted(per_word) != list(range(len(per_word))):
        raise ValueError("token word indices are not contiguous from 0")
    rule = _AGGREGATORS[token_labels.scheme]
    labels = tuple(rule(per_word[i]) for i in range(len(per_word)))
    return WordLabelSequence(token_labels.scheme, labels)


@dataclass(frozen=True)
class DecodeResult:
    """Spans decoded from a word label sequence, plus any repairs applied to
    make an ungrammatical sequence decodable."""

    spans: tuple[SentenceSpan, ...]
    repairs: tuple[str, ...] = ()


def decode(word_labels: WordLabelSequence) -> DecodeResult:
    """Decode word labels into sentence spans.

    Taggers can emit ungrammatical sequences, so decoding is total: a
    region-initial I becomes the scheme's default beginning (B for BI, N for
    NTI), and in BIO an I with no live task run to its left is treated as O.
    Every repair is reported.
    """
    labels = list(word_labels.labels)
    scheme = word_labels.scheme
    repairs: list[str] = []
    if not labels:
        return DecodeResult(())

    if scheme in (LabelScheme.SENTENCE_BI, LabelScheme.SLATE_NTI):
        if labels[0] == "I":
            fixed = "B" if scheme is LabelScheme.SENTENCE_BI else "N"
            repairs.append(f"initial I repaired to {fixed}")
            labels[0] = fixed
        spans: list[SentenceSpan] = []
        start = 0
        for i in range(1, len(labels) + 1):
            if i == len(labels) or labels[i] != "I":
                if scheme is LabelScheme.SENTENCE_BI:
                    label = None
                else:
                    label = TASK if labels[start] == "T" else NONTASK
                spans.append(SentenceSpan(start, i, label))
                start = i
        return DecodeResult(tuple(spans), tuple(repairs))

    # BIO: maximal B I* runs are tasks; orphan I (no preceding B/I) acts as O.
    spans = []
    start: int | None = None
    for i, label in enumerate(labels):
        if label == "B":
            if start is not None:
                spans.append(SentenceSpan(start, i, TASK))
            start = i
        elif label == "I":
            if start is None:
                repairs.append(f"orphan I at word {i} treated as O")
        else:
            if start is not None:
                spans.append(SentenceSpan(start, i, TASK))
                start = None
    if start is not None:
        spans.append(SentenceSpan(start, len(labels), TASK))
    return DecodeResult(tuple(spans), tuple(repairs))


def nti_to_bio(word_labels: WordLabelSequence) -> WordLabelSequence:
    """Map an NTI sequence onto BIO: task runs become B I*, everything else O.

    Task spans decoded from the output equal the task spans decoded from the
    input. An invalid leading I is repaired to N first, mirroring decode.
    """
    if word_labels.scheme is not LabelScheme.SLATE_NTI:
        raise ValueError("nti_to_bio expects an NTI sequence")
    labels = list(word_labels.labels)
    if labels and labels[0] == "I":
        labels[0] = "N"
    out: list[str] = []
    in_task = False
    for label in labels:
        if label == "T":
            out.append("B")
            in_task = True
        elif label == "N":
            out.append("O")
            in_task = False
        else:
            out.append("I" if in_task else "O")
    return WordLabelSequence(LabelScheme.SLATE_BIO, tuple(out))
