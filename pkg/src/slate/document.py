"""In-memory model of a recognized-ink writing region.

A writing region is an ordered sequence of recognized words plus layout
metadata (line breaks, bullets) and, when annotated, a gold partition into
task / non-task sentences. Everything here is immutable after construction
so regions can be shared freely across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

TASK = "task"
NONTASK = "nontask"
LABELS = (TASK, NONTASK)


@dataclass(frozen=True)
class Word:
    """A positioned word occurrence. Two words with equal text but different
    indices are distinct objects."""

    text: str
    index: int


@dataclass(frozen=True)
class LayoutMetadata:
    """Word indices at which a new document line or a bullet starts.

    Bullets and line breaks are independent signals; a bullet does not have
    to coincide with a line start.
    """

    line_break_before: frozenset[int] = frozenset()
    bullet_before: frozenset[int] = frozenset()

    @classmethod
    def of(cls, line_breaks=(), bullets=()) -> "LayoutMetadata":
        return cls(frozenset(line_breaks), frozenset(bullets))


@dataclass(frozen=True)
class SentenceSpan:
    """Contiguous word-index span ``[start, end)``.

    ``label`` is ``task``/``nontask``, or ``None`` for segmentation-only
    spans (e.g. decoded from a plain sentence-boundary labeling).
    ``context_flag`` marks sentences whose label holds only because of the
    neighboring sentences.
    """

    start: int
    end: int
    label: str | None = None
    context_flag: bool = False

    def indices(self) -> range:
        return range(self.start, self.end)

    def __len__(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class WritingRegion:
    """The unit of inference: one spatially grouped block of recognized text."""

    region_id: str
    doc_id: str
    words: tuple[Word, ...]
    layout: LayoutMetadata = field(default_factory=LayoutMetadata)
    gold_sentences: tuple[SentenceSpan, ...] = ()

    @classmethod
    def build(
        cls,
        region_id: str,
        doc_id: str,
        texts,
        line_breaks=(),
        bullets=(),
        sentences=(),
    ) -> "WritingRegion":
        """Construct a region from raw word texts, indexing words in order."""
        words = tuple(Word(t, i) for i, t in enumerate(texts))
        return cls(
            region_id=region_id,
            doc_id=doc_id,
            words=words,
            layout=LayoutMetadata.of(line_breaks, bullets),
            gold_sentences=tuple(sentences),
        )

    @property
    def word_count(self) -> int:
        return len(self.words)

    def word_texts(self) -> list[str]:
        return [w.text for w in self.words]


def validate_region(region: WritingRegion) -> list[str]:
    """Check every structural invariant of a region.

    Returns a list of human-readable violations; an empty list means the
    region is well formed. Violations are data, not failures: callers decide
    whether to raise.
    """
    violations: list[str] = []
    n = region.word_count

    if n == 0:
        violations.append("empty region (0 words)")

    for i, w in enumerate(region.words):
        if w.index != i:
            violations.append(f"word index {w.index} at position {i} (expected {i})")
        if not w.text:
            violations.append(f"empty word text at position {i}")

    for name, idxs in (
        ("line_break_before", region.layout.line_break_before),
        ("bullet_before", region.layout.bullet_before),
    ):
        for k in sorted(idxs):
            if not (0 <= k < n):
                violations.append(f"layout index out of range: {name} {k} (word count {n})")

    spans = region.gold_sentences
    if spans:
        for s in spans:
            if not (0 <= s.start < s.end <= n):
                violations.append(f"span [{s.start},{s.end}) out of range (word count {n})")
            if s.label not in LABELS:
                violations.append(f"span [{s.start},{s.end}) has invalid label {s.label!r}")
        # Partition check on word positions: each word covered exactly once.
        cover = [0] * n
        for s in spans:
            for i in range(max(s.start, 0), min(s.end, n)):
                cover[i] += 1
        for i, c in enumerate(cover):
            if c > 1:
                violations.append(f"overlap at word {i}")
            elif c == 0:
                violations.append(f"gap at word {i}")

    return violations
