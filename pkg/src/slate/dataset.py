"""Corpus and prediction file formats.

Both formats are JSON records, one per line, UTF-8. A corpus record:

    {"region_id": ..., "doc_id": ..., "split": "train"|"test",
     "words": [...], "line_breaks": [...], "bullets": [...],
     "sentences": [{"start":..., "end":..., "label":..., "context":...}]}

A prediction record carries ``region_id`` plus either word-level ``labels``
with a ``scheme`` tag, or decoded ``spans``. Label records are decoded to
spans on load.

Loading validates every region and refuses malformed files; the summary
counts reported by ``summarize`` use disjoint categories (a context-flagged
task is counted under context tasks, not under plain tasks), matching how
the source dataset's statistics add up to the sentence total.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .codec import LabelScheme, WordLabelSequence, decode
from .document import (
    NONTASK,
    TASK,
    SentenceSpan,
    WritingRegion,
    validate_region,
)

SPLITS = ("train", "test")


class DataError(ValueError):
    """Malformed or inconsistent data file."""


@dataclass(frozen=True)
class CorpusSummary:
    documents: int
    regions: int
    sentences: int
    task_sentences: int
    nontask_sentences: int
    context_task_sentences: int
    context_nontask_sentences: int

    def as_dict(self) -> dict:
        return {
            "documents": self.documents,
            "regions": self.regions,
            "sentences": self.sentences,
            "task_sentences": self.task_sentences,
            "nontask_sentences": self.nontask_sentences,
            "context_task_sentences": self.context_task_sentences,
            "context_nontask_sentences": self.context_nontask_sentences,
        }


def region_to_record(region: WritingRegion, split: str) -> dict:
    return {
        "region_id": region.region_id,
        "doc_id": region.doc_id,
        "split": split,
        "words": region.word_texts(),
        "line_breaks": sorted(region.layout.line_break_before),
        "bullets": sorted(region.layout.bullet_before),
        "sentences": [
            {
                "start": s.start,
                "end": s.end,
                "label": s.label,
                "context": s.context_flag,
            }
            for s in region.gold_sentences
        ],
    }


def region_from_record(record: dict) -> tuple[WritingRegion, str]:
    try:
        sentences = tuple(
            SentenceSpan(
                start=int(s["start"]),
                end=int(s["end"]),
                label=s["label"],
                context_flag=bool(s.get("context", False)),
            )
            for s in record.get("sentences", [])
        )
        region = WritingRegion.build(
            region_id=record["region_id"],
            doc_id=record["doc_id"],
            texts=[str(w) for w in record["words"]],
            line_breaks=[int(i) for i in record.get("line_breaks", [])],
            bullets=[int(i) for i in record.get("bullets", [])],
            sentences=sentences,
        )
        split = record.get("split", "train")
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed corpus record: {exc}") from exc
    if split not in SPLITS:
        raise DataError(f"unknown split {split!r} in region {region.region_id}")
    return region, split


def load_corpus(path, split: str | None = None) -> list[WritingRegion]:
    """Load and validate corpus regions, optionally filtered by split tag.

    Raises DataError with the offending line number on parse failures and
    with the full violation list when a region breaks an invariant.
    """
    regions: list[WritingRegion] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            try:
                region, region_split = region_from_record(record)
            except DataError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
            if region.region_id in seen:
                raise DataError(f"{path}:{lineno}: duplicate region_id {region.region_id}")
            seen.add(region.region_id)
            violations = validate_region(region)
            if violations:
                raise DataError(
                    f"{path}:{lineno}: region {region.region_id} invalid: "
                    + "; ".join(violations)
                )
            if split is None or region_split == split:
                regions.append(region)
    return regions


def save_corpus(regions_with_splits, path) -> None:
    """Write (region, split) pairs as one JSON record per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for region, split in regions_with_splits:
            fh.write(json.dumps(region_to_record(region, split), ensure_ascii=False))
            fh.write("\n")


def summarize(regions: list[WritingRegion]) -> CorpusSummary:
    """Corpus statistics. Plain and context-flagged sentences are disjoint
    categories, so the four class counts sum to the sentence total."""
    docs = {r.doc_id for r in regions}
    sentences = task = nontask = ctx_task = ctx_non = 0
    for r in regions:
        for s in r.gold_sentences:
            sentences += 1
            if s.label == TASK:
                if s.context_flag:
                    ctx_task += 1
                else:
                    task += 1
            elif s.label == NONTASK:
                if s.context_flag:
                    ctx_non += 1
                else:
                    nontask += 1
    return CorpusSummary(
        documents=len(docs),
        regions=len(regions),
        sentences=sentences,
        task_sentences=task,
        nontask_sentences=nontask,
        context_task_sentences=ctx_task,
        context_nontask_sentences=ctx_non,
    )


def spans_to_record(region_id: str, spans: list[SentenceSpan]) -> dict:
    return {
        "region_id": region_id,
        "spans": [
            {"start": s.start, "end": s.end, "label": s.label} for s in spans
        ],
    }


def labels_to_record(region_id: str, labels: WordLabelSequence) -> dict:
    return {
        "region_id": region_id,
        "scheme": labels.scheme.value,
        "labels": list(labels.labels),
    }


def save_predictions(predictions: dict[str, list[SentenceSpan]], path) -> None:
    """Write span-form prediction records, one region per line, sorted by
    region_id for stable output."""
    with open(path, "w", encoding="utf-8") as fh:
        for region_id in sorted(predictions):
            fh.write(json.dumps(spans_to_record(region_id, predictions[region_id])))
            fh.write("\n")


def save_label_predictions(labels: dict[str, WordLabelSequence], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for region_id in sorted(labels):
            fh.write(json.dumps(labels_to_record(region_id, labels[region_id])))
            fh.write("\n")


def load_predictions(path, corpus: list[WritingRegion]) -> dict[str, list[SentenceSpan]]:
    """Load prediction records keyed by region_id.

    Label-form records are decoded into spans; lengths are checked against
    the corpus. Span-form records are validated for range.
    """
    by_id = {r.region_id: r for r in corpus}
    out: dict[str, list[SentenceSpan]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            region_id = record.get("region_id")
            if region_id not in by_id:
                raise DataError(f"{path}:{lineno}: unknown region_id {region_id!r}")
            if region_id in out:
                raise DataError(f"{path}:{lineno}: duplicate region_id {region_id!r}")
            region = by_id[region_id]
            if "labels" in record:
                try:
                    scheme = LabelScheme.from_string(record["scheme"])
                except (KeyError, ValueError) as exc:
                    raise DataError(f"{path}:{lineno}: {exc}") from exc
                labels = record["labels"]
                if len(labels) != region.word_count:
                    raise DataError(
                        f"{path}:{lineno}: length mismatch: {len(labels)} labels for "
                        f"{region.word_count}-word region {region_id}"
                    )
                try:
                    seq = WordLabelSequence(scheme, tuple(labels))
                except ValueError as exc:
                    raise DataError(f"{path}:{lineno}: {exc}") from exc
                out[region_id] = list(decode(seq).spans)
            elif "spans" in record:
                spans = []
                for s in record["spans"]:
                    try:
                        span = SentenceSpan(int(s["start"]), int(s["end"]), s.get("label"))
                    except (KeyError, TypeError, ValueError) as exc:
                        raise DataError(f"{path}:{lineno}: malformed span: {exc}") from exc
                    if not (0 <= span.start < span.end <= region.word_count):
                        raise DataError(
                            f"{path}:{lineno}: span [{span.start},{span.end}) outside "
                            f"region {region_id} (word count {region.word_count})"
                        )
                    if span.label not in (TASK, NONTASK, None):
                        raise DataError(f"{path}:{lineno}: bad span label {span.label!r}")
                    spans.append(span)
                out[region_id] = spans
            else:
                raise DataError(f"{path}:{lineno}: record has neither labels nor spans")
    return out


def gold_predictions(corpus: list[WritingRegion]) -> dict[str, list[SentenceSpan]]:
    """The gold annotation viewed as a prediction set (for sanity checks)."""
    return {r.region_id: list(r.gold_sentences) for r in corpus}
