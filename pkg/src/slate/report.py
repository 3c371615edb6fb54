"""Corpus-level evaluation report: classification metrics plus segmentation
quality (boundary similarity and its true-positive variant).

Boundary similarity compares full segmentations, so it is only reported when
every region's predicted spans partition the region (true for sentence-level
and joint task/non-task predictions; task-only predictions leave gaps and
get ``None``). Per-region scores are averaged unweighted; regions with no
true positives are excluded from the ``b_tp`` average.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .boundary import (
    DEFAULT_TRANSPOSITION_WINDOW,
    b_tp,
    boundaries_of,
    boundary_similarity,
)
from .document import TASK, SentenceSpan, WritingRegion
from .matching import (
    DEFAULT_THRESHOLD,
    ClassMetrics,
    ClassificationReport,
    ConfusionCounts,
    EvalTallies,
    full_matching,
    prune,
    region_tallies,
    report_from_tallies,
)


@dataclass(frozen=True)
class EvalReport:
    counts: ConfusionCounts
    task: ClassMetrics
    nontask: ClassMetrics
    accuracy: float | None
    b: float | None
    b_tp: float | None

    def to_json_dict(self, ndigits: int | None = 4) -> dict:
        def r(x):
            if x is None:
                return None
            return round(x, ndigits) if ndigits is not None else x

        def metrics(m: ClassMetrics) -> dict:
            return {
                "rec": r(m.recall),
                "prec": r(m.precision),
                "f1": r(m.f1),
                "context_rec": r(m.context_recall),
            }

        return {
            "counts": {
                "tp": self.counts.tp,
                "fp": self.counts.fp,
                "tn": self.counts.tn,
                "fn": self.counts.fn,
            },
            "task": metrics(self.task),
            "nontask": metrics(self.nontask),
            "accuracy": r(self.accuracy),
            "b": r(self.b),
            "b_tp": r(self.b_tp),
        }

    def to_json(self, ndigits: int | None = 4) -> str:
        return json.dumps(self.to_json_dict(ndigits), indent=2)


def _is_partition(spans: list[SentenceSpan], n: int) -> bool:
    if not spans:
        return False
    seen = sorted(spans, key=lambda s: s.start)
    if seen[0].start != 0 or seen[-1].end != n:
        return False
    for a, b in zip(seen, seen[1:]):
        if a.end != b.start:
            return False
    return True


def _eval_region(
    region: WritingRegion,
    predicted: list[SentenceSpan],
    t: float,
    n_t: int,
) -> tuple[EvalTallies, float | None, float | None]:
    """(tallies, region b or None, region b_tp or None)."""
    golds = list(region.gold_sentences)
    task_preds = [p for p in predicted if p.label == TASK]
    match = prune(full_matching(task_preds, golds), t)
    tallies = region_tallies(match, task_preds, golds)

    region_b = None
    if _is_partition(predicted, region.word_count):
        region_b = boundary_similarity(
            boundaries_of(predicted, region.word_count),
            boundaries_of(golds, region.word_count),
            n_t,
        )
    region_b_tp = b_tp(match, task_preds, golds, region.word_count, n_t)
    return tallies, region_b, region_b_tp


def _eval_region_job(args):
    return _eval_region(*args)


def evaluate_predictions(
    corpus: list[WritingRegion],
    predictions: dict[str, list[SentenceSpan]],
    t: float = DEFAULT_THRESHOLD,
    n_t: int = DEFAULT_TRANSPOSITION_WINDOW,
    workers: int = 1,
) -> EvalReport:
    """Match, count and score every region, then micro-sum counts and average
    the per-region segmentation scores."""
    by_id = {r.region_id: r for r in corpus}
    unknown = set(predictions) - set(by_id)
    if unknown:
        raise ValueError(f"predictions for unknown regions: {sorted(unknown)}")

    jobs = [
        (by_id[rid], predictions.get(rid, []), t, n_t) for rid in sorted(by_id)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_eval_region_job, jobs, chunksize=8))
    else:
        results = [_eval_region_job(job) for job in jobs]

    total = EvalTallies()
    b_values: list[float | None] = []
    b_tp_values: list[float] = []
    for tallies, region_b, region_b_tp in results:
        total = total + tallies
        b_values.append(region_b)
        if region_b_tp is not None:
            b_tp_values.append(region_b_tp)

    report: ClassificationReport = report_from_tallies(total)
    # b is only meaningful when every region was fully segmented.
    if b_values and all(v is not None for v in b_values):
        b = sum(b_values) / len(b_values)
    else:
        b = None
    b_tp_mean = sum(b_tp_values) / len(b_tp_values) if b_tp_values else None
    return EvalReport(
        counts=total.counts,
        task=report.task,
        nontask=report.nontask,
        accuracy=report.accuracy,
        b=b,
        b_tp=b_tp_mean,
    )
