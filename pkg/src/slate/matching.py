"""Matching-based task classification evaluation.

Predicted task sentences and gold sentences may segment the text
differently, so their labels cannot be compared position by position.
Instead we build a complete bipartite graph between predicted task spans and
gold sentences weighted by index-set IOU, take a maximum-weight full
matching (size ``min(|P|, |G|)``), prune edges under a similarity threshold,
and read confusion counts off the surviving matching:

* true positive: prediction matched to a gold task sentence
* false positive: prediction matched to a gold non-task sentence, or left
  unmatched after pruning
* true negative: gold non-task sentence with no matched prediction
* false negative: gold task sentence with no matched prediction

Non-task metrics swap the positive/negative roles. Context recalls are the
same recalls restricted to context-flagged gold sentences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .document import TASK, SentenceSpan

DEFAULT_THRESHOLD = 0.25

# Slack for "achieves the optimal total" checks during tie-breaking; edge
# weights are small rationals, so optimal totals differ by far more than this
# unless they are genuinely tied.
_WEIGHT_EPS = 1e-9


@dataclass(frozen=True)
class MatchEdge:
    pred_index: int
    gold_index: int
    weight: float


@dataclass(frozen=True)
class MatchResult:
    edges: tuple[MatchEdge, ...]
    unmatched_pred: frozenset[int]
    unmatched_gold: frozenset[int]
    threshold: float = 0.0

    def matched_gold(self) -> dict[int, MatchEdge]:
        return {e.gold_index: e for e in self.edges}

    def total_weight(self) -> float:
        return math.fsum(e.weight for e in self.edges)


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            self.tp + other.tp, self.fp + other.fp, self.tn + other.tn, self.fn + other.fn
        )

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class ClassMetrics:
    recall: float | None
    precision: float | None
    f1: float | None
    context_recall: float | None


@dataclass(frozen=True)
class ClassificationReport:
    task: ClassMetrics
    nontask: ClassMetrics
    accuracy: float | None


def iou(pred: SentenceSpan, gold: SentenceSpan) -> float:
    """Intersection over union of the two spans' word-index sets.

    Both numerator and denominator are computed on positional indices, so
    repeated word texts cannot create spurious overlap.
    """
    for s in (pred, gold):
        if not (0 <= s.start < s.end):
            raise ValueError(f"invalid span [{s.start},{s.end})")
    lo = max(pred.start, gold.start)
    hi = min(pred.end, gold.end)
    inter = max(0, hi - lo)
    union = len(pred) + len(gold) - inter
    return inter / union


def full_matching(
    preds: list[SentenceSpan], golds: list[SentenceSpan]
) -> MatchResult:
    """Maximum-weight full matching between predictions and gold sentences,
    on the complete bipartite graph weighted by span IOU."""
    weights = np.array(
        [[iou(p, g) for g in golds] for p in preds], dtype=float
    ).reshape(len(preds), len(golds))
    return max_weight_full_matching(weights)


def max_weight_full_matching(weights: np.ndarray) -> MatchResult:
    """Maximum-weight full matching for an explicit weight matrix
    (rows: predictions, columns: gold sentences).

    Every pair is matchable (zero-weight edges included); exactly
    ``min(|P|, |G|)`` edges are chosen to maximize total weight. Among
    maximum-weight matchings, the one whose sorted (pred, gold) pair list is
    lexicographically smallest is returned, so results are deterministic
    across runs and platforms.
    """
    n_pred, n_gold = weights.shape
    size = min(n_pred, n_gold)
    if size == 0:
        return MatchResult((), frozenset(range(n_pred)), frozenset(range(n_gold)))

    rows, cols = linear_sum_assignment(weights, maximize=True)
    best_total = math.fsum(weights[r, c] for r, c in zip(rows, cols))

    # Lexicographic refinement: fix pairs in (pred, gold) order whenever a
    # completion to a full matching of optimal total weight still exists.
    fixed: list[tuple[int, int]] = []
    used_pred: set[int] = set()
    used_gold: set[int] = set()
    for i in range(n_pred):
        if len(fixed) == size:
            break
        for j in range(n_gold):
            if j in used_gold:
                continue
            if _completable(weights, fixed + [(i, j)], size, best_total):
                fixed.append((i, j))
                used_pred.add(i)
                used_gold.add(j)
                break

    edges = tuple(MatchEdge(i, j, float(weights[i, j])) for i, j in fixed)
    return MatchResult(
        edges,
        frozenset(range(n_pred)) - used_pred,
        frozenset(range(n_gold)) - used_gold,
    )


def _completable(
    weights: np.ndarray, fixed: list[tuple[int, int]], size: int, best_total: float
) -> bool:
    """Can ``fixed`` extend to a full matching with the optimal total weight?"""
    fixed_w = math.fsum(weights[i, j] for i, j in fixed)
    if len(fixed) == size:
        return fixed_w >= best_total - _WEIGHT_EPS
    free_rows = [r for r in range(weights.shape[0]) if r not in {i for i, _ in fixed}]
    free_cols = [c for c in range(weights.shape[1]) if c not in {j for _, j in fixed}]
    sub = weights[np.ix_(free_rows, free_cols)]
    rows, cols = linear_sum_assignment(sub, maximize=True)
    rest_w = math.fsum(sub[r, c] for r, c in zip(rows, cols))
    # min(len(free_rows), len(free_cols)) == size - len(fixed), so the
    # sub-assignment completes the matching to full size.
    return fixed_w + rest_w >= best_total - _WEIGHT_EPS


def prune(m: MatchResult, t: float) -> MatchResult:
    """Drop edges with weight strictly below ``t``; endpoints of dropped
    edges become unmatched."""
    if not (0.0 <= t <= 1.0):
        raise ValueError(f"threshold {t} outside [0, 1]")
    kept = tuple(e for e in m.edges if e.weight >= t)
    dropped = [e for e in m.edges if e.weight < t]
    return MatchResult(
        kept,
        m.unmatched_pred | {e.pred_index for e in dropped},
        m.unmatched_gold | {e.gold_index for e in dropped},
        threshold=t,
    )


def confusion(
    m: MatchResult, preds: list[SentenceSpan], golds: list[SentenceSpan]
) -> ConfusionCounts:
    """Confusion counts from a pruned matching.

    Unmatched predicted tasks count as false positives: every prediction
    claims a task, so a prediction matching nothing is a wrong claim.
    """
    tp = sum(1 for e in m.edges if golds[e.gold_index].label == TASK)
    fp_matched = len(m.edges) - tp
    fp = fp_matched + len(m.unmatched_pred)
    fn = sum(1 for j in m.unmatched_gold if golds[j].label == TASK)
    tn = len(m.unmatched_gold) - fn
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)


@dataclass(frozen=True)
class EvalTallies:
    """Confusion counts plus the per-class context-restricted tallies needed
    for context recall. Summable across regions."""

    counts: ConfusionCounts = ConfusionCounts()
    context_tasks: int = 0
    context_tasks_matched: int = 0
    context_nontasks: int = 0
    context_nontasks_unmatched: int = 0

    def __add__(self, other: "EvalTallies") -> "EvalTallies":
        return EvalTallies(
            self.counts + other.counts,
            self.context_tasks + other.context_tasks,
            self.context_tasks_matched + other.context_tasks_matched,
            self.context_nontasks + other.context_nontasks,
            self.context_nontasks_unmatched + other.context_nontasks_unmatched,
        )


def region_tallies(
    m: MatchResult, preds: list[SentenceSpan], golds: list[SentenceSpan]
) -> EvalTallies:
    matched_gold = {e.gold_index for e in m.edges}
    ctx_tasks = ctx_tasks_matched = ctx_non = ctx_non_unmatched = 0
    for j, g in enumerate(golds):
        if not g.context_flag:
            continue
        if g.label == TASK:
            ctx_tasks += 1
            if j in matched_gold:
                ctx_tasks_matched += 1
        else:
            ctx_non += 1
            if j not in matched_gold:
                ctx_non_unmatched += 1
    return EvalTallies(
        confusion(m, preds, golds),
        ctx_tasks,
        ctx_tasks_matched,
        ctx_non,
        ctx_non_unmatched,
    )


def _ratio(num: int, den: int) -> float | None:
    return num / den if den else None


def _f1(precision: float | None, recall: float | None) -> float | None:
    if precision is None or recall is None:
        return None
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def report_from_tallies(t: EvalTallies) -> ClassificationReport:
    c = t.counts
    task_prec = _ratio(c.tp, c.tp + c.fp)
    task_rec = _ratio(c.tp, c.tp + c.fn)
    # Non-task metrics treat true/false positives as true/false negatives and
    # vice versa.
    non_prec = _ratio(c.tn, c.tn + c.fn)
    non_rec = _ratio(c.tn, c.tn + c.fp)
    return ClassificationReport(
        task=ClassMetrics(
            recall=task_rec,
            precision=task_prec,
            f1=_f1(task_prec, task_rec),
            context_recall=_ratio(t.context_tasks_matched, t.context_tasks),
        ),
        nontask=ClassMetrics(
            recall=non_rec,
            precision=non_prec,
            f1=_f1(non_prec, non_rec),
            context_recall=_ratio(t.context_nontasks_unmatched, t.context_nontasks),
        ),
        accuracy=_ratio(c.tp + c.tn, c.total),
    )


def classification_report(
    counts: ConfusionCounts, matches: MatchResult, golds: list[SentenceSpan]
) -> ClassificationReport:
    """Classification metrics for one region's pruned matching."""
    tallies = region_tallies(matches, [], golds)
    if tallies.counts != counts:
        raise ValueError(
            f"counts {counts} inconsistent with matching-derived {tallies.counts}"
        )
    return report_from_tallies(tallies)


def match_region(
    preds: list[SentenceSpan],
    golds: list[SentenceSpan],
    t: float = DEFAULT_THRESHOLD,
) -> MatchResult:
    """Match the predicted task spans of one region against its gold
    sentences and prune at ``t``."""
    task_preds = [p for p in preds if p.label == TASK]
    return prune(full_matching(task_preds, golds), t)


def corpus_evaluate(
    gold_corpus,
    predictions: dict[str, list[SentenceSpan]],
    t: float = DEFAULT_THRESHOLD,
) -> tuple[ConfusionCounts, ClassificationReport]:
    """Evaluate predictions over a corpus: match and count per region, then
    micro-sum counts before computing one report.

    ``predictions`` maps region_id to predicted spans (task spans are
    extracted by label). Regions without an entry count as empty predictions;
    predictions for unknown regions are an error.
    """
    by_id = {r.region_id: r for r in gold_corpus}
    unknown = set(predictions) - set(by_id)
    if unknown:
        raise ValueError(f"predictions for unknown regions: {sorted(unknown)}")
    total = EvalTallies()
    for region_id in sorted(by_id):
        region = by_id[region_id]
        preds = [p for p in predictions.get(region_id, []) if p.label == TASK]
        golds = list(region.gold_sentences)
        m = prune(full_matching(preds, golds), t)
        total = total + region_tallies(m, preds, golds)
    return total.counts, report_from_tallies(total)
