"""Boundary edit distance and boundary similarity for segmentation quality.

A segmentation is the set of between-word positions where a sentence begins
or ends; positions 0 and n (before the first word, after the last) are
always present. Boundary edit distance aligns two such sets with three
operations: exact matches (free), n-wise transpositions (a boundary shifted
by at most ``n_t`` positions, costing ``t / n_t``), and additions/deletions
(cost 1). Boundary similarity normalizes the minimum edit cost:

    B = 1 - (N_A + N_D + sum(t / n_t)) / (N_M + N_A + N_D + |S_t|)

so a perfect segmentation scores 1 and near misses earn partial credit.
``b_tp`` is the same score restricted to the boundaries of true-positive
task spans and their matched gold spans.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .document import TASK, SentenceSpan
from .matching import MatchResult

DEFAULT_TRANSPOSITION_WINDOW = 2


@dataclass(frozen=True)
class BoundarySet:
    """Sorted boundary positions in [0, n] for a text of ``n`` words."""

    positions: tuple[int, ...]
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("word count must be non-negative")
        if list(self.positions) != sorted(set(self.positions)):
            raise ValueError("positions must be strictly increasing")
        if self.positions and not (0 <= self.positions[0] and self.positions[-1] <= self.n):
            raise ValueError(f"positions {self.positions} outside [0, {self.n}]")
        if 0 not in self.positions or self.n not in self.positions:
            raise ValueError("default boundaries 0 and n must be present")


@dataclass(frozen=True)
class EditSummary:
    n_matches: int
    n_additions: int
    n_deletions: int
    transpositions: tuple[int, ...]
    n_t: int

    def cost(self) -> float:
        """The numerator of the boundary similarity formula."""
        return self.n_additions + self.n_deletions + math.fsum(
            t / self.n_t for t in self.transpositions
        )

    def denominator(self) -> int:
        return self.n_matches + self.n_additions + self.n_deletions + len(self.transpositions)


def boundaries_of(spans: list[SentenceSpan], n: int) -> BoundarySet:
    """Boundary set of a list of disjoint spans: {0, n} plus every span edge."""
    positions = {0, n}
    covered: set[int] = set()
    for s in spans:
        if not (0 <= s.start < s.end <= n):
            raise ValueError(f"span [{s.start},{s.end}) outside [0, {n})")
        overlap = covered.intersection(s.indices())
        if overlap:
            raise ValueError(f"overlapping spans at word {min(overlap)}")
        covered.update(s.indices())
        positions.add(s.start)
        positions.add(s.end)
    return BoundarySet(tuple(sorted(positions)), n)


def boundary_edit_distance(
    s1: BoundarySet, s2: BoundarySet, n_t: int = DEFAULT_TRANSPOSITION_WINDOW
) -> EditSummary:
    """Minimum-cost alignment of two boundary sets.

    Dynamic programming over the two sorted position lists: an optimal
    pairing of points on a line is monotonic, so crossing pairs never need
    to be considered. Cells minimize (edit cost, addition+deletion count);
    the second component only breaks ties, and every cost-minimal alignment
    with minimal A+D yields the same similarity value.
    """
    if n_t < 1:
        raise ValueError("transposition window must be >= 1")
    if s1.n != s2.n:
        raise ValueError(f"boundary sets over different texts: n={s1.n} vs n={s2.n}")
    a, b = s1.positions, s2.positions

    # dp[i][j]: (cost, a+d count, matches, additions, deletions, shifts)
    # for aligning a[:i] with b[:j].
    empty = (0.0, 0, 0, 0, 0, ())
    dp: list[list[tuple]] = [[empty] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(1, len(a) + 1):
        c = dp[i - 1][0]
        dp[i][0] = (c[0] + 1.0, c[1] + 1, c[2], c[3], c[4] + 1, c[5])
    for j in range(1, len(b) + 1):
        c = dp[0][j - 1]
        dp[0][j] = (c[0] + 1.0, c[1] + 1, c[2], c[3] + 1, c[4], c[5])

    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            p, q = a[i - 1], b[j - 1]
            options = []
            diag = dp[i - 1][j - 1]
            if p == q:
                options.append((diag[0], diag[1], diag[2] + 1, diag[3], diag[4], diag[5]))
            elif abs(p - q) <= n_t:
                shift = abs(p - q)
                options.append(
                    (
                        diag[0] + shift / n_t,
                        diag[1],
                        diag[2],
                        diag[3],
                        diag[4],
                        diag[5] + (shift,),
                    )
                )
            up = dp[i - 1][j]
            options.append((up[0] + 1.0, up[1] + 1, up[2], up[3], up[4] + 1, up[5]))
            left = dp[i][j - 1]
            options.append((left[0] + 1.0, left[1] + 1, left[2], left[3] + 1, left[4], left[5]))
            dp[i][j] = min(options, key=lambda o: (o[0], o[1]))

    cost, _, n_m, n_a, n_d, shifts = dp[len(a)][len(b)]
    summary = EditSummary(
        n_matches=n_m,
        n_additions=n_a,
        n_deletions=n_d,
        transpositions=tuple(sorted(shifts)),
        n_t=n_t,
    )
    assert math.isclose(summary.cost(), cost, abs_tol=1e-9)
    return summary


def boundary_similarity(
    s1: BoundarySet, s2: BoundarySet, n_t: int = DEFAULT_TRANSPOSITION_WINDOW
) -> float:
    """Normalized boundary edit cost in [0, 1]; 1 means identical sets."""
    summary = boundary_edit_distance(s1, s2, n_t)
    den = summary.denominator()
    if den == 0:
        return 1.0
    return 1.0 - summary.cost() / den


def b_tp(
    match: MatchResult,
    preds: list[SentenceSpan],
    golds: list[SentenceSpan],
    n: int,
    n_t: int = DEFAULT_TRANSPOSITION_WINDOW,
) -> float | None:
    """Boundary similarity restricted to true-positive task spans.

    Compares the boundaries of predictions matched to gold task sentences
    against the boundaries of those matched gold sentences. ``None`` when
    there are no true positives.
    """
    tp_edges = [e for e in match.edges if golds[e.gold_index].label == TASK]
    if not tp_edges:
        return None
    pred_side = boundaries_of([preds[e.pred_index] for e in tp_edges], n)
    gold_side = boundaries_of([golds[e.gold_index] for e in tp_edges], n)
    return boundary_similarity(pred_side, gold_side, n_t)
