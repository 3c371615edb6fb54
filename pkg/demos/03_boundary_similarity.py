"""Boundary similarity: segmentation scoring with partial credit for near
misses.

Run: python3 demos/03_boundary_similarity.py
"""

from slate import (
    BoundarySet,
    SentenceSpan,
    boundaries_of,
    boundary_edit_distance,
    boundary_similarity,
)

n = 9  # nine words

gold = boundaries_of([SentenceSpan(0, 5, "task"), SentenceSpan(5, 9, "nontask")], n)
print("gold boundaries:", gold.positions)

cases = {
    "exact":        (0, 5, 9),
    "off by one":   (0, 4, 9),
    "off by two":   (0, 3, 9),
    "missed":       (0, 9),
    "extra":        (0, 3, 5, 9),
}

for name, positions in cases.items():
    s = BoundarySet(positions, n)
    summary = boundary_edit_distance(s, gold)
    b = boundary_similarity(s, gold)
    print(
        f"{name:12s} {str(positions):15s} matches={summary.n_matches} "
        f"add={summary.n_additions} del={summary.n_deletions} "
        f"shifts={summary.transpositions} -> B = {b:.4f}"
    )

# A shift of one position costs 1/2 (window 2); a full miss costs a whole
# addition or deletion. Boundary similarity is symmetric:
a = BoundarySet((0, 4, 9), n)
print("\nsymmetry:", boundary_similarity(a, gold), "==", boundary_similarity(gold, a))
