"""The matching-based evaluation procedure, step by step.

Predicted task sentences rarely align exactly with gold sentences, so we
match them first and only then count true/false positives.

Run: python3 demos/02_matching_evaluation.py
"""

from slate import (
    SentenceSpan,
    confusion,
    full_matching,
    iou,
    match_region,
    prune,
)

# Input text (indices shown for orientation):
#   0:luckily 1:we 2:got 3:it 4:send 5:email 6:&  7:doc 8:results 9:look 10:great
golds = [
    SentenceSpan(0, 4, "nontask"),   # "luckily we got it"
    SentenceSpan(4, 8, "task"),      # "send email & doc"
    SentenceSpan(8, 11, "nontask"),  # "results look great"
]
# The model merged the task with the start of the next sentence.
preds = [SentenceSpan(4, 9, "task")]  # "send email & doc results"

# Step 1: complete bipartite graph, IOU edge weights on word-index sets.
print("edge weights (pred 0 vs each gold):")
for j, g in enumerate(golds):
    print(f"  gold {j} [{g.start},{g.end}) {g.label:8s} IOU = {iou(preds[0], g):.2f}")

# Step 2: maximum-weight full matching, |M| = min(|P|, |G|).
m = full_matching(preds, golds)
print("\nfull matching:", [(e.pred_index, e.gold_index, round(e.weight, 2)) for e in m.edges])

# Step 3: prune weak matches (threshold 0.25).
pruned = prune(m, 0.25)
print("after pruning:", [(e.pred_index, e.gold_index, round(e.weight, 2)) for e in pruned.edges])

# Confusion counts follow from the pruned matching:
#   pred matched to gold task -> tp; to gold non-task -> fp;
#   unmatched gold task -> fn; unmatched gold non-task -> tn;
#   unmatched prediction -> fp.
counts = confusion(pruned, preds, golds)
print(f"\ncounts: tp={counts.tp} fp={counts.fp} tn={counts.tn} fn={counts.fn}")

# A split prediction cannot double-count: the matching uses each gold
# sentence at most once.
preds2 = [SentenceSpan(4, 6, "task"), SentenceSpan(6, 8, "task")]
counts2 = confusion(match_region(preds2, golds), preds2, golds)
print(f"split prediction: tp={counts2.tp} fp={counts2.fp} (second piece is a false positive)")
