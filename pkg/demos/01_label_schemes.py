"""Walkthrough of the three labeling schemes on one small writing region.

Run: python3 demos/01_label_schemes.py
"""

from slate import (
    LabelScheme,
    SentenceSpan,
    WritingRegion,
    chunk_splitter,
    decode,
    encode_word_labels,
    nti_to_bio,
    project_to_tokens,
    render_with_layout,
)

# A little to-do block: one task sentence, one note, one more task.
# Bullets before words 0 and 5, a new line starting at word 5 and 8.
region = WritingRegion.build(
    "demo:r0",
    "demo",
    ["buy", "milk", "and", "eggs", "also", "print", "the", "form", "meeting", "was", "fine"],
    line_breaks=[4, 8],
    bullets=[0, 4],
    sentences=[
        SentenceSpan(0, 4, "task"),
        SentenceSpan(4, 8, "task"),
        SentenceSpan(8, 11, "nontask"),
    ],
)

print("words: ", " ".join(region.word_texts()))
print()

# 1. Each scheme encodes the same gold annotation differently.
for scheme in LabelScheme:
    labels = encode_word_labels(region, scheme)
    print(f"{scheme.name:12s} -> {' '.join(labels.labels)}")

print()

# 2. Decoding inverts encoding. NTI recovers the full segmentation with
# labels; BIO only the task spans; BI only the boundaries.
for scheme in LabelScheme:
    spans = decode(encode_word_labels(region, scheme)).spans
    desc = ", ".join(f"[{s.start},{s.end}){':' + s.label if s.label else ''}" for s in spans)
    print(f"{scheme.name:12s} decodes to {desc}")

print()

# 3. Layout metadata renders inline as the marker tokens '<.>' and '</>'.
tokens = render_with_layout(region)
print("rendered: ", " ".join(t.text for t in tokens))

# 4. With a subword splitter, word labels project onto tokens (only a word's
# first piece keeps a beginning label; markers inherit the next label) and
# aggregate back losslessly.
tokens = render_with_layout(region, chunk_splitter)
word_labels = encode_word_labels(region, LabelScheme.SLATE_NTI)
token_labels = project_to_tokens(word_labels, tokens)
print("subword:  ", " ".join(t.text for t in tokens))
print("labels:   ", " ".join(token_labels.labels))

# 5. NTI converts to BIO preserving task spans exactly.
print()
print("nti_to_bio:", " ".join(nti_to_bio(word_labels).labels))
