"""Trainable taggers: a joint single-pass sequence tagger and the two-model
baseline (sentence segmenter + per-sentence classifier).

Both are averaged perceptrons, so training is deterministic given the corpus
order and seed, fast on CPU, and dependency-free. The joint tagger labels a
whole region in one Viterbi pass per window; the baseline segments with a
sentence-boundary tagger and then classifies every decoded sentence with a
separate model invocation, which is exactly why its latency grows with the
number of sentences.

Viterbi decoding is constrained to the scheme's grammar (legal first-word
labels, legal transitions), so decoded label sequences never need repair.
Regions longer than ``MAX_WINDOW`` words are split at line breaks into
non-overlapping windows and the label outputs concatenated.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace

from .codec import LabelScheme, WordLabelSequence, decode, encode_word_labels
from .document import LayoutMetadata, SentenceSpan, TASK, NONTASK, WritingRegion

MAX_WINDOW = 128

NEG_INF = float("-inf")

LABEL_ORDER = {
    LabelScheme.SENTENCE_BI: ("B", "I"),
    LabelScheme.SLATE_BIO: ("B", "I", "O"),
    LabelScheme.SLATE_NTI: ("N", "T", "I"),
}

# Grammar: labels legal on a region's first word, and legal successors.
BEGIN_LABELS = {
    LabelScheme.SENTENCE_BI: ("B",),
    LabelScheme.SLATE_BIO: ("B", "O"),
    LabelScheme.SLATE_NTI: ("N", "T"),
}

SUCCESSORS = {
    LabelScheme.SENTENCE_BI: {"B": ("B", "I"), "I": ("B", "I")},
    LabelScheme.SLATE_BIO: {
        "B": ("B", "I", "O"),
        "I": ("B", "I", "O"),
        "O": ("B", "O"),
    },
    LabelScheme.SLATE_NTI: {
        "N": ("N", "T", "I"),
        "T": ("N", "T", "I"),
        "I": ("N", "T", "I"),
    },
}


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 5
    seed: int = 0
    averaging: bool = True
    use_layout: bool = True
    use_shape: bool = True
    affix_max_len: int = 3

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if not (1 <= self.affix_max_len <= 6):
            raise ValueError("affix_max_len must be in [1, 6]")


@dataclass(frozen=True)
class TaggerModel:
    scheme: LabelScheme
    feature_weights: dict  # feature -> {label: weight}
    transition_weights: dict  # prev label -> {label: weight}
    config: TrainConfig


@dataclass(frozen=True)
class SentenceClassifierModel:
    feature_weights: dict  # feature -> weight
    bias: float
    config: TrainConfig


@dataclass
class InvocationCounters:
    """Instrumentation: how many model invocations an extraction performed."""

    tagger_calls: int = 0  # one per Viterbi window
    classifier_calls: int = 0  # one per classified sentence


def word_shape(text: str) -> str:
    shape = []
    for ch in text:
        if ch.isupper():
            s = "X"
        elif ch.islower():
            s = "x"
        elif ch.isdigit():
            s = "d"
        else:
            s = ch
        if not shape or shape[-1] != s:
            shape.append(s)
    return "".join(shape)


def region_features(region: WritingRegion, cfg: TrainConfig) -> list[list[str]]:
    """Per-word feature lists for the whole region."""
    n = region.word_count
    texts = [w.text for w in region.words]
    lows = [t.lower() for t in texts]
    breaks = region.layout.line_break_before
    bullets = region.layout.bullet_before

    line_pos = [0] * n
    pos = 0
    for i in range(n):
        if i in breaks:
            pos = 0
        line_pos[i] = pos
        pos += 1

    feats: list[list[str]] = []
    for i in range(n):
        low = lows[i]
        fs = ["b", f"w={low}"]
        fs.append(f"w-1={lows[i - 1]}" if i > 0 else "w-1=<s>")
        fs.append(f"w+1={lows[i + 1]}" if i + 1 < n else "w+1=</s>")
        fs.append(f"w-2={lows[i - 2]}" if i > 1 else "w-2=<s>")
        fs.append(f"w+2={lows[i + 2]}" if i + 2 < n else "w+2=</s>")
        if cfg.use_shape:
            fs.append(f"sh={word_shape(texts[i])}")
        for k in range(1, cfg.affix_max_len + 1):
            if len(low) > k:
                fs.append(f"p{k}={low[:k]}")
                fs.append(f"s{k}={low[-k:]}")
        if i == 0:
            fs.append("first")
        if cfg.use_layout:
            if i in bullets:
                fs.append("bul")
            if i in breaks:
                fs.append("brk")
            if i + 1 in bullets:
                fs.append("bul+1")
            if i + 1 in breaks:
                fs.append("brk+1")
            fs.append(f"lp={min(line_pos[i], 3)}")
        feats.append(fs)
    return feats


def sentence_features(words: list[str], cfg: TrainConfig) -> list[str]:
    """Bag of features for classifying one sentence in isolation: unigrams,
    bigrams, shapes and affixes, as rich as the tagger's per-word view."""
    lows = [w.lower() for w in words]
    fs = [f"w={w}" for w in lows]
    fs.extend(f"bg={a}_{b}" for a, b in zip(lows, lows[1:]))
    fs.append(f"first={lows[0]}" if lows else "first=<empty>")
    fs.append(f"last={lows[-1]}" if lows else "last=<empty>")
    if cfg.use_shape:
        fs.extend(f"sh={word_shape(w)}" for w in words)
    for w in lows:
        for k in range(1, cfg.affix_max_len + 1):
            if len(w) > k:
                fs.append(f"p{k}={w[:k]}")
                fs.append(f"s{k}={w[-k:]}")
    fs.append(f"len={min(len(words), 8)}")
    return fs


def window_spans(region: WritingRegion, max_len: int = MAX_WINDOW) -> list[tuple[int, int]]:
    """Non-overlapping word windows of at most ``max_len`` words, cut at line
    breaks when possible."""
    n = region.word_count
    if n <= max_len:
        return [(0, n)]
    breaks = sorted(region.layout.line_break_before)
    spans = []
    start = 0
    while n - start > max_len:
        candidates = [b for b in breaks if start < b <= start + max_len]
        cut = max(candidates) if candidates else start + max_len
        spans.append((start, cut))
        start = cut
    spans.append((start, n))
    return spans


class _AveragedTable:
    """Perceptron weight table with lazily-maintained running averages."""

    def __init__(self):
        self.w: dict = {}
        self._acc: dict = {}
        self._stamp: dict = {}

    def add(self, key, delta: float, step: int) -> None:
        cur = self.w.get(key, 0.0)
        self._acc[key] = self._acc.get(key, 0.0) + cur * (step - self._stamp.get(key, 0))
        self.w[key] = cur + delta
        self._stamp[key] = step

    def averaged(self, final_step: int) -> dict:
        out = {}
        for key, cur in self.w.items():
            acc = self._acc.get(key, 0.0) + cur * (final_step - self._stamp.get(key, 0))
            out[key] = acc / final_step if final_step else cur
        return out

    def raw(self) -> dict:
        return dict(self.w)


def _nest(flat: dict) -> dict:
    nested: dict = {}
    for (a, b), v in flat.items():
        if v != 0.0:
            nested.setdefault(a, {})[b] = v
    return nested


def _viterbi(
    feats: list[list[str]],
    emit_row,
    trans,
    scheme: LabelScheme,
    allowed_first,
) -> list[str]:
    """Highest-scoring label path under the scheme's grammar.

    ``emit_row(i)`` returns a (possibly sparse) label->score dict for
    position i; ``trans(p, y)`` the transition score. Ties break toward the
    scheme's fixed label order, so decoding is deterministic.
    """
    labels = LABEL_ORDER[scheme]
    succ = SUCCESSORS[scheme]
    n = len(feats)

    e0 = emit_row(0)
    score = {y: (e0.get(y, 0.0) if y in allowed_first else NEG_INF) for y in labels}
    back: list[dict] = []
    for i in range(1, n):
        new_score = {}
        new_back = {}
        emits = emit_row(i)
        for y in labels:
            best_prev = None
            best = NEG_INF
            for p in labels:
                if score[p] == NEG_INF or y not in succ[p]:
                    continue
                s = score[p] + trans(p, y)
                if s > best:
                    best = s
                    best_prev = p
            new_score[y] = best + emits.get(y, 0.0) if best_prev is not None else NEG_INF
            new_back[y] = best_prev
        score = new_score
        back.append(new_back)

    best_y = None
    best = NEG_INF
    for y in labels:
        if score[y] > best:
            best = score[y]
            best_y = y
    assert best_y is not None, "no legal label path"
    path = [best_y]
    for bk in reversed(back):
        path.append(bk[path[-1]])
    path.reverse()
    return path


def train_joint(
    corpus: list[WritingRegion], scheme: LabelScheme, cfg: TrainConfig
) -> TaggerModel:
    """Train the joint tagger with the averaged structured perceptron.

    Deterministic given (corpus order, cfg.seed). Long regions are windowed
    exactly as at prediction time; across windows the gold last label feeds
    the next window's legal-start set.
    """
    if not corpus:
        raise ValueError("empty corpus")
    prepared = []
    for region in corpus:
        gold = encode_word_labels(region, scheme).labels
        prepared.append(
            (region_features(region, cfg), gold, window_spans(region))
        )

    feat_table = _AveragedTable()
    trans_table = _AveragedTable()

    labels_order = LABEL_ORDER[scheme]

    def emit_for(feats_w):
        def emit_row(i):
            w = feat_table.w
            return {
                y: sum(w.get((f, y), 0.0) for f in feats_w[i]) for y in labels_order
            }

        return emit_row

    def trans(p, y):
        return trans_table.w.get((p, y), 0.0)

    rng = random.Random(cfg.seed)
    order = list(range(len(prepared)))
    step = 0
    for _ in range(cfg.epochs):
        rng.shuffle(order)
        for idx in order:
            feats, gold, windows = prepared[idx]
            prev_gold = None
            for lo, hi in windows:
                step += 1
                allowed = (
                    BEGIN_LABELS[scheme] if prev_gold is None else SUCCESSORS[scheme][prev_gold]
                )
                window_feats = feats[lo:hi]
                predicted = _viterbi(
                    window_feats, emit_for(window_feats), trans, scheme, allowed
                )
                gold_w = list(gold[lo:hi])
                if predicted != gold_w:
                    for i, (g, p) in enumerate(zip(gold_w, predicted)):
                        if g != p:
                            for f in feats[lo + i]:
                                feat_table.add((f, g), 1.0, step)
                                feat_table.add((f, p), -1.0, step)
                    for i in range(1, len(gold_w)):
                        gpair = (gold_w[i - 1], gold_w[i])
                        ppair = (predicted[i - 1], predicted[i])
                        if gpair != ppair:
                            trans_table.add(gpair, 1.0, step)
                            trans_table.add(ppair, -1.0, step)
                prev_gold = gold_w[-1]

    if cfg.averaging:
        feat_w, trans_w = feat_table.averaged(step), trans_table.averaged(step)
    else:
        feat_w, trans_w = feat_table.raw(), trans_table.raw()
    return TaggerModel(
        scheme=scheme,
        feature_weights=_nest(feat_w),
        transition_weights=_nest(trans_w),
        config=cfg,
    )


def predict_labels(
    model: TaggerModel,
    region: WritingRegion,
    counters: InvocationCounters | None = None,
) -> WordLabelSequence:
    """Viterbi-decode word labels for a region, one tagger invocation per
    window. The output always decodes without repair."""
    feats = region_features(region, model.config)
    fw = model.feature_weights
    tw = model.transition_weights

    def trans(p, y):
        row = tw.get(p)
        return row.get(y, 0.0) if row else 0.0

    labels: list[str] = []
    prev_last: str | None = None
    for lo, hi in window_spans(region):
        if counters is not None:
            counters.tagger_calls += 1
        allowed = (
            BEGIN_LABELS[model.scheme]
            if prev_last is None
            else SUCCESSORS[model.scheme][prev_last]
        )
        window_feats = feats[lo:hi]

        def emit_row(i):
            acc: dict[str, float] = {}
            for f in window_feats[i]:
                row = fw.get(f)
                if row:
                    for y, w in row.items():
                        acc[y] = acc.get(y, 0.0) + w
            return acc

        path = _viterbi(window_feats, emit_row, trans, model.scheme, allowed)
        labels.extend(path)
        prev_last = path[-1]
    return WordLabelSequence(model.scheme, tuple(labels))


def train_sentence_classifier(
    corpus: list[tuple[list[str], str]], cfg: TrainConfig
) -> SentenceClassifierModel:
    """Averaged binary perceptron over sentences in isolation: positive score
    means task. The classifier never sees neighboring sentences."""
    if not corpus:
        raise ValueError("empty corpus")
    table = _AveragedTable()
    rng = random.Random(cfg.seed)
    order = list(range(len(corpus)))
    step = 0
    for _ in range(cfg.epochs):
        rng.shuffle(order)
        for idx in order:
            words, label = corpus[idx]
            step += 1
            feats = sentence_features(words, cfg)
            score = table.w.get("__bias__", 0.0)
            for f in feats:
                score += table.w.get(f, 0.0)
            predicted = TASK if score > 0 else NONTASK
            if predicted != label:
                direction = 1.0 if label == TASK else -1.0
                table.add("__bias__", direction, step)
                for f in feats:
                    table.add(f, direction, step)

    weights = table.averaged(step) if cfg.averaging else table.raw()
    bias = weights.pop("__bias__", 0.0)
    return SentenceClassifierModel(
        feature_weights={k: v for k, v in weights.items() if v != 0.0},
        bias=bias,
        config=cfg,
    )


def classify_sentence(model: SentenceClassifierModel, words: list[str]) -> str:
    score = model.bias
    for f in sentence_features(words, model.config):
        score += model.feature_weights.get(f, 0.0)
    return TASK if score > 0 else NONTASK


def extract_joint(
    model: TaggerModel,
    region: WritingRegion,
    counters: InvocationCounters | None = None,
) -> list[SentenceSpan]:
    """Single-pass extraction: one tagger invocation per window, regardless
    of how many sentences the region contains."""
    if model.scheme is LabelScheme.SENTENCE_BI:
        raise ValueError("joint extraction needs a task-aware scheme (BIO or NTI)")
    labels = predict_labels(model, region, counters)
    return list(decode(labels).spans)


def extract_two_model(
    segmenter: TaggerModel,
    classifier: SentenceClassifierModel,
    region: WritingRegion,
    counters: InvocationCounters | None = None,
) -> list[SentenceSpan]:
    """Baseline extraction: segment, then classify each sentence with its own
    classifier invocation."""
    if segmenter.scheme is not LabelScheme.SENTENCE_BI:
        raise ValueError("two-model segmentation needs a SENTENCE_BI model")
    labels = predict_labels(segmenter, region, counters)
    spans = decode(labels).spans
    out = []
    texts = region.word_texts()
    for span in spans:
        if counters is not None:
            counters.classifier_calls += 1
        label = classify_sentence(classifier, texts[span.start : span.end])
        out.append(SentenceSpan(span.start, span.end, label))
    return out


def strip_layout(region: WritingRegion) -> WritingRegion:
    """Region with layout metadata removed (for layout-off experiments)."""
    return replace(region, layout=LayoutMetadata())


# --- model serialization -----------------------------------------------

_TAGGER_FORMAT = "slate-tagger/1"
_CLASSIFIER_FORMAT = "slate-classifier/1"


def _config_dict(cfg: TrainConfig) -> dict:
    return {
        "epochs": cfg.epochs,
        "seed": cfg.seed,
        "averaging": cfg.averaging,
        "use_layout": cfg.use_layout,
        "use_shape": cfg.use_shape,
        "affix_max_len": cfg.affix_max_len,
    }


def save_model(model: TaggerModel | SentenceClassifierModel, path) -> None:
    if isinstance(model, TaggerModel):
        doc = {
            "format": _TAGGER_FORMAT,
            "scheme": model.scheme.value,
            "config": _config_dict(model.config),
            "features": model.feature_weights,
            "transitions": {p: dict(v) for p, v in model.transition_weights.items()},
        }
    else:
        doc = {
            "format": _CLASSIFIER_FORMAT,
            "config": _config_dict(model.config),
            "features": model.feature_weights,
            "bias": model.bias,
        }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_model(path) -> TaggerModel | SentenceClassifierModel:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    fmt = doc.get("format")
    cfg = TrainConfig(**doc["config"])
    if fmt == _TAGGER_FORMAT:
        return TaggerModel(
            scheme=LabelScheme.from_string(doc["scheme"]),
            feature_weights=doc["features"],
            transition_weights=doc["transitions"],
            config=cfg,
        )
    if fmt == _CLASSIFIER_FORMAT:
        return SentenceClassifierModel(
            feature_weights=doc["features"],
            bias=doc["bias"],
            config=cfg,
        )
    raise ValueError(f"unknown model format {fmt!r} in {path}")
