"""Command-line surface for scripted experiments.

Subcommands: encode, decode, train, extract, eval, bench. Defaults match
the evaluation protocol (pruning threshold 0.25, transposition window 2).
Exit codes: 0 success, 1 data/validation error, 2 usage error. The corpus
path defaults to ``$SLATE_DATA_DIR/corpus.jsonl`` when the variable is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bench as bench_mod
from .codec import LabelScheme, encode_word_labels
from .dataset import (
    DataError,
    load_corpus,
    load_predictions,
    save_label_predictions,
    save_predictions,
    summarize,
)
from .report import evaluate_predictions
from .taggers import (
    SentenceClassifierModel,
    TaggerModel,
    TrainConfig,
    extract_joint,
    extract_two_model,
    load_model,
    save_model,
    strip_layout,
    train_joint,
    train_sentence_classifier,
)


def _default_corpus() -> str | None:
    root = os.environ.get("SLATE_DATA_DIR")
    return str(Path(root) / "corpus.jsonl") if root else None


def _add_corpus_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--corpus",
        default=_default_corpus(),
        help="corpus JSONL path (default: $SLATE_DATA_DIR/corpus.jsonl)",
    )
    p.add_argument("--split", choices=("train", "test"), default=None)


def _require_corpus(parser: argparse.ArgumentParser, args) -> list:
    if not args.corpus:
        parser.error("--corpus is required (or set SLATE_DATA_DIR)")
    return load_corpus(args.corpus, args.split)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slate", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="write gold word labels for a scheme")
    _add_corpus_arg(p)
    p.add_argument("--scheme", choices=("bi", "bio", "nti"), required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("decode", help="decode a label prediction file to spans")
    _add_corpus_arg(p)
    p.add_argument("--predictions", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("train", help="train a tagger (and classifier for two-model)")
    _add_corpus_arg(p)
    p.add_argument("--scheme", choices=("bi", "bio", "nti"), default="nti")
    p.add_argument("--mode", choices=("joint", "two-model"), default="joint")
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--layout", choices=("on", "off"), default="on")
    p.add_argument("--model-out", required=True)
    p.add_argument("--classifier-out", help="classifier path (two-model mode)")

    p = sub.add_parser("extract", help="run extraction and write predictions")
    _add_corpus_arg(p)
    p.add_argument("--mode", choices=("joint", "two-model"), default="joint")
    p.add_argument("--model", required=True, help="joint tagger or segmenter model")
    p.add_argument("--classifier", help="classifier model (two-model mode)")
    p.add_argument("--layout", choices=("on", "off"), default="on")
    p.add_argument("--out", required=True)

    p = sub.add_parser("eval", help="evaluate a prediction file against gold")
    _add_corpus_arg(p)
    p.add_argument("--predictions", required=True)
    p.add_argument("--threshold", type=float, default=0.25)
    p.add_argument("--transposition", type=int, default=2)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="write report JSON here instead of stdout")

    p = sub.add_parser("bench", help="benchmark joint vs two-model latency")
    _add_corpus_arg(p)
    p.add_argument("--model", required=True, help="joint tagger model")
    p.add_argument("--segmenter", required=True, help="BI segmenter model")
    p.add_argument("--classifier", required=True, help="sentence classifier model")
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--inner", type=int, default=1, help="timed repeats per region")
    p.add_argument("--out", help="write report JSON here instead of stdout")

    p = sub.add_parser("stats", help="print corpus summary counts")
    _add_corpus_arg(p)
    return parser


def _load_tagger(parser, path, scheme: LabelScheme | None = None) -> TaggerModel:
    model = load_model(path)
    if not isinstance(model, TaggerModel):
        raise DataError(f"{path} is not a tagger model")
    if scheme is not None and model.scheme is not scheme:
        raise DataError(f"{path} has scheme {model.scheme.value}, expected {scheme.value}")
    return model


def _load_classifier(path) -> SentenceClassifierModel:
    model = load_model(path)
    if not isinstance(model, SentenceClassifierModel):
        raise DataError(f"{path} is not a sentence classifier model")
    return model


def cmd_encode(parser, args) -> int:
    corpus = _require_corpus(parser, args)
    scheme = LabelScheme.from_string(args.scheme)
    labels = {r.region_id: encode_word_labels(r, scheme) for r in corpus}
    save_label_predictions(labels, args.out)
    print(f"wrote {len(labels)} label records to {args.out}")
    return 0


def cmd_decode(parser, args) -> int:
    corpus = _require_corpus(parser, args)
    predictions = load_predictions(args.predictions, corpus)
    save_predictions(predictions, args.out)
    print(f"wrote {len(predictions)} span records to {args.out}")
    return 0


def cmd_train(parser, args) -> int:
    corpus = _require_corpus(parser, args)
    cfg = TrainConfig(epochs=args.epochs, seed=args.seed, use_layout=args.layout == "on")
    if args.mode == "joint":
        scheme = LabelScheme.from_string(args.scheme)
        if scheme is LabelScheme.SENTENCE_BI:
            parser.error("joint mode needs --scheme bio or nti")
        model = train_joint(corpus, scheme, cfg)
        save_model(model, args.model_out)
        print(f"wrote joint {scheme.value} model to {args.model_out}")
    else:
        if not args.classifier_out:
            parser.error("--mode two-model requires --classifier-out")
        segmenter = train_joint(corpus, LabelScheme.SENTENCE_BI, cfg)
        sentences = [
            (r.word_texts()[s.start : s.end], s.label)
            for r in corpus
            for s in r.gold_sentences
        ]
        classifier = train_sentence_classifier(sentences, cfg)
        save_model(segmenter, args.model_out)
        save_model(classifier, args.classifier_out)
        print(f"wrote segmenter to {args.model_out}, classifier to {args.classifier_out}")
    return 0


def cmd_extract(parser, args) -> int:
    corpus = _require_corpus(parser, args)
    if args.layout == "off":
        corpus = [strip_layout(r) for r in corpus]
    predictions = {}
    if args.mode == "joint":
        model = _load_tagger(parser, args.model)
        if model.scheme is LabelScheme.SENTENCE_BI:
            raise DataError("joint extraction needs a bio or nti model")
        for region in corpus:
            predictions[region.region_id] = extract_joint(model, region)
    else:
        if not args.classifier:
            parser.error("--mode two-model requires --model and --classifier")
        segmenter = _load_tagger(parser, args.model, LabelScheme.SENTENCE_BI)
        classifier = _load_classifier(args.classifier)
        for region in corpus:
            predictions[region.region_id] = extract_two_model(segmenter, classifier, region)
    save_predictions(predictions, args.out)
    print(f"wrote {len(predictions)} prediction records to {args.out}")
    return 0


def cmd_eval(parser, args) -> int:
    corpus = _require_corpus(parser, args)
    predictions = load_predictions(args.predictions, corpus)
    report = evaluate_predictions(
        corpus,
        predictions,
        t=args.threshold,
        n_t=args.transposition,
        workers=args.workers,
    )
    text = report.to_json()
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


def cmd_bench(parser, args) -> int:
    corpus = _require_corpus(parser, args)
    joint_model = _load_tagger(parser, args.model)
    segmenter = _load_tagger(parser, args.segmenter, LabelScheme.SENTENCE_BI)
    classifier = _load_classifier(args.classifier)

    def joint(region, counters=None):
        return extract_joint(joint_model, region, counters)

    def two_model(region, counters=None):
        return extract_two_model(segmenter, classifier, region, counters)

    result = bench_mod.compare(joint, two_model, corpus, runs=args.runs, inner=args.inner)
    text = json.dumps(result, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


def cmd_stats(parser, args) -> int:
    corpus = _require_corpus(parser, args)
    print(json.dumps(summarize(corpus).as_dict(), indent=2))
    return 0


_COMMANDS = {
    "encode": cmd_encode,
    "decode": cmd_decode,
    "train": cmd_train,
    "extract": cmd_extract,
    "eval": cmd_eval,
    "bench": cmd_bench,
    "stats": cmd_stats,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](parser, args)
    except (DataError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
