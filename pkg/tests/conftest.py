import pathlib

import pytest

from slate.dataset import load_corpus
from slate.document import NONTASK, TASK, SentenceSpan, WritingRegion

REPO_ROOT = pathlib.Path(__file__).resolve().parents[1]
CORPUS_PATH = REPO_ROOT / "data" / "corpus.jsonl"


@pytest.fixture(scope="session")
def corpus_path():
    return CORPUS_PATH


@pytest.fixture(scope="session")
def train_corpus():
    return load_corpus(CORPUS_PATH, "train")


@pytest.fixture(scope="session")
def test_corpus():
    return load_corpus(CORPUS_PATH, "test")


def region_of(texts, sentences=(), line_breaks=(), bullets=(), region_id="r0", doc_id="d0"):
    """Shorthand region constructor for tests."""
    return WritingRegion.build(
        region_id, doc_id, texts,
        line_breaks=line_breaks, bullets=bullets, sentences=sentences,
    )


def span(start, end, label=None, context=False):
    return SentenceSpan(start, end, label, context)


def task(start, end, context=False):
    return SentenceSpan(start, end, TASK, context)


def nontask(start, end, context=False):
    return SentenceSpan(start, end, NONTASK, context)
