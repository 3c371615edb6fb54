"""Latency harness for comparing extraction modes.

The interesting quantity is not an absolute millisecond figure (that depends
on hardware and model size) but the mechanism: joint extraction runs one
tagger invocation per window whatever the region contains, while the
two-model baseline adds one classifier invocation per predicted sentence,
so its latency grows with sentence count. ``measure`` times one extractor;
``compare`` runs both and reports the ratio.

Timed sections are single-threaded; invocation counts come from a separate
counted pass so instrumentation never sits inside a timed region.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field

from .document import WritingRegion
from .taggers import InvocationCounters


@dataclass(frozen=True)
class LatencyReport:
    mode: str
    runs: int
    mean_ms: float
    median_ms: float
    p95_ms: float
    per_run_mean_ms: tuple[float, ...]
    tagger_calls: int
    classifier_calls: int
    by_sentence_count: dict[int, float] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "runs": self.runs,
            "mean_ms": round(self.mean_ms, 4),
            "median_ms": round(self.median_ms, 4),
            "p95_ms": round(self.p95_ms, 4),
            "per_run_mean_ms": [round(v, 4) for v in self.per_run_mean_ms],
            "invocations": {
                "tagger": self.tagger_calls,
                "classifier": self.classifier_calls,
            },
            "by_sentence_count": {
                str(k): round(v, 4) for k, v in sorted(self.by_sentence_count.items())
            },
        }


def _percentile(values: list[float], q: float) -> float:
    ordered = sorted(values)
    idx = min(len(ordered) - 1, max(0, round(q * (len(ordered) - 1))))
    return ordered[idx]


def measure(
    extractor,
    corpus: list[WritingRegion],
    runs: int = 5,
    inner: int = 1,
    mode: str = "extractor",
) -> LatencyReport:
    """Time ``extractor(region)`` over the corpus.

    One warm-up pass runs first. Each run measures every region ``inner``
    times and records the per-region mean; the reported mean is the average
    of per-run means, mirroring a mean-latency-per-sample protocol averaged
    over several runs. Invocation counts come from one instrumented pass.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    for region in corpus:
        extractor(region)

    counters = InvocationCounters()
    pred_sentences: dict[str, int] = {}
    for region in corpus:
        spans = extractor(region, counters)
        pred_sentences[region.region_id] = len(spans)

    per_region: dict[str, list[float]] = {r.region_id: [] for r in corpus}
    run_means = []
    for _ in range(runs):
        total = 0.0
        for region in corpus:
            t0 = time.perf_counter()
            for _ in range(inner):
                extractor(region)
            elapsed = (time.perf_counter() - t0) / inner * 1000.0
            per_region[region.region_id].append(elapsed)
            total += elapsed
        run_means.append(total / len(corpus))

    region_means = [statistics.mean(v) for v in per_region.values()]
    buckets: dict[int, list[float]] = {}
    for region in corpus:
        buckets.setdefault(pred_sentences[region.region_id], []).append(
            statistics.mean(per_region[region.region_id])
        )
    return LatencyReport(
        mode=mode,
        runs=runs,
        mean_ms=statistics.mean(run_means),
        median_ms=statistics.median(region_means),
        p95_ms=_percentile(region_means, 0.95),
        per_run_mean_ms=tuple(run_means),
        tagger_calls=counters.tagger_calls,
        classifier_calls=counters.classifier_calls,
        by_sentence_count={k: statistics.mean(v) for k, v in buckets.items()},
    )


def compare(
    joint_extractor,
    two_model_extractor,
    corpus: list[WritingRegion],
    runs: int = 5,
    inner: int = 1,
) -> dict:
    """Benchmark both modes side by side; ratio > 1 means the two-model
    baseline is slower."""
    joint = measure(joint_extractor, corpus, runs, inner, mode="joint")
    two = measure(two_model_extractor, corpus, runs, inner, mode="two-model")
    return {
        "joint": joint.to_json_dict(),
        "two_model": two.to_json_dict(),
        "two_model_over_joint": round(two.mean_ms / joint.mean_ms, 4),
    }
