"""Recall/precision/F1 at k plus wall-clock timing helpers and the report types."""

import json
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path

__all__ = [
    "MetricsAtK",
    "EvalReport",
    "recall_at_k",
    "precision_at_k",
    "f1_at_k",
    "metrics_at_k",
    "run_timed",
    "timed_median",
    "report_text",
    "report_dict",
    "write_report",
]


@dataclass(frozen=True)
class MetricsAtK:
    k: int
    recall: float
    precision: float
    f1: float


def _hits(ranklist, test_set, k) -> int:
    count = 0
    for item, _ in ranklist.entries[:k]:
        if item in test_set.items:
            count += 1
    return count


def _check_inputs(ranklists, test_sets, k):
    if k < 1:
        raise ValueError("k must be at least 1")
    for u in ranklists:
        ts = test_sets.get(u)
        if ts is None or len(ts) == 0:
            raise ValueError(f"user {u} has an empty or missing test set")


def recall_at_k(ranklists, test_sets, k: int) -> float:
    """Mean over users of |top-k hits| / |test set|.

    Users whose ranklist is shorter than k are scored on what they have.
    """
    _check_inputs(ranklists, test_sets, k)
    total = 0.0
    users = sorted(ranklists)
    for u in users:
        total += _hits(ranklists[u], test_sets[u], k) / len(test_sets[u])
    return total / len(users)


def precision_at_k(ranklists, test_sets, k: int) -> float:
    """Total top-k hits divided by (number of users * k).

    The denominator stays k even when fewer than k items were recommendable.
    """
    _check_inputs(ranklists, test_sets, k)
    hits = 0
    for u in ranklists:
        hits += _hits(ranklists[u], test_sets[u], k)
    return hits / (len(ranklists) * k)


def f1_at_k(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall; 0 when both are 0."""
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def metrics_at_k(ranklists, test_sets, k: int) -> MetricsAtK:
    r = recall_at_k(ranklists, test_sets, k)
    p = precision_at_k(ranklists, test_sets, k)
    return MetricsAtK(k=k, recall=r, precision=p, f1=f1_at_k(p, r))


def run_timed(fn):
    """Run ``fn()`` and return (result, wall seconds on the monotonic clock)."""
    start = time.perf_counter()
    result = fn()
    return result, time.perf_counter() - start


def timed_median(fn, runs: int = 3):
    """Run ``fn()`` ``runs`` times; return (first result, median wall seconds)."""
    if runs < 1:
        raise ValueError("runs must be at least 1")
    result = None
    times = []
    for i in range(runs):
        out, elapsed = run_timed(fn)
        if i == 0:
            result = out
        times.append(elapsed)
    return result, statistics.median(times)


@dataclass
class EvalReport:
    """Per-k metrics plus timing, work counters, and the configuration echo."""

    mode: str
    per_k: list[MetricsAtK]
    timing: dict[str, float] = field(default_factory=dict)
    work: dict[str, int] = field(default_factory=dict)
    config: dict = field(default_factory=dict)


def report_text(report: EvalReport) -> str:
    """One record per k (k, recall, precision, f1), metrics at 5 decimals."""
    lines = [f"# mode={report.mode}", "# k\trecall\tprecision\tf1"]
    for m in report.per_k:
        lines.append(f"{m.k}\t{m.recall:.5f}\t{m.precision:.5f}\t{m.f1:.5f}")
    return "\n".join(lines) + "\n"


def report_dict(report: EvalReport) -> dict:
    """JSON-ready document; metrics at 5 decimals, timing at millisecond resolution."""
    return {
        "mode": report.mode,
        "config": report.config,
        "metrics": [
            {
                "k": m.k,
                "recall": round(m.recall, 5),
                "precision": round(m.precision, 5),
                "f1": round(m.f1, 5),
            }
            for m in report.per_k
        ],
        "work": report.work,
        "timing": {key: round(value, 3) for key, value in report.timing.items()},
    }


def write_report(report: EvalReport, directory, stem: str) -> list[Path]:
    """Write ``<stem>.report.txt`` and ``<stem>.report.json``; return the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    txt_path = directory / f"{stem}.report.txt"
    json_path = directory / f"{stem}.report.json"
    txt_path.write_text(report_text(report), encoding="utf-8")
    json_path.write_text(
        json.dumps(report_dict(report), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return [txt_path, json_path]
