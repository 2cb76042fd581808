"""End-to-end experiment pipeline: ingest, filter, split, cluster, rank, evaluate.

``run_experiment`` executes the whole pipeline for one configuration. In
``mode="both"`` the baseline and the clustered recommender share one split
and one profile build, so their metrics and timings are directly
comparable; the combined report then also carries their ratios.
"""

import dataclasses
import json
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path

from .clustering import choose_k, cluster_tag_count, coarse_cluster
from .corpus import DataError, build_graph, filter_by_degree, read_triples, temporal_split
from .evaluate import EvalReport, metrics_at_k, report_dict, write_report
from .profiles import build_profiles
from .recommend import rank_fcum, rank_ucf, write_ranklists

__all__ = [
    "ExperimentConfig",
    "ExperimentResult",
    "run_experiment",
    "sweep",
    "SWEEPABLE",
    "ucf_scored_work",
    "fcum_scored_work",
]

MODES = ("ucf", "fcum", "both")
SWEEPABLE = ("iterations", "avg_cluster_size", "degree_threshold", "beta", "gamma")


@dataclass(frozen=True)
class ExperimentConfig:
    """Pipeline parameters; the defaults are the reference settings."""

    input: str
    mode: str = "both"
    degree_threshold: int = 5
    split_ratio: float = 0.8
    beta: float = 0.5
    gamma: float = 0.5
    avg_cluster_size: int = 90
    iterations: int = 2
    k_list: tuple[int, ...] = tuple(range(1, 21))
    seed: int = 42
    output: str | None = None
    degree_mode: str = "triples"
    timing_runs: int = 1
    dump_ranklists: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.degree_threshold < 0:
            raise ValueError("degree_threshold must be non-negative")
        if not 0.0 < self.split_ratio < 1.0:
            raise ValueError("split_ratio must be strictly between 0 and 1")
        for name in ("beta", "gamma"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")
        if self.avg_cluster_size < 1 or self.iterations < 1 or self.timing_runs < 1:
            raise ValueError("avg_cluster_size, iterations and timing_runs must be positive")
        ks = tuple(sorted(set(int(k) for k in self.k_list)))
        if not ks or ks[0] < 1:
            raise ValueError("k_list must contain positive integers")
        object.__setattr__(self, "k_list", ks)

    def echo(self) -> dict:
        out = dataclasses.asdict(self)
        out["input"] = str(out["input"])
        out["output"] = None if out["output"] is None else str(out["output"])
        out["k_list"] = list(out["k_list"])
        return out


@dataclass
class ExperimentResult:
    """Per-mode reports, plus fcum/ucf ratios when both modes ran."""

    reports: dict[str, EvalReport]
    ratios: dict | None = None
    written: list[Path] = field(default_factory=list)


def ucf_scored_work(train) -> int:
    """Work counter for the baseline: users * (users * items + tags)."""
    return train.n_users * (train.n_users * train.n_items + train.n_tags)


def fcum_scored_work(clustering, train) -> int:
    """Per-cluster work counter summed over non-empty clusters."""
    total = 0
    for j, members in enumerate(clustering.user_clusters):
        n_j = len(members)
        if n_j == 0:
            continue
        total += n_j * (n_j * len(clustering.item_clusters[j]) + cluster_tag_count(clustering, train, j))
    return total


def _run_ucf(split, profiles, cfg, kmax):
    samples = []
    ranklists = None
    for i in range(cfg.timing_runs):
        start = time.perf_counter()
        result = rank_ucf(split.train, profiles, cfg.beta, kmax)
        total = time.perf_counter() - start
        samples.append(total)
        if i == 0:
            ranklists = result
    per_k = [metrics_at_k(ranklists, split.test_sets, k) for k in cfg.k_list]
    train = split.train
    report = EvalReport(
        mode="ucf",
        per_k=per_k,
        timing={
            "cluster_seconds": 0.0,
            "score_seconds": statistics.median(samples),
            "total_seconds": statistics.median(samples),
            "timing_runs": cfg.timing_runs,
        },
        work={
            "users": train.n_users,
            "items": train.n_items,
            "tags": train.n_tags,
            "scored_work": ucf_scored_work(train),
            "ucf_scored_work": ucf_scored_work(train),
        },
        config=dict(cfg.echo(), k_clusters=None),
    )
    return report, ranklists


def _run_fcum(split, profiles, cfg, kmax):
    train = split.train
    k_clusters = choose_k(train.n_users, cfg.avg_cluster_size)
    samples = []
    clustering = None
    ranklists = None
    for i in range(cfg.timing_runs):
        start = time.perf_counter()
        clust = coarse_cluster(train, profiles, k_clusters, cfg.iterations, cfg.gamma, cfg.seed)
        mid = time.perf_counter()
        result = rank_fcum(clust, train, profiles, cfg.beta, kmax)
        end = time.perf_counter()
        samples.append((mid - start, end - mid, end - start))
        if i == 0:
            clustering, ranklists = clust, result
    per_k = [metrics_at_k(ranklists, split.test_sets, k) for k in cfg.k_list]
    report = EvalReport(
        mode="fcum",
        per_k=per_k,
        timing={
            "cluster_seconds": statistics.median(s[0] for s in samples),
            "score_seconds": statistics.median(s[1] for s in samples),
            "total_seconds": statistics.median(s[2] for s in samples),
            "timing_runs": cfg.timing_runs,
        },
        work={
            "users": train.n_users,
            "items": train.n_items,
            "tags": train.n_tags,
            "scored_work": fcum_scored_work(clustering, train),
            "ucf_scored_work": ucf_scored_work(train),
            "clusters": clustering.k,
            "nonempty_clusters": clustering.nonempty_clusters(),
            "member_total": sum(len(m) for m in clustering.user_clusters),
            "clustering_coordinate_ops": clustering.coordinate_ops,
        },
        config=dict(cfg.echo(), k_clusters=k_clusters),
    )
    return report, clustering, ranklists


def _ratios(reports, k_list) -> dict:
    ucf, fcum = reports["ucf"], reports["fcum"]
    ucf_total = ucf.timing["total_seconds"]
    out = {
        "total_seconds": (fcum.timing["total_seconds"] / ucf_total) if ucf_total > 0 else None,
        "recall": {},
        "precision": {},
        "f1": {},
    }
    by_k_ucf = {m.k: m for m in ucf.per_k}
    by_k_fcum = {m.k: m for m in fcum.per_k}
    for k in k_list:
        mu, mf = by_k_ucf[k], by_k_fcum[k]
        for name in ("recall", "precision", "f1"):
            base = getattr(mu, name)
            out[name][str(k)] = (getattr(mf, name) / base) if base > 0 else None
    return out


def prepare_corpus(cfg: ExperimentConfig):
    """Shared front half of the pipeline: parse, build, filter, split, profile."""
    interactions = read_triples(cfg.input)
    graph = build_graph(interactions)
    filtered = filter_by_degree(graph, cfg.degree_threshold, cfg.degree_mode)
    if filtered.n_triples == 0:
        raise DataError(
            f"degree threshold {cfg.degree_threshold} removed every triple; try a lower --degree-threshold"
        )
    split = temporal_split(filtered, cfg.split_ratio)
    profiles = build_profiles(split.train)
    return filtered, split, profiles


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Run the configured pipeline and (optionally) write the reports.

    Returns one report per requested mode; with ``mode="both"`` the result
    also carries fcum/ucf timing and metric ratios, and both algorithms see
    the identical split and profiles.
    """
    _, split, profiles = prepare_corpus(cfg)
    kmax = max(cfg.k_list)

    reports: dict[str, EvalReport] = {}
    ranklists_by_mode = {}
    if cfg.mode in ("ucf", "both"):
        reports["ucf"], ranklists_by_mode["ucf"] = _run_ucf(split, profiles, cfg, kmax)
    if cfg.mode in ("fcum", "both"):
        reports["fcum"], _, ranklists_by_mode["fcum"] = _run_fcum(split, profiles, cfg, kmax)

    ratios = _ratios(reports, cfg.k_list) if len(reports) == 2 else None
    result = ExperimentResult(reports=reports, ratios=ratios)

    if cfg.output is not None:
        directory = Path(cfg.output)
        directory.mkdir(parents=True, exist_ok=True)
        for mode, report in reports.items():
            result.written.extend(write_report(report, directory, mode))
        if cfg.dump_ranklists:
            for mode, ranklists in ranklists_by_mode.items():
                path = directory / f"{mode}.ranklists.tsv"
                write_ranklists(ranklists, split.train, path)
                result.written.append(path)
        if ratios is not None:
            metric_ratios = {k: v for k, v in ratios.items() if k != "total_seconds"}
            combined = {
                "config": cfg.echo(),
                "ucf": _strip_timing(reports["ucf"]),
                "fcum": _strip_timing(reports["fcum"]),
                "ratios": metric_ratios,
                "timing": {
                    "ucf": {k: round(v, 3) for k, v in reports["ucf"].timing.items()},
                    "fcum": {k: round(v, 3) for k, v in reports["fcum"].timing.items()},
                    "total_seconds_ratio": ratios["total_seconds"],
                },
            }
            path = directory / "combined.json"
            path.write_text(json.dumps(combined, indent=2, sort_keys=True) + "\n", encoding="utf-8")
            result.written.append(path)
    return result


def _strip_timing(report: EvalReport) -> dict:
    doc = report_dict(report)
    doc.pop("timing", None)
    return doc


def sweep(cfg: ExperimentConfig, param: str, values) -> list[ExperimentResult]:
    """Re-run the experiment once per value of one swept parameter.

    Everything else, including the seed, stays fixed. Individual runs do not
    write files; when ``cfg.output`` is set a combined sweep report keyed by
    value is written instead.
    """
    if param not in SWEEPABLE:
        raise ValueError(f"sweep parameter must be one of {SWEEPABLE}, got {param!r}")
    values = list(values)
    if not values:
        raise ValueError("sweep needs at least one value")

    results = []
    for value in values:
        run_cfg = dataclasses.replace(cfg, **{param: value, "output": None})
        results.append(run_experiment(run_cfg))

    if cfg.output is not None:
        directory = Path(cfg.output)
        directory.mkdir(parents=True, exist_ok=True)
        doc = {
            "param": param,
            "values": [_json_value(v) for v in values],
            "config": cfg.echo(),
            "runs": {
                str(value): {
                    mode: _strip_timing(report) for mode, report in result.reports.items()
                }
                | ({"ratios": result.ratios} if result.ratios else {})
                for value, result in zip(values, results)
            },
            "timing": {
                str(value): {
                    mode: {k: round(v, 3) for k, v in report.timing.items()}
                    for mode, report in result.reports.items()
                }
                for value, result in zip(values, results)
            },
        }
        path = directory / "sweep.json"
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        results[0].written.append(path)
    return results


def _json_value(v):
    return v if isinstance(v, (int, float, str)) else str(v)
