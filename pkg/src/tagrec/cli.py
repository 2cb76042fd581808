"""Command line interface.

Subcommands: ``run`` (one experiment), ``sweep`` (one parameter, several
values), ``gen`` (synthetic corpus), ``split`` (persist a train/test split),
``cluster`` (persist a clustering dump). Exit codes: 0 success, 1 usage
error, 2 data error. A ``key=value`` config file can seed any run/sweep
flag; explicit flags override it.
"""

import argparse
import sys
from pathlib import Path

from .clustering import choose_k, coarse_cluster, write_clustering
from .corpus import (
    DataError,
    build_graph,
    filter_by_degree,
    read_triples,
    split_summary,
    temporal_split,
    write_summary,
    write_triples,
)
from .experiment import SWEEPABLE, ExperimentConfig, run_experiment, sweep
from .profiles import build_profiles
from .synthetic import SyntheticSpec, generate_synthetic

__all__ = ["main", "run_main"]

_CONFIG_KEYS = (
    "input",
    "mode",
    "degree_threshold",
    "split_ratio",
    "beta",
    "gamma",
    "avg_cluster_size",
    "iterations",
    "k_list",
    "seed",
    "output",
    "degree_mode",
    "timing_runs",
    "dump_ranklists",
)


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; we reserve 2 for data errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _parse_k_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if ".." in text:
        lo_text, hi_text = text.split("..", 1)
        lo, hi = int(lo_text), int(hi_text)
        if lo > hi:
            raise ValueError(f"bad k range {text!r}")
        return tuple(range(lo, hi + 1))
    return tuple(int(tok) for tok in text.split(",") if tok.strip())


def _add_experiment_flags(parser):
    parser.add_argument("--input", help="TSV corpus (user, item, tag, timestamp)")
    parser.add_argument("--mode", choices=["ucf", "fcum", "both"])
    parser.add_argument("--degree-threshold", type=int, dest="degree_threshold")
    parser.add_argument("--split-ratio", type=float, dest="split_ratio")
    parser.add_argument("--beta", type=float)
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--avg-cluster-size", type=int, dest="avg_cluster_size")
    parser.add_argument("--iterations", type=int)
    parser.add_argument("--k-list", dest="k_list", help="comma list or lo..hi range (default 1..20)")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--output", help="directory for report files")
    parser.add_argument("--degree-mode", choices=["triples", "neighbors"], dest="degree_mode")
    parser.add_argument("--timing-runs", type=int, dest="timing_runs",
                        help="timed repetitions per algorithm; the median is reported")
    parser.add_argument("--dump-ranklists", action="store_true", default=None,
                        dest="dump_ranklists", help="also write per-user ranklists to the output dir")
    parser.add_argument("--config", help="key=value file supplying defaults for the flags above")


def _read_config_file(path) -> dict:
    values = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise DataError(f"{path}: {exc}") from None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}: line {lineno}: expected key=value")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}: line {lineno}: unknown config key {key!r}")
        values[key] = value.strip()
    return values


def _parse_bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(text)


_COERCE = {
    "degree_threshold": int,
    "avg_cluster_size": int,
    "iterations": int,
    "seed": int,
    "timing_runs": int,
    "split_ratio": float,
    "beta": float,
    "gamma": float,
    "k_list": _parse_k_list,
    "dump_ranklists": _parse_bool,
}


def _build_config(args) -> ExperimentConfig:
    merged = {}
    if args.config:
        for key, raw in _read_config_file(args.config).items():
            coerce = _COERCE.get(key)
            try:
                merged[key] = coerce(raw) if coerce else raw
            except ValueError:
                raise ValueError(f"config key {key}: bad value {raw!r}") from None
    for key in _CONFIG_KEYS:
        if key == "k_list":
            if args.k_list is not None:
                merged["k_list"] = _parse_k_list(args.k_list)
        elif getattr(args, key, None) is not None:
            merged[key] = getattr(args, key)
    if "input" not in merged:
        raise ValueError("--input is required (flag or config file)")
    return ExperimentConfig(**merged)


def _print_summary(result):
    for mode, report in sorted(result.reports.items()):
        ks = [m.k for m in report.per_k]
        pick = 10 if 10 in ks else ks[-1]
        m = next(x for x in report.per_k if x.k == pick)
        t = report.timing
        print(
            f"{mode}: recall@{pick}={m.recall:.5f} precision@{pick}={m.precision:.5f} "
            f"f1@{pick}={m.f1:.5f} cluster={t['cluster_seconds']:.3f}s "
            f"score={t['score_seconds']:.3f}s total={t['total_seconds']:.3f}s"
        )
    if result.ratios is not None and result.ratios["total_seconds"] is not None:
        print(f"fcum/ucf total time ratio: {result.ratios['total_seconds']:.3f}")
    for path in result.written:
        print(f"wrote {path}")


def _cmd_run(args) -> int:
    result = run_experiment(_build_config(args))
    _print_summary(result)
    return 0


def _cmd_sweep(args) -> int:
    cfg = _build_config(args)
    if args.param not in SWEEPABLE:
        raise ValueError(f"--param must be one of {SWEEPABLE}")
    cast = int if args.param in ("iterations", "avg_cluster_size", "degree_threshold") else float
    try:
        values = [cast(tok) for tok in args.values.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"--values: expected comma-separated {cast.__name__}s") from None
    results = sweep(cfg, args.param, values)
    for value, result in zip(values, results):
        print(f"--- {args.param}={value}")
        _print_summary(result)
    return 0


def _cmd_gen(args) -> int:
    spec = SyntheticSpec(
        n_users=args.users,
        n_items=args.items,
        n_tags=args.tags,
        n_communities=args.communities,
        triples_per_user=args.triples_per_user,
        in_community_prob=args.in_community_prob,
        seed=args.seed,
    )
    path = generate_synthetic(spec, args.output)
    print(f"wrote {path} ({spec.n_users * spec.triples_per_user} records)")
    return 0


def _pipeline_front(args):
    graph = build_graph(read_triples(args.input))
    filtered = filter_by_degree(graph, args.degree_threshold, args.degree_mode)
    if filtered.n_triples == 0:
        raise DataError(
            f"degree threshold {args.degree_threshold} removed every triple; try a lower --degree-threshold"
        )
    split = temporal_split(filtered, args.split_ratio)
    return filtered, split


def _cmd_split(args) -> int:
    filtered, split = _pipeline_front(args)
    directory = Path(args.output)
    directory.mkdir(parents=True, exist_ok=True)
    write_triples(split.train.interactions(), directory / "train.tsv")
    write_triples(split.test_triples, directory / "test.tsv")
    write_summary(split_summary(filtered, split), directory / "summary.txt")
    for name in ("train.tsv", "test.tsv", "summary.txt"):
        print(f"wrote {directory / name}")
    return 0


def _cmd_cluster(args) -> int:
    _, split = _pipeline_front(args)
    profiles = build_profiles(split.train)
    k = choose_k(split.train.n_users, args.avg_cluster_size)
    clustering = coarse_cluster(split.train, profiles, k, args.iterations, args.gamma, args.seed)
    write_clustering(clustering, split.train, args.output)
    print(f"wrote {args.output} ({k} clusters, {clustering.nonempty_clusters()} non-empty)")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="tagrec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_run = sub.add_parser("run", help="run one experiment end to end")
    _add_experiment_flags(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="re-run an experiment over one parameter")
    _add_experiment_flags(p_sweep)
    p_sweep.add_argument("--param", required=True, help=f"one of {', '.join(SWEEPABLE)}")
    p_sweep.add_argument("--values", required=True, help="comma-separated values")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_gen = sub.add_parser("gen", help="generate a synthetic planted-community corpus")
    p_gen.add_argument("--output", required=True)
    p_gen.add_argument("--users", type=int, default=1600)
    p_gen.add_argument("--items", type=int, default=20000)
    p_gen.add_argument("--tags", type=int, default=5000)
    p_gen.add_argument("--communities", type=int, default=16)
    p_gen.add_argument("--triples-per-user", type=int, default=120, dest="triples_per_user")
    p_gen.add_argument("--in-community-prob", type=float, default=0.85, dest="in_community_prob")
    p_gen.add_argument("--seed", type=int, default=42)
    p_gen.set_defaults(func=_cmd_gen)

    for name, handler, out_help in (
        ("split", _cmd_split, "directory for train.tsv/test.tsv/summary.txt"),
        ("cluster", _cmd_cluster, "path for the user<TAB>cluster dump"),
    ):
        p = sub.add_parser(name, help=f"persist a {name} for a corpus")
        p.add_argument("--input", required=True)
        p.add_argument("--output", required=True, help=out_help)
        p.add_argument("--degree-threshold", type=int, default=5, dest="degree_threshold")
        p.add_argument("--degree-mode", choices=["triples", "neighbors"], default="triples",
                       dest="degree_mode")
        p.add_argument("--split-ratio", type=float, default=0.8, dest="split_ratio")
        if name == "cluster":
            p.add_argument("--gamma", type=float, default=0.5)
            p.add_argument("--avg-cluster-size", type=int, default=90, dest="avg_cluster_size")
            p.add_argument("--iterations", type=int, default=2)
            p.add_argument("--seed", type=int, default=42)
        p.set_defaults(func=handler)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit:
        raise
    except ValueError as exc:
        print(f"tagrec: error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"tagrec: data error: {exc}", file=sys.stderr)
        return 2


def run_main() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run_main()
