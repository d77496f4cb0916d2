"""Command-line front end.

Subcommands: detect (full pipeline), curvature, flow, badedges, sbm,
bench. Every command writes its CSV/JSON reports plus a manifest.json
echoing the complete configuration into the output directory, and fails
with a single machine-parseable `error: <Class>: <message>` line on any
toolkit error.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import __version__
from .curvature import curvature_map
from .datasets import FIXTURES, is_fixture, load_fixture
from .errors import RicciFlowError
from .flow import VARIANTS, FlowConfig, detect_bad_edges, run_flow
from .io import (
    dataset_stats,
    load_dataset,
    make_manifest,
    write_badedge_csv,
    write_curvature_csv,
    write_edge_list,
    write_histogram_csv,
    write_json,
    write_partition,
    write_suite_csv,
    write_suite_raw_csv,
    write_sweep_csv,
    write_trajectory_csv,
)
from .sbm import SbmParams, run_suite, sbm_generate, suite_d1, suite_d2
from .surgery import best_partition, sweep


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RicciFlowError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ricciflow",
        description="Weighted-graph community detection via discrete Ricci flow",
    )
    parser.add_argument("--version", action="version", version=f"ricciflow {__version__}")
    sub = parser.add_subparsers(required=True)

    p = sub.add_parser("detect", help="flow + surgery sweep + best partition")
    _data_flags(p)
    _flow_flags(p)
    _sweep_flags(p)
    _out_flag(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("curvature", help="per-edge curvature dump")
    _data_flags(p)
    p.add_argument("--method", choices=["star", "ollivier"], default="star")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--histogram", action="store_true",
                   help="also write kappa/weight histogram CSVs")
    _out_flag(p)
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("flow", help="run a flow and dump the trajectory")
    _data_flags(p)
    _flow_flags(p)
    _out_flag(p)
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("badedges", help="bad-edge diagnostics for a flow run")
    _data_flags(p)
    _flow_flags(p)
    _out_flag(p)
    p.set_defaults(func=cmd_badedges)

    p = sub.add_parser("sbm", help="generate a stochastic block model graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p-intra", type=float, required=True)
    p.add_argument("--p-inter", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    _out_flag(p)
    p.set_defaults(func=cmd_sbm)

    p = sub.add_parser("bench", help="run a D1/D2 SBM benchmark suite")
    p.add_argument("--suite", choices=["d1", "d2"], required=True)
    p.add_argument("--methods", default="rho,rhon",
                   help="comma-separated flow variants (default rho,rhon)")
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--cells", default=None,
                   help="restrict to these cells, e.g. 0.01,0.02 (d1) or 2,3 (d2)")
    _flow_flags(p)
    _sweep_flags(p)
    _out_flag(p)
    p.set_defaults(func=cmd_bench)
    return parser


def _data_flags(p):
    p.add_argument("--data", required=True,
                   help=f"edge-list path or fixture name {sorted(FIXTURES)}")
    p.add_argument("--truth", default=None, help="label file path")


def _flow_flags(p):
    p.add_argument("--variant", choices=list(VARIANTS), default="rhon")
    p.add_argument("--step", type=float, default=0.1, help="flow step size s")
    p.add_argument("--iters", type=int, default=30, help="number of iterations T")
    p.add_argument("--alpha", type=float, default=0.5,
                   help="laziness for the Ollivier variants")
    p.add_argument("--merge-threshold", type=float, default=1e-3)
    p.add_argument("--enforce-bounds", action="store_true", default=None,
                   help="reject steps outside the variant's theoretical range")


def _sweep_flags(p):
    p.add_argument("--gamma", type=float, default=1.0, help="modularity resolution")
    p.add_argument("--cutoff-step", type=float, default=0.01)
    p.add_argument("--score-on", choices=["original", "surgered"], default="original")


def _out_flag(p):
    p.add_argument("--out", type=Path, default=Path("ricciflow_out"))


def _load(args):
    if is_fixture(args.data):
        g, truth = load_fixture(args.data)
        if args.truth is not None:
            _, truth = load_dataset(
                _fixture_edge_path(args.data), args.truth
            )
    else:
        g, truth = load_dataset(args.data, args.truth)
    return g, truth


def _fixture_edge_path(name):
    from .datasets import DATA_DIR

    return DATA_DIR / FIXTURES[name][0]


def _flow_config(args) -> FlowConfig:
    return FlowConfig(
        variant=args.variant,
        step=args.step,
        iterations=args.iters,
        alpha=args.alpha,
        enforce_theoretical_step=args.enforce_bounds,
        merge_threshold=args.merge_threshold,
    )


def _config_echo(args) -> dict:
    skip = {"func", "out"}
    echo = {k: v for k, v in vars(args).items() if k not in skip}
    echo["out"] = str(args.out)
    return echo


def cmd_detect(args) -> int:
    t0 = time.perf_counter()
    g, truth = _load(args)
    cfg = _flow_config(args)
    stats = dataset_stats(g, truth)
    t1 = time.perf_counter()
    traj, flowed = run_flow(g, cfg)
    t2 = time.perf_counter()
    report = sweep(
        flowed, g, truth,
        step=args.cutoff_step, gamma=args.gamma,
        score_on=args.score_on, flow_config=cfg,
    )
    part = best_partition(report, "q")
    t3 = time.perf_counter()

    out = args.out
    write_sweep_csv(out / "sweep.csv", report)
    write_partition(out / "partition.txt", part)
    summary = {
        "dataset": stats,
        "peak_q": report.peak("q"),
        "peak_ari": report.peak("ari") if truth is not None else None,
        "peak_nmi": report.peak("nmi") if truth is not None else None,
        "best_by_q": _record_dict(report, report.best_by_q),
        "best_by_ari": (
            _record_dict(report, report.best_by_ari) if truth is not None else None
        ),
        "bad_edges": len(traj.bad_edges),
        "edges": g.m,
    }
    write_json(out / "summary.json", summary)
    timings = {
        "load": t1 - t0,
        "flow": t2 - t1,
        "sweep": t3 - t2,
    }
    write_json(out / "manifest.json", make_manifest("detect", _config_echo(args), timings))

    print(f"nodes={stats['nodes']} edges={stats['edges']} variant={cfg.variant}")
    line = f"peak Q={summary['peak_q']!r}"
    if truth is not None:
        line += f" ARI={summary['peak_ari']!r} NMI={summary['peak_nmi']!r}"
    print(line)
    return 0


def _record_dict(report, idx) -> dict:
    r = report.records[idx]
    return {
        "cutoff": r.cutoff,
        "removed_edges": r.removed_edges,
        "components": r.components,
        "q": r.q,
        "ari": r.ari,
        "nmi": r.nmi,
    }


def cmd_curvature(args) -> int:
    t0 = time.perf_counter()
    g, _ = _load(args)
    cmap = curvature_map(g, method=args.method, alpha=args.alpha)
    out = args.out
    write_curvature_csv(out / "curvature.csv", g, cmap)
    if args.histogram:
        write_histogram_csv(out / "histogram_kappa.csv", cmap.kappa)
        write_histogram_csv(out / "histogram_weight.csv", g.weights)
    timings = {"total": time.perf_counter() - t0}
    write_json(out / "manifest.json", make_manifest("curvature", _config_echo(args), timings))
    print(f"edges={g.m} kappa in [{cmap.kappa.min()!r}, {cmap.kappa.max()!r}]")
    return 0


def cmd_flow(args) -> int:
    t0 = time.perf_counter()
    g, _ = _load(args)
    cfg = _flow_config(args)
    traj, flowed = run_flow(g, cfg)
    out = args.out
    write_trajectory_csv(out / "trajectory.csv", g, traj)
    write_edge_list(out / "final_weights.edges", flowed)
    timings = {"total": time.perf_counter() - t0}
    write_json(out / "manifest.json", make_manifest("flow", _config_echo(args), timings))
    w = flowed.weights
    print(f"steps={traj.steps} final weights in [{w.min()!r}, {w.max()!r}]")
    return 0


def cmd_badedges(args) -> int:
    t0 = time.perf_counter()
    g, _ = _load(args)
    cfg = _flow_config(args)
    traj, _ = run_flow(g, cfg)
    report = detect_bad_edges(traj, g)
    out = args.out
    write_badedge_csv(out / "badedges.csv", g, report)
    timings = {"total": time.perf_counter() - t0}
    write_json(out / "manifest.json", make_manifest("badedges", _config_echo(args), timings))
    by_cond = report.count_by_condition()
    print(
        f"bad edges: {report.count}/{report.total_edges} "
        f"({100.0 * report.fraction:.1f}%) I={by_cond['I']} II={by_cond['II']}"
    )
    return 0


def cmd_sbm(args) -> int:
    params = SbmParams(
        n=args.n, k=args.k, p_intra=args.p_intra, p_inter=args.p_inter, seed=args.seed
    )
    g, truth = sbm_generate(params)
    out = args.out
    write_edge_list(out / "sbm.edges", g)
    write_partition(out / "sbm.labels", truth)
    write_json(out / "manifest.json", make_manifest("sbm", _config_echo(args)))
    print(f"wrote n={g.n} m={g.m} graph to {out}")
    return 0


def cmd_bench(args) -> int:
    t0 = time.perf_counter()
    methods = []
    for name in args.methods.split(","):
        methods.append(
            FlowConfig(
                variant=name.strip(),
                step=args.step,
                iterations=args.iters,
                alpha=args.alpha,
                enforce_theoretical_step=args.enforce_bounds,
                merge_threshold=args.merge_threshold,
            )
        )
    if args.suite == "d1":
        kwargs = {"seed": args.seed, "repetitions": args.reps}
        if args.cells:
            kwargs["p_inter_values"] = [float(c) for c in args.cells.split(",")]
        suite = suite_d1(**kwargs)
    else:
        kwargs = {"seed": args.seed, "repetitions": args.reps}
        if args.cells:
            kwargs["k_values"] = [int(c) for c in args.cells.split(",")]
        suite = suite_d2(**kwargs)
    result = run_suite(
        suite, methods,
        cutoff_step=args.cutoff_step, gamma=args.gamma, workers=args.workers,
    )
    out = args.out
    write_suite_csv(out / f"suite_{suite.suite_id}.csv", result)
    write_suite_raw_csv(out / f"suite_{suite.suite_id}_raw.csv", result)
    timings = {"total": time.perf_counter() - t0}
    write_json(out / "manifest.json", make_manifest("bench", _config_echo(args), timings))
    for row in result.aggregate():
        print(
            f"{row['suite']} {row['param']} {row['method']} "
            f"{row['metric']}={row['mean']:.4f} (sd {row['stddev']:.4f})"
        )
    if result.failures:
        for cell, err in result.failures.items():
            print(f"cell {cell} FAILED: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
