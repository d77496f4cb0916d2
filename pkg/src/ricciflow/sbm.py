"""Stochastic block model generation and the D1/D2 benchmark harness.

Stream protocol (kept deliberately boring so results reproduce across
implementations): node i belongs to block i mod-free by even split with
the n mod k remainder handed one-per-block to the lowest-indexed blocks;
unordered pairs (i, j), i < j, are enumerated in lexicographic order and
each pair becomes an edge when a PCG64 uniform double (seeded by
``numpy.random.SeedSequence(seed)``) falls below its block probability.
All edges carry unit weight.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DegenerateParams
from .flow import FlowConfig, run_flow
from .graph import Partition, WeightedGraph, connected_components
from .surgery import sweep

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SbmParams:
    n: int
    k: int
    p_intra: float
    p_inter: float
    seed: int = 0
    # fixed by scope: undirected simple graphs only
    directed: bool = False
    selfloops: bool = False

    def __post_init__(self):
        if self.directed or self.selfloops:
            raise DegenerateParams("only undirected simple graphs are supported")
        if not 1 <= self.k <= self.n:
            raise DegenerateParams(f"need n >= k >= 1, got n={self.n}, k={self.k}")
        if not 0.0 < self.p_intra <= 1.0:
            raise DegenerateParams(f"p_intra must lie in (0, 1], got {self.p_intra!r}")
        if not 0.0 <= self.p_inter < 1.0:
            raise DegenerateParams(f"p_inter must lie in [0, 1), got {self.p_inter!r}")
        if not self.p_intra > self.p_inter:
            raise DegenerateParams(
                "community structure needs p_intra > p_inter, got "
                f"{self.p_intra!r} <= {self.p_inter!r}"
            )


def block_assignment(n: int, k: int) -> np.ndarray:
    """Block index per node: sizes as even as possible, remainder nodes
    assigned one-per-block to the lowest-indexed blocks."""
    base, extra = divmod(n, k)
    sizes = np.full(k, base, dtype=np.int64)
    sizes[:extra] += 1
    return np.repeat(np.arange(k), sizes)


def sbm_generate(params: SbmParams) -> tuple[WeightedGraph, Partition]:
    """Sample one SBM graph plus its ground-truth block partition.

    (params, seed) fully determine the output. Disconnected samples are
    kept as-is (a warning is logged): the flows are defined per component
    and discarding samples would bias benchmark averages.
    """
    n, k = params.n, params.k
    blocks = block_assignment(n, k)
    iu, jv = np.triu_indices(n, k=1)
    prob = np.where(blocks[iu] == blocks[jv], params.p_intra, params.p_inter)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(params.seed)))
    mask = rng.random(len(iu)) < prob
    eu = iu[mask]
    ev = jv[mask]
    g = WeightedGraph(range(n), eu, ev, np.ones(len(eu)))
    truth = Partition(range(n), blocks)
    if not g.is_connected():
        log.warning(
            "SBM sample (n=%d, k=%d, seed=%s) is disconnected; flows run per component",
            n, k, params.seed,
        )
    return g, truth


@dataclass(frozen=True)
class SbmCell:
    label: str
    params: SbmParams


@dataclass(frozen=True)
class BenchSuite:
    suite_id: str
    cells: tuple[SbmCell, ...]
    repetitions: int = 10
    base_seed: int = 0


def suite_d1(
    p_inter_values=(0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.10),
    n: int = 500,
    k: int = 2,
    p_intra: float = 0.15,
    seed: int = 0,
    repetitions: int = 10,
) -> BenchSuite:
    """Fixed-size suite probing inter-community density."""
    cells = tuple(
        SbmCell(
            label=f"p_inter={p:g}",
            params=SbmParams(n=n, k=k, p_intra=p_intra, p_inter=p, seed=seed),
        )
        for p in p_inter_values
    )
    return BenchSuite("D1", cells, repetitions, seed)


def suite_d2(
    k_values=(2, 3, 4, 5, 6, 7, 8),
    block_size: int = 250,
    p_intra: float = 0.15,
    p_inter: float = 0.05,
    seed: int = 0,
    repetitions: int = 10,
) -> BenchSuite:
    """Scale suite: k blocks of 250 nodes, so n runs 500..2000 with k."""
    cells = tuple(
        SbmCell(
            label=f"k={k}",
            params=SbmParams(
                n=block_size * k, k=k, p_intra=p_intra, p_inter=p_inter, seed=seed
            ),
        )
        for k in k_values
    )
    return BenchSuite("D2", cells, repetitions, seed)


@dataclass(frozen=True)
class RunRow:
    """Peak metrics of one (cell, method, repetition) pipeline run."""

    suite: str
    cell: str
    method: str
    rep: int
    seed: int
    q: float
    ari: float
    nmi: float
    seconds: float


@dataclass
class SuiteResult:
    suite: str
    rows: list[RunRow] = field(default_factory=list)
    failures: dict[str, str] = field(default_factory=dict)  # cell label -> error

    def aggregate(self) -> list[dict]:
        """Mean/stddev per (cell, method, metric), in suite order."""
        out = []
        seen = []
        for row in self.rows:
            key = (row.cell, row.method)
            if key not in seen:
                seen.append(key)
        for cell, method in seen:
            sel = [r for r in self.rows if r.cell == cell and r.method == method]
            for metric in ("q", "ari", "nmi"):
                vals = np.array([getattr(r, metric) for r in sel])
                out.append(
                    {
                        "suite": self.suite,
                        "param": cell,
                        "method": method,
                        "metric": metric,
                        "mean": float(vals.mean()),
                        "stddev": float(vals.std(ddof=0)),
                    }
                )
        return out


def _rep_seed(base_seed: int, cell_index: int, rep: int) -> int:
    """Derived per-repetition seed; documented, portable stream split."""
    ss = np.random.SeedSequence([base_seed, cell_index, rep])
    return int(ss.generate_state(1, dtype=np.uint32)[0])


def _method_labels(methods) -> list[tuple[str, FlowConfig]]:
    labels = []
    counts: dict[str, int] = {}
    for cfg in methods:
        base = cfg.variant
        counts[base] = counts.get(base, 0) + 1
        labels.append((base if counts[base] == 1 else f"{base}#{counts[base]}", cfg))
    return labels


def _run_one(args) -> RunRow:
    suite_id, cell_label, method_label, cfg, params, rep, cutoff_step, gamma = args
    t0 = time.perf_counter()
    g, truth = sbm_generate(params)
    traj, flowed = run_flow(g, cfg)
    report = sweep(flowed, g, truth, step=cutoff_step, gamma=gamma, flow_config=cfg)
    return RunRow(
        suite=suite_id,
        cell=cell_label,
        method=method_label,
        rep=rep,
        seed=params.seed,
        q=report.peak("q"),
        ari=report.peak("ari"),
        nmi=report.peak("nmi"),
        seconds=time.perf_counter() - t0,
    )


def run_suite(
    suite: BenchSuite,
    methods,
    cutoff_step: float = 0.01,
    gamma: float = 1.0,
    workers: int = 1,
) -> SuiteResult:
    """Run every (cell, method, repetition) job and aggregate peaks.

    Jobs are independent; ``workers > 1`` fans them out over processes.
    A failing cell is recorded in ``failures`` and does not poison the
    other cells.
    """
    labeled = _method_labels(methods)
    jobs = []
    for ci, cell in enumerate(suite.cells):
        for rep in range(suite.repetitions):
            params = replace(cell.params, seed=_rep_seed(suite.base_seed, ci, rep))
            for mlabel, cfg in labeled:
                jobs.append(
                    (suite.suite_id, cell.label, mlabel, cfg, params, rep,
                     cutoff_step, gamma)
                )
    result = SuiteResult(suite=suite.suite_id)
    if workers <= 1:
        for job in jobs:
            _collect(result, job)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for job, row in zip(jobs, pool.map(_run_one_safe, jobs)):
                _merge(result, job, row)
    return result


def _collect(result: SuiteResult, job) -> None:
    try:
        result.rows.append(_run_one(job))
    except Exception as exc:  # cell-level isolation
        result.failures.setdefault(job[1], f"{type(exc).__name__}: {exc}")
        log.warning("cell %s failed: %s", job[1], exc)


def _run_one_safe(job):
    try:
        return _run_one(job)
    except Exception as exc:
        return f"{type(exc).__name__}: {exc}"


def _merge(result: SuiteResult, job, row) -> None:
    if isinstance(row, RunRow):
        result.rows.append(row)
    else:
        result.failures.setdefault(job[1], row)
        log.warning("cell %s failed: %s", job[1], row)
