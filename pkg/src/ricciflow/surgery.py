"""Post-flow surgery sweep.

One single surgery pass after the last flow iteration: starting from the
maximum final weight, cut every edge heavier than the cutoff, read the
connected components as communities, score them, then lower the cutoff
by a fixed step while it stays above the minimum weight. Scoring uses
the partition against the ORIGINAL unweighted topology by default
(scoring the surgered graph would reward disconnection trivially); pass
``score_on="surgered"`` for the literal reading.

Removal is cumulative in the cutoff, so the sweep is evaluated in
ascending order with an incremental union-find (every edge is merged
exactly once across the whole sweep) and the records are emitted in the
descending order of the algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CriterionUnavailable, EmptyGraph
from .flow import FlowConfig
from .graph import Partition, WeightedGraph
from .metrics import ari_from_labels, modularity_from_arrays, nmi_from_labels

_CUTOFF_SLACK = 1e-12


@dataclass(frozen=True)
class SweepRecord:
    cutoff: float
    removed_edges: int
    components: int
    q: float
    ari: float | None
    nmi: float | None
    labels: np.ndarray  # community label per node (graph node order)


@dataclass(frozen=True)
class SweepReport:
    records: list[SweepRecord]
    nodes: tuple
    step: float
    gamma: float
    score_on: str
    w_max: float
    w_min: float
    best_by_q: int
    best_by_ari: int | None
    flow_config: FlowConfig | None = None

    def peak(self, metric: str) -> float:
        """Maximum of one metric over the sweep (metrics peak independently)."""
        values = [getattr(r, metric) for r in self.records]
        if any(v is None for v in values):
            raise CriterionUnavailable(f"{metric} requires ground-truth labels")
        return max(values)


def sweep(
    flowed: WeightedGraph,
    original: WeightedGraph,
    truth: Partition | None = None,
    step: float = 0.01,
    gamma: float = 1.0,
    score_on: str = "original",
    flow_config: FlowConfig | None = None,
) -> SweepReport:
    """Score every cutoff from w_max down to (exclusive) w_min.

    ``flowed`` carries the post-flow weights that drive the cuts;
    ``original`` provides the scoring topology (identical edge indexing
    is assumed, as produced by run_flow). The first record always sits at
    cutoff = w_max with nothing removed, which also covers the degenerate
    all-weights-equal sweep.
    """
    if flowed.m == 0:
        raise EmptyGraph("cannot sweep a graph without edges")
    if flowed.m != original.m or flowed.n != original.n:
        raise ValueError("flowed and original graphs differ in topology")
    if step <= 0:
        raise ValueError(f"cutoff step must be positive, got {step!r}")
    if score_on not in ("original", "surgered"):
        raise ValueError(f"score_on must be 'original' or 'surgered', got {score_on!r}")

    w = flowed.weights
    w_max = float(w.max())
    w_min = float(w.min())
    cutoffs = [w_max]
    k = 1
    floor = w_min + _CUTOFF_SLACK * max(1.0, abs(w_min))
    while w_max - k * step > floor:
        cutoffs.append(w_max - k * step)
        k += 1

    truth_labels = truth.aligned_labels(flowed.nodes) if truth is not None else None

    n, m = flowed.n, flowed.m
    order = np.argsort(w, kind="stable")
    parent = np.arange(n, dtype=np.int64)

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    ptr = 0
    records_asc: list[SweepRecord] = []
    for cutoff in reversed(cutoffs):
        while ptr < m and w[order[ptr]] <= cutoff:
            e = order[ptr]
            ra, rb = find(flowed.edge_u[e]), find(flowed.edge_v[e])
            if ra != rb:
                parent[rb] = ra
            ptr += 1
        roots = np.array([find(i) for i in range(n)], dtype=np.int64)
        _, labels = np.unique(roots, return_inverse=True)
        active = ptr
        if score_on == "original":
            q = modularity_from_arrays(labels, original.edge_u, original.edge_v, gamma)
        else:
            mask = w <= cutoff
            q = modularity_from_arrays(
                labels, flowed.edge_u[mask], flowed.edge_v[mask], gamma
            )
        rec = SweepRecord(
            cutoff=float(cutoff),
            removed_edges=m - active,
            components=int(labels.max()) + 1,
            q=q,
            ari=ari_from_labels(truth_labels, labels) if truth_labels is not None else None,
            nmi=nmi_from_labels(truth_labels, labels) if truth_labels is not None else None,
            labels=labels,
        )
        records_asc.append(rec)

    records = records_asc[::-1]
    qs = np.array([r.q for r in records])
    best_by_q = int(np.argmax(qs))  # ties resolve toward the larger cutoff
    best_by_ari = None
    if truth_labels is not None:
        best_by_ari = int(np.argmax(np.array([r.ari for r in records])))
    return SweepReport(
        records=records,
        nodes=flowed.nodes,
        step=step,
        gamma=gamma,
        score_on=score_on,
        w_max=w_max,
        w_min=w_min,
        best_by_q=best_by_q,
        best_by_ari=best_by_ari,
        flow_config=flow_config,
    )


def best_partition(report: SweepReport, criterion: str = "q") -> Partition:
    """Partition at the argmax record; ties break toward the larger cutoff."""
    if not report.records:
        raise ValueError("empty sweep report")
    crit = criterion.lower()
    if crit == "q":
        idx = report.best_by_q
    elif crit == "ari":
        if report.best_by_ari is None:
            raise CriterionUnavailable("sweep ran without ground-truth labels")
        idx = report.best_by_ari
    else:
        raise ValueError(f"criterion must be 'q' or 'ari', got {criterion!r}")
    return Partition(report.nodes, report.records[idx].labels)
