"""Partition-quality metrics: ARI, NMI, and modularity Q.

ARI and NMI are computed from the exact contingency table with integer
pair counts; NMI uses natural logarithms (the base cancels) and 0*log(0)
terms contribute zero. Q is evaluated on the unweighted topology:
Q = sum_k (L_k/|E| - gamma * (D_k / 2|E|)^2) with L_k the intra-community
edge count and D_k the community's total degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyEdgeSet, MismatchedNodeSets
from .graph import Partition, WeightedGraph


@dataclass(frozen=True)
class ContingencyTable:
    """Cell counts n_ij plus marginals for a pair of partitions."""

    counts: np.ndarray  # (k1, k2) int64
    row_sums: np.ndarray
    col_sums: np.ndarray
    n: int

    @classmethod
    def from_labels(cls, a: np.ndarray, b: np.ndarray) -> "ContingencyTable":
        k1 = int(a.max()) + 1 if len(a) else 0
        k2 = int(b.max()) + 1 if len(b) else 0
        counts = np.zeros((k1, k2), dtype=np.int64)
        np.add.at(counts, (a, b), 1)
        return cls(
            counts=counts,
            row_sums=counts.sum(axis=1),
            col_sums=counts.sum(axis=0),
            n=len(a),
        )


def _aligned(p: Partition, q: Partition) -> tuple[np.ndarray, np.ndarray]:
    if set(p.nodes) != set(q.nodes):
        raise MismatchedNodeSets(
            f"{len(p.nodes)} vs {len(q.nodes)} nodes with differing identities"
        )
    return p.labels, q.aligned_labels(p.nodes)


def _comb2(x: np.ndarray) -> np.ndarray:
    return x * (x - 1) // 2


def ari_from_labels(a: np.ndarray, b: np.ndarray) -> float:
    t = ContingencyTable.from_labels(a, b)
    sum_ij = int(_comb2(t.counts).sum())
    sum_a = int(_comb2(t.row_sums).sum())
    sum_b = int(_comb2(t.col_sums).sum())
    pairs = math.comb(t.n, 2)
    if pairs == 0:
        return 1.0
    expected = sum_a * sum_b / pairs
    denom = 0.5 * (sum_a + sum_b) - expected
    if denom == 0.0:
        # both partitions trivial (all-one-cluster or all-singletons):
        # 1 when they agree, 0 otherwise
        return 1.0 if np.array_equal(a, b) else 0.0
    return (sum_ij - expected) / denom


def nmi_from_labels(a: np.ndarray, b: np.ndarray) -> float:
    t = ContingencyTable.from_labels(a, b)
    n = t.n
    nz = t.counts > 0
    cells = t.counts[nz].astype(np.float64)
    outer = np.outer(t.row_sums, t.col_sums)[nz].astype(np.float64)
    numer = -2.0 * float(np.dot(cells, np.log(cells * n / outer)))
    ha = t.row_sums[t.row_sums > 0].astype(np.float64)
    hb = t.col_sums[t.col_sums > 0].astype(np.float64)
    denom = float(np.dot(ha, np.log(ha / n)) + np.dot(hb, np.log(hb / n)))
    if denom == 0.0:
        return 1.0 if np.array_equal(a, b) else 0.0
    return numer / denom


def ari(p: Partition, q: Partition) -> float:
    """Adjusted Rand Index in [-1, 1]; 1 means identical partitions."""
    return ari_from_labels(*_aligned(p, q))


def nmi(p: Partition, q: Partition) -> float:
    """Normalized mutual information in [0, 1]."""
    return nmi_from_labels(*_aligned(p, q))


def modularity_from_arrays(
    labels: np.ndarray,
    edge_u: np.ndarray,
    edge_v: np.ndarray,
    gamma: float = 1.0,
) -> float:
    m = len(edge_u)
    if m == 0:
        raise EmptyEdgeSet("modularity needs at least one edge")
    lu = labels[edge_u]
    lv = labels[edge_v]
    k = int(labels.max()) + 1
    intra = np.bincount(lu[lu == lv], minlength=k)
    deg = np.bincount(lu, minlength=k) + np.bincount(lv, minlength=k)
    return float(intra.sum() / m - gamma * np.square(deg / (2.0 * m)).sum())


def modularity(g: WeightedGraph, p: Partition, gamma: float = 1.0) -> float:
    """Modularity Q of a partition on g's unweighted topology."""
    labels = p.aligned_labels(g.nodes)
    if len(labels) != g.n:
        raise MismatchedNodeSets(f"partition covers {len(labels)} of {g.n} nodes")
    return modularity_from_arrays(labels, g.edge_u, g.edge_v, gamma)
