"""Weighted undirected graphs, shortest-path distances, and components.

The graph owns an immutable topology (node order and edge list fixed at
build time; edge index i is the identity of edge i through the whole
pipeline) plus a replaceable strictly-positive weight vector. Weight
replacement bumps a version counter; distance oracles pin the version
they were built against and refuse stale reads.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .errors import (
    BadEdgeIndex,
    DuplicateEdge,
    NonPositiveWeight,
    SelfLoop,
    StaleDistances,
    UnknownNode,
)


class WeightedGraph:
    """Connected or disconnected undirected graph with positive edge weights.

    Do not call the constructor directly; use :func:`build_graph`, which
    validates input and maps arbitrary node identifiers to dense indices.
    """

    def __init__(self, nodes, edge_u, edge_v, weights):
        self.nodes = tuple(nodes)
        self._index = {u: i for i, u in enumerate(self.nodes)}
        self.edge_u = np.asarray(edge_u, dtype=np.int64)
        self.edge_v = np.asarray(edge_v, dtype=np.int64)
        self._weights = np.asarray(weights, dtype=np.float64).copy()
        self._version = 0
        self._build_csr()

    def _build_csr(self):
        n, m = self.n, self.m
        ends = np.concatenate([self.edge_u, self.edge_v])
        other = np.concatenate([self.edge_v, self.edge_u])
        eidx = np.concatenate([np.arange(m), np.arange(m)])
        order = np.argsort(ends, kind="stable")
        counts = np.bincount(ends, minlength=n)
        self.indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        self.nbr = other[order].astype(np.int64)
        self.arc_edge = eidx[order].astype(np.int64)

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return len(self.edge_u)

    @property
    def weights(self) -> np.ndarray:
        w = self._weights.view()
        w.flags.writeable = False
        return w

    @property
    def weights_version(self) -> int:
        return self._version

    def set_weights(self, weights) -> None:
        """Install a full replacement weight vector (must stay positive)."""
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != (self.m,):
            raise ValueError(f"expected {self.m} weights, got {w.shape}")
        if not (w > 0).all():
            bad = int(np.argmin(w))
            raise NonPositiveWeight(f"edge {bad} has weight {w[bad]!r}")
        self._weights = w.copy()
        self._version += 1

    def node_index(self, node) -> int:
        try:
            return self._index[node]
        except KeyError:
            raise UnknownNode(repr(node)) from None

    def edge_nodes(self, e: int):
        """Original identifiers of edge e's endpoints."""
        if not 0 <= e < self.m:
            raise BadEdgeIndex(str(e))
        return self.nodes[self.edge_u[e]], self.nodes[self.edge_v[e]]

    def neighbors(self, idx: int) -> np.ndarray:
        return self.nbr[self.indptr[idx]: self.indptr[idx + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def arc_weights(self) -> np.ndarray:
        """Per-arc weights aligned with the CSR arrays (2m entries)."""
        return self._weights[self.arc_edge]

    def copy(self) -> "WeightedGraph":
        return WeightedGraph(self.nodes, self.edge_u, self.edge_v, self._weights)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return connected_components(self).k == 1


def build_graph(edge_triples) -> WeightedGraph:
    """Build a graph from (node, node, weight) triples.

    Node identifiers may be any hashable values (datasets mix strings and
    integers); they are mapped to dense indices in order of first
    appearance. Rejects self-loops, duplicate edges (either orientation)
    and non-positive weights.
    """
    nodes: list = []
    index: dict = {}
    seen: set = set()
    eu, ev, ws = [], [], []
    for u, v, w in edge_triples:
        if u == v:
            raise SelfLoop(repr(u))
        if not w > 0:
            raise NonPositiveWeight(f"edge ({u!r}, {v!r}) has weight {w!r}")
        for node in (u, v):
            if node not in index:
                index[node] = len(nodes)
                nodes.append(node)
        iu, iv = index[u], index[v]
        key = (iu, iv) if iu < iv else (iv, iu)
        if key in seen:
            raise DuplicateEdge(f"({u!r}, {v!r})")
        seen.add(key)
        eu.append(iu)
        ev.append(iv)
        ws.append(float(w))
    return WeightedGraph(nodes, eu, ev, ws)


class DistanceOracle:
    """Shortest-path distances pinned to one weight-vector snapshot.

    Rows are computed on demand by Dijkstra and cached; ``matrix`` fills
    the full table in one pass. Any query after the graph weights moved
    past the pinned version raises ``StaleDistances`` instead of silently
    recomputing, because a flow step must read all distances from a
    single instant.
    """

    def __init__(self, g: WeightedGraph):
        self.g = g
        self.version = g.weights_version
        self._rows: dict[int, np.ndarray] = {}
        self._matrix: np.ndarray | None = None
        self._arc_w = g.arc_weights()

    def _check(self):
        if self.g.weights_version != self.version:
            raise StaleDistances(
                f"oracle pinned at version {self.version}, "
                f"graph is at {self.g.weights_version}"
            )

    def row(self, idx: int) -> np.ndarray:
        self._check()
        if self._matrix is not None:
            return self._matrix[idx]
        r = self._rows.get(idx)
        if r is None:
            r = kernels.sssp(self.g.indptr, self.g.nbr, self._arc_w, idx, self.g.n)
            self._rows[idx] = r
        return r

    def matrix(self) -> np.ndarray:
        self._check()
        if self._matrix is None:
            self._matrix = kernels.apsp(
                self.g.indptr, self.g.nbr, self._arc_w, self.g.n
            )
        return self._matrix

    def distance(self, u, v) -> float:
        """d(u, v) by original identifiers; +inf when unreachable."""
        iu = self.g.node_index(u)
        iv = self.g.node_index(v)
        return float(self.row(iu)[iv])

    def rho(self, e: int) -> float:
        """rho_e = d(x, y) for edge e = xy; always <= w_e."""
        if not 0 <= e < self.g.m:
            raise BadEdgeIndex(str(e))
        return float(self.row(int(self.g.edge_u[e]))[self.g.edge_v[e]])

    def rho_all(self) -> np.ndarray:
        d = self.matrix()
        return d[self.g.edge_u, self.g.edge_v]


def shortest_distance(g: WeightedGraph, u, v) -> float:
    """Exact shortest weighted-path length; +inf if no path exists."""
    return DistanceOracle(g).distance(u, v)


def edge_rho(g: WeightedGraph, e: int) -> float:
    return DistanceOracle(g).rho(e)


class Partition:
    """Node -> community labeling with dense community ids 0..k-1."""

    def __init__(self, nodes, labels):
        self.nodes = tuple(nodes)
        raw = np.asarray(labels)
        # canonicalize: ids in order of first appearance over node order
        _, first, inverse = np.unique(raw, return_index=True, return_inverse=True)
        rank = np.argsort(np.argsort(first))
        self.labels = rank[inverse].astype(np.int64)
        self._index = {u: i for i, u in enumerate(self.nodes)}

    @classmethod
    def from_mapping(cls, mapping) -> "Partition":
        nodes = list(mapping.keys())
        return cls(nodes, [mapping[u] for u in nodes])

    @property
    def k(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    def label_of(self, node) -> int:
        try:
            return int(self.labels[self._index[node]])
        except KeyError:
            raise UnknownNode(repr(node)) from None

    def as_mapping(self) -> dict:
        return {u: int(self.labels[i]) for i, u in enumerate(self.nodes)}

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)

    def aligned_labels(self, nodes) -> np.ndarray:
        """Label array reordered to the given node sequence."""
        try:
            return self.labels[[self._index[u] for u in nodes]]
        except KeyError as exc:
            raise UnknownNode(repr(exc.args[0])) from None


def connected_components(g: WeightedGraph, active_edges=None) -> Partition:
    """Components of the subgraph keeping only masked edges.

    Every component becomes one community; isolated nodes end up as
    singleton communities. ``active_edges`` is a boolean mask of length m
    (None keeps everything).
    """
    parent = np.arange(g.n, dtype=np.int64)

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    if active_edges is None:
        pairs = zip(g.edge_u, g.edge_v)
    else:
        mask = np.asarray(active_edges, dtype=bool)
        if mask.shape != (g.m,):
            raise ValueError(f"mask length {mask.shape} != m={g.m}")
        pairs = zip(g.edge_u[mask], g.edge_v[mask])
    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra
    roots = np.array([find(i) for i in range(g.n)])
    return Partition(g.nodes, roots)
