"""Independent oracles for the test suite.

Nothing here shares code with the package kernels: a dense-tableau
two-phase simplex with Bland's rule, exhaustive vertex enumeration for
tiny transportation polytopes, pair-counting / entropy / adjacency-matrix
metric implementations, DFS path enumeration for distances, and the dual
(gradient-of-Laplacian) linear program for Lin-Lu-Yau curvature solved by
scipy. Each one provides a second route to a value the package computes.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.optimize import linprog

TOL = 1e-10


# ---------------------------------------------------------------------------
# dense-tableau simplex (Bland's rule, two-phase)

def dense_simplex_min(c, A, b, tol=TOL, max_iter=200_000):
    """min c@x s.t. Ax = b, x >= 0. Returns (objective, x)."""
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    c = np.array(c, dtype=float)
    m, n = A.shape
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    # phase 1: artificial basis
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n: n + m] = np.eye(m)
    T[:m, -1] = b
    T[m, :n] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    basis = list(range(n, n + m))
    _iterate(T, basis, tol, max_iter)
    if -T[m, -1] > 1e-7:
        raise ValueError("infeasible system")

    # pivot artificials out; rows that cannot pivot are redundant
    drop = []
    for i in range(m):
        if basis[i] >= n:
            cols = np.nonzero(np.abs(T[i, :n]) > tol)[0]
            if len(cols):
                _pivot(T, basis, i, int(cols[0]))
            else:
                drop.append(i)
    keep = [i for i in range(m) if i not in drop]
    T = np.vstack([T[keep][:, list(range(n)) + [n + m]], np.zeros(n + 1)])
    basis = [basis[i] for i in keep]

    # phase 2
    T[-1, :n] = c
    for i, bv in enumerate(basis):
        T[-1] -= c[bv] * T[i]
    _iterate(T, basis, tol, max_iter)

    x = np.zeros(n)
    for i, bv in enumerate(basis):
        x[bv] = T[i, -1]
    return float(c @ x), x


def _iterate(T, basis, tol, max_iter):
    m = len(basis)
    for _ in range(max_iter):
        enter = -1
        for j in range(T.shape[1] - 1):
            if T[m, j] < -tol:
                enter = j
                break
        if enter < 0:
            return
        ratio = np.inf
        leave = -1
        for i in range(m):
            if T[i, enter] > tol:
                r = T[i, -1] / T[i, enter]
                if r < ratio - tol or (r < ratio + tol and (leave < 0 or basis[i] < basis[leave])):
                    ratio = r
                    leave = i
        if leave < 0:
            raise ValueError("unbounded LP")
        _pivot(T, basis, leave, enter)
    raise ValueError("simplex iteration budget exceeded")


def _pivot(T, basis, row, col):
    T[row] /= T[row, col]
    for i in range(T.shape[0]):
        if i != row and T[i, col] != 0.0:
            T[i] -= T[i, col] * T[row]
    basis[row] = col


def transport_by_tableau(cost, supply, demand):
    """Balanced transportation objective via the dense-tableau simplex."""
    cost = np.asarray(cost, dtype=float)
    r, c = cost.shape
    n = r * c
    # row-sum constraints plus all but the last column (rank r+c-1)
    rows = []
    rhs = []
    for i in range(r):
        a = np.zeros(n)
        a[i * c:(i + 1) * c] = 1.0
        rows.append(a)
        rhs.append(supply[i])
    for j in range(c - 1):
        a = np.zeros(n)
        a[j::c] = 1.0
        rows.append(a)
        rhs.append(demand[j])
    obj, _ = dense_simplex_min(cost.ravel(), np.array(rows), np.array(rhs))
    return obj


def transport_by_highs(cost, supply, demand):
    """Balanced transportation objective via scipy's HiGHS solver."""
    cost = np.asarray(cost, dtype=float)
    r, c = cost.shape
    n = r * c
    a_eq = []
    b_eq = []
    for i in range(r):
        a = np.zeros(n)
        a[i * c:(i + 1) * c] = 1.0
        a_eq.append(a)
        b_eq.append(supply[i])
    for j in range(c - 1):
        a = np.zeros(n)
        a[j::c] = 1.0
        a_eq.append(a)
        b_eq.append(demand[j])
    res = linprog(cost.ravel(), A_eq=np.array(a_eq), b_eq=np.array(b_eq),
                  bounds=(0, None), method="highs")
    assert res.success, res.message
    return float(res.fun)


def transport_by_vertex_enumeration(cost, supply, demand):
    """Exhaustive check over basic feasible solutions (tiny instances)."""
    cost = np.asarray(cost, dtype=float)
    r, c = cost.shape
    n = r * c
    rows = []
    rhs = []
    for i in range(r):
        a = np.zeros(n)
        a[i * c:(i + 1) * c] = 1.0
        rows.append(a)
        rhs.append(supply[i])
    for j in range(c - 1):
        a = np.zeros(n)
        a[j::c] = 1.0
        rows.append(a)
        rhs.append(demand[j])
    A = np.array(rows)
    b = np.array(rhs)
    k = A.shape[0]
    best = np.inf
    flat = cost.ravel()
    for cols in itertools.combinations(range(n), k):
        sub = A[:, cols]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        x = np.linalg.solve(sub, b)
        if (x >= -1e-9).all():
            best = min(best, float(flat[list(cols)] @ x))
    return best


# ---------------------------------------------------------------------------
# metric oracles

def ari_by_pair_counting(a, b):
    n = len(a)
    ss = sd = ds = dd = 0
    for i in range(n):
        for j in range(i + 1, n):
            pa = a[i] == a[j]
            pb = b[i] == b[j]
            if pa and pb:
                ss += 1
            elif pa:
                sd += 1
            elif pb:
                ds += 1
            else:
                dd += 1
    denom = (ss + sd) * (sd + dd) + (ss + ds) * (ds + dd)
    if denom == 0:
        return 1.0 if list(a) == list(b) else 0.0
    return 2.0 * (ss * dd - sd * ds) / denom


def nmi_by_entropies(a, b):
    n = len(a)

    def entropy(labels):
        counts = {}
        for x in labels:
            counts[x] = counts.get(x, 0) + 1
        return -sum((c / n) * math.log(c / n) for c in counts.values())

    def joint_entropy():
        counts = {}
        for x, y in zip(a, b):
            counts[(x, y)] = counts.get((x, y), 0) + 1
        return -sum((c / n) * math.log(c / n) for c in counts.values())

    ha, hb = entropy(a), entropy(b)
    mi = ha + hb - joint_entropy()
    if ha + hb == 0.0:
        return 1.0 if list(a) == list(b) else 0.0
    return 2.0 * mi / (ha + hb)


def modularity_by_adjacency(edge_u, edge_v, labels, gamma=1.0):
    n = len(labels)
    m = len(edge_u)
    adj = np.zeros((n, n))
    for u, v in zip(edge_u, edge_v):
        adj[u, v] += 1.0
        adj[v, u] += 1.0
    deg = adj.sum(axis=1)
    q = 0.0
    for i in range(n):
        for j in range(n):
            if labels[i] == labels[j]:
                q += adj[i, j] - gamma * deg[i] * deg[j] / (2.0 * m)
    return q / (2.0 * m)


# ---------------------------------------------------------------------------
# graph oracles

def distance_by_path_enumeration(adj_weights, src, dst):
    """Shortest path by DFS over all simple paths; adj is a dict of dicts."""
    best = [np.inf]

    def dfs(node, seen, acc):
        if acc >= best[0]:
            return
        if node == dst:
            best[0] = acc
            return
        for nxt, w in adj_weights[node].items():
            if nxt not in seen:
                dfs(nxt, seen | {nxt}, acc + w)

    dfs(src, {src}, 0.0)
    return best[0]


def lly_by_dual_lp(g, e):
    """Lin-Lu-Yau curvature from the dual program

        kappa = inf { (Lap f(x) - Lap f(y)) / d  :  f 1-Lipschitz,
                      f(y) - f(x) = d(x, y) }

    restricted to S = {x, y} u N(x) u N(y) (a 1-Lipschitz function on S
    always extends to the whole graph), solved with scipy HiGHS. Fully
    independent of the star-coupling route.
    """
    from ricciflow.graph import DistanceOracle

    x = int(g.edge_u[e])
    y = int(g.edge_v[e])
    d = DistanceOracle(g).matrix()
    nodes = sorted({x, y} | set(map(int, g.neighbors(x))) | set(map(int, g.neighbors(y))))
    pos = {u: i for i, u in enumerate(nodes)}
    nv = len(nodes)
    rho = d[x, y]

    obj = np.zeros(nv)
    wx = g.weights[g.arc_edge[g.indptr[x]: g.indptr[x + 1]]]
    wy = g.weights[g.arc_edge[g.indptr[y]: g.indptr[y + 1]]]
    for u, w in zip(g.neighbors(x), wx):
        obj[pos[int(u)]] += w / wx.sum()
    obj[pos[x]] -= 1.0
    for u, w in zip(g.neighbors(y), wy):
        obj[pos[int(u)]] -= w / wy.sum()
    obj[pos[y]] += 1.0
    obj /= rho

    a_ub = []
    b_ub = []
    for i, u in enumerate(nodes):
        for j, v in enumerate(nodes):
            if i < j:
                row = np.zeros(nv)
                row[i], row[j] = 1.0, -1.0
                a_ub.append(row)
                b_ub.append(d[u, v])
                a_ub.append(-row)
                b_ub.append(d[u, v])
    a_eq = np.zeros((2, nv))
    a_eq[0, pos[y]], a_eq[0, pos[x]] = 1.0, -1.0
    a_eq[1, pos[x]] = 1.0  # gauge: f(x) = 0
    res = linprog(
        obj,
        A_ub=np.array(a_ub), b_ub=np.array(b_ub),
        A_eq=a_eq, b_eq=np.array([rho, 0.0]),
        bounds=(None, None), method="highs",
    )
    assert res.success, res.message
    return float(res.fun)
