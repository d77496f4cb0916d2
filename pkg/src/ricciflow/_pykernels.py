"""Pure-Python kernel backend.

Mirrors the API of the compiled ``_speedups`` extension: single-source
shortest paths over a CSR adjacency, a primal simplex for balanced
transportation problems (tree basis, Dantzig pricing with a Bland
fallback for anti-cycling), and the per-edge curvature batch drivers.
Used when the extension is unavailable or when forced via
``RICCIFLOW_KERNELS=python``; everything here must stay result-identical
to the compiled backend.
"""

from __future__ import annotations

import heapq

import numpy as np

from .errors import LpInfeasible, LpNumericalFailure

BACKEND = "python"

PIVOT_TOL = 1e-10
_BALANCE_TOL = 1e-9


def sssp(indptr, nbr, arc_weight, source, n):
    """Dijkstra from ``source``; returns a length-``n`` distance array.

    Unreachable nodes keep ``+inf``. Ties in the heap resolve by node
    index, which only affects traversal order, never distances.
    """
    dist = np.full(n, np.inf)
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for k in range(indptr[u], indptr[u + 1]):
            v = nbr[k]
            nd = d + arc_weight[k]
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def apsp(indptr, nbr, arc_weight, n):
    """All-pairs shortest paths as a dense (n, n) matrix."""
    out = np.empty((n, n))
    for s in range(n):
        out[s] = sssp(indptr, nbr, arc_weight, s, n)
    return out


def solve_transport(cost, supply, demand, need_flow=True):
    """Solve a balanced transportation problem exactly.

    Minimizes ``sum(flow * cost)`` over nonnegative (r, c) flow matrices
    whose row sums equal ``supply`` and column sums equal ``demand``.
    Returns ``(objective, flow)`` with ``flow=None`` when not requested.

    The basis is a spanning tree over the r+c bipartite nodes, seeded by
    the northwest-corner rule. Pricing is most-negative reduced cost with
    a permanent switch to Bland's rule after a pivot budget, which makes
    termination unconditional on degenerate instances.
    """
    cost = np.ascontiguousarray(cost, dtype=np.float64)
    r, c = cost.shape
    supply = np.asarray(supply, dtype=np.float64)
    demand = np.asarray(demand, dtype=np.float64)
    total = supply.sum()
    if r == 0 or c == 0:
        raise LpInfeasible("empty marginal")
    if supply.min() < -PIVOT_TOL or demand.min() < -PIVOT_TOL:
        raise LpInfeasible("negative marginal")
    if abs(total - demand.sum()) > _BALANCE_TOL * max(1.0, total):
        raise LpInfeasible(
            f"unbalanced marginals: {total!r} vs {demand.sum()!r}"
        )

    nb = r + c - 1
    bi = np.empty(nb, dtype=np.int64)
    bj = np.empty(nb, dtype=np.int64)
    bf = np.empty(nb, dtype=np.float64)
    _greedy_basis(cost, supply, demand, bi, bj, bf)

    u = np.empty(r)
    v = np.empty(c)
    # adjacency of the basis tree over nodes 0..r-1 (rows), r..r+c-1 (cols)
    nn = r + c
    bland_after = 40 * nn + 200
    max_pivots = 2000 * nn + 20000

    adj: list[list[tuple[int, int]]] = [[] for _ in range(nn)]
    parent_node = np.empty(nn, dtype=np.int64)
    parent_cell = np.empty(nn, dtype=np.int64)
    order = np.empty(nn, dtype=np.int64)

    pivots = 0
    while True:
        # potentials from the tree: u[0] = 0, u_i + v_j = cost on basis
        for lst in adj:
            lst.clear()
        for k in range(nb):
            ri = int(bi[k])
            cj = int(bj[k]) + r
            adj[ri].append((cj, k))
            adj[cj].append((ri, k))
        parent_node[0] = -1
        parent_cell[0] = -1
        order[0] = 0
        seen = np.zeros(nn, dtype=bool)
        seen[0] = True
        u[0] = 0.0
        head, tail = 0, 1
        while head < tail:
            node = int(order[head])
            head += 1
            for other, k in adj[node]:
                if not seen[other]:
                    seen[other] = True
                    parent_node[other] = node
                    parent_cell[other] = k
                    order[tail] = other
                    tail += 1
                    if other >= r:
                        v[other - r] = cost[bi[k], bj[k]] - u[bi[k]]
                    else:
                        u[other] = cost[bi[k], bj[k]] - v[bj[k]]
        if tail != nn:
            raise LpNumericalFailure("basis lost spanning-tree structure")

        red = (cost - u[:, None]) - v[None, :]
        if pivots <= bland_after:
            flat = int(np.argmin(red))
            if red.flat[flat] >= -PIVOT_TOL:
                break
        else:
            eligible = red.ravel() < -PIVOT_TOL
            if not eligible.any():
                break
            flat = int(np.argmax(eligible))  # lowest-index eligible (Bland)
        ei, ej = divmod(flat, c)

        # cycle: tree path from row node ei to col node r+ej, then the
        # entering cell closes it; signs alternate starting with "-" on
        # the path edge incident to the entering column.
        path = _tree_path(ei, r + ej, parent_node, parent_cell, nn)
        theta = np.inf
        leave_pos = -1
        leave_key = -1
        for pos in range(0, len(path), 2):  # minus cells
            k = path[pos]
            f = bf[k]
            key = int(bi[k]) * c + int(bj[k])
            if f < theta - PIVOT_TOL or (f < theta + PIVOT_TOL and (leave_pos < 0 or key < leave_key)):
                theta = f
                leave_pos = pos
                leave_key = key
        if leave_pos < 0:
            raise LpNumericalFailure("no leaving variable on cycle")
        if theta < 0.0:
            theta = 0.0
        for pos, k in enumerate(path):
            if pos % 2 == 0:
                bf[k] -= theta
            else:
                bf[k] += theta
        leave = path[leave_pos]
        bi[leave] = ei
        bj[leave] = ej
        bf[leave] = theta

        pivots += 1
        if pivots > max_pivots:
            raise LpNumericalFailure(f"pivot budget exhausted ({pivots})")

    obj = float(np.dot(bf, cost[bi, bj]))
    if not need_flow:
        return obj, None
    flow = np.zeros((r, c))
    np.add.at(flow, (bi, bj), bf)
    return obj, flow


def _greedy_basis(cost, supply, demand, bi, bj, bf):
    """Matrix-minimum initial basis: allocate cells in ascending
    (cost, flat index) order while both marginals stay positive, then
    connect the resulting forest into a spanning tree with zero-flow
    cells (same order). The allocation graph is always acyclic, so this
    yields a valid tree basis of exactly r+c-1 cells and, on metric-like
    costs, starts close to the optimum (the northwest corner ignores
    costs entirely and stalls on degenerate marginals).
    """
    r, c = cost.shape
    a = supply.copy()
    b = demand.copy()
    parent = np.arange(r + c, dtype=np.int64)

    def find(z):
        while parent[z] != z:
            parent[z] = parent[parent[z]]
            z = parent[z]
        return z

    order = np.argsort(cost.ravel(), kind="stable")
    nb = r + c - 1
    k = 0
    for flat in order:
        if k == nb:
            break
        i, j = divmod(int(flat), c)
        if a[i] > 0.0 and b[j] > 0.0:
            q = a[i] if a[i] < b[j] else b[j]
            bi[k] = i
            bj[k] = j
            bf[k] = q
            a[i] -= q
            b[j] -= q
            parent[find(i)] = find(r + j)
            k += 1
    if k < nb:
        for flat in order:
            if k == nb:
                break
            i, j = divmod(int(flat), c)
            ri, rj = find(i), find(r + j)
            if ri != rj:
                bi[k] = i
                bj[k] = j
                bf[k] = 0.0
                parent[ri] = rj
                k += 1
    if k < nb:
        raise LpNumericalFailure("could not assemble a spanning basis")


def _tree_path(src, dst, parent_node, parent_cell, nn):
    """Basis-cell indices along the tree path src -> dst.

    The first returned cell is incident to ``dst`` (entering column side),
    so it carries sign "-", and signs alternate from there. Path order is
    produced by splicing the two root walks at their junction.
    """
    depth = {}
    node = src
    d = 0
    while node != -1:
        depth[node] = d
        node = int(parent_node[node])
        d += 1
    # walk dst upward until hitting src's root path
    up_cells = []
    node = dst
    while node not in depth:
        up_cells.append(int(parent_cell[node]))
        node = int(parent_node[node])
    meet = node
    down_cells = []
    node = src
    while node != meet:
        down_cells.append(int(parent_cell[node]))
        node = int(parent_node[node])
    # cycle order starting at dst side: up_cells already run dst->meet;
    # then meet->src is down_cells reversed.
    return up_cells + down_cells[::-1]


def star_kappa_batch(indptr, nbr, arc_edge, weights, dist, edge_u, edge_v):
    """Star-coupling curvature for every edge against one snapshot.

    For edge e = xy the optimal star coupling is obtained from a balanced
    transportation problem: sources are N(x) with the x-side neighbor
    masses plus x itself with unit mass, sinks are N(y) likewise, and the
    cost of moving u -> v is d(u,v) - d(x,y). The LP optimum equals
    -kappa_e * rho_e.
    """
    m = len(edge_u)
    kappa = np.empty(m)
    for e in range(m):
        cost, supply, demand, rho = _star_lp_inputs(
            indptr, nbr, arc_edge, weights, dist, int(edge_u[e]), int(edge_v[e])
        )
        obj, _ = solve_transport(cost, supply, demand, need_flow=False)
        kappa[e] = -obj / rho
    return kappa


def ollivier_kappa_batch(indptr, nbr, arc_edge, weights, dist, edge_u, edge_v, alpha):
    """alpha-lazy Ollivier curvature 1 - W(mu_x, mu_y)/d(x,y) per edge."""
    m = len(edge_u)
    kappa = np.empty(m)
    for e in range(m):
        x = int(edge_u[e])
        y = int(edge_v[e])
        sup_x, mass_x = _lazy_measure(indptr, nbr, arc_edge, weights, x, alpha)
        sup_y, mass_y = _lazy_measure(indptr, nbr, arc_edge, weights, y, alpha)
        cost = dist[np.ix_(sup_x, sup_y)]
        w_dist, _ = solve_transport(cost, mass_x, mass_y, need_flow=False)
        rho = dist[x, y]
        kappa[e] = 1.0 - w_dist / rho
    return kappa


def _star_lp_inputs(indptr, nbr, arc_edge, weights, dist, x, y):
    """Assemble the transportation form of the star-coupling LP for xy."""
    rows = nbr[indptr[x]: indptr[x + 1]]
    cols = nbr[indptr[y]: indptr[y + 1]]
    wx = weights[arc_edge[indptr[x]: indptr[x + 1]]]
    wy = weights[arc_edge[indptr[y]: indptr[y + 1]]]
    supply = np.append(wx / wx.sum(), 1.0)
    demand = np.append(wy / wy.sum(), 1.0)
    rows = np.append(rows, x)
    cols = np.append(cols, y)
    rho = dist[x, y]
    cost = dist[np.ix_(rows, cols)] - rho
    return cost, supply, demand, rho


def _lazy_measure(indptr, nbr, arc_edge, weights, x, alpha):
    """Support indices and masses of the alpha-lazy neighborhood measure."""
    sup = nbr[indptr[x]: indptr[x + 1]]
    w = weights[arc_edge[indptr[x]: indptr[x + 1]]]
    mass = (1.0 - alpha) * w / w.sum()
    if alpha > 0.0:
        sup = np.append(sup, x)
        mass = np.append(mass, alpha)
    return sup, mass
