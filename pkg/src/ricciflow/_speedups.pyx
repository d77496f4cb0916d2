# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernel backend.

Same API and same pivot/traversal rules as ``_pykernels``: Dijkstra with
a lazy binary heap, and a primal transportation simplex on a tree basis
(northwest-corner start, most-negative pricing with a Bland fallback).
The batch drivers assemble every per-edge LP in C to keep the hot loop
free of Python overhead.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, fabs

from .errors import LpInfeasible, LpNumericalFailure

cnp.import_array()

BACKEND = "cython"

PIVOT_TOL = 1e-10
cdef double _PIVOT_TOL = 1e-10
cdef double _BALANCE_TOL = 1e-9


# ---------------------------------------------------------------------------
# shortest paths

cdef void _dijkstra(
    const cnp.int64_t[::1] indptr,
    const cnp.int64_t[::1] nbr,
    const double[::1] arc_weight,
    Py_ssize_t source,
    double[::1] dist,
    double[::1] heap_key,
    cnp.int64_t[::1] heap_node,
):
    cdef Py_ssize_t n = dist.shape[0]
    cdef Py_ssize_t i, u, v, k, child, parent_i, size
    cdef double d, nd, key
    cdef cnp.int64_t node
    for i in range(n):
        dist[i] = INFINITY
    dist[source] = 0.0
    heap_key[0] = 0.0
    heap_node[0] = source
    size = 1
    while size > 0:
        d = heap_key[0]
        u = heap_node[0]
        size -= 1
        # pop: move last to root, sift down
        key = heap_key[size]
        node = heap_node[size]
        i = 0
        while True:
            child = 2 * i + 1
            if child >= size:
                break
            if child + 1 < size and heap_key[child + 1] < heap_key[child]:
                child += 1
            if heap_key[child] < key:
                heap_key[i] = heap_key[child]
                heap_node[i] = heap_node[child]
                i = child
            else:
                break
        heap_key[i] = key
        heap_node[i] = node

        if d > dist[u]:
            continue
        for k in range(indptr[u], indptr[u + 1]):
            v = nbr[k]
            nd = d + arc_weight[k]
            if nd < dist[v]:
                dist[v] = nd
                # push (nd, v): sift up from the end
                i = size
                size += 1
                while i > 0:
                    parent_i = (i - 1) >> 1
                    if heap_key[parent_i] > nd:
                        heap_key[i] = heap_key[parent_i]
                        heap_node[i] = heap_node[parent_i]
                        i = parent_i
                    else:
                        break
                heap_key[i] = nd
                heap_node[i] = v


def sssp(indptr, nbr, arc_weight, source, n):
    """Dijkstra from ``source``; returns a length-``n`` distance array."""
    cdef const cnp.int64_t[::1] indptr_v = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const cnp.int64_t[::1] nbr_v = np.ascontiguousarray(nbr, dtype=np.int64)
    cdef const double[::1] w_v = np.ascontiguousarray(arc_weight, dtype=np.float64)
    out = np.empty(n, dtype=np.float64)
    cap = nbr_v.shape[0] + 2
    heap_key = np.empty(cap, dtype=np.float64)
    heap_node = np.empty(cap, dtype=np.int64)
    _dijkstra(indptr_v, nbr_v, w_v, source, out, heap_key, heap_node)
    return out


def apsp(indptr, nbr, arc_weight, n):
    """All-pairs shortest paths as a dense (n, n) matrix."""
    cdef const cnp.int64_t[::1] indptr_v = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const cnp.int64_t[::1] nbr_v = np.ascontiguousarray(nbr, dtype=np.int64)
    cdef const double[::1] w_v = np.ascontiguousarray(arc_weight, dtype=np.float64)
    out = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] out_v = out
    cap = nbr_v.shape[0] + 2
    heap_key = np.empty(cap, dtype=np.float64)
    heap_node = np.empty(cap, dtype=np.int64)
    cdef double[::1] hk = heap_key
    cdef cnp.int64_t[::1] hn = heap_node
    cdef Py_ssize_t s
    for s in range(n):
        _dijkstra(indptr_v, nbr_v, w_v, s, out_v[s], hk, hn)
    return out


# ---------------------------------------------------------------------------
# transportation simplex

cdef class TransportWorkspace:
    """Reusable buffers for transportation problems up to (cap_r, cap_c)."""

    cdef Py_ssize_t cap_r, cap_c
    cdef cnp.int64_t[::1] bi, bj
    cdef double[::1] bf, u, v
    cdef cnp.int64_t[::1] head, nxt, to_node, cell_of
    cdef cnp.int64_t[::1] parent_node, parent_cell, order, depth, path
    cdef cnp.uint8_t[::1] seen
    cdef double[::1] a, b
    cdef cnp.int64_t[::1] heap, uf

    def __init__(self, Py_ssize_t cap_r, Py_ssize_t cap_c):
        cdef Py_ssize_t nb = cap_r + cap_c - 1
        cdef Py_ssize_t nn = cap_r + cap_c
        self.cap_r = cap_r
        self.cap_c = cap_c
        self.bi = np.empty(nb, dtype=np.int64)
        self.bj = np.empty(nb, dtype=np.int64)
        self.bf = np.empty(nb, dtype=np.float64)
        self.u = np.empty(cap_r, dtype=np.float64)
        self.v = np.empty(cap_c, dtype=np.float64)
        self.head = np.empty(nn, dtype=np.int64)
        self.nxt = np.empty(2 * nb, dtype=np.int64)
        self.to_node = np.empty(2 * nb, dtype=np.int64)
        self.cell_of = np.empty(2 * nb, dtype=np.int64)
        self.parent_node = np.empty(nn, dtype=np.int64)
        self.parent_cell = np.empty(nn, dtype=np.int64)
        self.order = np.empty(nn, dtype=np.int64)
        self.depth = np.empty(nn, dtype=np.int64)
        self.path = np.empty(nn, dtype=np.int64)
        self.seen = np.empty(nn, dtype=np.uint8)
        self.a = np.empty(cap_r, dtype=np.float64)
        self.b = np.empty(cap_c, dtype=np.float64)
        self.heap = np.empty(cap_r * cap_c, dtype=np.int64)
        self.uf = np.empty(nn, dtype=np.int64)


cdef inline bint _cell_lt(
    const double[:, :] cost, Py_ssize_t c, cnp.int64_t x, cnp.int64_t y
):
    # ascending (cost, flat index): matches the python twin's stable argsort
    cdef double cx = cost[x // c, x % c]
    cdef double cy = cost[y // c, y % c]
    if cx != cy:
        return cx < cy
    return x < y


cdef inline void _heap_build(
    const double[:, :] cost, Py_ssize_t c, cnp.int64_t[::1] heap, Py_ssize_t size
):
    cdef Py_ssize_t start, i, child
    cdef cnp.int64_t item
    for start in range(size // 2 - 1, -1, -1):
        item = heap[start]
        i = start
        while True:
            child = 2 * i + 1
            if child >= size:
                break
            if child + 1 < size and _cell_lt(cost, c, heap[child + 1], heap[child]):
                child += 1
            if _cell_lt(cost, c, heap[child], item):
                heap[i] = heap[child]
                i = child
            else:
                break
        heap[i] = item


cdef inline cnp.int64_t _heap_pop(
    const double[:, :] cost, Py_ssize_t c, cnp.int64_t[::1] heap, Py_ssize_t* size
):
    cdef cnp.int64_t top = heap[0]
    size[0] -= 1
    cdef cnp.int64_t item = heap[size[0]]
    cdef Py_ssize_t i = 0, child
    while True:
        child = 2 * i + 1
        if child >= size[0]:
            break
        if child + 1 < size[0] and _cell_lt(cost, c, heap[child + 1], heap[child]):
            child += 1
        if _cell_lt(cost, c, heap[child], item):
            heap[i] = heap[child]
            i = child
        else:
            break
    heap[i] = item
    return top


cdef inline cnp.int64_t _uf_find(cnp.int64_t[::1] uf, cnp.int64_t z):
    while uf[z] != z:
        uf[z] = uf[uf[z]]
        z = uf[z]
    return z


cdef int _greedy_basis(
    TransportWorkspace ws,
    const double[:, :] cost,
    const double[::1] supply,
    const double[::1] demand,
) except -1:
    """Matrix-minimum initial basis; see the python twin for rationale.
    Allocation order is ascending (cost, flat index) in both backends."""
    cdef Py_ssize_t r = cost.shape[0]
    cdef Py_ssize_t c = cost.shape[1]
    cdef Py_ssize_t nb = r + c - 1
    cdef Py_ssize_t rc = r * c
    cdef double[::1] a = ws.a
    cdef double[::1] b = ws.b
    cdef cnp.int64_t[::1] heap = ws.heap
    cdef cnp.int64_t[::1] uf = ws.uf
    cdef cnp.int64_t[::1] bi = ws.bi
    cdef cnp.int64_t[::1] bj = ws.bj
    cdef double[::1] bf = ws.bf
    cdef Py_ssize_t i, j, k, size
    cdef cnp.int64_t flat, ri, rj
    cdef double q

    for i in range(r):
        a[i] = supply[i]
    for j in range(c):
        b[j] = demand[j]
    for i in range(r + c):
        uf[i] = i
    for flat in range(rc):
        heap[flat] = flat
    size = rc
    _heap_build(cost, c, heap, size)

    k = 0
    while size > 0 and k < nb:
        flat = _heap_pop(cost, c, heap, &size)
        i = flat // c
        j = flat % c
        if a[i] > 0.0 and b[j] > 0.0:
            q = a[i] if a[i] < b[j] else b[j]
            bi[k] = i
            bj[k] = j
            bf[k] = q
            a[i] -= q
            b[j] -= q
            uf[_uf_find(uf, i)] = _uf_find(uf, r + j)
            k += 1
    if k < nb:
        # forest -> spanning tree with zero-flow cells, same order
        for flat in range(rc):
            heap[flat] = flat
        size = rc
        _heap_build(cost, c, heap, size)
        while size > 0 and k < nb:
            flat = _heap_pop(cost, c, heap, &size)
            i = flat // c
            j = flat % c
            ri = _uf_find(uf, i)
            rj = _uf_find(uf, r + j)
            if ri != rj:
                bi[k] = i
                bj[k] = j
                bf[k] = 0.0
                uf[ri] = rj
                k += 1
    if k < nb:
        return 3
    return 0


cdef int _transport(
    TransportWorkspace ws,
    const double[:, :] cost,
    const double[::1] supply,
    const double[::1] demand,
    double* obj_out,
) except -1:
    """Core solve; basis left in ws. Returns 0, or raises via caller codes:
    1 = pivot budget exhausted, 2 = basis lost tree structure."""
    cdef Py_ssize_t r = cost.shape[0]
    cdef Py_ssize_t c = cost.shape[1]
    cdef Py_ssize_t nb = r + c - 1
    cdef Py_ssize_t nn = r + c
    cdef Py_ssize_t i, j, k, kk, node, other, head_i, tail, pos
    cdef Py_ssize_t ei, ej, arc, pivots, bland_after, max_pivots
    cdef Py_ssize_t path_len, leave_pos, meet, da, db
    cdef cnp.int64_t leave_key, key
    cdef double best, red, theta, f, ui, obj
    cdef bint improved

    cdef cnp.int64_t[::1] bi = ws.bi
    cdef cnp.int64_t[::1] bj = ws.bj
    cdef double[::1] bf = ws.bf
    cdef double[::1] u = ws.u
    cdef double[::1] v = ws.v
    cdef cnp.int64_t[::1] head = ws.head
    cdef cnp.int64_t[::1] nxt = ws.nxt
    cdef cnp.int64_t[::1] to_node = ws.to_node
    cdef cnp.int64_t[::1] cell_of = ws.cell_of
    cdef cnp.int64_t[::1] parent_node = ws.parent_node
    cdef cnp.int64_t[::1] parent_cell = ws.parent_cell
    cdef cnp.int64_t[::1] order = ws.order
    cdef cnp.int64_t[::1] depth = ws.depth
    cdef cnp.int64_t[::1] path = ws.path
    cdef cnp.uint8_t[::1] seen = ws.seen

    cdef int init_status = _greedy_basis(ws, cost, supply, demand)
    if init_status != 0:
        return init_status

    bland_after = 40 * nn + 200
    max_pivots = 2000 * nn + 20000
    pivots = 0

    while True:
        # rebuild tree adjacency
        for node in range(nn):
            head[node] = -1
        for k in range(nb):
            i = bi[k]
            node = r + bj[k]
            arc = 2 * k
            nxt[arc] = head[i]
            to_node[arc] = node
            cell_of[arc] = k
            head[i] = arc
            arc = 2 * k + 1
            nxt[arc] = head[node]
            to_node[arc] = i
            cell_of[arc] = k
            head[node] = arc
        # BFS from row node 0 for potentials, parents, depth
        for node in range(nn):
            seen[node] = 0
        parent_node[0] = -1
        parent_cell[0] = -1
        depth[0] = 0
        order[0] = 0
        seen[0] = 1
        u[0] = 0.0
        head_i = 0
        tail = 1
        while head_i < tail:
            node = order[head_i]
            head_i += 1
            arc = head[node]
            while arc != -1:
                other = to_node[arc]
                if not seen[other]:
                    seen[other] = 1
                    k = cell_of[arc]
                    parent_node[other] = node
                    parent_cell[other] = k
                    depth[other] = depth[node] + 1
                    order[tail] = other
                    tail += 1
                    if other >= r:
                        v[other - r] = cost[bi[k], bj[k]] - u[bi[k]]
                    else:
                        u[other] = cost[bi[k], bj[k]] - v[bj[k]]
                arc = nxt[arc]
        if tail != nn:
            return 2

        # pricing
        ei = -1
        ej = -1
        if pivots <= bland_after:
            best = -_PIVOT_TOL
            for i in range(r):
                ui = u[i]
                for j in range(c):
                    red = cost[i, j] - ui - v[j]
                    if red < best:
                        best = red
                        ei = i
                        ej = j
        else:
            improved = False
            for i in range(r):
                ui = u[i]
                for j in range(c):
                    red = cost[i, j] - ui - v[j]
                    if red < -_PIVOT_TOL:
                        ei = i
                        ej = j
                        improved = True
                        break
                if improved:
                    break
        if ei < 0:
            break

        # tree path from row node ei to col node r+ej; cells collected so
        # that path[0] is incident to the entering column (sign "-") and
        # signs alternate along the path.
        i = ei                    # src side walker
        j = r + ej                # dst side walker
        da = depth[i]
        db = depth[j]
        path_len = 0
        # collect dst-side prefix while deeper
        while db > da:
            path[path_len] = parent_cell[j]
            path_len += 1
            j = parent_node[j]
            db -= 1
        # collect src-side suffix (in reverse order) into tail of path
        kk = nn - 1
        while da > db:
            path[kk] = parent_cell[i]
            kk -= 1
            i = parent_node[i]
            da -= 1
        while i != j:
            path[path_len] = parent_cell[j]
            path_len += 1
            j = parent_node[j]
            path[kk] = parent_cell[i]
            kk -= 1
            i = parent_node[i]
        # splice the reversed src walk after the dst walk
        for pos in range(kk + 1, nn):
            path[path_len] = path[pos]
            path_len += 1

        # leaving variable among minus cells (even positions)
        theta = INFINITY
        leave_pos = -1
        leave_key = -1
        pos = 0
        while pos < path_len:
            k = path[pos]
            f = bf[k]
            key = bi[k] * c + bj[k]
            if f < theta - _PIVOT_TOL or (
                f < theta + _PIVOT_TOL and (leave_pos < 0 or key < leave_key)
            ):
                theta = f
                leave_pos = pos
                leave_key = key
            pos += 2
        if leave_pos < 0:
            return 2
        if theta < 0.0:
            theta = 0.0
        for pos in range(path_len):
            k = path[pos]
            if pos % 2 == 0:
                bf[k] -= theta
            else:
                bf[k] += theta
        k = path[leave_pos]
        bi[k] = ei
        bj[k] = ej
        bf[k] = theta

        pivots += 1
        if pivots > max_pivots:
            return 1

    obj = 0.0
    for k in range(nb):
        obj += bf[k] * cost[bi[k], bj[k]]
    obj_out[0] = obj
    return 0


cdef inline void _check_marginals(const double[::1] supply, const double[::1] demand) except *:
    cdef Py_ssize_t i
    cdef double total_a = 0.0, total_b = 0.0, lo = 0.0
    for i in range(supply.shape[0]):
        total_a += supply[i]
        if supply[i] < lo:
            lo = supply[i]
    for i in range(demand.shape[0]):
        total_b += demand[i]
        if demand[i] < lo:
            lo = demand[i]
    if lo < -_PIVOT_TOL:
        raise LpInfeasible("negative marginal")
    if fabs(total_a - total_b) > _BALANCE_TOL * max(1.0, total_a):
        raise LpInfeasible(f"unbalanced marginals: {total_a!r} vs {total_b!r}")


cdef inline void _raise_status(int status) except *:
    if status == 1:
        raise LpNumericalFailure("pivot budget exhausted")
    if status == 2:
        raise LpNumericalFailure("basis lost spanning-tree structure")
    if status == 3:
        raise LpNumericalFailure("could not assemble a spanning basis")


def solve_transport(cost, supply, demand, need_flow=True):
    """Balanced transportation problem; see the python twin for contract."""
    cost_arr = np.ascontiguousarray(cost, dtype=np.float64)
    cdef const double[:, :] cost_v = cost_arr
    cdef const double[::1] supply_v = np.ascontiguousarray(supply, dtype=np.float64)
    cdef const double[::1] demand_v = np.ascontiguousarray(demand, dtype=np.float64)
    cdef Py_ssize_t r = cost_v.shape[0]
    cdef Py_ssize_t c = cost_v.shape[1]
    if r == 0 or c == 0:
        raise LpInfeasible("empty marginal")
    _check_marginals(supply_v, demand_v)
    cdef TransportWorkspace ws = TransportWorkspace(r, c)
    cdef double obj = 0.0
    cdef int status = _transport(ws, cost_v, supply_v, demand_v, &obj)
    _raise_status(status)
    if not need_flow:
        return obj, None
    flow = np.zeros((r, c), dtype=np.float64)
    cdef double[:, ::1] flow_v = flow
    cdef Py_ssize_t k
    for k in range(r + c - 1):
        flow_v[ws.bi[k], ws.bj[k]] += ws.bf[k]
    return obj, flow


# ---------------------------------------------------------------------------
# batch curvature drivers

def star_kappa_batch(indptr, nbr, arc_edge, weights, dist, edge_u, edge_v):
    """Star-coupling curvature for every edge; see python twin for math."""
    cdef const cnp.int64_t[::1] indptr_v = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const cnp.int64_t[::1] nbr_v = np.ascontiguousarray(nbr, dtype=np.int64)
    cdef const cnp.int64_t[::1] arc_edge_v = np.ascontiguousarray(arc_edge, dtype=np.int64)
    cdef const double[::1] w_v = np.ascontiguousarray(weights, dtype=np.float64)
    cdef const double[:, ::1] dist_v = np.ascontiguousarray(dist, dtype=np.float64)
    cdef const cnp.int64_t[::1] eu = np.ascontiguousarray(edge_u, dtype=np.int64)
    cdef const cnp.int64_t[::1] ev = np.ascontiguousarray(edge_v, dtype=np.int64)
    cdef Py_ssize_t m = eu.shape[0]
    cdef Py_ssize_t n = dist_v.shape[0]

    cdef Py_ssize_t max_deg = 0, d
    cdef Py_ssize_t node
    for node in range(n):
        d = indptr_v[node + 1] - indptr_v[node]
        if d > max_deg:
            max_deg = d

    out = np.empty(m, dtype=np.float64)
    if m == 0:
        return out
    cdef double[::1] out_v = out
    cdef Py_ssize_t cap = max_deg + 1
    cdef TransportWorkspace ws = TransportWorkspace(cap, cap)
    cost_buf = np.empty((cap, cap), dtype=np.float64)
    sup_buf = np.empty(cap, dtype=np.float64)
    dem_buf = np.empty(cap, dtype=np.float64)
    cdef double[:, ::1] cost_b = cost_buf
    cdef double[::1] sup_b = sup_buf
    cdef double[::1] dem_b = dem_buf

    cdef Py_ssize_t e, x, y, r, c, i, j, lo, hi
    cdef double wsum, rho, obj
    cdef int status
    for e in range(m):
        x = eu[e]
        y = ev[e]
        rho = dist_v[x, y]
        lo = indptr_v[x]
        hi = indptr_v[x + 1]
        r = hi - lo + 1
        wsum = 0.0
        for i in range(hi - lo):
            wsum += w_v[arc_edge_v[lo + i]]
        for i in range(hi - lo):
            sup_b[i] = w_v[arc_edge_v[lo + i]] / wsum
        sup_b[r - 1] = 1.0
        for i in range(hi - lo):
            node = nbr_v[lo + i]
            _fill_cost_row(cost_b, dist_v, indptr_v, nbr_v, i, node, y, rho)
        _fill_cost_row(cost_b, dist_v, indptr_v, nbr_v, r - 1, x, y, rho)

        lo = indptr_v[y]
        hi = indptr_v[y + 1]
        c = hi - lo + 1
        wsum = 0.0
        for j in range(hi - lo):
            wsum += w_v[arc_edge_v[lo + j]]
        for j in range(hi - lo):
            dem_b[j] = w_v[arc_edge_v[lo + j]] / wsum
        dem_b[c - 1] = 1.0

        status = _transport(ws, cost_b[:r, :c], sup_b[:r], dem_b[:c], &obj)
        _raise_status(status)
        out_v[e] = -obj / rho
    return out


cdef inline void _fill_cost_row(
    double[:, ::1] cost_b,
    const double[:, ::1] dist_v,
    const cnp.int64_t[::1] indptr_v,
    const cnp.int64_t[::1] nbr_v,
    Py_ssize_t row,
    Py_ssize_t src,
    Py_ssize_t y,
    double rho,
):
    cdef Py_ssize_t lo = indptr_v[y]
    cdef Py_ssize_t hi = indptr_v[y + 1]
    cdef Py_ssize_t j
    for j in range(hi - lo):
        cost_b[row, j] = dist_v[src, nbr_v[lo + j]] - rho
    cost_b[row, hi - lo] = dist_v[src, y] - rho


def ollivier_kappa_batch(indptr, nbr, arc_edge, weights, dist, edge_u, edge_v, alpha):
    """alpha-lazy Ollivier curvature per edge; see python twin for math."""
    cdef const cnp.int64_t[::1] indptr_v = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const cnp.int64_t[::1] nbr_v = np.ascontiguousarray(nbr, dtype=np.int64)
    cdef const cnp.int64_t[::1] arc_edge_v = np.ascontiguousarray(arc_edge, dtype=np.int64)
    cdef const double[::1] w_v = np.ascontiguousarray(weights, dtype=np.float64)
    cdef const double[:, ::1] dist_v = np.ascontiguousarray(dist, dtype=np.float64)
    cdef const cnp.int64_t[::1] eu = np.ascontiguousarray(edge_u, dtype=np.int64)
    cdef const cnp.int64_t[::1] ev = np.ascontiguousarray(edge_v, dtype=np.int64)
    cdef double a = alpha
    cdef Py_ssize_t m = eu.shape[0]
    cdef Py_ssize_t n = dist_v.shape[0]
    cdef bint lazy = a > 0.0

    cdef Py_ssize_t max_deg = 0, d
    cdef Py_ssize_t node
    for node in range(n):
        d = indptr_v[node + 1] - indptr_v[node]
        if d > max_deg:
            max_deg = d

    out = np.empty(m, dtype=np.float64)
    if m == 0:
        return out
    cdef double[::1] out_v = out
    cdef Py_ssize_t cap = max_deg + (1 if lazy else 0)
    cdef TransportWorkspace ws = TransportWorkspace(cap, cap)
    cost_buf = np.empty((cap, cap), dtype=np.float64)
    sup_buf = np.empty(cap, dtype=np.float64)
    dem_buf = np.empty(cap, dtype=np.float64)
    cdef double[:, ::1] cost_b = cost_buf
    cdef double[::1] sup_b = sup_buf
    cdef double[::1] dem_b = dem_buf
    # support node scratch (x side / y side)
    sx_buf = np.empty(cap, dtype=np.int64)
    sy_buf = np.empty(cap, dtype=np.int64)
    cdef cnp.int64_t[::1] sx = sx_buf
    cdef cnp.int64_t[::1] sy = sy_buf

    cdef Py_ssize_t e, x, y, r, c, i, j, lo, hi
    cdef double wsum, rho, obj
    cdef int status
    for e in range(m):
        x = eu[e]
        y = ev[e]
        rho = dist_v[x, y]

        lo = indptr_v[x]
        hi = indptr_v[x + 1]
        r = hi - lo
        wsum = 0.0
        for i in range(r):
            wsum += w_v[arc_edge_v[lo + i]]
        for i in range(r):
            sup_b[i] = (1.0 - a) * w_v[arc_edge_v[lo + i]] / wsum
            sx[i] = nbr_v[lo + i]
        if lazy:
            sup_b[r] = a
            sx[r] = x
            r += 1

        lo = indptr_v[y]
        hi = indptr_v[y + 1]
        c = hi - lo
        wsum = 0.0
        for j in range(c):
            wsum += w_v[arc_edge_v[lo + j]]
        for j in range(c):
            dem_b[j] = (1.0 - a) * w_v[arc_edge_v[lo + j]] / wsum
            sy[j] = nbr_v[lo + j]
        if lazy:
            dem_b[c] = a
            sy[c] = y
            c += 1

        for i in range(r):
            for j in range(c):
                cost_b[i, j] = dist_v[sx[i], sy[j]]

        status = _transport(ws, cost_b[:r, :c], sup_b[:r], dem_b[:c], &obj)
        _raise_status(status)
        out_v[e] = 1.0 - obj / rho
    return out
