"""Kernel correctness: transportation simplex and Dijkstra, both backends.

The simplex is validated against three independent routes (dense-tableau
Bland simplex, scipy HiGHS, and exhaustive vertex enumeration on tiny
instances); Dijkstra against scipy.sparse.csgraph and DFS path
enumeration. Backend parity pins the python and cython twins together.
"""

import numpy as np
import pytest
import scipy.sparse
import scipy.sparse.csgraph

from ricciflow import kernels
from ricciflow.errors import LpInfeasible
from ricciflow.graph import build_graph

from conftest import random_connected_graph
from oracles import (
    transport_by_highs,
    transport_by_tableau,
    transport_by_vertex_enumeration,
)

BACKENDS = ["python"]
try:
    kernels.get_backend("cython")
    BACKENDS.append("cython")
except ImportError:  # extension not built
    pass


@pytest.fixture(params=BACKENDS)
def backend(request):
    return kernels.get_backend(request.param)


def random_transport_instance(rng, max_side=7, degenerate=False):
    r = int(rng.integers(1, max_side + 1))
    c = int(rng.integers(1, max_side + 1))
    cost = rng.uniform(-3.0, 5.0, size=(r, c)).round(3)
    if degenerate:
        supply = np.full(r, 1.0 / r)
        demand = np.full(c, 1.0 / c)
    else:
        supply = rng.uniform(0.1, 2.0, size=r)
        demand = rng.uniform(0.1, 2.0, size=c)
        demand *= supply.sum() / demand.sum()
    return cost, supply, demand


class TestTransportSimplex:
    def test_against_tableau_and_highs(self, backend, rng):
        for trial in range(120):
            cost, supply, demand = random_transport_instance(
                rng, degenerate=trial % 3 == 0
            )
            obj, flow = backend.solve_transport(cost, supply, demand)
            assert abs(obj - transport_by_highs(cost, supply, demand)) < 1e-8
            if trial % 5 == 0:
                assert abs(obj - transport_by_tableau(cost, supply, demand)) < 1e-8
            # marginals of the returned plan
            np.testing.assert_allclose(flow.sum(axis=1), supply, atol=1e-9)
            np.testing.assert_allclose(flow.sum(axis=0), demand, atol=1e-9)
            assert flow.min() > -1e-12

    def test_against_vertex_enumeration(self, backend, rng):
        for _ in range(25):
            cost, supply, demand = random_transport_instance(rng, max_side=3)
            obj, _ = backend.solve_transport(cost, supply, demand)
            assert abs(obj - transport_by_vertex_enumeration(cost, supply, demand)) < 1e-9

    def test_uniform_degenerate_grid(self, backend):
        # all-equal marginals maximize degenerate pivots
        for side in (2, 5, 9):
            cost = np.arange(side * side, dtype=float).reshape(side, side) % 4 - 1.5
            supply = np.full(side, 1.0 / side)
            demand = np.full(side, 1.0 / side)
            obj, _ = backend.solve_transport(cost, supply, demand)
            assert abs(obj - transport_by_highs(cost, supply, demand)) < 1e-9

    def test_identity_is_free(self, backend):
        cost = np.array([[0.0, 1.0], [1.0, 0.0]])
        obj, flow = backend.solve_transport(cost, [0.3, 0.7], [0.3, 0.7])
        assert obj == pytest.approx(0.0, abs=1e-12)
        np.testing.assert_allclose(flow, np.diag([0.3, 0.7]), atol=1e-12)

    def test_unbalanced_rejected(self, backend):
        with pytest.raises(LpInfeasible):
            backend.solve_transport(np.ones((2, 2)), [1.0, 1.0], [0.5, 0.5])

    def test_negative_marginal_rejected(self, backend):
        with pytest.raises(LpInfeasible):
            backend.solve_transport(np.ones((2, 2)), [-0.5, 1.5], [0.5, 0.5])

    def test_zero_mass_entries_allowed(self, backend):
        cost = np.array([[1.0, 2.0], [3.0, 0.5]])
        obj, _ = backend.solve_transport(cost, [0.0, 1.0], [0.4, 0.6])
        assert obj == pytest.approx(0.4 * 3.0 + 0.6 * 0.5, abs=1e-12)


class TestDijkstra:
    def test_against_scipy(self, backend, rng):
        for _ in range(30):
            g = random_connected_graph(rng, n_lo=3, n_hi=12)
            mat = scipy.sparse.csr_matrix(
                (
                    g.weights[g.arc_edge],
                    (np.repeat(np.arange(g.n), np.diff(g.indptr)), g.nbr),
                ),
                shape=(g.n, g.n),
            )
            expect = scipy.sparse.csgraph.dijkstra(mat, directed=False)
            got = backend.apsp(g.indptr, g.nbr, g.weights[g.arc_edge], g.n)
            np.testing.assert_allclose(got, expect, atol=1e-9)

    def test_unreachable_is_inf(self, backend):
        g = build_graph([(0, 1, 1.0), (2, 3, 2.0)])
        dist = backend.sssp(g.indptr, g.nbr, g.weights[g.arc_edge], 0, g.n)
        assert dist[1] == 1.0
        assert np.isinf(dist[2]) and np.isinf(dist[3])

    def test_triangle_shortcut(self, backend):
        g = build_graph([(0, 1, 3.0), (0, 2, 1.0), (2, 1, 1.0)])
        dist = backend.sssp(g.indptr, g.nbr, g.weights[g.arc_edge], 0, g.n)
        assert dist[1] == pytest.approx(2.0, abs=1e-12)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend unavailable")
class TestBackendParity:
    def test_transport_objectives_match(self, rng):
        py = kernels.get_backend("python")
        cy = kernels.get_backend("cython")
        for trial in range(60):
            cost, supply, demand = random_transport_instance(
                rng, degenerate=trial % 2 == 0
            )
            obj_py, flow_py = py.solve_transport(cost, supply, demand)
            obj_cy, flow_cy = cy.solve_transport(cost, supply, demand)
            assert abs(obj_py - obj_cy) < 1e-12
            np.testing.assert_allclose(flow_py, flow_cy, atol=1e-12)

    def test_curvature_batches_match(self, rng):
        py = kernels.get_backend("python")
        cy = kernels.get_backend("cython")
        for _ in range(10):
            g = random_connected_graph(rng)
            dist = py.apsp(g.indptr, g.nbr, g.weights[g.arc_edge], g.n)
            args = (g.indptr, g.nbr, g.arc_edge, g.weights, dist, g.edge_u, g.edge_v)
            np.testing.assert_allclose(
                py.star_kappa_batch(*args), cy.star_kappa_batch(*args), atol=1e-12
            )
            for alpha in (0.0, 0.5, 0.99):
                np.testing.assert_allclose(
                    py.ollivier_kappa_batch(*args, alpha),
                    cy.ollivier_kappa_batch(*args, alpha),
                    atol=1e-12,
                )

    def test_apsp_matches(self, rng):
        py = kernels.get_backend("python")
        cy = kernels.get_backend("cython")
        for _ in range(10):
            g = random_connected_graph(rng, n_hi=15)
            arc_w = g.weights[g.arc_edge]
            np.testing.assert_array_equal(
                py.apsp(g.indptr, g.nbr, arc_w, g.n),
                cy.apsp(g.indptr, g.nbr, arc_w, g.n),
            )
