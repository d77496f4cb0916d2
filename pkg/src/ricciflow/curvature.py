"""Per-edge Ricci curvature on weighted graphs.

Two routes are provided. The production route is the star-coupling form
of Lin-Lu-Yau curvature: for an edge e = xy,

    kappa_e = (1/rho_e) * sup_B sum_{u,v} B(u,v) d(u,v),

where B ranges over star couplings between the lazy-free neighborhood
measures of x and y (one nonnegative entry at (x, y), all other entries
nonpositive, zero total mass, prescribed row/column marginals away from
x and y). The supremum is attained on a compact polytope and is computed
exactly by rewriting the problem as a balanced transportation LP with x
and y attached as unit-mass dummy terminals.

The second route is alpha-lazy Ollivier curvature 1 - W(mu_x, mu_y)/d,
with the transport distance W solved by the same exact LP kernel. It
drives the DORF/NDORF baselines and, pushed through alpha -> 1, serves
as an independent cross-check of the star-coupling route.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    BadEdgeIndex,
    IsolatedNode,
    UnreachableSupport,
)
from .graph import DistanceOracle, WeightedGraph

MASS_TOL = 1e-12


@dataclass(frozen=True)
class ProbabilityMeasure:
    """Finitely supported measure: parallel (node index, mass) arrays."""

    support: np.ndarray
    mass: np.ndarray

    def __post_init__(self):
        if abs(float(self.mass.sum()) - 1.0) > MASS_TOL:
            raise ValueError(f"masses sum to {self.mass.sum()!r}, not 1")


@dataclass(frozen=True)
class StarCoupling:
    """Optimal star coupling certificate for one edge e = xy.

    ``rows`` lists {x} u N(x) (x last), ``cols`` lists {y} u N(y)
    (y last); ``matrix`` holds B over rows x cols. The single
    nonnegative entry sits at (x, y); every other entry is <= 0.
    """

    rows: np.ndarray
    cols: np.ndarray
    matrix: np.ndarray


@dataclass(frozen=True)
class CurvatureMap:
    """kappa_e and rho_e for every edge at one weight-vector instant."""

    kappa: np.ndarray
    rho: np.ndarray
    weights_version: int
    method: str
    alpha: float | None = None


def neighbor_measure(g: WeightedGraph, x, alpha: float) -> ProbabilityMeasure:
    """Lazy neighborhood measure: mass alpha at x, the rest spread over
    neighbors z proportionally to w_zx."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha!r}")
    idx = g.node_index(x)
    lo, hi = g.indptr[idx], g.indptr[idx + 1]
    if hi == lo:
        raise IsolatedNode(repr(x))
    sup = g.nbr[lo:hi].copy()
    w = g.weights[g.arc_edge[lo:hi]]
    mass = (1.0 - alpha) * w / w.sum()
    if alpha > 0.0:
        sup = np.append(sup, idx)
        mass = np.append(mass, alpha)
    return ProbabilityMeasure(sup, mass)


def wasserstein(
    g: WeightedGraph,
    mu: ProbabilityMeasure,
    nu: ProbabilityMeasure,
    oracle: DistanceOracle | None = None,
) -> float:
    """Exact optimal-transport cost between two measures on g's nodes."""
    oracle = oracle or DistanceOracle(g)
    d = oracle.matrix()
    cost = d[np.ix_(mu.support, nu.support)]
    if not np.isfinite(cost).all():
        raise UnreachableSupport("measure supports span disconnected components")
    obj, _ = kernels.solve_transport(cost, mu.mass, nu.mass, need_flow=False)
    return obj


def ollivier_curvature(
    g: WeightedGraph,
    e: int,
    alpha: float = 0.5,
    oracle: DistanceOracle | None = None,
) -> float:
    """alpha-Ollivier curvature kappa_e = 1 - W(mu_x^a, mu_y^a)/d(x, y)."""
    x, y = _edge_endpoints(g, e)
    oracle = oracle or DistanceOracle(g)
    mu = neighbor_measure(g, g.nodes[x], alpha)
    nu = neighbor_measure(g, g.nodes[y], alpha)
    w = wasserstein(g, mu, nu, oracle)
    return 1.0 - w / oracle.rho(e)


def star_coupling_curvature(
    g: WeightedGraph,
    e: int,
    oracle: DistanceOracle | None = None,
) -> tuple[float, StarCoupling]:
    """Lin-Lu-Yau curvature via the star-coupling LP, with certificate.

    The coupling variables live on ({x} u N(x)) x ({y} u N(y)). Writing
    P = -B off the (x, y) entry turns the constraints into transportation
    marginals: each neighbor u of x supplies mu_x^0(u), each neighbor v of
    y demands mu_y^0(v), and x / y enter as unit-mass dummy terminals
    (conservation forces the dummy row and column to carry equal slack).
    Moving u -> v costs d(u,v) - d(x,y), so the LP minimum equals
    -kappa_e * rho_e, and B is recovered from the optimal plan.
    """
    x, y = _edge_endpoints(g, e)
    oracle = oracle or DistanceOracle(g)
    d = oracle.matrix()
    rows = np.append(g.neighbors(x), x)
    cols = np.append(g.neighbors(y), y)
    wx = g.weights[g.arc_edge[g.indptr[x]: g.indptr[x + 1]]]
    wy = g.weights[g.arc_edge[g.indptr[y]: g.indptr[y + 1]]]
    supply = np.append(wx / wx.sum(), 1.0)
    demand = np.append(wy / wy.sum(), 1.0)
    rho = oracle.rho(e)
    cost = d[np.ix_(rows, cols)] - rho
    obj, plan = kernels.solve_transport(cost, supply, demand)
    kappa = -obj / rho
    matrix = -plan
    matrix[-1, -1] = plan.sum() - plan[-1, -1]  # B(x,y): total off-pivot mass
    return kappa, StarCoupling(rows=rows, cols=cols, matrix=matrix)


def lly_limit_oracle(g: WeightedGraph, e: int, alphas=(0.9, 0.99, 0.999)) -> float:
    """alpha -> 1 limit of Ollivier curvature via Richardson extrapolation.

    Evaluates h(a) = (1 - W(mu_x^a, mu_y^a)/d) / (1 - a) on the given
    strictly increasing alphas and extrapolates linearly in (1 - a) from
    the last two points; h is piecewise linear near 1, so this is exact
    up to LP precision once the alphas pass the final breakpoint. Test
    oracle for :func:`star_coupling_curvature`; not used by the flows.
    """
    alphas = list(alphas)
    if not all(0 <= a < 1 for a in alphas) or sorted(alphas) != alphas:
        raise ValueError("alphas must increase strictly toward 1")
    oracle = DistanceOracle(g)
    h = [ollivier_curvature(g, e, a, oracle) / (1.0 - a) for a in alphas]
    if len(h) == 1:
        return h[0]
    t1, t2 = 1.0 - alphas[-2], 1.0 - alphas[-1]
    return (t1 * h[-1] - t2 * h[-2]) / (t1 - t2)


def curvature_map(
    g: WeightedGraph,
    oracle: DistanceOracle | None = None,
    method: str = "star",
    alpha: float = 0.5,
) -> CurvatureMap:
    """kappa_e and rho_e for every edge against one snapshot.

    ``method`` picks the curvature: "star" (Lin-Lu-Yau via star coupling,
    the algorithms' default) or "ollivier" (alpha-lazy baseline). The
    whole map is computed by the batch kernel in one pass.
    """
    oracle = oracle or DistanceOracle(g)
    d = oracle.matrix()
    if method == "star":
        kappa = kernels.star_kappa_batch(
            g.indptr, g.nbr, g.arc_edge, g.weights, d, g.edge_u, g.edge_v
        )
        a = None
    elif method == "ollivier":
        kappa = kernels.ollivier_kappa_batch(
            g.indptr, g.nbr, g.arc_edge, g.weights, d, g.edge_u, g.edge_v, alpha
        )
        a = alpha
    else:
        raise ValueError(f"unknown curvature method {method!r}")
    return CurvatureMap(
        kappa=kappa,
        rho=oracle.rho_all(),
        weights_version=oracle.version,
        method=method,
        alpha=a,
    )


def _edge_endpoints(g: WeightedGraph, e: int) -> tuple[int, int]:
    if not 0 <= e < g.m:
        raise BadEdgeIndex(str(e))
    return int(g.edge_u[e]), int(g.edge_v[e])
