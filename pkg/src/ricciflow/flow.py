"""Discrete Ricci-flow iteration.

Four variants over one loop skeleton (compute curvature against a frozen
snapshot, then update every weight simultaneously):

    rho    w <- w - s * kappa * rho                  (star-coupling LLY)
    rhon   w <- w + s * (-kappa*rho + rho * sum(kappa*rho)/sum(w))
    dorf   w <- rho - s * kappa * rho                (alpha-Ollivier)
    ndorf  w <- w - s*kappa*w + s*w*sum(kappa*w)     (alpha-Ollivier,
                                                      weights normalized
                                                      to sum 1 at init)

rho admits the step bound s < 1/2 with the envelope
a0 (1-2s)^n <= w(t_n) <= b0 (1+2s)^n; rhon admits s < 1/(2(m+1)) with
a0 (1-2(m+1)s)^n <= w(t_n) <= b0 (1+4s)^n. The engine performs no
surgery of any kind mid-flow; heavy edges are only cut by the sweep
afterwards. Bad edges (w above the endpoint distance, or below the merge
threshold) are recorded as diagnostics each step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .curvature import CurvatureMap, curvature_map
from .errors import (
    NonPositiveWeightProduced,
    StepOutOfTheoreticalRange,
)
from .graph import DistanceOracle, WeightedGraph

VARIANTS = ("rho", "rhon", "dorf", "ndorf")

# condition (I) uses a strict inequality; this slack keeps exact w == rho
# (single shortest path through the edge itself) from being flagged by
# floating-point noise in the Dijkstra sums.
_BAD_EDGE_SLACK = 1e-9


@dataclass(frozen=True)
class FlowConfig:
    """Parameters of one flow run.

    ``enforce_theoretical_step=None`` resolves to the variant default:
    True for rho (the s < 1/2 bound is affordable), False for rhon
    (1/(2(m+1)) is impractically small on anything but toy graphs) and
    for the Ollivier baselines (no bound stated for them).
    """

    variant: str = "rhon"
    step: float = 0.1
    iterations: int = 30
    alpha: float = 0.5
    enforce_theoretical_step: bool | None = None
    merge_threshold: float = 1e-3

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step!r}")
        if self.iterations < 0:
            raise ValueError(f"iterations must be >= 0, got {self.iterations!r}")
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha!r}")
        if not self.merge_threshold > 0:
            raise ValueError("merge_threshold must be positive")

    @property
    def enforced(self) -> bool:
        if self.enforce_theoretical_step is None:
            return self.variant == "rho"
        return self.enforce_theoretical_step

    @property
    def curvature_method(self) -> str:
        return "star" if self.variant in ("rho", "rhon") else "ollivier"

    def validate_step(self, m: int) -> None:
        """Reject steps outside the variant's theorem range when enforced."""
        if not self.enforced:
            return
        limit = step_limit(self.variant, m)
        if limit is not None and not self.step < limit:
            raise StepOutOfTheoreticalRange(
                f"variant {self.variant!r} needs s < {limit!r}, got {self.step!r}"
            )


def step_limit(variant: str, m: int) -> float | None:
    """Upper bound on s backing the positivity theorems (None: no bound)."""
    if variant == "rho":
        return 0.5
    if variant == "rhon":
        return 1.0 / (2.0 * (m + 1))
    return None


@dataclass(frozen=True)
class FlowStepRecord:
    """State at time t_n: installed weights plus the curvature computed
    against them (the final record's curvature is diagnostic only)."""

    step: int
    weights: np.ndarray
    kappa: np.ndarray
    rho: np.ndarray

    @property
    def w_min(self) -> float:
        return float(self.weights.min())

    @property
    def w_max(self) -> float:
        return float(self.weights.max())

    @property
    def kappa_rho(self) -> np.ndarray:
        return self.kappa * self.rho


@dataclass
class FlowTrajectory:
    """Per-step flow history plus the first-trigger bad-edge log."""

    config: FlowConfig
    records: list[FlowStepRecord] = field(default_factory=list)
    # edge -> (first step, "I" or "II"); an edge counts once
    bad_edges: dict[int, tuple[int, str]] = field(default_factory=dict)

    @property
    def steps(self) -> int:
        return len(self.records) - 1

    def final_weights(self) -> np.ndarray:
        return self.records[-1].weights

    def _note_bad_edges(self, rec: FlowStepRecord, mt: float) -> None:
        w, rho = rec.weights, rec.rho
        cond1 = w > rho + _BAD_EDGE_SLACK * np.maximum(1.0, w)
        cond2 = w < mt
        for e in np.nonzero(cond1 | cond2)[0]:
            if int(e) not in self.bad_edges:
                self.bad_edges[int(e)] = (rec.step, "I" if cond1[e] else "II")


def step_rho(weights, kappa, rho, s):
    """w - s*kappa*rho, simultaneously from one snapshot."""
    return weights - s * kappa * rho


def step_rhon(weights, kappa, rho, s):
    """Quasi-normalized step: volume change is compensated through the
    global ratio sum(kappa*rho)/sum(w) scaled back onto each rho_e."""
    kr = kappa * rho
    return weights + s * (-kr + (kr.sum() / weights.sum()) * rho)


def step_dorf(weights, kappa, rho, s):
    """rho - s*kappa*rho: the update restarts from the endpoint distance."""
    return rho - s * kappa * rho


def step_ndorf(weights, kappa, rho, s):
    """Normalized Ollivier step; assumes weights were scaled to sum 1."""
    kw = kappa * weights
    return weights - s * kw + s * weights * kw.sum()


_STEPPERS = {
    "rho": step_rho,
    "rhon": step_rhon,
    "dorf": step_dorf,
    "ndorf": step_ndorf,
}


def flow_step(cfg: FlowConfig, cmap: CurvatureMap, weights: np.ndarray) -> np.ndarray:
    return _STEPPERS[cfg.variant](weights, cmap.kappa, cmap.rho, cfg.step)


def run_flow(g: WeightedGraph, cfg: FlowConfig) -> tuple[FlowTrajectory, WeightedGraph]:
    """Iterate the configured flow for cfg.iterations steps.

    Works on a copy; the input graph is untouched. Returns the trajectory
    (T+1 records, each with the curvature computed at that instant) and
    the copy carrying the final weights. Disconnected graphs are allowed:
    every edge's neighborhood lives inside one component, so curvature and
    the global sums stay well defined.

    A weight driven to zero or below raises NonPositiveWeightProduced;
    under an enforced theoretical step that would be a defect, otherwise
    it is a user-parameter error.
    """
    cfg.validate_step(g.m)
    work = g.copy()
    if cfg.variant == "ndorf":
        work.set_weights(work.weights / work.weights.sum())
    traj = FlowTrajectory(config=cfg)
    for n in range(cfg.iterations + 1):
        oracle = DistanceOracle(work)
        cmap = curvature_map(work, oracle, cfg.curvature_method, cfg.alpha)
        rec = FlowStepRecord(
            step=n,
            weights=work.weights.copy(),
            kappa=cmap.kappa,
            rho=cmap.rho,
        )
        traj.records.append(rec)
        traj._note_bad_edges(rec, cfg.merge_threshold)
        if n == cfg.iterations:
            break
        new_w = flow_step(cfg, cmap, rec.weights)
        if not (new_w > 0).all():
            bad = int(np.argmin(new_w))
            raise NonPositiveWeightProduced(bad, float(new_w[bad]), n + 1)
        work.set_weights(new_w)
    return traj, work


def theoretical_bounds(cfg: FlowConfig, m: int, a0: float, b0: float, n: int):
    """Envelope (lower, upper) on every weight after n steps.

    rho:  (a0 (1-2s)^n,        b0 (1+2s)^n)
    rhon: (a0 (1-2(m+1)s)^n,   b0 (1+4s)^n)
    """
    if a0 > b0:
        raise ValueError(f"a0 {a0!r} > b0 {b0!r}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    s = cfg.step
    limit = step_limit(cfg.variant, m)
    if limit is None:
        raise ValueError(f"no theoretical bounds for variant {cfg.variant!r}")
    if not s < limit:
        raise StepOutOfTheoreticalRange(
            f"variant {cfg.variant!r} needs s < {limit!r}, got {s!r}"
        )
    if cfg.variant == "rho":
        return a0 * (1.0 - 2.0 * s) ** n, b0 * (1.0 + 2.0 * s) ** n
    return a0 * (1.0 - 2.0 * (m + 1) * s) ** n, b0 * (1.0 + 4.0 * s) ** n


@dataclass(frozen=True)
class BadEdgeReport:
    """Aggregate of edges that ever met condition (I) w > d(endpoints)
    or (II) w < merge threshold during a flow run."""

    variant: str
    merge_threshold: float
    total_edges: int
    # edge -> (first step, condition)
    first_trigger: dict[int, tuple[int, str]]

    @property
    def count(self) -> int:
        return len(self.first_trigger)

    @property
    def fraction(self) -> float:
        return self.count / self.total_edges if self.total_edges else math.nan

    def count_by_condition(self) -> dict[str, int]:
        out = {"I": 0, "II": 0}
        for _, cond in self.first_trigger.values():
            out[cond] += 1
        return out


def detect_bad_edges(traj: FlowTrajectory, g: WeightedGraph, mt: float | None = None) -> BadEdgeReport:
    """Replay the trajectory's bad-edge conditions at threshold mt.

    With mt equal to the trajectory's own merge threshold this just
    repackages the live log; a different mt rescans the stored records.
    """
    if not traj.records:
        raise ValueError("empty trajectory")
    if mt is None or mt == traj.config.merge_threshold:
        first = dict(traj.bad_edges)
    else:
        scan = FlowTrajectory(config=replace(traj.config, merge_threshold=mt))
        for rec in traj.records:
            scan._note_bad_edges(rec, mt)
        first = dict(scan.bad_edges)
    return BadEdgeReport(
        variant=traj.config.variant,
        merge_threshold=traj.config.merge_threshold if mt is None else mt,
        total_edges=g.m,
        first_trigger=first,
    )
