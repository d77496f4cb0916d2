"""Community detection on weighted graphs via modified discrete Ricci flow.

Pipeline: load or generate a weighted graph, evolve its weights under one
of four discrete Ricci-flow variants driven by star-coupling Lin-Lu-Yau
or lazy Ollivier curvature, then run a single post-flow surgery sweep
that cuts heavy edges at descending cutoffs and scores the resulting
components with modularity, ARI, and NMI.
"""

__version__ = "0.1.0"

from .curvature import (
    CurvatureMap,
    ProbabilityMeasure,
    StarCoupling,
    curvature_map,
    lly_limit_oracle,
    neighbor_measure,
    ollivier_curvature,
    star_coupling_curvature,
    wasserstein,
)
from .flow import (
    BadEdgeReport,
    FlowConfig,
    FlowTrajectory,
    detect_bad_edges,
    run_flow,
    step_limit,
    theoretical_bounds,
)
from .graph import (
    DistanceOracle,
    Partition,
    WeightedGraph,
    build_graph,
    connected_components,
    edge_rho,
    shortest_distance,
)
from .metrics import ContingencyTable, ari, modularity, nmi
from .sbm import (
    BenchSuite,
    SbmParams,
    run_suite,
    sbm_generate,
    suite_d1,
    suite_d2,
)
from .surgery import SweepReport, best_partition, sweep

__all__ = [
    "__version__",
    "BadEdgeReport",
    "BenchSuite",
    "ContingencyTable",
    "CurvatureMap",
    "DistanceOracle",
    "FlowConfig",
    "FlowTrajectory",
    "Partition",
    "ProbabilityMeasure",
    "SbmParams",
    "StarCoupling",
    "SweepReport",
    "WeightedGraph",
    "ari",
    "best_partition",
    "build_graph",
    "connected_components",
    "curvature_map",
    "detect_bad_edges",
    "edge_rho",
    "lly_limit_oracle",
    "modularity",
    "neighbor_measure",
    "nmi",
    "ollivier_curvature",
    "run_flow",
    "run_suite",
    "sbm_generate",
    "shortest_distance",
    "star_coupling_curvature",
    "step_limit",
    "suite_d1",
    "suite_d2",
    "sweep",
    "theoretical_bounds",
    "wasserstein",
]
