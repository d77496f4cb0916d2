"""Exception types raised across the toolkit.

Every error class name doubles as the machine-parseable error code printed
by the CLI on failure, so names are kept short and stable.
"""


class RicciFlowError(Exception):
    """Base class for all toolkit errors."""


# graph construction / lookup
class NonPositiveWeight(RicciFlowError):
    pass


class SelfLoop(RicciFlowError):
    pass


class DuplicateEdge(RicciFlowError):
    pass


class UnknownNode(RicciFlowError):
    pass


class BadEdgeIndex(RicciFlowError):
    pass


class EmptyGraph(RicciFlowError):
    pass


class StaleDistances(RicciFlowError):
    """A DistanceOracle was queried after the graph weights changed."""


# curvature
class IsolatedNode(RicciFlowError):
    pass


class UnreachableSupport(RicciFlowError):
    pass


class LpInfeasible(RicciFlowError):
    """The transportation LP was fed inconsistent marginals.

    The feasible set of both LPs used here is provably nonempty, so this
    always signals a constraint-assembly bug, never a property of the input
    graph.
    """


class LpNumericalFailure(RicciFlowError):
    pass


# flow engine
class NonPositiveWeightProduced(RicciFlowError):
    """A flow step drove some edge weight to zero or below."""

    def __init__(self, edge_index: int, value: float, step_index: int):
        self.edge_index = edge_index
        self.value = value
        self.step_index = step_index
        super().__init__(
            f"edge {edge_index} got weight {value!r} at step {step_index}"
        )


class StepOutOfTheoreticalRange(RicciFlowError):
    pass


# surgery / metrics
class CriterionUnavailable(RicciFlowError):
    pass


class MismatchedNodeSets(RicciFlowError):
    pass


class EmptyEdgeSet(RicciFlowError):
    pass


# synthetic benchmarks
class DegenerateParams(RicciFlowError):
    pass


# dataset ingestion
class ParseError(RicciFlowError):
    def __init__(self, path, line_no: int, message: str):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {message}")


class UnlabeledNode(RicciFlowError):
    pass


class UnknownLabelNode(RicciFlowError):
    pass


class FixtureUnavailable(RicciFlowError):
    pass
