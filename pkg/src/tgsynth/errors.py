"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class SynthesisError(Exception):
    """Base class for all errors raised by tgsynth."""


class GraphError(SynthesisError, ValueError):
    """A graph failed construction-time validation."""


class UnknownVertex(SynthesisError, KeyError):
    def __init__(self, vertex: str):
        super().__init__(vertex)
        self.vertex = vertex

    def __str__(self) -> str:
        return f"unknown vertex {self.vertex!r}"


class EnumerationBudgetExceeded(SynthesisError):
    """Path, realization or combination enumeration went past its budget."""

    def __init__(self, what: str, count: int, limit: int):
        super().__init__(f"{what}: enumerated {count} items, budget is {limit}")
        self.what = what
        self.count = count
        self.limit = limit


class AssumptionOneViolated(SynthesisError):
    """A proposition does not label exactly one state."""

    def __init__(self, proposition: str, count: int):
        super().__init__(
            f"proposition {proposition!r} labels {count} states, expected exactly 1"
        )
        self.proposition = proposition
        self.count = count


class EmptyCatalog(SynthesisError):
    """Some leg v_i -> v_{i+1} carries no flow at all."""

    def __init__(self, leg: tuple[str, str]):
        super().__init__(f"no flow from {leg[0]!r} to {leg[1]!r}")
        self.leg = leg


class InconsistentDimensions(SynthesisError, ValueError):
    pass


class Infeasible(SynthesisError):
    """The 0-1 program has no feasible assignment."""


class InfeasibleEnvironment(SynthesisError):
    """No static test environment exists for the requested waypoint chain."""

    def __init__(self, message: str, pairs: tuple[tuple[str, str], ...] = ()):
        super().__init__(message)
        self.pairs = pairs


class UnreachableGoal(SynthesisError):
    def __init__(self, start: str, goal: str):
        super().__init__(f"goal {goal!r} is unreachable from {start!r}")
        self.start = start
        self.goal = goal


class TooLarge(SynthesisError):
    def __init__(self, edges: int, max_edges: int):
        super().__init__(f"graph has {edges} edges; brute force allows {max_edges}")
        self.edges = edges
        self.max_edges = max_edges


class OutOfBounds(SynthesisError, ValueError):
    pass


class NonAdjacentCut(SynthesisError, ValueError):
    pass


class TooManyProps(SynthesisError, ValueError):
    pass


class ResampleBudgetExceeded(SynthesisError):
    pass
