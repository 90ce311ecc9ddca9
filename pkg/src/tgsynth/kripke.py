"""Kripke abstractions, waypoint resolution and the finite-trace checker."""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import AssumptionOneViolated, GraphError, UnknownVertex
from .graph import DirectedGraph, Vertex
from .ltl import holds, sequence_formula


@dataclass(frozen=True)
class KripkeAbstraction:
    """States, transitions, initial states and labels of an agent model.

    ``actions`` is carried for completeness; transitions do not consume it.
    """

    states: tuple[Vertex, ...]
    transitions: Mapping[Vertex, tuple[Vertex, ...]]
    init: tuple[Vertex, ...] = ()
    labels: Mapping[Vertex, frozenset[str]] = field(default_factory=dict)
    actions: tuple[str, ...] = ()
    atomic_props: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        known = set(self.states)
        if len(known) != len(self.states):
            raise GraphError("duplicate states")
        for q, targets in self.transitions.items():
            for v in (q, *targets):
                if v not in known:
                    raise UnknownVertex(v)
        for q in self.init:
            if q not in known:
                raise UnknownVertex(q)
        labels = {q: frozenset(ps) for q, ps in self.labels.items()}
        for q in labels:
            if q not in known:
                raise UnknownVertex(q)
        used = frozenset().union(*labels.values()) if labels else frozenset()
        ap = frozenset(self.atomic_props) | used
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "atomic_props", ap)

    @classmethod
    def build(
        cls,
        states: Iterable[Vertex],
        transitions: Mapping[Vertex, Iterable[Vertex]],
        init: Iterable[Vertex] = (),
        labels: Mapping[Vertex, Iterable[str]] | None = None,
        actions: Iterable[str] = (),
    ) -> "KripkeAbstraction":
        return cls(
            states=tuple(states),
            transitions={q: tuple(vs) for q, vs in transitions.items()},
            init=tuple(init),
            labels={q: frozenset(ps) for q, ps in (labels or {}).items()},
            actions=tuple(actions),
        )

    def label(self, q: Vertex) -> frozenset[str]:
        return self.labels.get(q, frozenset())


def induce_graph(k: KripkeAbstraction) -> DirectedGraph:
    """One vertex per state, one edge per transition; self-loops are dropped."""
    edges = []
    for q in k.states:
        for v in k.transitions.get(q, ()):
            if v == q:
                warnings.warn(f"dropping self-loop on state {q!r}", stacklevel=2)
                continue
            edges.append((q, v))
    return DirectedGraph(k.states, edges)


@dataclass(frozen=True)
class TestProblem:
    """A graph together with its resolved waypoint chain.

    ``waypoints`` holds ``v_1 .. v_n`` followed by the goal ``v_{n+1}``.
    """

    __test__ = False  # not a pytest class

    graph: DirectedGraph
    chain: tuple[str, ...]
    mission: str
    waypoints: tuple[Vertex, ...]
    labels: Mapping[Vertex, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.chain:
            raise ValueError("the waypoint chain needs at least one proposition")
        if len(self.waypoints) != len(self.chain) + 1:
            raise ValueError("need one waypoint per proposition plus the goal")
        if len(set(self.waypoints)) != len(self.waypoints):
            raise ValueError(f"waypoints must be distinct: {self.waypoints}")
        self.graph.require(*self.waypoints)

    @classmethod
    def from_waypoints(
        cls, graph: DirectedGraph, waypoints: Sequence[Vertex]
    ) -> "TestProblem":
        """Problem whose propositions ``p1 .. p{n+1}`` label the given vertices."""
        props = tuple(f"p{i + 1}" for i in range(len(waypoints)))
        labels = {v: frozenset([p]) for v, p in zip(waypoints, props)}
        return cls(graph, props[:-1], props[-1], tuple(waypoints), labels)

    @property
    def n(self) -> int:
        return len(self.chain)

    @property
    def start(self) -> Vertex:
        return self.waypoints[0]

    @property
    def goal(self) -> Vertex:
        return self.waypoints[-1]

    @property
    def propositions(self) -> tuple[str, ...]:
        return self.chain + (self.mission,)

    def legs(self) -> list[tuple[Vertex, Vertex]]:
        w = self.waypoints
        return list(zip(w, w[1:]))

    def pair_graph(self, g: DirectedGraph, i: int, j: int) -> DirectedGraph:
        """``g`` with every waypoint other than ``v_i`` and ``v_j`` removed (0-based)."""
        keep = {self.waypoints[i], self.waypoints[j]}
        return g.without_vertices(w for w in self.waypoints if w not in keep)

    def leg_graph(self, g: DirectedGraph, i: int) -> DirectedGraph:
        return self.pair_graph(g, i, i + 1)

    def with_graph(self, g: DirectedGraph) -> "TestProblem":
        return TestProblem(g, self.chain, self.mission, self.waypoints, self.labels)

    def label(self, v: Vertex) -> frozenset[str]:
        return self.labels.get(v, frozenset())


def resolve_waypoints(
    k: KripkeAbstraction, chain: Sequence[str], mission: str
) -> TestProblem:
    """Map each proposition to the single state it labels.

    Raises:
        AssumptionOneViolated: a proposition labels zero or several states.
    """
    if not chain:
        raise ValueError("the waypoint chain needs at least one proposition")
    waypoints = []
    for p in (*chain, mission):
        holders = [q for q in k.states if p in k.label(q)]
        if len(holders) != 1:
            raise AssumptionOneViolated(p, len(holders))
        waypoints.append(holders[0])
    return TestProblem(induce_graph(k), tuple(chain), mission, tuple(waypoints), dict(k.labels))


class TraceVerdict(str, enum.Enum):
    SATISFIES_SEQUENCE = "SatisfiesSequence"
    MISSION_ONLY = "MissionOnly"
    NEITHER_OR_INCOMPLETE = "NeitherOrIncomplete"


@dataclass(frozen=True)
class Trace:
    states: tuple[Vertex, ...]

    def __post_init__(self) -> None:
        if not self.states:
            raise ValueError("a trace needs at least one state")

    def is_run_of(self, g: DirectedGraph) -> bool:
        s = self.states
        return all(v in g for v in s) and all(g.has_edge(a, b) for a, b in zip(s, s[1:]))


def check_trace(trace: Trace | Sequence[Vertex], tp: TestProblem) -> TraceVerdict:
    """Classify a finite run against the mission and the ordered waypoints.

    The run is cut at its first visit to the goal; the sequence formula is
    then evaluated on that prefix.
    """
    states = trace.states if isinstance(trace, Trace) else tuple(trace)
    if not states:
        raise ValueError("a trace needs at least one state")
    if tp.goal not in states:
        return TraceVerdict.NEITHER_OR_INCOMPLETE
    prefix = states[: states.index(tp.goal) + 1]
    # waypoints by position; the labelling may carry unrelated propositions
    tags = {v: f"w{i}" for i, v in enumerate(tp.waypoints)}
    word = [frozenset([tags[q]]) if q in tags else frozenset() for q in prefix]
    phi = sequence_formula([f"w{i}" for i in range(len(tp.waypoints))])
    if holds(phi, word):
        return TraceVerdict.SATISFIES_SEQUENCE
    return TraceVerdict.MISSION_ONLY
