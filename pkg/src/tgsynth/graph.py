"""Unit-capacity directed graphs: max flow, residual networks, min-cut edges
and enumeration of maximum-flow realizations.

Every edge has capacity one, so a maximum flow from ``s`` to ``t`` is the same
thing as a largest set of pairwise edge-disjoint ``s``-``t`` paths.  All
iteration orders follow vertex insertion order, which keeps every result in
this module reproducible.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import EnumerationBudgetExceeded, GraphError, UnknownVertex

Vertex = str
Edge = tuple[str, str]

DEFAULT_LIMIT = 10_000


class PathMode(str, enum.Enum):
    """Which candidate paths a flow realization may draw from."""

    ALL = "all"
    SHORTEST = "shortest"


class DirectedGraph:
    """Immutable directed graph without self-loops or parallel edges.

    Args:
        vertices: vertex identifiers; their order is the canonical order.
        edges: ``(u, v)`` pairs; their order is the canonical edge order.

    Raises:
        GraphError: on duplicate vertices or edges, self-loops, or edges whose
            endpoints are not declared vertices.
    """

    __slots__ = ("_vertices", "_edges", "_index", "_edge_index", "_succ", "_pred")

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[Edge] = ()):
        verts = tuple(vertices)
        index = {v: i for i, v in enumerate(verts)}
        if len(index) != len(verts):
            raise GraphError("duplicate vertex identifiers")
        es: list[Edge] = []
        edge_index: dict[Edge, int] = {}
        succ: dict[Vertex, list[Vertex]] = {v: [] for v in verts}
        pred: dict[Vertex, list[Vertex]] = {v: [] for v in verts}
        for raw in edges:
            u, v = raw
            if u not in index or v not in index:
                missing = u if u not in index else v
                raise GraphError(f"edge ({u!r}, {v!r}) uses undeclared vertex {missing!r}")
            if u == v:
                raise GraphError(f"self-loop on {u!r}")
            e = (u, v)
            if e in edge_index:
                raise GraphError(f"duplicate edge ({u!r}, {v!r})")
            edge_index[e] = len(es)
            es.append(e)
            succ[u].append(v)
            pred[v].append(u)
        self._vertices = verts
        self._edges = tuple(es)
        self._index = index
        self._edge_index = edge_index
        self._succ = {v: tuple(sorted(ns, key=index.__getitem__)) for v, ns in succ.items()}
        self._pred = {v: tuple(sorted(ns, key=index.__getitem__)) for v, ns in pred.items()}

    @property
    def vertices(self) -> tuple[Vertex, ...]:
        return self._vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    def __contains__(self, vertex: object) -> bool:
        return vertex in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return self._vertices == other._vertices and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._vertices, self._edges))

    def __repr__(self) -> str:
        return f"DirectedGraph(|V|={len(self._vertices)}, |E|={len(self._edges)})"

    def require(self, *vertices: Vertex) -> None:
        for v in vertices:
            if v not in self._index:
                raise UnknownVertex(v)

    def index(self, vertex: Vertex) -> int:
        try:
            return self._index[vertex]
        except KeyError:
            raise UnknownVertex(vertex) from None

    def edge_index(self, edge: Edge) -> int:
        return self._edge_index[edge]

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return (u, v) in self._edge_index

    def successors(self, vertex: Vertex) -> tuple[Vertex, ...]:
        return self._succ[vertex]

    def predecessors(self, vertex: Vertex) -> tuple[Vertex, ...]:
        return self._pred[vertex]

    def without_edges(self, removed: Iterable[Edge]) -> "DirectedGraph":
        drop = set(removed)
        return DirectedGraph(self._vertices, (e for e in self._edges if e not in drop))

    def without_vertices(self, removed: Iterable[Vertex]) -> "DirectedGraph":
        drop = set(removed)
        return DirectedGraph(
            (v for v in self._vertices if v not in drop),
            (e for e in self._edges if e[0] not in drop and e[1] not in drop),
        )


@dataclass(frozen=True, order=True)
class SimplePath:
    """A directed path that repeats no vertex."""

    vertices: tuple[Vertex, ...]

    def __post_init__(self) -> None:
        if not self.vertices:
            raise ValueError("a path needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError(f"path {self.vertices} repeats a vertex")

    @property
    def source(self) -> Vertex:
        return self.vertices[0]

    @property
    def target(self) -> Vertex:
        return self.vertices[-1]

    @property
    def edges(self) -> tuple[Edge, ...]:
        vs = self.vertices
        return tuple(zip(vs, vs[1:]))

    def __len__(self) -> int:
        """Number of edges (hop count)."""
        return len(self.vertices) - 1

    def __iter__(self) -> Iterator[Vertex]:
        return iter(self.vertices)

    def __str__(self) -> str:
        return "[" + ",".join(self.vertices) + "]"

    def in_graph(self, g: DirectedGraph) -> bool:
        return all(v in g for v in self.vertices) and all(g.has_edge(*e) for e in self.edges)


@dataclass(frozen=True)
class FlowRealization:
    """Pairwise edge-disjoint ``source``-``sink`` paths."""

    source: Vertex
    sink: Vertex
    paths: tuple[SimplePath, ...]

    @property
    def value(self) -> int:
        return len(self.paths)

    def edges(self) -> tuple[Edge, ...]:
        return tuple(e for p in self.paths for e in p.edges)

    def is_edge_disjoint(self) -> bool:
        seen: set[Edge] = set()
        for e in self.edges():
            if e in seen:
                return False
            seen.add(e)
        return True


@dataclass(frozen=True)
class ResidualNetwork:
    """Residual capacities of a unit-capacity graph under a 0/1 flow.

    ``flow`` holds the edges carrying one unit.  A pair may have capacity two
    when the graph has both ``(u, v)`` and ``(v, u)``.
    """

    base: DirectedGraph
    flow: frozenset[Edge]

    def residual_capacity(self, u: Vertex, v: Vertex) -> int:
        forward = 1 if self.base.has_edge(u, v) and (u, v) not in self.flow else 0
        backward = 1 if (v, u) in self.flow else 0
        return forward + backward

    def arcs(self, u: Vertex) -> Iterator[tuple[Vertex, Edge, int]]:
        """Residual arcs leaving ``u`` as ``(head, edge, direction)``.

        ``direction`` is +1 when pushing along ``edge`` and -1 when cancelling
        flow already on it.
        """
        for v in self.base.successors(u):
            if (u, v) not in self.flow:
                yield v, (u, v), 1
        for w in self.base.predecessors(u):
            if (w, u) in self.flow:
                yield w, (w, u), -1

    def augmenting_path(self, s: Vertex, t: Vertex) -> list[tuple[Edge, int]] | None:
        """Shortest augmenting path found by breadth-first search, or None."""
        parent: dict[Vertex, tuple[Vertex, Edge, int]] = {}
        seen = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v, edge, direction in self.arcs(u):
                if v in seen:
                    continue
                seen.add(v)
                parent[v] = (u, edge, direction)
                if v == t:
                    steps = []
                    while v != s:
                        u, edge, direction = parent[v]
                        steps.append((edge, direction))
                        v = u
                    steps.reverse()
                    return steps
                queue.append(v)
        return None


def _decompose(g: DirectedGraph, flow: set[Edge], s: Vertex, t: Vertex, value: int) -> tuple[SimplePath, ...]:
    remaining = set(flow)
    paths = []
    for _ in range(value):
        walk = [s]
        pos = {s: 0}
        u = s
        while u != t:
            v = next(w for w in g.successors(u) if (u, w) in remaining)
            remaining.discard((u, v))
            if v in pos:
                # closed a cycle of flow; drop it from the walk
                for w in walk[pos[v] + 1:]:
                    del pos[w]
                del walk[pos[v] + 1:]
            else:
                pos[v] = len(walk)
                walk.append(v)
            u = v
        paths.append(SimplePath(tuple(walk)))
    return tuple(paths)


def max_flow_unit(g: DirectedGraph, s: Vertex, t: Vertex) -> FlowRealization:
    """Maximum ``s``-``t`` flow by shortest augmenting paths (Edmonds-Karp).

    The flow is decomposed into simple paths, following successors in vertex
    order, so the returned realization is deterministic.
    """
    g.require(s, t)
    if s == t:
        raise ValueError("source and sink must differ")
    flow: set[Edge] = set()
    value = 0
    while True:
        steps = ResidualNetwork(g, frozenset(flow)).augmenting_path(s, t)
        if steps is None:
            break
        for edge, direction in steps:
            if direction > 0:
                flow.add(edge)
            else:
                flow.discard(edge)
        value += 1
    return FlowRealization(s, t, _decompose(g, flow, s, t, value))


def max_flow_value(g: DirectedGraph, s: Vertex, t: Vertex) -> int:
    return max_flow_unit(g, s, t).value


def _bfs(g: DirectedGraph, start: Vertex, reverse: bool = False) -> dict[Vertex, int]:
    step = g.predecessors if reverse else g.successors
    dist = {start: 0}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in step(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def distances_from(g: DirectedGraph, source: Vertex) -> dict[Vertex, int]:
    """Hop distances from ``source`` to every reachable vertex."""
    g.require(source)
    return _bfs(g, source)


def distances_to(g: DirectedGraph, target: Vertex) -> dict[Vertex, int]:
    """Hop distances from every vertex that can reach ``target``."""
    g.require(target)
    return _bfs(g, target, reverse=True)


def shortest_distance(g: DirectedGraph, u: Vertex, v: Vertex) -> float:
    """Length of a shortest directed ``u``-``v`` path; ``math.inf`` if none."""
    g.require(u, v)
    return _bfs(g, u).get(v, math.inf)


def reachable(g: DirectedGraph, u: Vertex, v: Vertex) -> bool:
    return shortest_distance(g, u, v) < math.inf


def min_cut_edges(g: DirectedGraph, s: Vertex, t: Vertex) -> tuple[Edge, ...]:
    """Edges whose removal lowers the ``s``-``t`` maximum flow, in edge order."""
    base = max_flow_unit(g, s, t)
    if base.value == 0:
        return ()
    # an edge idle in some maximum flow can never be a min-cut edge
    candidates = set(base.edges())
    return tuple(
        e for e in g.edges
        if e in candidates and max_flow_value(g.without_edges([e]), s, t) < base.value
    )


def simple_paths(
    g: DirectedGraph,
    s: Vertex,
    t: Vertex,
    mode: PathMode = PathMode.ALL,
    limit: int = DEFAULT_LIMIT,
) -> list[SimplePath]:
    """All simple (or all shortest) ``s``-``t`` paths in depth-first order.

    Raises:
        EnumerationBudgetExceeded: once more than ``limit`` paths turn up.
    """
    g.require(s, t)
    to_t = distances_to(g, t)
    if s not in to_t:
        return []
    if s == t:
        return [SimplePath((s,))]
    shortest = PathMode(mode) is PathMode.SHORTEST
    out: list[SimplePath] = []
    path = [s]
    on_path = {s}
    stack = [iter(g.successors(s))]
    while stack:
        u = path[-1]
        v = next(stack[-1], None)
        if v is None:
            stack.pop()
            on_path.discard(path.pop())
            continue
        if v in on_path or v not in to_t:
            continue
        if shortest and to_t[v] != to_t[u] - 1:
            continue
        if v == t:
            out.append(SimplePath(tuple(path) + (t,)))
            if len(out) > limit:
                raise EnumerationBudgetExceeded(f"simple paths {s}->{t}", len(out), limit)
            continue
        path.append(v)
        on_path.add(v)
        stack.append(iter(g.successors(v)))
    return out


def _edge_masks(g: DirectedGraph, paths: Sequence[SimplePath]) -> list[int]:
    masks = []
    for p in paths:
        m = 0
        for e in p.edges:
            m |= 1 << g.edge_index(e)
        masks.append(m)
    return masks


def enumerate_flow_realizations(
    g: DirectedGraph,
    s: Vertex,
    t: Vertex,
    mode: PathMode = PathMode.ALL,
    limit: int = DEFAULT_LIMIT,
    realization_limit: int | None = None,
) -> list[FlowRealization]:
    """Every set of ``f_G(s, t)`` pairwise edge-disjoint candidate paths.

    Candidates are all simple paths, or only the shortest ones.  In shortest
    mode the list is empty when shortest paths alone cannot carry the
    maximum flow.  Realizations come out in lexicographic order of the
    candidates' depth-first positions.

    Args:
        limit: budget on candidate paths.
        realization_limit: budget on returned realizations; defaults to
            ``limit``.
    """
    g.require(s, t)
    if s == t:
        raise ValueError("source and sink must differ")
    if realization_limit is None:
        realization_limit = limit
    k = max_flow_value(g, s, t)
    if k == 0:
        return [FlowRealization(s, t, ())]
    paths = simple_paths(g, s, t, mode, limit)
    masks = _edge_masks(g, paths)
    n = len(paths)
    out: list[FlowRealization] = []
    chosen: list[int] = []

    def extend(start: int, used: int) -> None:
        if len(chosen) == k:
            out.append(FlowRealization(s, t, tuple(paths[i] for i in chosen)))
            if len(out) > realization_limit:
                raise EnumerationBudgetExceeded(
                    f"flow realizations {s}->{t}", len(out), realization_limit
                )
            return
        need = k - len(chosen)
        for i in range(start, n - need + 1):
            if masks[i] & used:
                continue
            chosen.append(i)
            extend(i + 1, used | masks[i])
            chosen.pop()

    extend(0, 0)
    return out


def to_dot(
    g: DirectedGraph,
    cuts: Iterable[Edge] = (),
    labels: dict[Vertex, Sequence[str]] | None = None,
    name: str = "G",
) -> str:
    """Graphviz DOT text; edges in ``cuts`` are drawn dashed red."""
    cut = set(cuts)
    lines = [f'digraph "{name}" {{']
    for v in g.vertices:
        props = list(labels.get(v, ())) if labels else []
        text = v if not props else f"{v}\\n{{{', '.join(props)}}}"
        lines.append(f'  "{v}" [label="{text}"];')
    for u, v in g.edges:
        style = ' [style=dashed, color=red]' if (u, v) in cut else ""
        lines.append(f'  "{u}" -> "{v}"{style};')
    lines.append("}")
    return "\n".join(lines) + "\n"
