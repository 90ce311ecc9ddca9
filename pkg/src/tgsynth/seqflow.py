"""Sequence flows: chaining per-leg flow realizations into waypoint-ordered
paths and measuring how many edge-disjoint ones can coexist.

A *leg* is the hop from waypoint ``v_i`` to ``v_{i+1}``.  Its flows are
computed on the graph with every other waypoint deleted.  A combination
picks one maximum-flow realization per leg; a sequence flow inside it is a
set of leg tuples that are pairwise edge-disjoint and free of ij-cycles
under any mixing of their legs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptyCatalog, EnumerationBudgetExceeded
from .graph import (
    DEFAULT_LIMIT,
    DirectedGraph,
    Edge,
    FlowRealization,
    PathMode,
    SimplePath,
    Vertex,
    enumerate_flow_realizations,
    max_flow_value,
)
from .kripke import TestProblem


@dataclass(frozen=True)
class SequenceFlowPath:
    """Legs ``P_1 .. P_n`` with ``P_i`` running from ``v_i`` to ``v_{i+1}``."""

    legs: tuple[SimplePath, ...]

    def vertices(self) -> tuple[Vertex, ...]:
        out = list(self.legs[0].vertices)
        for leg in self.legs[1:]:
            out.extend(leg.vertices[1:])
        return tuple(out)

    def edges(self) -> tuple[Edge, ...]:
        return tuple(e for leg in self.legs for e in leg.edges)


def has_ij_cycle(legs: Sequence[SimplePath], waypoints: Sequence[Vertex]) -> bool:
    """True if some leg ``i`` enters a vertex ``w`` that a later leg ``j`` leaves.

    The junction ``w = v_{i+1}`` with ``j = i + 1`` is the one allowed
    exception.  ``waypoints`` lists ``v_1 .. v_{n+1}``.
    """
    for i, pi in enumerate(legs):
        entered = {w for _, w in pi.edges}
        for j in range(i + 1, len(legs)):
            for w, _ in legs[j].edges:
                if w in entered and not (j == i + 1 and w == waypoints[i + 1]):
                    return True
    return False


def _chains(legs: Sequence[SimplePath], waypoints: Sequence[Vertex]) -> bool:
    return len(legs) == len(waypoints) - 1 and all(
        p.source == waypoints[i] and p.target == waypoints[i + 1] for i, p in enumerate(legs)
    )


def distance_ordering_holds(edges: Sequence[Edge], waypoints: Sequence[Vertex]) -> bool:
    """Strictly decreasing hop distance to the goal along the waypoint chain."""
    pred: dict[Vertex, list[Vertex]] = {}
    for u, v in edges:
        pred.setdefault(v, []).append(u)
    goal = waypoints[-1]
    dist = {goal: 0}
    frontier = [goal]
    while frontier:
        nxt = []
        for v in frontier:
            for u in pred.get(v, ()):
                if u not in dist:
                    dist[u] = dist[v] + 1
                    nxt.append(u)
        frontier = nxt
    ds = [dist.get(w, math.inf) for w in waypoints]
    return all(a > b for a, b in zip(ds, ds[1:])) and ds[0] < math.inf


def is_sequence_flow_path(legs: Sequence[SimplePath], waypoints: Sequence[Vertex]) -> bool:
    return (
        _chains(legs, waypoints)
        and not has_ij_cycle(legs, waypoints)
        and distance_ordering_holds([e for p in legs for e in p.edges], waypoints)
    )


@dataclass(frozen=True)
class SequenceFlow:
    """One sequence flow ``S_f`` inside a combination.

    ``rows[q][i]`` is the index, within leg ``i``'s realization, of the leg
    used by the ``q``-th sequence flow path.
    """

    rows: tuple[tuple[int, ...], ...]
    matrix: np.ndarray

    @property
    def value(self) -> int:
        return len(self.rows)

    @property
    def degrees(self) -> np.ndarray:
        """Diagonal of ``D_f``: ones per row of ``A_f``."""
        return self.matrix.sum(axis=1)


@dataclass(frozen=True)
class Combination:
    """One realization per leg plus every maximal sequence flow it admits."""

    realizations: tuple[FlowRealization, ...]
    flows: tuple[SequenceFlow, ...]

    @property
    def best(self) -> int:
        return max((sf.value for sf in self.flows), default=0)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(r.value for r in self.realizations)

    @property
    def offsets(self) -> tuple[int, ...]:
        return tuple(itertools.accumulate((0, *self.sizes[:-1])))

    def kept_paths(self) -> list[tuple[int, SimplePath]]:
        """``(leg, path)`` in ``A_keep`` row order."""
        return [(i, p) for i, r in enumerate(self.realizations) for p in r.paths]

    def sequence_paths(self, flow: SequenceFlow) -> list[SequenceFlowPath]:
        return [
            SequenceFlowPath(tuple(self.realizations[i].paths[k] for i, k in enumerate(row)))
            for row in flow.rows
        ]


@dataclass(frozen=True)
class SequenceFlowCatalog:
    """Output of the sequence-flow enumeration on one graph.

    ``combinations`` is ``P_keep``; ``flow_matrices`` is ``A``.  Combinations
    reaching ``f_tilde`` come first.
    """

    waypoints: tuple[Vertex, ...]
    mode: PathMode
    leg_flow_values: tuple[int, ...]
    leg_realizations: tuple[tuple[FlowRealization, ...], ...]
    combinations: tuple[Combination, ...]
    f_tilde: int

    @property
    def count(self) -> int:
        return len(self.combinations)

    @property
    def flow_matrices(self) -> list[list[np.ndarray]]:
        return [[sf.matrix for sf in c.flows] for c in self.combinations]


class _LegIndex:
    """Interns leg paths and caches their pairwise ij-conflicts."""

    def __init__(self, waypoints: Sequence[Vertex]):
        self.waypoints = tuple(waypoints)
        self.entered: dict[tuple[int, SimplePath], frozenset[Vertex]] = {}
        self.left: dict[tuple[int, SimplePath], frozenset[Vertex]] = {}
        self.edges: dict[tuple[int, SimplePath], frozenset[Edge]] = {}
        self._conflict: dict[tuple, bool] = {}

    def add(self, leg: int, path: SimplePath) -> None:
        key = (leg, path)
        if key not in self.edges:
            es = path.edges
            self.edges[key] = frozenset(es)
            self.entered[key] = frozenset(w for _, w in es)
            self.left[key] = frozenset(w for w, _ in es)

    def conflict(self, i: int, a: SimplePath, j: int, b: SimplePath) -> bool:
        """ij-cycle between leg ``i`` path ``a`` and later leg ``j`` path ``b``."""
        key = (i, a, j, b)
        hit = self._conflict.get(key)
        if hit is None:
            shared = self.entered[(i, a)] & self.left[(j, b)]
            if j == i + 1:
                shared = shared - {self.waypoints[i + 1]}
            hit = bool(shared)
            self._conflict[key] = hit
        return hit

    def mixed_conflict(self, x: tuple[SimplePath, ...], y: tuple[SimplePath, ...]) -> bool:
        n = len(x)
        for i in range(n):
            for j in range(i + 1, n):
                if self.conflict(i, x[i], j, y[j]):
                    return True
        return False


def _valid_tuples(combo: Sequence[FlowRealization], idx: _LegIndex) -> list[tuple[int, ...]]:
    out = []
    for row in itertools.product(*(range(r.value) for r in combo)):
        legs = tuple(combo[i].paths[k] for i, k in enumerate(row))
        if idx.mixed_conflict(legs, legs):
            continue
        if not distance_ordering_holds([e for p in legs for e in p.edges], idx.waypoints):
            continue
        out.append(row)
    return out


def _compatibility(
    combo: Sequence[FlowRealization], rows: list[tuple[int, ...]], idx: _LegIndex
) -> list[int]:
    """Bitmask adjacency: rows that may share one sequence flow."""
    legs = [tuple(combo[i].paths[k] for i, k in enumerate(row)) for row in rows]
    edges = [
        frozenset().union(*(idx.edges[(i, p)] for i, p in enumerate(lg))) for lg in legs
    ]
    adj = [0] * len(rows)
    for a in range(len(rows)):
        for b in range(a + 1, len(rows)):
            if edges[a] & edges[b]:
                continue
            if idx.mixed_conflict(legs[a], legs[b]) or idx.mixed_conflict(legs[b], legs[a]):
                continue
            adj[a] |= 1 << b
            adj[b] |= 1 << a
    return adj


def _maximal_cliques(adj: list[int], limit: int) -> list[tuple[int, ...]]:
    """Bron-Kerbosch without pivoting; cliques listed in discovery order."""
    out: list[tuple[int, ...]] = []

    def expand(clique: list[int], cand: int, excl: int) -> None:
        if not cand and not excl:
            out.append(tuple(clique))
            if len(out) > limit:
                raise EnumerationBudgetExceeded("sequence flows", len(out), limit)
            return
        while cand:
            v = (cand & -cand).bit_length() - 1
            clique.append(v)
            expand(clique, cand & adj[v], excl & adj[v])
            clique.pop()
            cand &= ~(1 << v)
            excl |= 1 << v

    if adj:
        expand([], (1 << len(adj)) - 1, 0)
    return out


def _max_clique(adj: list[int]) -> int:
    best = 0

    def grow(size: int, cand: int) -> None:
        nonlocal best
        if not cand:
            best = max(best, size)
            return
        while cand:
            if size + bin(cand).count("1") <= best:
                return
            v = (cand & -cand).bit_length() - 1
            grow(size + 1, cand & adj[v])
            cand &= ~(1 << v)

    grow(0, (1 << len(adj)) - 1)
    return best


def _encode(combo: Sequence[FlowRealization], clique: tuple[int, ...], rows: list[tuple[int, ...]]) -> SequenceFlow:
    sizes = [r.value for r in combo]
    offsets = list(itertools.accumulate([0] + sizes[:-1]))
    chosen = tuple(sorted(rows[c] for c in clique))
    a_f = np.zeros((len(chosen), sum(sizes)), dtype=np.int64)
    for q, row in enumerate(chosen):
        for i, k in enumerate(row):
            a_f[q, offsets[i] + k] = 1
    return SequenceFlow(chosen, a_f)


def leg_realizations(
    g: DirectedGraph,
    tp: TestProblem,
    mode: PathMode = PathMode.ALL,
    limit: int = DEFAULT_LIMIT,
) -> tuple[tuple[int, ...], tuple[tuple[FlowRealization, ...], ...]]:
    """Per-leg max-flow values and realizations ``F_i`` on the leg graphs.

    Raises:
        EmptyCatalog: a leg carries zero flow.
    """
    values = []
    families = []
    for i, (a, b) in enumerate(tp.legs()):
        gi = tp.leg_graph(g, i)
        value = max_flow_value(gi, a, b)
        if value == 0:
            raise EmptyCatalog((a, b))
        values.append(value)
        families.append(tuple(enumerate_flow_realizations(gi, a, b, mode, limit)))
    return tuple(values), tuple(families)


def sequence_flows(
    g: DirectedGraph,
    tp: TestProblem,
    mode: PathMode = PathMode.ALL,
    limit: int = DEFAULT_LIMIT,
) -> SequenceFlowCatalog:
    """Enumerate every combination of leg realizations and its sequence flows.

    ``limit`` caps candidate paths, realizations per leg, combinations and
    maximal sequence flows per combination alike.
    """
    mode = PathMode(mode)
    values, families = leg_realizations(g, tp, mode, limit)
    total = math.prod(len(f) for f in families)
    if total > limit:
        raise EnumerationBudgetExceeded("realization combinations", total, limit)
    idx = _LegIndex(tp.waypoints)
    for i, fam in enumerate(families):
        for r in fam:
            for p in r.paths:
                idx.add(i, p)
    combos = []
    for combo in itertools.product(*families):
        rows = _valid_tuples(combo, idx)
        adj = _compatibility(combo, rows, idx)
        cliques = _maximal_cliques(adj, limit)
        flows = sorted(
            (_encode(combo, c, rows) for c in cliques),
            key=lambda sf: (-sf.value, sf.rows),
        )
        combos.append(Combination(tuple(combo), tuple(flows)))
    f_tilde = max((c.best for c in combos), default=0)
    combos.sort(key=lambda c: c.best != f_tilde)
    return SequenceFlowCatalog(
        waypoints=tp.waypoints,
        mode=mode,
        leg_flow_values=values,
        leg_realizations=families,
        combinations=tuple(combos),
        f_tilde=f_tilde,
    )


def max_sequence_flow_value(
    g: DirectedGraph,
    tp: TestProblem,
    limit: int = DEFAULT_LIMIT,
    mode: PathMode = PathMode.ALL,
) -> int:
    """Largest sequence flow over all combinations; 0 if a leg has no flow.

    Same quantity as ``sequence_flows(...).f_tilde`` without materialising
    every maximal sequence flow.
    """
    try:
        _, families = leg_realizations(g, tp, mode, limit)
    except EmptyCatalog:
        return 0
    total = math.prod(len(f) for f in families)
    if total > limit:
        raise EnumerationBudgetExceeded("realization combinations", total, limit)
    idx = _LegIndex(tp.waypoints)
    for i, fam in enumerate(families):
        for r in fam:
            for p in r.paths:
                idx.add(i, p)
    if not all(families):
        return 0
    cap = min(fam[0].value for fam in families)
    best = 0
    for combo in itertools.product(*families):
        rows = _valid_tuples(combo, idx)
        if not rows:
            continue
        best = max(best, _max_clique(_compatibility(combo, rows, idx)))
        if best == cap:
            break
    return best
