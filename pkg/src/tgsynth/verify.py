"""Independent checks on synthesized graphs, plus an exhaustive synthesis
oracle for small instances."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import EnumerationBudgetExceeded, TooLarge, UnreachableGoal
from .graph import (
    DEFAULT_LIMIT,
    DirectedGraph,
    Edge,
    max_flow_value,
    reachable,
    shortest_distance,
    simple_paths,
)
from .kripke import TestProblem, TraceVerdict, check_trace
from .seqflow import max_sequence_flow_value
from .synthesis import skip_pairs


@dataclass(frozen=True)
class VerificationReport:
    distance_chain: tuple[float, ...]
    ordering_ok: bool
    skip_flows: dict[tuple[int, int], int]
    path_audit: str  # "passed", "failed" or "skipped"
    paths_checked: int
    verdict: bool

    def to_json(self) -> dict:
        return {
            "distance_chain": [d if d < math.inf else None for d in self.distance_chain],
            "ordering_ok": self.ordering_ok,
            "skip_flows": {f"{i + 1},{j + 1}": v for (i, j), v in self.skip_flows.items()},
            "path_audit": self.path_audit,
            "paths_checked": self.paths_checked,
            "verdict": self.verdict,
        }


def is_test_graph(
    g_prime: DirectedGraph, tp: TestProblem, audit_limit: int = DEFAULT_LIMIT
) -> VerificationReport:
    """Check that reaching the goal from ``v_1`` forces the waypoint order.

    Three checks: strictly decreasing distances to the goal along the
    chain; zero flow between every pair of waypoints two or more apart
    (with the remaining waypoints removed); and, while the number of simple
    ``v_1``-goal paths stays within ``audit_limit``, every such path
    satisfying the sequence formula.

    Raises:
        UnreachableGoal: the goal cannot be reached from ``v_1``.
    """
    g_prime.require(*tp.waypoints)
    chain = tuple(shortest_distance(g_prime, w, tp.goal) for w in tp.waypoints)
    if chain[0] == math.inf:
        raise UnreachableGoal(tp.start, tp.goal)
    ordering_ok = all(a > b for a, b in zip(chain, chain[1:]))
    skips = {}
    for i, j in skip_pairs(tp):
        gij = tp.pair_graph(g_prime, i, j)
        skips[(i, j)] = max_flow_value(gij, tp.waypoints[i], tp.waypoints[j])
    problem = tp.with_graph(g_prime)
    try:
        paths = simple_paths(g_prime, tp.start, tp.goal, limit=audit_limit)
    except EnumerationBudgetExceeded:
        audit, checked = "skipped", 0
    else:
        ok = bool(paths) and all(
            check_trace(p.vertices, problem) is TraceVerdict.SATISFIES_SEQUENCE for p in paths
        )
        audit, checked = ("passed" if ok else "failed"), len(paths)
    verdict = ordering_ok and not any(skips.values()) and audit != "failed"
    return VerificationReport(chain, ordering_ok, skips, audit, checked, verdict)


def quick_test_graph_check(g_prime: DirectedGraph, tp: TestProblem) -> bool:
    """Structural part of :func:`is_test_graph` using reachability only."""
    if not reachable(g_prime, tp.start, tp.goal):
        return False
    for i, j in skip_pairs(tp):
        if reachable(tp.pair_graph(g_prime, i, j), tp.waypoints[i], tp.waypoints[j]):
            return False
    chain = [shortest_distance(g_prime, w, tp.goal) for w in tp.waypoints]
    return all(a > b for a, b in zip(chain, chain[1:]))


def sequence_flow_value(g_prime: DirectedGraph, tp: TestProblem, limit: int = DEFAULT_LIMIT) -> int:
    return max_sequence_flow_value(g_prime, tp, limit)


@dataclass(frozen=True)
class BruteForceResult:
    best_flow: int
    witnesses: tuple[tuple[Edge, ...], ...]
    test_graphs: int

    @property
    def feasible(self) -> bool:
        return self.best_flow > 0


def brute_force_synthesis(
    g: DirectedGraph, tp: TestProblem, max_edges: int = 14, limit: int = DEFAULT_LIMIT
) -> BruteForceResult:
    """Try every cut set and keep the ones maximising sequence flow.

    Cut sets are visited by increasing size.  A candidate whose per-leg
    max-flow bound cannot beat the current best is skipped, which is sound
    because sequence flow never exceeds that bound.  Witnesses are all the
    smallest cut sets reaching the best flow, in lexicographic edge order.

    Raises:
        TooLarge: ``g`` has more than ``max_edges`` edges.
    """
    edges = g.edges
    if len(edges) > max_edges:
        raise TooLarge(len(edges), max_edges)
    best = 0
    witnesses: list[tuple[Edge, ...]] = []
    count = 0
    for size in range(len(edges) + 1):
        for cut in itertools.combinations(edges, size):
            h = g.without_edges(cut)
            if not quick_test_graph_check(h, tp):
                continue
            count += 1
            bound = min(
                max_flow_value(tp.leg_graph(h, i), a, b) for i, (a, b) in enumerate(tp.legs())
            )
            if bound < best or (bound == best and witnesses and len(witnesses[0]) < size):
                continue
            value = max_sequence_flow_value(h, tp, limit)
            if value == 0 or value < best:
                continue
            if value > best:
                best, witnesses = value, []
            if not witnesses or len(witnesses[0]) == size:
                if is_test_graph(h, tp, limit).verdict:
                    witnesses.append(cut)
    return BruteForceResult(best, tuple(witnesses), count)
