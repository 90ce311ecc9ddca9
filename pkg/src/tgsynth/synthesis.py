"""Iterative cut synthesis: find skipping paths, solve the 0-1 program that
cuts them while preserving sequence flow, repeat until nothing skips."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .errors import EmptyCatalog, InfeasibleEnvironment
from .graph import (
    DEFAULT_LIMIT,
    DirectedGraph,
    Edge,
    PathMode,
    max_flow_unit,
    min_cut_edges,
    reachable,
)
from .ilp import (
    Backend,
    CutCandidateSet,
    IlpInstance,
    IlpSolution,
    build_ilp_instance,
    solve_ilp,
)
from .kripke import TestProblem
from .seqflow import max_sequence_flow_value, sequence_flows

log = logging.getLogger(__name__)


def skip_pairs(tp: TestProblem) -> list[tuple[int, int]]:
    """0-based waypoint pairs ``(i, j)`` with ``j >= i + 2``."""
    k = len(tp.waypoints)
    return [(i, j) for i in range(k) for j in range(i + 2, k)]


def find_cut_paths(g: DirectedGraph, tp: TestProblem) -> CutCandidateSet:
    """Edge-disjoint paths that reach some ``v_j`` straight from ``v_i``, ``j >= i + 2``.

    Each pair is solved on ``g`` with all other waypoints removed; the
    union of the canonical max-flow paths is returned.
    """
    paths = []
    for i, j in skip_pairs(tp):
        gij = tp.pair_graph(g, i, j)
        paths.extend(max_flow_unit(gij, tp.waypoints[i], tp.waypoints[j]).paths)
    return CutCandidateSet.from_paths(paths)


@dataclass(frozen=True)
class IterationRecord:
    index: int
    cut_paths: int
    f_tilde: int
    objective: int
    combination: int
    new_cuts: tuple[Edge, ...]
    attained: bool
    protection: str
    instance: IlpInstance = field(repr=False, compare=False)
    solution: IlpSolution = field(repr=False, compare=False)


@dataclass(frozen=True)
class CutSet:
    """Edges removed from the graph, each tagged with its 1-based iteration."""

    edges: tuple[Edge, ...]
    iteration_of: dict[Edge, int]

    def __iter__(self):
        return iter(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, e: object) -> bool:
        return e in self.iteration_of

    def to_json(self) -> list[dict]:
        return [{"from": u, "to": v, "iteration": self.iteration_of[(u, v)]} for u, v in self.edges]


@dataclass(frozen=True)
class SynthesisResult:
    cuts: CutSet
    graph: DirectedGraph
    iterations: int
    sequence_flow: int
    history: tuple[IterationRecord, ...]

    def to_json(self) -> dict:
        return {
            "cuts": self.cuts.to_json(),
            "sequence_flow": self.sequence_flow,
            "iterations": self.iterations,
        }


def _solve_round(
    g: DirectedGraph,
    tp: TestProblem,
    cut: CutCandidateSet,
    mode: PathMode,
    limit: int,
    backend: str | Backend,
    index: int,
) -> IterationRecord:
    """Pick this round's cuts.

    Candidates are visited in catalog order, one ILP per combination and
    ``A_f``.  A candidate is only accepted once the graph without its cuts
    still carries the sequence flow it promises; protecting min-cut edges
    alone does not guarantee this when several non-min-cut edges of one
    leg are cut together.  If no candidate passes, the round is retried
    with every edge of the kept paths protected.
    """
    try:
        catalog = sequence_flows(g, tp, mode, limit)
    except EmptyCatalog as exc:
        raise InfeasibleEnvironment(
            f"no flow left from {exc.leg[0]} to {exc.leg[1]}", (exc.leg,)
        ) from exc
    legs = tp.legs()
    mc_keep = [min_cut_edges(tp.leg_graph(g, i), a, b) for i, (a, b) in enumerate(legs)]
    after: dict[frozenset, int] = {}

    def surviving(edges: tuple[Edge, ...]) -> int:
        key = frozenset(edges)
        if key not in after:
            after[key] = max_sequence_flow_value(g.without_edges(edges), tp, limit, mode)
        return after[key]

    first: IterationRecord | None = None
    passed: IterationRecord | None = None
    for protection in ("min-cut", "path"):
        for j, combo in enumerate(catalog.combinations):
            for sf in combo.flows:
                inst = build_ilp_instance(cut, combo.realizations, mc_keep, sf.matrix)
                if protection == "path":
                    inst = inst.strict()
                sol = solve_ilp(inst, backend)
                rec = IterationRecord(
                    index=index,
                    cut_paths=len(cut.paths),
                    f_tilde=catalog.f_tilde,
                    objective=sol.objective,
                    combination=j,
                    new_cuts=sol.cut_edges(inst),
                    attained=sol.objective == catalog.f_tilde,
                    protection=protection,
                    instance=inst,
                    solution=sol,
                )
                if first is None or rec.objective > first.objective:
                    first = rec
                if rec.objective == 0 or (passed and rec.objective <= passed.objective):
                    continue
                if surviving(rec.new_cuts) >= rec.objective:
                    passed = rec
                    if rec.attained:
                        return rec
    if passed is not None:
        log.info(
            "iteration %d: no candidate keeps f~=%d, keeping objective %d",
            index, catalog.f_tilde, passed.objective,
        )
        return passed
    if first is None or first.objective == 0:
        pairs = tuple(dict.fromkeys((p.source, p.target) for p in cut.paths))
        names = ", ".join(f"{a}->{b}" for a, b in pairs)
        raise InfeasibleEnvironment(
            f"cannot block {names} without destroying every sequence flow", pairs
        )
    log.warning(
        "iteration %d: every candidate loses sequence flow once cut; keeping objective %d",
        index, first.objective,
    )
    return first


def restrict_transitions(
    tp: TestProblem,
    mode: PathMode = PathMode.ALL,
    limit: int = DEFAULT_LIMIT,
    backend: str | Backend = "bnb",
) -> SynthesisResult:
    """Compute a cut set turning ``tp.graph`` into a test graph.

    Raises:
        InfeasibleEnvironment: no round can block the skipping paths while
            keeping a sequence flow, or the final graph carries none.
        EnumerationBudgetExceeded: enumeration went past ``limit``.
    """
    mode = PathMode(mode)
    g = tp.graph
    order: list[Edge] = []
    tag: dict[Edge, int] = {}
    history: list[IterationRecord] = []
    cut = find_cut_paths(g, tp)
    while cut:
        rec = _solve_round(g, tp, cut, mode, limit, backend, len(history) + 1)
        history.append(rec)
        log.debug("iteration %d cuts %s", rec.index, rec.new_cuts)
        for e in rec.new_cuts:
            tag[e] = rec.index
            order.append(e)
        g = g.without_edges(rec.new_cuts)
        cut = find_cut_paths(g, tp)
    if not reachable(g, tp.start, tp.goal):
        raise InfeasibleEnvironment(
            f"goal {tp.goal} unreachable from {tp.start}", ((tp.start, tp.goal),)
        )
    value = max_sequence_flow_value(g, tp, limit)
    if value == 0:
        raise InfeasibleEnvironment(
            f"no sequence flow from {tp.start} to {tp.goal}", ((tp.start, tp.goal),)
        )
    edge_pos = {e: i for i, e in enumerate(tp.graph.edges)}
    order.sort(key=lambda e: (tag[e], edge_pos[e]))
    return SynthesisResult(
        cuts=CutSet(tuple(order), tag),
        graph=g,
        iterations=len(history),
        sequence_flow=value,
        history=tuple(history),
    )
