"""The 0-1 program that picks which edges to cut in one synthesis round.

Variables are ``x`` (one per candidate edge, 1 = cut), ``b`` (one per kept
augmenting path, 1 = one of its min-cut edges was cut) and ``f`` (one per
sequence flow path, 1 = survives).  The program maximises ``sum(f)``
subject to::

    A_cut x >= 1
    A_keep x <= D_keep b
    b <= A_keep x
    D_f f <= A_f (1 - b)
    f >= A_f (1 - b) - D_f 1 + 1
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import Infeasible, InconsistentDimensions
from .graph import Edge, FlowRealization, SimplePath


@dataclass(frozen=True)
class CutCandidateSet:
    """Paths that must lose an edge, and the edges they use (column order)."""

    paths: tuple[SimplePath, ...]
    edges: tuple[Edge, ...]

    @classmethod
    def from_paths(cls, paths: Sequence[SimplePath]) -> "CutCandidateSet":
        edges = dict.fromkeys(e for p in paths for e in p.edges)
        return cls(tuple(paths), tuple(edges))

    def __bool__(self) -> bool:
        return bool(self.paths)


@dataclass(frozen=True)
class IlpInstance:
    edges: tuple[Edge, ...]
    a_cut: np.ndarray
    a_keep: np.ndarray
    d_keep: np.ndarray
    a_f: np.ndarray
    d_f: np.ndarray
    leg_sizes: tuple[int, ...] = ()
    a_path: np.ndarray | None = None

    @property
    def path_matrix(self) -> np.ndarray:
        """Kept-path membership of every ``E_cut`` edge (not only min-cut ones)."""
        if self.a_path is None:
            return np.zeros_like(self.a_keep)
        return self.a_path

    def strict(self) -> "IlpInstance":
        """Copy in which every ``E_cut`` edge of a kept path is protected."""
        a_keep = self.path_matrix.copy()
        return IlpInstance(
            edges=self.edges,
            a_cut=self.a_cut,
            a_keep=a_keep,
            d_keep=np.diag(a_keep.sum(axis=1)),
            a_f=self.a_f,
            d_f=self.d_f,
            leg_sizes=self.leg_sizes,
            a_path=self.a_path,
        )

    @property
    def shape(self) -> tuple[int, int, int, int]:
        """``(k, |E_cut|, m, l)``."""
        return (self.a_cut.shape[0], len(self.edges), self.a_keep.shape[0], self.a_f.shape[0])


@dataclass(frozen=True)
class IlpSolution:
    x: np.ndarray
    b: np.ndarray
    f: np.ndarray

    @property
    def objective(self) -> int:
        return int(self.f.sum())

    @property
    def cut_count(self) -> int:
        return int(self.x.sum())

    def cut_edges(self, inst: IlpInstance) -> tuple[Edge, ...]:
        return tuple(e for e, v in zip(inst.edges, self.x) if v)


def build_ilp_instance(
    cut: CutCandidateSet,
    p_keep: Sequence[FlowRealization],
    mc_keep: Sequence[Sequence[Edge]],
    a_f: np.ndarray,
) -> IlpInstance:
    """Assemble the constraint matrices for one combination and one ``A_f``.

    Raises:
        InconsistentDimensions: ``a_f`` does not have one column per kept path,
            or ``mc_keep`` does not have one entry per leg.
    """
    if len(mc_keep) != len(p_keep):
        raise InconsistentDimensions("need one min-cut edge set per leg")
    a_f = np.asarray(a_f, dtype=np.int64)
    if a_f.ndim != 2:
        raise InconsistentDimensions("A_f must be a matrix")
    m = sum(r.value for r in p_keep)
    if a_f.shape[1] != m:
        raise InconsistentDimensions(f"A_f has {a_f.shape[1]} columns, expected {m}")
    col = {e: r for r, e in enumerate(cut.edges)}
    a_cut = np.zeros((len(cut.paths), len(cut.edges)), dtype=np.int64)
    for q, path in enumerate(cut.paths):
        for e in path.edges:
            a_cut[q, col[e]] = 1
    a_keep = np.zeros((m, len(cut.edges)), dtype=np.int64)
    a_path = np.zeros_like(a_keep)
    q = 0
    for real, mc in zip(p_keep, mc_keep):
        mc = set(mc)
        for path in real.paths:
            for e in path.edges:
                if e in col:
                    a_path[q, col[e]] = 1
                    if e in mc:
                        a_keep[q, col[e]] = 1
            q += 1
    return IlpInstance(
        edges=cut.edges,
        a_cut=a_cut,
        a_keep=a_keep,
        d_keep=np.diag(a_keep.sum(axis=1)),
        a_f=a_f,
        d_f=np.diag(a_f.sum(axis=1)),
        leg_sizes=tuple(r.value for r in p_keep),
        a_path=a_path,
    )


def constraint_report(inst: IlpInstance, x, b, f) -> dict[str, bool]:
    """Whether each of the five constraint families holds."""
    x, b, f = (np.asarray(v, dtype=np.int64) for v in (x, b, f))
    one_m = np.ones(len(b), dtype=np.int64)
    one_l = np.ones(len(f), dtype=np.int64)
    keep = inst.a_keep @ x
    alive = inst.a_f @ (one_m - b)
    return {
        "cut": bool(np.all(inst.a_cut @ x >= 1)),
        "keep_upper": bool(np.all(keep <= inst.d_keep @ b)),
        "keep_lower": bool(np.all(b <= keep)),
        "flow_upper": bool(np.all(inst.d_f @ f <= alive)),
        "flow_lower": bool(np.all(f >= alive - inst.d_f @ one_l + one_l)),
    }


def implied_b_f(inst: IlpInstance, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """The unique ``b`` and ``f`` compatible with ``x``."""
    b = (inst.a_keep @ x >= 1).astype(np.int64)
    alive = inst.a_f @ (1 - b)
    f = (alive == np.diag(inst.d_f)).astype(np.int64)
    return b, f


def _mask(row: np.ndarray) -> int:
    m = 0
    for r in np.flatnonzero(row):
        m |= 1 << int(r)
    return m


def _first_min_hitting_set(
    sets: list[int], allowed: int, width: int, weights: Sequence[int], cap: int | None
) -> tuple[int, tuple[int, ...]] | None:
    """Lexicographically first minimum-weight hitting set.

    Every set must receive an index from ``allowed``.  Indices are chosen in
    increasing order, so depth-first order is lexicographic order and the
    first optimum met is the lexicographically smallest one.  Returns
    ``(weight, indices)``, or None when nothing within ``cap`` exists.
    """
    sets = [s & allowed for s in sets]
    if any(s == 0 for s in sets):
        return None
    floor = min(weights) if weights else 1
    best: list = [cap + 1 if cap is not None else None, None]

    def packing(unhit: list[int]) -> int:
        # pairwise-disjoint sets each need their own index
        used = 0
        count = 0
        for s in unhit:
            if not s & used:
                used |= s
                count += 1
        return count

    def search(chosen: list[int], start: int, hit: int, cost: int) -> None:
        unhit = [s for s in sets if not s & hit]
        if not unhit:
            if best[0] is None or cost < best[0]:
                best[0], best[1] = cost, tuple(chosen)
            return
        if best[0] is not None and cost + floor * packing(unhit) >= best[0]:
            return
        tail = ~((1 << start) - 1)
        if any(not s & tail for s in unhit):
            return
        for r in range(start, width):
            bit = 1 << r
            # an optimal set is minimal, so each index must hit something new
            if not allowed & bit or not any(s & bit for s in unhit):
                continue
            chosen.append(r)
            search(chosen, r + 1, hit | bit, cost + weights[r])
            chosen.pop()

    search([], 0, 0, 0)
    if best[1] is None:
        return None
    return best[0], best[1]


def solve_bnb(inst: IlpInstance) -> IlpSolution:
    """Exact implicit enumeration.

    ``b`` and ``f`` are fully determined by ``x``, so the search runs over
    which sequence flow paths survive (largest sets first) and, for each
    surviving set, over minimum hitting sets of the cut paths that avoid
    the protected min-cut edges.  Ties: fewest cuts, then fewest cuts on
    the surviving sequence flow paths, then the lexicographically first
    set of cut columns.
    """
    k, width, m, l = inst.shape
    cut_sets = [_mask(row) for row in inst.a_cut]
    if any(s == 0 for s in cut_sets):
        raise Infeasible("a cut path has no candidate edge")
    full = (1 << width) - 1
    keep_masks = [_mask(row) for row in inst.a_keep]
    path_masks = [_mask(row) for row in inst.path_matrix]
    protect = [0] * l
    route = [0] * l
    for q in range(l):
        for r in np.flatnonzero(inst.a_f[q]):
            protect[q] |= keep_masks[int(r)]
            route[q] |= path_masks[int(r)]
    scale = width + 1
    best: tuple[int, tuple[int, ...]] | None = None
    for size in range(l, -1, -1):
        for rows in itertools.combinations(range(l), size):
            forbid = 0
            on_route = 0
            for q in rows:
                forbid |= protect[q]
                on_route |= route[q]
            weights = [scale + ((on_route >> r) & 1) for r in range(width)]
            cap = best[0] if best is not None else None
            found = _first_min_hitting_set(cut_sets, full & ~forbid, width, weights, cap)
            if found is not None and (best is None or found < best):
                best = found
        if best is not None:
            break
    if best is None:
        raise Infeasible("no assignment satisfies A_cut x >= 1")
    x = np.zeros(width, dtype=np.int64)
    x[list(best[1])] = 1
    b, f = implied_b_f(inst, x)
    return IlpSolution(x, b, f)


def solve_highs(inst: IlpInstance) -> IlpSolution:
    """Same program through scipy's HiGHS MILP backend.

    The secondary "fewest cuts" preference is folded into the objective;
    lexicographic tie-breaking is not reproduced.
    """
    from scipy.optimize import Bounds, LinearConstraint, milp

    k, width, m, l = inst.shape
    n = width + m + l
    big = width + 1
    c = np.concatenate([np.ones(width), np.zeros(m), -big * np.ones(l)])
    zx = np.zeros
    rows = []
    # A_cut x >= 1
    rows.append(LinearConstraint(np.hstack([inst.a_cut, zx((k, m)), zx((k, l))]), 1, np.inf))
    # A_keep x - D_keep b <= 0 ; b - A_keep x <= 0
    rows.append(LinearConstraint(np.hstack([inst.a_keep, -inst.d_keep, zx((m, l))]), -np.inf, 0))
    rows.append(LinearConstraint(np.hstack([-inst.a_keep, np.eye(m), zx((m, l))]), -np.inf, 0))
    ones_m = np.ones(m)
    af1 = inst.a_f @ ones_m
    # D_f f + A_f b <= A_f 1 ; f + A_f b >= A_f 1 - D_f 1 + 1
    rows.append(LinearConstraint(np.hstack([zx((l, width)), inst.a_f, inst.d_f]), -np.inf, af1))
    rows.append(
        LinearConstraint(
            np.hstack([zx((l, width)), inst.a_f, np.eye(l)]),
            af1 - inst.d_f @ np.ones(l) + 1,
            np.inf,
        )
    )
    res = milp(c, constraints=rows, integrality=np.ones(n), bounds=Bounds(0, 1))
    if res.status != 0 or res.x is None:
        raise Infeasible(res.message)
    v = np.rint(res.x).astype(np.int64)
    return IlpSolution(v[:width], v[width:width + m], v[width + m:])


Backend = Callable[[IlpInstance], IlpSolution]

BACKENDS: dict[str, Backend] = {"bnb": solve_bnb, "highs": solve_highs}


def solve_ilp(inst: IlpInstance, backend: str | Backend = "bnb") -> IlpSolution:
    """Maximise ``sum(f)``; among optima cut the fewest edges, then the
    lexicographically first set of ``E_cut`` columns (``bnb`` backend)."""
    solver = BACKENDS[backend] if isinstance(backend, str) else backend
    return solver(inst)
