"""Gridworld instances: graph construction, ASCII rendering of one-way
blocks, and seeded random instance generation.

Cells are 1-based ``(row, col)`` pairs; the vertex for a cell is named
``"(r,c)"``.  The agent moves up, down, left or right.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import (
    EmptyCatalog,
    EnumerationBudgetExceeded,
    NonAdjacentCut,
    OutOfBounds,
    ResampleBudgetExceeded,
    TooManyProps,
)
from .graph import DEFAULT_LIMIT, DirectedGraph, Edge, PathMode
from .kripke import TestProblem
from .seqflow import sequence_flows

Cell = tuple[int, int]

GOAL_PROP = "g"
MAX_REJECTIONS = 1000

_CELL_RE = re.compile(r"^\((\d+),(\d+)\)$")


def cell_name(cell: Cell) -> str:
    return f"({cell[0]},{cell[1]})"


def parse_cell(name: str) -> Cell:
    m = _CELL_RE.match(name.replace(" ", ""))
    if not m:
        raise ValueError(f"not a grid cell name: {name!r}")
    return int(m.group(1)), int(m.group(2))


@dataclass(frozen=True)
class GridworldSpec:
    """A ``rows x cols`` grid with waypoint cells (in chain order) and a goal."""

    rows: int
    cols: int
    waypoints: Mapping[str, Cell]
    goal: Cell
    seed: int | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise OutOfBounds(f"grid must be at least 1x1, got {self.rows}x{self.cols}")
        object.__setattr__(
            self, "waypoints", {p: tuple(c) for p, c in self.waypoints.items()}
        )
        object.__setattr__(self, "goal", tuple(self.goal))
        if not self.waypoints:
            raise ValueError("need at least one waypoint")
        if GOAL_PROP in self.waypoints:
            raise ValueError(f"{GOAL_PROP!r} is reserved for the goal")
        cells = [*self.waypoints.values(), self.goal]
        for c in cells:
            if not self.in_bounds(c):
                raise OutOfBounds(f"cell {c} outside {self.rows}x{self.cols} grid")
        if len(set(cells)) != len(cells):
            raise ValueError("waypoint and goal cells must be distinct")

    def in_bounds(self, cell: Cell) -> bool:
        r, c = cell
        return 1 <= r <= self.rows and 1 <= c <= self.cols

    def cells(self) -> list[Cell]:
        return [(r, c) for r in range(1, self.rows + 1) for c in range(1, self.cols + 1)]

    def neighbours(self, cell: Cell) -> list[Cell]:
        r, c = cell
        cand = [(r - 1, c), (r, c - 1), (r, c + 1), (r + 1, c)]
        return [x for x in cand if self.in_bounds(x)]

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "waypoints": {p: list(c) for p, c in self.waypoints.items()},
            "goal": list(self.goal),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "GridworldSpec":
        return cls(
            rows=int(data["rows"]),
            cols=int(data["cols"]),
            waypoints={p: (int(c[0]), int(c[1])) for p, c in data["waypoints"].items()},
            goal=(int(data["goal"][0]), int(data["goal"][1])),
        )


def grid_to_graph(spec: GridworldSpec) -> tuple[DirectedGraph, TestProblem]:
    cells = spec.cells()
    edges = [(cell_name(a), cell_name(b)) for a in cells for b in spec.neighbours(a)]
    graph = DirectedGraph([cell_name(c) for c in cells], edges)
    labels = {cell_name(c): frozenset([p]) for p, c in spec.waypoints.items()}
    labels[cell_name(spec.goal)] = frozenset([GOAL_PROP])
    wps = tuple(cell_name(c) for c in (*spec.waypoints.values(), spec.goal))
    problem = TestProblem(graph, tuple(spec.waypoints), GOAL_PROP, wps, labels)
    return graph, problem


_MARKS = "123456789abcdefghijklmnopqrstuvwxyz"


def _cell_char(spec: GridworldSpec, cell: Cell) -> str:
    if cell == spec.goal:
        return "G"
    for i, c in enumerate(spec.waypoints.values()):
        if c == cell:
            return _MARKS[i] if i < len(_MARKS) else "*"
    return "."


def render_grid(spec: GridworldSpec, cuts: Iterable[Edge]) -> str:
    """ASCII picture of the grid with blocked moves on cell borders.

    Cells show ``1..9, a..z`` for waypoints in chain order, ``G`` for the
    goal and ``.`` otherwise.  A border glyph names the blocked direction of
    travel (``>``, ``<``, ``v``, ``^``); ``X`` means both ways are blocked.

    Raises:
        NonAdjacentCut: a cut does not join two neighbouring cells.
    """
    blocked: set[tuple[Cell, Cell]] = set()
    for u, v in cuts:
        a, b = parse_cell(u), parse_cell(v)
        if not (spec.in_bounds(a) and spec.in_bounds(b)) or abs(a[0] - b[0]) + abs(a[1] - b[1]) != 1:
            raise NonAdjacentCut(f"cut {u}->{v} does not join neighbouring cells")
        blocked.add((a, b))
    height, width = 2 * spec.rows - 1, 2 * spec.cols - 1
    canvas = [[" "] * width for _ in range(height)]
    for r, c in spec.cells():
        canvas[2 * (r - 1)][2 * (c - 1)] = _cell_char(spec, (r, c))
        if c < spec.cols:
            fwd, back = ((r, c), (r, c + 1)) in blocked, ((r, c + 1), (r, c)) in blocked
            canvas[2 * (r - 1)][2 * c - 1] = "X" if fwd and back else ">" if fwd else "<" if back else " "
        if r < spec.rows:
            fwd, back = ((r, c), (r + 1, c)) in blocked, ((r + 1, c), (r, c)) in blocked
            canvas[2 * r - 1][2 * (c - 1)] = "X" if fwd and back else "v" if fwd else "^" if back else " "
    return "\n".join("".join(row) for row in canvas) + "\n"


def parse_rendering(text: str, rows: int, cols: int) -> set[Edge]:
    """Recover the blocked moves from :func:`render_grid` output."""
    lines = text.split("\n")
    width = 2 * cols - 1
    grid = [(lines[i] if i < len(lines) else "").ljust(width) for i in range(2 * rows - 1)]
    out: set[Edge] = set()
    for r in range(1, rows + 1):
        for c in range(1, cols + 1):
            if c < cols:
                ch = grid[2 * (r - 1)][2 * c - 1]
                a, b = cell_name((r, c)), cell_name((r, c + 1))
                if ch in ">X":
                    out.add((a, b))
                if ch in "<X":
                    out.add((b, a))
            if r < rows:
                ch = grid[2 * r - 1][2 * (c - 1)]
                a, b = cell_name((r, c)), cell_name((r + 1, c))
                if ch in "vX":
                    out.add((a, b))
                if ch in "^X":
                    out.add((b, a))
    return out


def satisfies_assumption3(spec: GridworldSpec, limit: int = DEFAULT_LIMIT) -> bool:
    """Some combination of shortest-path realizations carries sequence flow."""
    graph, problem = grid_to_graph(spec)
    try:
        return sequence_flows(graph, problem, PathMode.SHORTEST, limit).f_tilde > 0
    except (EmptyCatalog, EnumerationBudgetExceeded):
        return False


def random_instance(
    t: int,
    num_props: int,
    seed: int,
    require_assumption3: bool = False,
    limit: int = DEFAULT_LIMIT,
) -> GridworldSpec:
    """Seeded ``t x t`` instance with ``num_props`` waypoints and a goal.

    Raises:
        TooManyProps: ``num_props + 1`` cells do not fit in the grid.
        ResampleBudgetExceeded: too many draws failed the shortest-path filter.
    """
    if t < 2:
        raise OutOfBounds("grid size must be at least 2")
    if num_props < 1:
        raise ValueError("need at least one proposition")
    if num_props + 1 > t * t:
        raise TooManyProps(f"{num_props} waypoints and a goal do not fit in a {t}x{t} grid")
    rng = random.Random(seed)
    cells = [(r, c) for r in range(1, t + 1) for c in range(1, t + 1)]
    for _ in range(MAX_REJECTIONS + 1):
        picked = rng.sample(cells, num_props + 1)
        spec = GridworldSpec(
            rows=t,
            cols=t,
            waypoints={f"p{i + 1}": c for i, c in enumerate(picked[:-1])},
            goal=picked[-1],
            seed=seed,
        )
        if not require_assumption3 or satisfies_assumption3(spec, limit):
            return spec
    raise ResampleBudgetExceeded(
        f"no instance passed the shortest-path filter in {MAX_REJECTIONS} draws"
    )
