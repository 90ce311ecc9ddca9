"""JSON readers and writers for graphs, Kripke structures, problems, grids
and cut sets."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable, Mapping

from .graph import DirectedGraph, Edge
from .gridworld import GOAL_PROP, GridworldSpec, cell_name, grid_to_graph
from .kripke import KripkeAbstraction, TestProblem, induce_graph, resolve_waypoints


class InputError(ValueError):
    """A file is missing, is not valid JSON, or has the wrong shape."""


def read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def dumps(data: Any) -> str:
    """Stable, human-readable JSON text (ends with a newline)."""
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def write_json(path: str | Path, data: Any) -> None:
    Path(path).write_text(dumps(data), encoding="utf-8")


def _require(data: Any, *keys: str, what: str) -> None:
    if not isinstance(data, Mapping):
        raise InputError(f"{what} must be a JSON object")
    missing = [k for k in keys if k not in data]
    if missing:
        raise InputError(f"{what} is missing {', '.join(missing)}")


def _pair(item: Any) -> Edge:
    if isinstance(item, Mapping) and "from" in item and "to" in item:
        return str(item["from"]), str(item["to"])
    if isinstance(item, (list, tuple)) and len(item) == 2:
        return str(item[0]), str(item[1])
    raise InputError(f"not an edge: {item!r}")


def graph_from_json(data: Any) -> DirectedGraph:
    _require(data, "vertices", "edges", what="graph")
    return DirectedGraph([str(v) for v in data["vertices"]], [_pair(e) for e in data["edges"]])


def graph_to_json(g: DirectedGraph) -> dict:
    return {"vertices": list(g.vertices), "edges": [list(e) for e in g.edges]}


def kripke_from_json(data: Any) -> KripkeAbstraction:
    _require(data, "states", "transitions", what="Kripke structure")
    return KripkeAbstraction.build(
        states=[str(q) for q in data["states"]],
        transitions={str(q): [str(v) for v in vs] for q, vs in data["transitions"].items()},
        init=[str(q) for q in data.get("init", [])],
        labels={str(q): [str(p) for p in ps] for q, ps in data.get("labels", {}).items()},
        actions=[str(a) for a in data.get("actions", [])],
    )


def model_from_json(data: Any) -> KripkeAbstraction:
    """Accept either Kripke JSON or graph JSON (optionally with ``labels``).

    A plain graph without labels lets every vertex name double as the
    proposition that holds there.
    """
    if isinstance(data, Mapping) and "states" in data:
        return kripke_from_json(data)
    g = graph_from_json(data)
    labels = data.get("labels")
    if labels is None:
        labels = {v: [v] for v in g.vertices}
    transitions: dict[str, list[str]] = {v: [] for v in g.vertices}
    for u, v in g.edges:
        transitions[u].append(v)
    return KripkeAbstraction.build(
        g.vertices, transitions, labels={str(q): [str(p) for p in ps] for q, ps in labels.items()}
    )


def problem_from_json(model: KripkeAbstraction, data: Any) -> TestProblem:
    _require(data, "chain", "mission", what="problem")
    chain = data["chain"]
    if not isinstance(chain, list) or not chain:
        raise InputError("problem chain must be a nonempty list")
    return resolve_waypoints(model, [str(p) for p in chain], str(data["mission"]))


def grid_problem(spec: GridworldSpec, data: Any | None = None) -> tuple[DirectedGraph, TestProblem]:
    """Grid graph and problem; ``data`` may pick a sub-chain and mission."""
    graph, problem = grid_to_graph(spec)
    if data is None:
        return graph, problem
    labels = {cell_name(c): [p] for p, c in spec.waypoints.items()}
    labels[cell_name(spec.goal)] = [GOAL_PROP]
    transitions: dict[str, list[str]] = {v: [] for v in graph.vertices}
    for u, v in graph.edges:
        transitions[u].append(v)
    model = KripkeAbstraction.build(graph.vertices, transitions, labels=labels)
    return graph, problem_from_json(model, data)


def load_grid(path: str | Path) -> GridworldSpec:
    data = read_json(path)
    _require(data, "rows", "cols", "waypoints", "goal", what="grid")
    try:
        return GridworldSpec.from_json(data)
    except (TypeError, IndexError, AttributeError) as exc:
        raise InputError(f"malformed grid in {path}: {exc}") from exc


def load_problem(
    graph_path: str | Path | None,
    problem_path: str | Path | None,
    grid_path: str | Path | None = None,
) -> tuple[DirectedGraph, TestProblem, GridworldSpec | None]:
    """Resolve the CLI's ``--graph``/``--grid`` and ``--problem`` inputs."""
    pdata = read_json(problem_path) if problem_path else None
    if grid_path:
        spec = load_grid(grid_path)
        graph, tp = grid_problem(spec, pdata)
        return graph, tp, spec
    if not graph_path:
        raise InputError("need --graph or --grid")
    if pdata is None:
        raise InputError("--problem is required with --graph")
    model = model_from_json(read_json(graph_path))
    tp = problem_from_json(model, pdata)
    return induce_graph(model), tp, None


def cuts_from_json(data: Any) -> list[Edge]:
    """Cut edges from synthesis output, a list of ``{"from","to"}`` objects,
    or a list of ``[from, to]`` pairs."""
    if isinstance(data, Mapping):
        _require(data, "cuts", what="cut set")
        data = data["cuts"]
    if not isinstance(data, list):
        raise InputError("cut set must be a list")
    return [_pair(item) for item in data]


def cuts_to_json(edges: Iterable[Edge]) -> list[dict]:
    return [{"from": u, "to": v} for u, v in edges]
