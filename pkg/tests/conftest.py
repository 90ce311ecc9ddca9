import sys
from pathlib import Path

import pytest

from tgsynth.graph import DirectedGraph
from tgsynth.kripke import KripkeAbstraction, TestProblem, resolve_waypoints

sys.path.insert(0, str(Path(__file__).parent))

FAN_VERTICES = ["q0", "v2", "w", "v4", "v5", "v6", "g"]
FAN_EDGES = [
    ("q0", "v2"), ("v2", "w"), ("v2", "v4"), ("v2", "v5"),
    ("w", "v6"), ("v4", "v6"), ("v5", "v6"), ("v6", "g"),
]
FAN_REFERENCE_CUTS = [("v2", "v4"), ("v4", "v6"), ("v2", "v5"), ("v5", "v6")]

BOUNCE_VERTICES = ["v1", "v2", "vg"]
BOUNCE_EDGES = [("v1", "v2"), ("v2", "v1"), ("v1", "vg")]


def fan_kripke() -> KripkeAbstraction:
    trans: dict[str, list[str]] = {v: [] for v in FAN_VERTICES}
    for u, v in FAN_EDGES:
        trans[u].append(v)
    return KripkeAbstraction.build(
        FAN_VERTICES, trans, init=["q0"], labels={"q0": ["p1"], "w": ["p2"], "g": ["p3"]}
    )


def fan_problem() -> TestProblem:
    return resolve_waypoints(fan_kripke(), ["p1", "p2"], "p3")


def bounce_problem() -> TestProblem:
    g = DirectedGraph(BOUNCE_VERTICES, BOUNCE_EDGES)
    return TestProblem(
        g, ("p1", "p2"), "g", ("v1", "v2", "vg"),
        {"v1": frozenset({"p1"}), "v2": frozenset({"p2"}), "vg": frozenset({"g"})},
    )


def chain_problem() -> TestProblem:
    g = DirectedGraph(["v1", "v2", "v3"], [("v1", "v2"), ("v2", "v3")])
    return TestProblem.from_waypoints(g, ["v1", "v2", "v3"])


@pytest.fixture
def fan() -> TestProblem:
    return fan_problem()


@pytest.fixture
def bounce() -> TestProblem:
    return bounce_problem()


@pytest.fixture
def chain() -> TestProblem:
    return chain_problem()
