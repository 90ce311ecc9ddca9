import random

import numpy as np
import pytest

from tgsynth.errors import EmptyCatalog, EnumerationBudgetExceeded
from tgsynth.graph import DirectedGraph, PathMode, SimplePath, max_flow_value
from tgsynth.kripke import TestProblem
from tgsynth.seqflow import (
    distance_ordering_holds,
    has_ij_cycle,
    max_sequence_flow_value,
    sequence_flows,
)

import oracles

P = lambda *vs: SimplePath(tuple(vs))  # noqa: E731

# Two ways through the middle leg: the shorter one re-enters vertex ``a``
# used by the first leg; only the longer one forms a sequence flow path.
CROSSING = TestProblem.from_waypoints(
    DirectedGraph(
        ["v1", "a", "v2", "x", "b", "c", "v3"],
        [("v1", "a"), ("a", "v2"), ("v2", "a"), ("a", "x"),
         ("v2", "b"), ("b", "c"), ("c", "x"), ("x", "v3")],
    ),
    ["v1", "v2", "v3"],
)


def test_ij_cycle_examples():
    w = ["v1", "v2", "v3"]
    assert not has_ij_cycle([P("v1", "v2"), P("v2", "v3")], w)
    assert has_ij_cycle([P("v1", "u", "v2"), P("v2", "u", "v3")], w)
    assert not has_ij_cycle([P("v1", "a", "v2"), P("v2", "b", "v3")], w)


def test_ij_cycle_skips_legs():
    w = ["v1", "v2", "v3", "v4"]
    legs = [P("v1", "u", "v2"), P("v2", "v3"), P("v3", "u", "v4")]
    assert has_ij_cycle(legs, w)


def test_distance_ordering():
    w = ["v1", "v2", "v3"]
    assert distance_ordering_holds([("v1", "v2"), ("v2", "v3")], w)
    assert not distance_ordering_holds([("v1", "v2"), ("v2", "v3"), ("v1", "v3")], w)


def test_chain_catalog(chain):
    cat = sequence_flows(chain.graph, chain)
    assert cat.count == 1 and cat.f_tilde == 1
    assert max_sequence_flow_value(chain.graph, chain) == 1


def test_fan_catalog(fan):
    cat = sequence_flows(fan.graph, fan)
    assert cat.count == 1 and cat.f_tilde == 1
    combo = cat.combinations[0]
    assert [r.paths for r in combo.realizations] == [
        (P("q0", "v2", "w"),), (P("w", "v6", "g"),)
    ]
    assert len(combo.flows) == 1
    np.testing.assert_array_equal(combo.flows[0].matrix, [[1, 1]])
    np.testing.assert_array_equal(combo.flows[0].degrees, [2])
    assert max_sequence_flow_value(fan.graph, fan) == 1


def test_bounce_sequence_flow_is_zero(bounce):
    assert max_sequence_flow_value(bounce.graph, bounce) == 0


def test_bounce_leg_has_no_flow_with_other_waypoints_removed(bounce):
    with pytest.raises(EmptyCatalog) as err:
        sequence_flows(bounce.graph, bounce)
    assert err.value.leg == ("v2", "vg")


def test_crossing_catalog():
    cat = sequence_flows(CROSSING.graph, CROSSING)
    assert cat.count == 2 and cat.f_tilde == 1
    # the combination that forms a sequence flow comes first
    good, bad = cat.combinations
    assert good.best == 1 and bad.best == 0
    assert bad.flows == () or all(sf.value == 0 for sf in bad.flows)
    assert good.realizations[1].paths == (P("v2", "b", "c", "x", "v3"),)
    assert has_ij_cycle([P("v1", "a", "v2"), P("v2", "a", "x", "v3")], CROSSING.waypoints)
    # the cycling middle path is the only shortest one
    assert max_sequence_flow_value(CROSSING.graph, CROSSING, mode=PathMode.SHORTEST) == 0
    assert oracles.max_sequence_flow_oracle(
        CROSSING.graph.vertices, CROSSING.graph.edges, CROSSING.waypoints
    ) == 1


def test_combination_budget():
    vs = [str(i) for i in range(6)]
    g = DirectedGraph(vs, [(a, b) for a in vs for b in vs if a != b])
    tp = TestProblem.from_waypoints(g, ["0", "1", "2"])
    with pytest.raises(EnumerationBudgetExceeded):
        sequence_flows(g, tp, limit=20)


def _corpus(seed, count, max_edges=12):
    rng = random.Random(seed)
    for _ in range(count):
        vs, es = oracles.random_digraph(rng, 4, 7, max_edges)
        n = rng.choice([1, 2])
        yield TestProblem.from_waypoints(DirectedGraph(vs, es), rng.sample(vs, n + 1))


def test_catalog_invariants_on_random_graphs():
    for tp in _corpus(11, 120):
        g = tp.graph
        try:
            cat = sequence_flows(g, tp)
        except EmptyCatalog:
            assert max_sequence_flow_value(g, tp) == 0
            continue
        legs = [max_flow_value(tp.leg_graph(g, i), a, b) for i, (a, b) in enumerate(tp.legs())]
        assert cat.f_tilde <= min(legs)
        assert tuple(legs) == cat.leg_flow_values
        assert cat.count == len(cat.combinations) == len(cat.flow_matrices)
        bests = [c.best for c in cat.combinations]
        assert bests == sorted(bests, key=lambda b: b != cat.f_tilde)
        for combo in cat.combinations:
            for sf in combo.flows:
                assert np.all(sf.matrix.sum(axis=1) == tp.n)
                for row in sf.matrix:
                    blocks = np.split(row, np.cumsum(combo.sizes)[:-1])
                    assert [int(b.sum()) for b in blocks] == [1] * tp.n
                paths = combo.sequence_paths(sf)
                edges = [e for p in paths for e in p.edges()]
                assert len(edges) == len(set(edges))
                for p in paths:
                    assert not has_ij_cycle(p.legs, tp.waypoints)
        short = max_sequence_flow_value(g, tp, mode=PathMode.SHORTEST)
        assert short <= cat.f_tilde


def test_f_tilde_matches_definition_oracle():
    for tp in _corpus(23, 80):
        got = max_sequence_flow_value(tp.graph, tp)
        want = oracles.max_sequence_flow_oracle(tp.graph.vertices, tp.graph.edges, tp.waypoints)
        assert got == want, (tp.graph.edges, tp.waypoints)
