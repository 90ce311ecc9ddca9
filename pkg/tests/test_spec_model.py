import warnings

import pytest
from hypothesis import given, settings, strategies as st

from tgsynth.errors import AssumptionOneViolated, UnknownVertex
from tgsynth.graph import DirectedGraph
from tgsynth.kripke import (
    KripkeAbstraction,
    TestProblem,
    Trace,
    TraceVerdict,
    check_trace,
    induce_graph,
    resolve_waypoints,
)
from tgsynth.ltl import And, Next, Not, Prop, TrueF, Until, eventually, holds, sequence_formula

from conftest import FAN_EDGES, FAN_VERTICES, fan_kripke

S, M, N = TraceVerdict.SATISFIES_SEQUENCE, TraceVerdict.MISSION_ONLY, TraceVerdict.NEITHER_OR_INCOMPLETE


def test_induce_graph_simple():
    k = KripkeAbstraction.build(["a", "b"], {"a": ["b"]})
    g = induce_graph(k)
    assert g.vertices == ("a", "b") and g.edges == (("a", "b"),)


def test_induce_graph_fan():
    g = induce_graph(fan_kripke())
    assert g == DirectedGraph(FAN_VERTICES, FAN_EDGES)
    assert len(g.edges) == 8


def test_self_loop_dropped_with_warning():
    k = KripkeAbstraction.build(["a", "b"], {"a": ["a", "b"]})
    with pytest.warns(UserWarning, match="self-loop"):
        g = induce_graph(k)
    assert g.edges == (("a", "b"),)


def test_kripke_validation():
    with pytest.raises(UnknownVertex):
        KripkeAbstraction.build(["a"], {"a": ["b"]})
    with pytest.raises(UnknownVertex):
        KripkeAbstraction.build(["a"], {}, init=["z"])
    with pytest.raises(UnknownVertex):
        KripkeAbstraction.build(["a"], {}, labels={"z": ["p"]})
    k = KripkeAbstraction.build(["a"], {}, labels={"a": ["p"]}, actions=["go"])
    assert "p" in k.atomic_props


def test_resolve_waypoints_fan():
    tp = resolve_waypoints(fan_kripke(), ["p1", "p2"], "p3")
    assert tp.waypoints == ("q0", "w", "g")
    assert tp.n == 2 and tp.start == "q0" and tp.goal == "g"
    assert tp.label("w") == frozenset({"p2"})


def test_assumption_one():
    k = KripkeAbstraction.build(["a", "b", "c"], {"a": ["b"]}, labels={"a": ["p"], "b": ["p"], "c": ["g"]})
    with pytest.raises(AssumptionOneViolated) as err:
        resolve_waypoints(k, ["p"], "g")
    assert err.value.count == 2
    with pytest.raises(AssumptionOneViolated) as err:
        resolve_waypoints(k, ["q"], "g")
    assert err.value.count == 0


def test_problem_invariants():
    g = DirectedGraph(["a", "b"], [("a", "b")])
    with pytest.raises(ValueError):
        TestProblem(g, (), "g", ("a",))
    with pytest.raises(ValueError):
        TestProblem.from_waypoints(g, ["a", "a"])


def test_check_trace_examples(fan):
    assert check_trace(["q0", "v2", "w", "v6", "g"], fan) is S
    assert check_trace(["q0", "v2", "v4", "v6", "g"], fan) is M
    assert check_trace(["q0", "v2"], fan) is N
    assert check_trace(Trace(("q0", "v2", "w")), fan) is N


def test_trace_run_check():
    g = DirectedGraph(FAN_VERTICES, FAN_EDGES)
    assert Trace(("q0", "v2", "w")).is_run_of(g)
    assert not Trace(("q0", "w")).is_run_of(g)
    with pytest.raises(ValueError):
        Trace(())


def test_ltl_finite_semantics():
    a, b = Prop("a"), Prop("b")
    word = [frozenset({"a"}), frozenset({"a"}), frozenset({"b"})]
    assert holds(Until(a, b), word)
    assert not holds(Until(b, a), word[2:])
    assert holds(eventually(b), word)
    assert not holds(Next(TrueF()), word, 2)  # no successor at the last position
    assert holds(Not(b), word)
    assert holds(And(a, Next(a)), word)
    phi = sequence_formula(["a", "b"])
    assert holds(phi, word)
    assert not holds(phi, [frozenset({"b"}), frozenset({"a"}), frozenset({"b"})])


def _reference_verdict(trace, waypoints):
    # direct reading: first visits in order, each waypoint before the next
    goal = waypoints[-1]
    if goal not in trace:
        return N
    prefix = trace[: trace.index(goal) + 1]
    firsts = []
    for w in waypoints:
        if w not in prefix:
            return M
        firsts.append(prefix.index(w))
    return S if firsts == sorted(firsts) and len(set(firsts)) == len(firsts) else M


@settings(max_examples=300, deadline=None)
@given(st.lists(st.sampled_from(["a", "b", "c", "x", "y"]), min_size=1, max_size=9))
def test_check_trace_matches_reference(trace):
    g = DirectedGraph(["a", "b", "c", "x", "y"])
    tp = TestProblem.from_waypoints(g, ["a", "b", "c"])
    got = check_trace(trace, tp)
    assert got is _reference_verdict(trace, ["a", "b", "c"])


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.sampled_from(["a", "b", "c", "x"]), min_size=1, max_size=7),
    st.lists(st.sampled_from(["a", "b", "c", "x"]), max_size=4),
)
def test_incomplete_is_prefix_monotone(trace, extra):
    tp = TestProblem.from_waypoints(DirectedGraph(["a", "b", "c", "x"]), ["a", "b", "c"])
    before = check_trace(trace, tp)
    after = check_trace(trace + extra, tp)
    if before is not N:
        assert after is before  # verdict fixed once the goal is reached
    if after is S:
        assert "c" in trace + extra
