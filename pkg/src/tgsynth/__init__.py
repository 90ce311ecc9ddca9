"""Synthesis of static test environments that force ordered waypoint visits."""

from .errors import (
    AssumptionOneViolated,
    EmptyCatalog,
    EnumerationBudgetExceeded,
    InfeasibleEnvironment,
    SynthesisError,
    UnknownVertex,
    UnreachableGoal,
)
from .graph import (
    DirectedGraph,
    FlowRealization,
    PathMode,
    SimplePath,
    enumerate_flow_realizations,
    max_flow_unit,
    min_cut_edges,
    shortest_distance,
)
from .kripke import KripkeAbstraction, TestProblem, Trace, TraceVerdict, check_trace, induce_graph, resolve_waypoints
from .seqflow import has_ij_cycle, max_sequence_flow_value, sequence_flows
from .synthesis import CutSet, SynthesisResult, find_cut_paths, restrict_transitions
from .ilp import build_ilp_instance, solve_ilp
from .verify import brute_force_synthesis, is_test_graph, sequence_flow_value
from .gridworld import GridworldSpec, grid_to_graph, random_instance, render_grid

__version__ = "0.1.0"
