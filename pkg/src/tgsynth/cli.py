"""Command-line driver: synthesize, verify, render and bench.

Exit codes: 0 success, 1 input error, 2 infeasible environment, 3 budget
exceeded, 4 verification failed.
"""

from __future__ import annotations

import argparse
import csv
import logging
import statistics
import sys
import time
from pathlib import Path
from typing import Sequence

import numpy as np

from . import io
from .errors import (
    EnumerationBudgetExceeded,
    InfeasibleEnvironment,
    ResampleBudgetExceeded,
    SynthesisError,
    UnreachableGoal,
)
from .graph import DEFAULT_LIMIT, PathMode, to_dot
from .gridworld import grid_to_graph, random_instance, render_grid
from .synthesis import restrict_transitions
from .verify import is_test_graph

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2
EXIT_BUDGET = 3
EXIT_VERIFY = 4

BENCH_HEADER = [
    "t", "props", "trial", "seed", "mode", "status",
    "wall_time_s", "iterations", "cut_count", "sequence_flow", "wall_time_sd_s",
]

log = logging.getLogger("tgsynth")


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def _int_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("values must be positive")
    return values


def _modes(text: str) -> list[PathMode]:
    try:
        return [PathMode(m.strip()) for m in text.split(",") if m.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("mode must be all, shortest or a comma list of them")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_synthesize(args: argparse.Namespace) -> int:
    graph, tp, spec = io.load_problem(args.graph, args.problem, args.grid)
    try:
        result = restrict_transitions(tp, args.mode, args.limit, args.backend)
    except InfeasibleEnvironment as exc:
        _err(f"infeasible environment: {exc}")
        return EXIT_INFEASIBLE
    report = is_test_graph(result.graph, tp, args.limit)
    doc = result.to_json()
    if args.out:
        io.write_json(args.out, doc)
    sys.stdout.write(io.dumps({**doc, "verification": report.to_json()}))
    if args.dot:
        Path(args.dot).write_text(
            to_dot(graph, result.cuts, {v: sorted(ps) for v, ps in tp.labels.items()}),
            encoding="utf-8",
        )
    if spec is not None and args.render:
        sys.stderr.write(render_grid(spec, result.cuts))
    return EXIT_OK if report.verdict else EXIT_VERIFY


def cmd_verify(args: argparse.Namespace) -> int:
    graph, tp, _ = io.load_problem(args.graph, args.problem, args.grid)
    cuts = io.cuts_from_json(io.read_json(args.cuts)) if args.cuts else []
    graph.require(*(v for e in cuts for v in e))
    missing = [e for e in cuts if not graph.has_edge(*e)]
    if missing:
        raise io.InputError(f"cut edges not in graph: {missing}")
    g_prime = graph.without_edges(cuts)
    try:
        report = is_test_graph(g_prime, tp, args.limit)
    except UnreachableGoal as exc:
        _err(str(exc))
        return EXIT_VERIFY
    sys.stdout.write(io.dumps(report.to_json()))
    return EXIT_OK if report.verdict else EXIT_VERIFY


def cmd_render(args: argparse.Namespace) -> int:
    spec = io.load_grid(args.grid)
    cuts = io.cuts_from_json(io.read_json(args.cuts)) if args.cuts else []
    sys.stdout.write(render_grid(spec, cuts))
    return EXIT_OK


def trial_seed(seed: int, t: int, props: int, trial: int) -> int:
    """Per-trial seed; independent of which other sizes are in the sweep."""
    return int(np.random.SeedSequence([seed, t, props, trial]).generate_state(1)[0])


def run_trial(t: int, props: int, seed: int, mode: PathMode, limit: int, require_a3: bool) -> dict:
    row = {"status": "ok", "wall_time_s": 0.0, "iterations": "", "cut_count": "", "sequence_flow": ""}
    try:
        spec = random_instance(t, props, seed, require_assumption3=require_a3, limit=limit)
    except ResampleBudgetExceeded:
        row["status"] = "resample_budget"
        return row
    _, tp = grid_to_graph(spec)
    start = time.perf_counter()
    try:
        result = restrict_transitions(tp, mode, limit)
    except InfeasibleEnvironment:
        row["status"] = "infeasible"
    except EnumerationBudgetExceeded:
        row["status"] = "budget"
    else:
        row.update(
            iterations=result.iterations,
            cut_count=len(result.cuts),
            sequence_flow=result.sequence_flow,
        )
    row["wall_time_s"] = time.perf_counter() - start
    return row


def _mean(values: list) -> str:
    return f"{statistics.fmean(values):.3f}" if values else ""


def bench_rows(
    sizes: Sequence[int],
    props: Sequence[int],
    trials: int,
    seed: int,
    modes: Sequence[PathMode],
    limit: int = DEFAULT_LIMIT,
    require_a3: bool = False,
):
    """Yield CSV rows: one per trial, then a summary row per (t, props, mode).

    The summary's wall time mean and standard deviation cover every trial,
    failed or not; the other means cover successful trials only.
    """
    for t in sizes:
        for p in props:
            for mode in modes:
                rows = []
                for trial in range(trials):
                    s = trial_seed(seed, t, p, trial)
                    r = run_trial(t, p, s, mode, limit, require_a3)
                    rows.append(r)
                    log.info("t=%d props=%d trial=%d %s %.3fs", t, p, trial, r["status"], r["wall_time_s"])
                    yield [t, p, trial, s, mode.value, r["status"], f"{r['wall_time_s']:.6f}",
                           r["iterations"], r["cut_count"], r["sequence_flow"], ""]
                times = [r["wall_time_s"] for r in rows]
                ok = [r for r in rows if r["status"] == "ok"]
                sd = statistics.stdev(times) if len(times) > 1 else 0.0
                yield [t, p, "summary", seed, mode.value, f"ok={len(ok)}/{len(rows)}",
                       f"{statistics.fmean(times):.6f}" if times else "",
                       _mean([r["iterations"] for r in ok]),
                       _mean([r["cut_count"] for r in ok]),
                       _mean([r["sequence_flow"] for r in ok]),
                       f"{sd:.6f}"]


def cmd_bench(args: argparse.Namespace) -> int:
    try:
        fh = open(args.csv, "w", newline="", encoding="utf-8") if args.csv else sys.stdout
    except OSError as exc:
        _err(f"cannot write {args.csv}: {exc.strerror}")
        return EXIT_INPUT
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(BENCH_HEADER)
        for row in bench_rows(args.sizes, args.props, args.trials, args.seed, args.mode,
                              args.limit, args.require_assumption3):
            writer.writerow(row)
            fh.flush()
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tgsynth",
        description="Synthesize edge cuts that force ordered waypoint visits.",
    )
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    def inputs(p: argparse.ArgumentParser, problem_required: bool = False) -> None:
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--graph", help="graph or Kripke JSON")
        src.add_argument("--grid", help="gridworld JSON")
        p.add_argument("--problem", required=problem_required, help="problem JSON")
        p.add_argument("--limit", type=int, default=DEFAULT_LIMIT, help="enumeration budget")

    p = sub.add_parser("synthesize", help="compute a cut set")
    inputs(p)
    p.add_argument("--mode", type=PathMode, choices=list(PathMode), default=PathMode.ALL)
    p.add_argument("--backend", choices=["bnb", "highs"], default="bnb")
    p.add_argument("--out", help="write the cut-set JSON here")
    p.add_argument("--dot", help="write a DOT drawing with cuts dashed")
    p.add_argument("--render", action="store_true", help="draw grid cuts on stderr")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("verify", help="check that graph minus cuts is a test graph")
    inputs(p)
    p.add_argument("--cuts", help="cut-set JSON (omit for no cuts)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", help="ASCII drawing of a grid with cuts")
    p.add_argument("--grid", required=True)
    p.add_argument("--cuts")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("bench", help="runtime sweep over random grid instances")
    p.add_argument("--sizes", type=_int_list, default=[3, 4, 5])
    p.add_argument("--props", type=_int_list, default=[2, 3])
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", type=_modes, default=[PathMode.ALL], help="all, shortest or both")
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    p.add_argument("--require-assumption3", action="store_true",
                   help="resample instances until shortest paths carry sequence flow")
    p.add_argument("--csv", help="output file (default stdout)")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except EnumerationBudgetExceeded as exc:
        _err(str(exc))
        return EXIT_BUDGET
    except (io.InputError, SynthesisError, ValueError, KeyError) as exc:
        _err(str(exc))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
