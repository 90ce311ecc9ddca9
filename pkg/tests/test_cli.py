import csv
import io as stdio
import json

import pytest

from tgsynth.cli import BENCH_HEADER, bench_rows, main, trial_seed
from tgsynth.graph import PathMode

FAN = {
    "states": ["q0", "v2", "w", "v4", "v5", "v6", "g"],
    "transitions": {"q0": ["v2"], "v2": ["w", "v4", "v5"], "w": ["v6"],
                    "v4": ["v6"], "v5": ["v6"], "v6": ["g"]},
    "init": ["q0"],
    "labels": {"q0": ["p1"], "w": ["p2"], "g": ["p3"]},
}
FAN_PROBLEM = {"chain": ["p1", "p2"], "mission": "p3"}
BOUNCE = {
    "vertices": ["v1", "v2", "vg"],
    "edges": [["v1", "v2"], ["v2", "v1"], ["v1", "vg"]],
    "labels": {"v1": ["p1"], "v2": ["p2"], "vg": ["g"]},
}
BOUNCE_PROBLEM = {"chain": ["p1", "p2"], "mission": "g"}
GRID = {"rows": 3, "cols": 3, "waypoints": {"p1": [2, 1], "p2": [3, 3]}, "goal": [1, 3]}


@pytest.fixture
def files(tmp_path):
    def put(name, data):
        p = tmp_path / name
        p.write_text(json.dumps(data))
        return str(p)

    return {
        "fan": put("fan.json", FAN),
        "prob3": put("prob3.json", FAN_PROBLEM),
        "bounce": put("bounce.json", BOUNCE),
        "prob2": put("prob2.json", BOUNCE_PROBLEM),
        "grid": put("grid.json", GRID),
        "reference_cuts": put("cuts.json", [["v2", "v4"], ["v4", "v6"], ["v2", "v5"], ["v5", "v6"]]),
        "bad": put("bad.json", {"nope": 1}),
        "dir": tmp_path,
    }


def test_synthesize_fan(files, capsys, tmp_path):
    out = tmp_path / "cuts_out.json"
    code = main(["synthesize", "--graph", files["fan"], "--problem", files["prob3"],
                 "--out", str(out)])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["iterations"] == 2 and doc["verification"]["verdict"] is True
    assert [(c["from"], c["to"], c["iteration"]) for c in doc["cuts"]] == [
        ("v2", "v4", 1), ("v2", "v5", 2)]
    saved = json.loads(out.read_text())
    assert "verification" not in saved and saved["cuts"] == doc["cuts"]
    assert main(["verify", "--graph", files["fan"], "--problem", files["prob3"],
                 "--cuts", str(out)]) == 0


def test_synthesize_infeasible(files, capsys):
    assert main(["synthesize", "--graph", files["bounce"], "--problem", files["prob2"]]) == 2
    assert "infeasible" in capsys.readouterr().err


def test_verify_codes(files, capsys):
    base = ["verify", "--graph", files["fan"], "--problem", files["prob3"]]
    assert main(base + ["--cuts", files["reference_cuts"]]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["skip_flows"] == {"1,3": 0}
    assert main(base) == 4
    assert main(["verify", "--graph", files["bounce"], "--problem", files["prob2"]]) == 4


def test_input_errors(files, capsys):
    assert main(["synthesize", "--graph", files["bad"], "--problem", files["prob3"]]) == 1
    assert main(["synthesize", "--graph", str(files["dir"] / "missing.json"),
                 "--problem", files["prob3"]]) == 1
    assert main(["synthesize", "--graph", files["fan"]]) == 1
    bad_prob = files["dir"] / "p.json"
    bad_prob.write_text(json.dumps({"chain": ["p9"], "mission": "p3"}))
    assert main(["synthesize", "--graph", files["fan"], "--problem", str(bad_prob)]) == 1
    assert main(["verify", "--graph", files["fan"], "--problem", files["prob3"],
                 "--cuts", files["prob3"]]) == 1
    capsys.readouterr()


def test_budget_exit(files, capsys):
    code = main(["synthesize", "--grid", files["grid"], "--limit", "1"])
    assert code == 3
    capsys.readouterr()


def test_grid_synthesize_and_render(files, capsys, tmp_path):
    out = tmp_path / "g.json"
    dot = tmp_path / "g.dot"
    code = main(["synthesize", "--grid", files["grid"], "--out", str(out),
                 "--dot", str(dot), "--render"])
    captured = capsys.readouterr()
    assert code == 0
    assert json.loads(captured.out)["verification"]["verdict"] is True
    assert captured.err.count("\n") == 5
    assert dot.read_text().startswith("digraph")
    assert main(["render", "--grid", files["grid"], "--cuts", str(out)]) == 0
    assert capsys.readouterr().out == captured.err


def test_synthesize_is_deterministic(files, capsys):
    args = ["synthesize", "--grid", files["grid"]]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first


def test_backends_agree_on_fan(files, capsys):
    for backend in ("bnb", "highs"):
        assert main(["synthesize", "--graph", files["fan"], "--problem", files["prob3"],
                     "--backend", backend]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["sequence_flow"] == 1 and doc["verification"]["verdict"]


def test_trial_seed_independent_of_sweep():
    assert trial_seed(0, 4, 2, 3) == trial_seed(0, 4, 2, 3)
    assert trial_seed(0, 4, 2, 3) != trial_seed(0, 4, 2, 4)


def test_bench_rows_shape():
    rows = list(bench_rows([3], [2], 2, 0, [PathMode.ALL]))
    assert len(rows) == 3
    assert all(len(r) == len(BENCH_HEADER) for r in rows)
    assert rows[-1][2] == "summary" and rows[-1][5].startswith("ok=")


def test_bench_cli_csv(tmp_path, capsys):
    out = tmp_path / "b.csv"
    assert main(["bench", "--sizes", "3", "--props", "2", "--trials", "2",
                 "--mode", "all,shortest", "--csv", str(out)]) == 0
    rows = list(csv.reader(stdio.StringIO(out.read_text())))
    assert rows[0] == BENCH_HEADER
    assert len(rows) == 1 + 2 * 3
    assert {r[4] for r in rows[1:]} == {"all", "shortest"}


def test_bench_bad_sizes(capsys):
    with pytest.raises(SystemExit):
        main(["bench", "--sizes", "0"])
    capsys.readouterr()
