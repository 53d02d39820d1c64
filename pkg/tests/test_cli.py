import json
import math

import pytest

from sewer_osp.cli import main
from sewer_osp.network import build_upstream_index, load_network_dir
from sewer_osp.objectives import evaluate_plan, make_plan
from sewer_osp.results import read_solutions


@pytest.fixture
def path_dir(tmp_path):
    d = tmp_path / "path3"
    d.mkdir()
    (d / "nodes.csv").write_text("id,x,y\na,0,2\nb,0,1\nc,0,0\n")
    (d / "edges.csv").write_text("from,to\na,b\nb,c\n")
    return d


@pytest.fixture(scope="module")
def synth_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("net") / "net150"
    assert main(["synth", "--n", "150", "--seed", "7", "--out", str(d)]) == 0
    return d


def test_synth_outputs(synth_dir, capsys):
    assert (synth_dir / "nodes.csv").exists() and (synth_dir / "edges.csv").exists()
    manifest = json.loads((synth_dir / "manifest.json").read_text())
    assert manifest["command"] == "synth" and manifest["seed"] == 7
    assert main(["validate", str(synth_dir)]) == 0
    assert "network valid" in capsys.readouterr().out


def test_synth_usage_errors(tmp_path):
    assert main(["synth", "--n", "0", "--out", str(tmp_path / "x")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"0": 0.2, "1": 0.2}')
    assert main(["synth", "--n", "10", "--distribution", str(bad), "--out", str(tmp_path / "y")]) == 3


def test_synth_fit_from(synth_dir, tmp_path):
    out = tmp_path / "fitted"
    assert main(["synth", "--n", "80", "--fit-from", str(synth_dir), "--out", str(out)]) == 0
    dist = json.loads((out / "manifest.json").read_text())["config"]["distribution"]
    net = load_network_dir(synth_dir)
    assert dist[0] == pytest.approx((net.in_degrees() == 0).mean())


def test_validate_reports_violations(tmp_path, capsys):
    (tmp_path / "nodes.csv").write_text("id\na\nb\nc\n")
    (tmp_path / "edges.csv").write_text("from,to\na,b\na,c\n")
    assert main(["validate", str(tmp_path), "--json"]) == 3
    report = json.loads(capsys.readouterr().out)
    assert report["violations"][0]["message"] == "out-degree 2 at a"


def test_optimize_oracle_path(path_dir, tmp_path):
    out = tmp_path / "oracle"
    assert main(["optimize", str(path_dir), "--algo", "oracle", "--S", "2", "--out", str(out)]) == 0
    recs = read_solutions(out / "solutions.csv")
    assert [(r.coverage, r.search_cost) for r in recs] == [(3, 2 / 3), (2, 0.0)]
    assert (out / "solutions.csv").read_text().splitlines()[1:] == ["0,3,0.666667,a;c", "1,2,0,a;b"]


def test_optimize_errors(path_dir, tmp_path):
    assert main(["optimize", str(path_dir), "--S", "4", "--out", str(tmp_path / "o")]) == 3
    assert main(["optimize", str(path_dir), "--algo", "oracle", "--S", "2", "--cap", "1",
                 "--out", str(tmp_path / "o")]) == 4
    assert main(["optimize", str(tmp_path / "missing"), "--S", "1", "--out", str(tmp_path / "o")]) == 3


@pytest.mark.parametrize("algo", ["eg", "nmg"])
def test_optimize_roundtrip_and_replay(synth_dir, tmp_path, algo):
    out = tmp_path / algo
    args = ["optimize", str(synth_dir), "--algo", algo, "--N", "10", "--S", "6", "--x", "8", "--seed", "3"]
    assert main(args + ["--out", str(out)]) == 0
    idx = build_upstream_index(load_network_dir(synth_dir))
    recs = read_solutions(out / "solutions.csv")
    assert recs
    for r in recs:
        plan = make_plan(idx.network.node_id(s) for s in r.sensors)
        assert len(plan) == 6
        assert evaluate_plan(plan, idx) == (r.coverage, r.search_cost)
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["evaluations"] > 0 and manifest["wall_time"] >= 0

    again = tmp_path / (algo + "_replay")
    assert main(["replay", str(out / "manifest.json"), "--out", str(again)]) == 0
    for name in ("solutions.csv", "solutions.json"):
        assert (again / name).read_bytes() == (out / name).read_bytes()


def test_evaluate_plan_file(path_dir, tmp_path, capsys):
    plan = tmp_path / "plan.txt"
    plan.write_text("c\n")
    assert main(["evaluate", str(path_dir), "--plan", str(plan), "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["coverage"] == 3
    assert out["search_cost"] == pytest.approx(math.log2(3), abs=1e-12)
    assert out["entry_set_sizes"] == {"c": 3}


def test_evaluate_errors(path_dir, tmp_path):
    plan = tmp_path / "plan.txt"
    plan.write_text("b;b\n")
    assert main(["evaluate", str(path_dir), "--plan", str(plan)]) == 3
    plan.write_text("zz\n")
    assert main(["evaluate", str(path_dir), "--plan", str(plan)]) == 3


def test_evaluate_solutions_geojson(path_dir, tmp_path, capsys):
    out = tmp_path / "o"
    main(["optimize", str(path_dir), "--algo", "oracle", "--S", "2", "--out", str(out)])
    geo = tmp_path / "plan.geojson"
    assert main(["evaluate", str(path_dir), "--solutions", str(out / "solutions.csv"),
                 "--geojson", str(geo)]) == 0
    assert "coverage: 3" in capsys.readouterr().out
    fc = json.loads(geo.read_text())
    points = {f["properties"]["id"]: f["properties"] for f in fc["features"] if f["geometry"]["type"] == "Point"}
    assert points["a"]["sensor"] and points["a"]["m"] == 1
    assert points["b"]["entry_set"] == "c"
    assert sum(f["geometry"]["type"] == "LineString" for f in fc["features"]) == 2


def test_hv_command(path_dir, synth_dir, tmp_path, capsys):
    oracle, eg = tmp_path / "oracle", tmp_path / "eg"
    main(["optimize", str(synth_dir), "--algo", "oracle", "--S", "2", "--out", str(oracle)])
    main(["optimize", str(synth_dir), "--algo", "eg", "--N", "5", "--S", "2", "--x", "3", "--out", str(eg)])
    capsys.readouterr()
    files = [str(oracle / "solutions.csv"), str(eg / "solutions.csv"), str(oracle / "solutions.csv")]
    assert main(["hv", *files, "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["reference"] == [1.0, 1.0]
    assert out["hv"][files[0]] >= out["hv"][files[1]]

    empty = tmp_path / "empty.csv"
    empty.write_text("plan_id,coverage,search_cost,sensors\n")
    assert main(["hv", str(empty)]) == 3


def test_compare_small(tmp_path, capsys):
    out = tmp_path / "cmp"
    assert main(["compare", "--sizes", "40", "--x", "5", "10", "--seeds", "0", "1",
                 "--S", "5", "--N", "5", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "NMG" in text and "EG(5)" in text
    rows = (out / "hv_table.csv").read_text().splitlines()
    assert rows[0] == "size,NMG,EG(5),EG(10)"
    assert rows[1].startswith("40,")
    cells = json.loads((out / "cells.json").read_text())
    assert len(cells) == 2 * 3

    again = tmp_path / "cmp2"
    assert main(["replay", str(out / "manifest.json"), "--out", str(again)]) == 0
    assert (again / "hv_table.csv").read_bytes() == (out / "hv_table.csv").read_bytes()


def test_compare_budget_marks_cells(tmp_path, capsys):
    assert main(["compare", "--sizes", "60", "--algos", "nmg", "--S", "5", "--time-budget", "0",
                 "--out", str(tmp_path)]) == 0
    assert (tmp_path / "time_table.csv").read_text().splitlines()[1] == "60,**"
