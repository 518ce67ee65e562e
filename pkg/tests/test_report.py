import json

import numpy as np
import pytest

from bvlos_planner.radio import Tower
from bvlos_planner.report import export_plan, plan, read_path_records
from bvlos_planner.solver import path_dependability

from conftest import make_scenario


def test_corridor_records(corridor):
    report = plan(corridor, (1, 1, 1), (2, 1, 1))
    recs = report.records()
    assert [(r["step"], r["kind"], r["x"], r["tower"]) for r in recs] == [
        (0, "cell", 1, ""), (1, "tower", 1, "t"), (2, "tower", 2, "t"), (3, "cell", 2, "")]
    assert recs[0]["edge_weight"] is None
    assert recs[1]["edge_weight"] == 0.5
    assert recs[3]["edge_weight"] == 1.0


def test_exported_records_reproduce_dependability(tmp_path, three_towers):
    report = plan(three_towers)
    export_plan(report, tmp_path, formats=("records",))
    recs, summary = read_path_records(tmp_path / "path.csv")
    weights = [r["edge_weight"] for r in recs[1:]]
    assert path_dependability(weights) == pytest.approx(report.dependability, rel=1e-12)
    assert summary["dependability"] == report.dependability
    assert summary["log_cost"] == pytest.approx(report.log_cost, rel=1e-15)


def test_export_no_path(tmp_path):
    sc = make_scenario(3, 1, 1)
    report = plan(sc, (1, 1, 1), (3, 1, 1))
    assert not report.found
    files = export_plan(report, tmp_path)
    recs, summary = read_path_records(tmp_path / "path.csv")
    assert recs == []
    assert summary == {"dependability": None, "log_cost": None}
    doc = json.loads((tmp_path / "summary.json").read_text())
    assert doc["status"] == "no-path"
    assert doc["handovers"] == 0
    assert {p.name for p in files} >= {"path.csv", "summary.json", "risk.csv", "path_cells.csv"}


def test_tables_are_grids(tmp_path, three_towers):
    export_plan(plan(three_towers), tmp_path, formats=("tables",))
    risk = np.loadtxt(tmp_path / "risk.csv", delimiter=",")
    assert risk.shape == (4, 4)
    assert risk[0, 1] == pytest.approx(0.1 * 0.4 * 0.5)
    gs = np.loadtxt(tmp_path / "ground_safeness.csv", delimiter=",")
    assert np.allclose(gs + risk, 1.0)
    levels = np.loadtxt(tmp_path / "free_levels.csv", delimiter=",")
    assert (levels == 1).all()
    cells = np.loadtxt(tmp_path / "path_cells.csv", delimiter=",", skiprows=1, ndmin=2)
    assert tuple(cells[0, 1:4]) == (2, 3, 1)
    assert tuple(cells[0, 4:]) == (30.0, 50.0, 10.0)


def test_unknown_format(tmp_path, three_towers):
    with pytest.raises(ValueError, match="unknown export format"):
        export_plan(plan(three_towers), tmp_path, formats=("pdf",))


def test_summary_echo_and_modes(three_towers):
    full = plan(three_towers)
    s = full.summary()
    assert s["status"] == "ok"
    assert s["parameters"]["towers"][0]["id"] == "a"
    assert len(s["parameters"]["scenario_sha256"]) == 64
    assert s["graph"]["vertices"] == 37
    assert full.full_dependability == full.dependability

    mr = plan(three_towers, mode="min-risk")
    assert mr.mode == "min-risk"
    assert mr.full_dependability <= full.dependability * (1 + 1e-12)


def test_plan_requires_endpoints():
    sc = make_scenario(2, 1, 1, towers=[Tower("t", 1, 1)])
    with pytest.raises(ValueError, match="no start/goal"):
        plan(sc)
    with pytest.raises(ValueError, match="unknown mode"):
        plan(sc, (1, 1, 1), (2, 1, 1), mode="fast")
