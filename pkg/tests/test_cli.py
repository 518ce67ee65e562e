import json
import subprocess
import sys

import pytest

from bvlos_planner.cli import main
from bvlos_planner.scenario import bundled_scenario_path, load_scenario

THREE_TOWERS = str(bundled_scenario_path("three_towers"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_plan_prints_summary(capsys):
    code, out, err = run(capsys, "plan", "--scenario", THREE_TOWERS)
    assert code == 0
    doc = json.loads(out)
    assert doc["status"] == "ok"
    assert doc["start"] == [2, 3, 1] and doc["goal"] == [3, 2, 1]
    assert 0 < doc["dependability"] <= 1


def test_plan_records_and_overrides(capsys):
    code, out, _ = run(capsys, "plan", "--scenario", THREE_TOWERS, "--from", "1,1,1", "--to", "4,4,1",
                       "--mode", "min-handover", "--records")
    assert code == 0
    doc = json.loads(out)
    assert doc["mode"] == "min-handover"
    assert doc["records"][0]["step"] == 0
    assert (doc["records"][-1]["x"], doc["records"][-1]["y"]) == (4, 4)


def test_plan_no_path_exits_zero(tmp_path, capsys):
    sc = tmp_path / "empty.json"
    main(["gen", "--n", "3", "--m", "1", "--h", "1", "-o", str(sc)])
    capsys.readouterr()
    code, out, _ = run(capsys, "plan", "--scenario", str(sc), "--from", "1,1,1", "--to", "3,1,1")
    assert code == 0
    assert json.loads(out)["status"] == "no-path"


def test_plan_out_dir(tmp_path, capsys):
    code, _, _ = run(capsys, "plan", "--scenario", THREE_TOWERS, "--out-dir", str(tmp_path))
    assert code == 0
    assert (tmp_path / "path.csv").exists() and (tmp_path / "summary.json").exists()


def test_error_goes_to_stderr(capsys, tmp_path):
    code, out, err = run(capsys, "plan", "--scenario", str(tmp_path / "missing.json"))
    assert code == 1
    assert out == ""
    assert err.startswith("error: cannot read")


def test_blocked_goal_is_an_error(capsys):
    code, _, err = run(capsys, "plan", "--scenario", THREE_TOWERS, "--to", "9,9,1")
    assert code == 1
    assert "outside" in err


def test_bad_cell_argument_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["plan", "--scenario", THREE_TOWERS, "--from", "1,1"])
    assert exc.value.code == 2


def test_graph_stats_and_dump(tmp_path, capsys):
    dump = tmp_path / "g.txt"
    code, out, _ = run(capsys, "graph", "--scenario", THREE_TOWERS, "--dump", str(dump))
    assert code == 0
    stats = json.loads(out)
    assert stats["vertices"] == 37 and stats["edges"] == 126
    lines = dump.read_text().splitlines()
    assert sum(ln.startswith("vertex ") for ln in lines) == 37
    assert sum(ln.startswith("edge ") for ln in lines) == 126


def test_gen_is_reproducible(tmp_path, capsys):
    args = ["gen", "--n", "5", "--m", "4", "--h", "2", "--towers", "3", "--obstacle-density", "0.2",
            "--seed", "12", "--from", "1,1,2", "--to", "5,4,2"]
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b
    p = tmp_path / "s.json"
    p.write_text(a)
    sc = load_scenario(p)
    assert sc.request.start == (1, 1, 2)
    assert sc.meta["generator"]["seed"] == 12


def test_gen_impossible_request(capsys):
    code, _, err = run(capsys, "gen", "--n", "2", "--m", "2", "--h", "1", "--towers", "5")
    assert code == 1
    assert "cannot place" in err


def test_validate_random(capsys):
    code, out, _ = run(capsys, "validate", "--count", "10", "--seed", "3")
    assert code == 0
    assert out.splitlines()[-1] == "40/40 agree, 0 refused by the enumeration"


def test_validate_scenario(capsys):
    code, out, _ = run(capsys, "validate", "--scenario", THREE_TOWERS, "--mode", "full")
    assert code == 0
    assert "\tagree" in out.splitlines()[0]


def test_validate_refusals_reported(capsys):
    code, out, _ = run(capsys, "validate", "--scenario", THREE_TOWERS, "--mode", "full",
                       "--max-expansions", "1")
    assert code == 0
    assert "refused" in out.splitlines()[0]
    assert out.splitlines()[-1] == "0/0 agree, 1 refused by the enumeration"


def test_export_formats(tmp_path, capsys):
    code, out, _ = run(capsys, "export", "--scenario", THREE_TOWERS, "--out-dir", str(tmp_path),
                       "--format", "summary")
    assert code == 0
    assert [p.rsplit("/", 1)[-1] for p in out.split()] == ["summary.json"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bvlos_planner", "plan", "--scenario", THREE_TOWERS],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["status"] == "ok"
