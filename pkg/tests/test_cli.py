import json
import subprocess
import sys

import pytest

from uavcover.cli import main
from uavcover.planner import cle_plan, load_plan, save_plan
from uavcover.scenario import reference_scenario

from .conftest import GOLDEN, SCENARIOS

REFERENCE = str(SCENARIOS / "reference.json")


def test_plan(capsys):
    assert main(["plan", REFERENCE]) == 0
    assert capsys.readouterr().out.strip() == "5 cycles, 5 additional, 20 total (cycle sizes: 3,3,3,3,3)"


def test_plan_flags_before_subcommand(tmp_path, capsys):
    out = tmp_path / "plan.json"
    assert main(["--scenario", REFERENCE, "--out", str(out), "--svg", str(tmp_path / "p.svg"), "plan", "--method", "sm"]) == 0
    assert load_plan(out).total_uavs == 30
    assert (tmp_path / "p.svg").read_text().startswith("<svg")


def test_sweep_csv(capsys):
    assert main(["sweep", REFERENCE, "--param", "battery_capacity", "--values", "0.88kWh,11.44kWh"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1] == "battery_capacity,3168000,cle,5,5,20,true"
    assert lines[3] == "battery_capacity,41184000,cle,1,1,16,true"


def test_sweep_json_to_file(tmp_path):
    out = tmp_path / "s.json"
    assert main(["sweep", "--scenario", REFERENCE, "--param", "grid_size", "--values", "2x2,3",
                 "--format", "json", "--out", str(out)]) == 0
    rows = json.loads(out.read_text())["rows"]
    assert [r["value"] for r in rows] == ["2x2", "2x2", "3x3", "3x3"]


def test_sweep_bad_values(capsys):
    assert main(["sweep", REFERENCE, "--param", "grid_size", "--values", "3x4"]) == 2
    assert main(["sweep", REFERENCE, "--param", "charge_time", "--values", "5parsecs"]) == 2


def test_sweep_oracle_refusal_is_usage_error(capsys):
    assert main(["sweep", REFERENCE, "--param", "grid_size", "--values", "4", "--methods", "cle,oracle"]) == 2


def test_simulate_writes_artifacts(tmp_path, capsys):
    assert main(["simulate", REFERENCE, "--horizon", "4laps", "--out", str(tmp_path / "sim")]) == 0
    verdict = json.loads((tmp_path / "sim" / "verdict.json").read_text())
    schedule = json.loads((tmp_path / "sim" / "schedule.json").read_text())
    assert verdict["ok"] is True
    assert len(schedule["uavs"]) == 20


def test_simulate_tampered_plan_exits_1(tmp_path, capsys):
    plan_path = tmp_path / "plan.json"
    save_plan(cle_plan(reference_scenario()), plan_path)
    data = json.loads(plan_path.read_text())
    for c in data["cycles"]:
        c["k"] = 0
    plan_path.write_text(json.dumps(data))
    assert main(["simulate", REFERENCE, "--plan", str(plan_path), "--horizon", "16650"]) == 1
    assert "C4" in capsys.readouterr().out


def test_oracle(capsys):
    assert main(["oracle", str(SCENARIOS / "n6.json")]) == 0
    assert json.loads(capsys.readouterr().out)["optimal_additional_uavs"] == 2
    assert main(["oracle", REFERENCE]) == 1


def test_export_milp(tmp_path, capsys):
    out = tmp_path / "m.lp"
    assert main(["export-milp", str(SCENARIOS / "one_cell.json"), "--budget", "2", "--slots", "4", "--out", str(out)]) == 0
    assert out.read_bytes() == (GOLDEN / "tiny.lp").read_bytes()
    assert main(["export-milp", REFERENCE, "--budget", "100", "--slots", "100"]) == 1
    assert main(["export-milp", REFERENCE, "--budget", "0", "--slots", "4"]) == 2


def test_missing_scenario_and_io_errors(tmp_path, capsys):
    assert main(["plan"]) == 2
    assert main(["plan", str(tmp_path / "missing.json")]) == 3
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert main(["plan", str(bad)]) == 3
    assert "bad.json:1:" in capsys.readouterr().err


def test_argparse_usage_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["plan", REFERENCE, "--method", "magic"])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "uavcover", "plan", REFERENCE], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "20 total" in proc.stdout
