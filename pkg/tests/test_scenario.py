import json
from fractions import Fraction

import pytest

from uavcover.scenario import (
    Scenario, ScenarioError, distance, load_scenario, save_scenario, scenario_from_dict,
    scenario_hash, scenario_to_dict, subarea_center, reference_scenario,
)

from .conftest import SCENARIOS


def test_reference_file_matches_builtin():
    assert load_scenario(SCENARIOS / "reference.json") == reference_scenario()


def test_decimal_kwh_is_exact():
    s = load_scenario(SCENARIOS / "reference.json")
    assert s.battery_capacity_J == Fraction(3_168_000)
    assert s.travel_time_s == 150 and s.charge_time_s == 300


def test_station_cell_excluded(reference):
    assert reference.n_cells == 16
    assert reference.n_coverage == 15
    assert 0 not in reference.coverage_subareas


@pytest.mark.parametrize("name, n", [("one_cell", 1), ("n6", 6), ("n12", 12), ("reference", 15)])
def test_shipped_scenarios(name, n):
    assert load_scenario(SCENARIOS / f"{name}.json").n_coverage == n


def test_roundtrip(tmp_path, reference):
    s = reference.with_changes(charge_time_s=Fraction(1, 3))
    p = tmp_path / "s.json"
    save_scenario(s, p)
    assert load_scenario(p) == s
    assert scenario_hash(load_scenario(p)) == scenario_hash(s)


def test_hash_sensitive_to_fields(reference):
    assert scenario_hash(reference) != scenario_hash(reference.with_changes(travel_time_s=151))


def test_subarea_geometry(reference):
    assert subarea_center(reference, 0) == (125.0, 125.0)
    assert subarea_center(reference, 5) == (375.0, 375.0)
    assert distance(reference, 0, 1) == pytest.approx(250.0)


def test_bad_json_reports_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "schema_version": 1,\n  "grid": [4 4]\n}')
    with pytest.raises(ScenarioError, match=r"bad.json:3:\d+"):
        load_scenario(p)


def _raw(**over):
    d = scenario_to_dict(reference_scenario())
    d.update(over)
    return d


@pytest.mark.parametrize("over, msg", [
    ({"schema_version": 2}, "schema_version"),
    ({"battery_capacity": {"value": 1, "unit": "MJ"}}, "unknown unit"),
    ({"travel_time": {"value": "fast", "unit": "s"}}, "not a number"),
    ({"grid": [4]}, "grid"),
    ({"charging_station": 16}, "charging_station"),
    ({"power": {"warp": 1}}, "unknown keys"),
    ({"charge_time": {"value": -1, "unit": "s"}}, "non-negative"),
    ({"hop_energy_mode": "distance"}, "not supported"),
])
def test_validation(over, msg):
    with pytest.raises(ScenarioError, match=msg):
        scenario_from_dict(_raw(**over))


def test_missing_field():
    d = _raw()
    del d["travel_time"]
    with pytest.raises(ScenarioError, match="travel_time"):
        scenario_from_dict(d)


def test_single_cell_grid_rejected():
    with pytest.raises(ScenarioError):
        Scenario(100, 100, 1, 1, 1000, 10, 10)


def test_schema_file_is_json(tmp_path, reference):
    p = tmp_path / "s.json"
    save_scenario(reference, p)
    assert json.loads(p.read_text())["schema_version"] == 1
