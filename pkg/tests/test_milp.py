from collections import Counter
from fractions import Fraction

import pytest

from uavcover import milp
from uavcover.milp import ModelTooLarge, build_model, expected_core_variables, export_lp, lp_text, row_violations
from uavcover.scenario import load_scenario

from .conftest import GOLDEN, SCENARIOS

ROTATION = {
    "x_0", "x_1",
    "y_0_1_0_t0", "z_1_0_t1", "z_1_0_t2", "y_1_0_0_t3",  # UAV 0: out, cover two slots, home
    "y_0_1_1_t2", "z_1_1_t3",  # UAV 1 arrives as UAV 0 leaves
    "w_0_t0", "w_0_t3", "w_1_t2",
}


@pytest.fixture
def tiny():
    return build_model(load_scenario(SCENARIOS / "one_cell.json"), 2, 4)


def test_golden_lp_byte_identical(tiny):
    assert lp_text(tiny) == (GOLDEN / "tiny.lp").read_text()


def test_export_writes_same_text(tmp_path, tiny):
    export_lp(tiny, tmp_path / "m.lp")
    assert (tmp_path / "m.lp").read_bytes() == (GOLDEN / "tiny.lp").read_bytes()


def test_variable_count(tiny):
    assert tiny.core_variable_count() == expected_core_variables(2, 1, 2, 4) == 48
    assert len(tiny.variables) == 48 + 2 * 5  # plus one station-event flag per (m, t)
    assert len(set(tiny.variables)) == len(tiny.variables)


@pytest.mark.parametrize("M, T", [(1, 2), (2, 3), (3, 5)])
def test_variable_count_reference(reference, M, T):
    model = build_model(reference, M, T)
    assert model.core_variable_count() == expected_core_variables(16, 15, M, T)


def test_row_family_counts(tiny):
    counts = Counter(r.family for r in tiny.rows)
    assert dict(counts) == {1: 40, 2: 6, 3: 1, 4: 3, 5: 5, 6: 9, 7: 1, 8: 10, 9: 1, 10: 50}


def test_c3_rederived(tiny):
    want = {(frozenset(f"y_{tiny.station}_{j}_{m}_t0" for m in range(2)), 1) for j in tiny.targets}
    got = {(frozenset(v for _, v in r.terms), r.rhs) for r in tiny.rows_of(3)}
    assert got == want
    assert all(r.sense == "=" and all(c == 1 for c, _ in r.terms) for r in tiny.rows_of(3))


def test_c9_rederived(tiny):
    (row,) = tiny.rows_of(9)
    st = tiny.station
    out = {f"y_{st}_{j}_{m}_t{t}" for j in tiny.targets for m in range(2) for t in range(5)}
    back = {f"y_{j}_{st}_{m}_t{t}" for j in tiny.targets for m in range(2) for t in range(5)}
    assert {v for c, v in row.terms if c == 1} == out
    assert {v for c, v in row.terms if c == -1} == back
    assert (row.sense, row.rhs) == ("=", 0)


def test_energies_whole_joules(tiny):
    assert (tiny.hop_energy, tiny.cover_energy, tiny.battery) == (110068, 137508, 3168000)
    assert tiny.charge_slots == 2


def test_rotation_satisfies_discretised_rows(tiny):
    # a two-UAV relay cut mid-rotation: every family except the global out/in balance holds
    assert row_violations(tiny, ROTATION) == ["c9_0"]


def test_energy_rows_catch_overdraft():
    s = load_scenario(SCENARIOS / "one_cell.json").with_changes(battery_capacity_J=Fraction(300_000))
    model = build_model(s, 1, 4)
    trip = {"x_0", "y_0_1_0_t0", "z_1_0_t1", "y_1_0_0_t2", "w_0_t0", "w_0_t2"}
    assert row_violations(model, trip, families={10})
    fine = build_model(load_scenario(SCENARIOS / "one_cell.json"), 1, 4)
    assert not row_violations(fine, trip, families={10})


def test_self_handoff_row(tiny):
    same = {"y_0_1_0_t1", "y_1_0_0_t2"}
    assert "c6_3" in row_violations(tiny, same, families={6})  # the per-UAV row for (j=1, t=1, m=0)


def test_size_cap(reference, monkeypatch):
    with pytest.raises(ModelTooLarge):
        build_model(reference, 100, 100)
    monkeypatch.setenv(milp.SIZE_CAP_ENV, "10")
    with pytest.raises(ModelTooLarge):
        build_model(reference, 1, 2)


def test_invalid_budget(reference):
    with pytest.raises(ValueError):
        build_model(reference, 0, 4)
    with pytest.raises(ValueError):
        build_model(reference, 1, 1)


def test_lp_structure(tiny):
    text = lp_text(tiny)
    lines = text.splitlines()
    assert lines.index("Minimize") < lines.index("Subject To") < lines.index("Binary") < lines.index("End")
    assert lines[-1] == "End"
    assert " obj: x_0 + x_1" in lines
