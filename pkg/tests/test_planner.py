import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uavcover.energy import energy_profile
from uavcover.planner import (
    Cycle, CoveragePlan, InfeasibleError, algorithm_output_total, cle_plan, cycle_coverage_time,
    load_plan, min_additional_uavs, partition_errors, plan_from_dict, plan_to_dict, rotation_demand,
    save_plan, sm_plan,
)
from uavcover.scenario import reference_scenario

from .conftest import random_scenario


def test_reference_cle(reference):
    plan = cle_plan(reference)
    assert [c.n for c in plan.cycles] == [3, 3, 3, 3, 3]
    assert plan.additional_uavs == 5
    assert plan.covering_uavs == 15
    assert plan.total_uavs == 20 == algorithm_output_total(plan)
    assert partition_errors(reference, plan) == []
    assert plan.summary() == "5 cycles, 5 additional, 20 total (cycle sizes: 3,3,3,3,3)"


def test_reference_cle_first_cycle_is_nearest_neighbour(reference):
    # from the corner station: right neighbour, then its nearest unvisited (ties by id)
    assert cle_plan(reference).cycles[0].subareas == (1, 2, 3)


def test_reference_sm(reference):
    plan = sm_plan(reference)
    assert len(plan.cycles) == 15
    assert plan.additional_uavs == 15
    assert plan.total_uavs == 30


def test_every_cle_cycle_meets_rotation_bound(reference):
    for c in cle_plan(reference).cycles:
        assert c.additional_uavs == 1
        assert c.satisfies_rotation_bound(reference.travel_time_s, reference.charge_time_s)


def test_rotation_demand():
    assert rotation_demand(3, 150, 300) == 900


def test_min_additional_uavs_formula(reference):
    p = energy_profile(reference)
    assert min_additional_uavs(3, 150, 300, cycle_coverage_time(p, 3)) == 1
    assert min_additional_uavs(4, 150, 300, cycle_coverage_time(p, 4)) == 2
    assert min_additional_uavs(1, 1, 0, 10**9) == 1


def test_infeasible_cycle_size(reference):
    p = energy_profile(reference)
    with pytest.raises(InfeasibleError):
        cycle_coverage_time(p, 40)


def test_unservable_scenario_raises(reference):
    s = reference.with_changes(charge_time_s=Fraction(10**6))
    with pytest.raises(InfeasibleError, match="unservable"):
        cle_plan(s)
    with pytest.raises(InfeasibleError):
        sm_plan(s)


def test_plan_roundtrip(tmp_path, reference):
    plan = cle_plan(reference)
    path = tmp_path / "plan.json"
    save_plan(plan, path)
    assert load_plan(path) == plan


def test_plan_from_dwell_only(reference):
    d = plan_to_dict(cle_plan(reference))
    for c in d["cycles"]:
        del c["coverage_s"]
    assert plan_from_dict(d) == cle_plan(reference)


def test_partition_errors_detects_overlap(reference):
    c = Cycle((1, 2), 100, 1)
    plan = CoveragePlan((c, Cycle((2, 0), 100, 1)), "cle", "")
    errs = partition_errors(reference, plan)
    assert any("charging station" in e for e in errs)
    assert any("subarea 2" in e for e in errs)
    assert any("not covered" in e for e in errs)


def test_cycle_validation():
    with pytest.raises(ValueError):
        Cycle((), 1, 1)
    with pytest.raises(ValueError):
        Cycle((1, 1), 1, 1)
    with pytest.raises(ValueError):
        Cycle((1,), 0, 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_random_scenarios_partition_and_bound(seed):
    s = random_scenario(random.Random(seed))
    plan = cle_plan(s)
    assert partition_errors(s, plan) == []
    assert plan.total_uavs == s.n_coverage + plan.additional_uavs
    for c in plan.cycles:
        assert c.satisfies_rotation_bound(s.travel_time_s, s.charge_time_s)
    assert plan.additional_uavs <= sm_plan(s).additional_uavs == s.n_coverage


def test_larger_battery_never_needs_more():
    prev = None
    for m in range(1, 14):
        k = cle_plan(reference_scenario(battery_capacity_J=Fraction(3_168_000 * m))).additional_uavs
        assert prev is None or k <= prev
        prev = k
