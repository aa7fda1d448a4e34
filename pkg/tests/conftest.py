from pathlib import Path

import pytest

from uavcover.scenario import reference_scenario

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def reference():
    return reference_scenario()


@pytest.fixture(autouse=True)
def _default_caps(monkeypatch):
    monkeypatch.delenv("UAVCOVER_ORACLE_CAP", raising=False)
    monkeypatch.delenv("UAVCOVER_MILP_CAP", raising=False)


def random_scenario(rng, max_cells: int = 9):
    """A random servable scenario with at most ``max_cells`` cells (station included)."""
    from fractions import Fraction

    from uavcover.planner import InfeasibleError, cle_plan

    while True:
        rows = rng.randint(1, 3)
        cols = rng.randint(2 if rows == 1 else 1, max_cells // rows)
        s = reference_scenario(
            grid_rows=rows,
            grid_cols=cols,
            area_width_m=250.0 * cols,
            area_height_m=250.0 * rows,
            battery_capacity_J=Fraction(rng.randint(600, 8000)) * 1000,
            travel_time_s=Fraction(rng.choice([30, 60, 90, 150, 240])),
            charge_time_s=Fraction(rng.choice([0, 60, 300, 900, 1800])),
            charging_station=rng.randrange(rows * cols),
        )
        try:
            cle_plan(s)
        except (InfeasibleError, ValueError):
            continue
        return s


def cycle_scenario(n: int, travel_s, charge_s, coverage_s):
    """A 1 x (n+1) strip whose battery leaves exactly ``coverage_s`` of hover for an n-cycle."""
    from fractions import Fraction

    from uavcover.energy import energy_profile
    from uavcover.planner import Cycle

    base = reference_scenario(grid_rows=1, grid_cols=n + 1, area_width_m=250.0 * (n + 1), area_height_m=250.0,
                           travel_time_s=Fraction(travel_s), charge_time_s=Fraction(charge_s))
    p = energy_profile(base)
    e = Fraction(p.coverage_power_W)
    s = base.with_changes(battery_capacity_J=e * Fraction(coverage_s) + (n + 1) * p.hop_energy_J)
    return s, Cycle(tuple(range(1, n + 1)), Fraction(coverage_s), 1)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(test_acceptance.RESULTS):
        terminalreporter.write_line(test_acceptance.RESULTS[num])
