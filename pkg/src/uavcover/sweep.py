"""Parameter sweeps comparing CLE, SM and the exact oracle."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction

from .energy import EnergyError
from .oracle import OracleRefused, optimal_by_size_dp, oracle_cap
from .planner import InfeasibleError, cle_plan, sm_plan
from .scenario import Scenario, ScenarioError

PARAMS = ("battery_capacity", "grid_size", "charge_time", "travel_time")
METHODS = ("cle", "sm", "oracle")
CSV_HEADER = ["param", "value", "method", "additional_uavs", "cycles", "total_uavs", "feasible"]

# multiples of the base battery capacity; reaches one cycle on the 4x4 reference grid
ENERGY_MULTIPLES = (1, 2, 3, 4, 6, 8, 10, 13)


@dataclass(frozen=True)
class SweepSpec:
    param: str
    values: tuple
    base: Scenario
    methods: tuple[str, ...] = ("cle", "sm")

    def __post_init__(self):
        if self.param not in PARAMS:
            raise ValueError(f"unknown sweep parameter {self.param!r}")
        if not self.values:
            raise ValueError("sweep needs at least one value")
        bad = set(self.methods) - set(METHODS)
        if bad:
            raise ValueError(f"unknown methods {sorted(bad)}")
        if "oracle" in self.methods:
            cap = oracle_cap()
            too_big = [v for v in self.values if apply_value(self.base, self.param, v).n_coverage > cap]
            if too_big:
                raise ValueError(f"oracle refused: values {too_big} give more than {cap} subareas")


@dataclass(frozen=True)
class SweepRow:
    param: str
    value: object
    method: str
    additional_uavs: int | None
    cycles: int | None
    total_uavs: int | None
    feasible: bool


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]

    def series(self, method: str) -> list[tuple[object, int | None]]:
        return [(r.value, r.additional_uavs) for r in self.rows if r.method == method]


def default_values(param: str, base: Scenario) -> tuple:
    if param == "battery_capacity":
        return tuple(base.battery_capacity_J * m for m in ENERGY_MULTIPLES)
    if param == "grid_size":
        return (2, 3, 4, 5, 6)
    if param == "charge_time":
        return tuple(Fraction(60 * m) for m in range(0, 31, 5))
    if param == "travel_time":
        return tuple(Fraction(60 * m) for m in range(1, 6))
    raise ValueError(f"unknown sweep parameter {param!r}")


def default_spec(param: str, base: Scenario, methods=("cle", "sm")) -> SweepSpec:
    return SweepSpec(param, default_values(param, base), base, tuple(methods))


def apply_value(base: Scenario, param: str, value) -> Scenario:
    if param == "battery_capacity":
        return base.with_changes(battery_capacity_J=Fraction(value))
    if param == "grid_size":
        return base.with_changes(grid_rows=int(value), grid_cols=int(value))
    if param == "charge_time":
        return base.with_changes(charge_time_s=Fraction(value))
    if param == "travel_time":
        return base.with_changes(travel_time_s=Fraction(value))
    raise ValueError(f"unknown sweep parameter {param!r}")


def _point(param: str, value, method: str, s: Scenario) -> SweepRow:
    try:
        if method == "oracle":
            res = optimal_by_size_dp(s)
            return SweepRow(param, value, method, res.optimal_additional_uavs,
                            len(res.optimal_cycle_sizes), s.n_coverage + res.optimal_additional_uavs, True)
        plan = (cle_plan if method == "cle" else sm_plan)(s)
        return SweepRow(param, value, method, plan.additional_uavs, len(plan.cycles), plan.total_uavs, True)
    except (InfeasibleError, EnergyError, OracleRefused):
        return SweepRow(param, value, method, None, None, None, False)


def run_sweep(spec: SweepSpec) -> SweepResult:
    rows = []
    for value in spec.values:
        try:
            s = apply_value(spec.base, spec.param, value)
        except ScenarioError:
            rows.extend(SweepRow(spec.param, value, m, None, None, None, False) for m in spec.methods)
            continue
        rows.extend(_point(spec.param, value, m, s) for m in spec.methods)
    return SweepResult(tuple(rows))


def format_value(param: str, value) -> str:
    if param == "grid_size":
        return f"{int(value)}x{int(value)}"
    v = Fraction(value)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def to_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in result.rows:
        writer.writerow([r.param, format_value(r.param, r.value), r.method,
                         _cell(r.additional_uavs), _cell(r.cycles), _cell(r.total_uavs), _cell(r.feasible)])
    return buf.getvalue()


def to_json(result: SweepResult) -> str:
    rows = [
        {"param": r.param, "value": format_value(r.param, r.value), "method": r.method,
         "additional_uavs": r.additional_uavs, "cycles": r.cycles, "total_uavs": r.total_uavs,
         "feasible": r.feasible}
        for r in result.rows
    ]
    return json.dumps({"rows": rows}, indent=2) + "\n"


def reduction_vs_sm(result: SweepResult) -> list[tuple[object, float]]:
    """Per swept value, the fraction of SM's additional UAVs that CLE saves."""
    sm = dict(result.series("sm"))
    out = []
    for value, cle in result.series("cle"):
        base = sm.get(value)
        if cle is not None and base:
            out.append((value, 1 - cle / base))
    return out
