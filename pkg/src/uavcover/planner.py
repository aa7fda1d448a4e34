"""Cycle feasibility, the CLE greedy heuristic and the one-spare-per-subarea baseline.

A cycle of ``n`` subareas is served by ``n`` covering UAVs plus ``k``
additional ones rotating through the charging station. With uniform dwell
``T_cov / n`` per subarea, ``k`` additional UAVs suffice iff

    k * T_cov / n >= (n + 1) * T + T_charge

where ``T`` is the hop time and ``T_cov`` the hover time one battery buys after
paying for the cycle's ``n + 1`` hops. Every comparison here is exact.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .energy import EnergyProfile, energy_profile
from .scenario import Scenario, distance, scenario_hash


class InfeasibleError(ValueError):
    pass


@dataclass(frozen=True)
class Cycle:
    subareas: tuple[int, ...]
    coverage_time_s: Fraction
    additional_uavs: int

    def __post_init__(self):
        object.__setattr__(self, "subareas", tuple(self.subareas))
        object.__setattr__(self, "coverage_time_s", Fraction(self.coverage_time_s))
        if not self.subareas:
            raise ValueError("a cycle needs at least one subarea")
        if len(set(self.subareas)) != len(self.subareas):
            raise ValueError(f"cycle visits a subarea twice: {self.subareas}")
        if self.coverage_time_s <= 0:
            raise ValueError("coverage_time_s must be positive")
        if self.additional_uavs < 0:
            raise ValueError("additional_uavs must be non-negative")

    @property
    def n(self) -> int:
        return len(self.subareas)

    @property
    def dwell_time_s(self) -> Fraction:
        return self.coverage_time_s / self.n

    def satisfies_rotation_bound(self, travel_time_s, charge_time_s) -> bool:
        return self.additional_uavs * self.dwell_time_s >= rotation_demand(self.n, travel_time_s, charge_time_s)


@dataclass(frozen=True)
class CoveragePlan:
    cycles: tuple[Cycle, ...]
    method: str = "cle"
    scenario_hash: str = ""

    @property
    def covering_uavs(self) -> int:
        return sum(c.n for c in self.cycles)

    @property
    def additional_uavs(self) -> int:
        return sum(c.additional_uavs for c in self.cycles)

    @property
    def total_uavs(self) -> int:
        return self.covering_uavs + self.additional_uavs

    def summary(self) -> str:
        sizes = ",".join(str(c.n) for c in self.cycles)
        noun = "cycle" if len(self.cycles) == 1 else "cycles"
        return (f"{len(self.cycles)} {noun}, {self.additional_uavs} additional, "
                f"{self.total_uavs} total (cycle sizes: {sizes})")


def rotation_demand(n: int, travel_time_s, charge_time_s) -> Fraction:
    """Time a UAV is away from its cycle between two entries: (n+1) hops plus a charge."""
    return (n + 1) * Fraction(travel_time_s) + Fraction(charge_time_s)


def cycle_coverage_time(profile: EnergyProfile, n: int) -> Fraction:
    """Hover seconds one battery leaves for an ``n``-subarea cycle (n + 1 hops)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    coverage_energy = profile.battery_J - (n + 1) * profile.hop_energy_J
    if coverage_energy <= 0:
        raise InfeasibleError(f"cycle infeasible: no coverage energy left for n={n}")
    return coverage_energy / Fraction(profile.coverage_power_W)


def min_additional_uavs(n: int, travel_time_s, charge_time_s, coverage_time_s) -> int:
    """Smallest k >= 1 satisfying the rotation inequality."""
    if n < 1:
        raise ValueError("n must be at least 1")
    coverage_time_s = Fraction(coverage_time_s)
    if coverage_time_s <= 0:
        raise InfeasibleError("cycle infeasible: non-positive coverage time")
    k = math.ceil(n * rotation_demand(n, travel_time_s, charge_time_s) / coverage_time_s)
    return max(k, 1)


def _single_k_feasible(profile: EnergyProfile, s: Scenario, n: int) -> bool:
    try:
        t_cov = cycle_coverage_time(profile, n)
    except InfeasibleError:
        return False
    return t_cov / n >= rotation_demand(n, s.travel_time_s, s.charge_time_s)


def _require_singletons(profile: EnergyProfile, s: Scenario, method: str) -> None:
    if not _single_k_feasible(profile, s, 1):
        raise InfeasibleError(f"scenario unservable by {method}: a one-subarea cycle needs more than one additional UAV")


def cle_plan(s: Scenario, profile: EnergyProfile | None = None) -> CoveragePlan:
    """Greedy nearest-neighbour cycles, each admitted only while one spare UAV suffices."""
    profile = profile or energy_profile(s)
    _require_singletons(profile, s, "CLE")
    unassigned = set(s.coverage_subareas)
    cycles = []
    while unassigned:
        current = s.charging_station
        members: list[int] = []
        while unassigned:
            nxt = min(unassigned, key=lambda b: (distance(s, current, b), b))
            if not _single_k_feasible(profile, s, len(members) + 1):
                break
            members.append(nxt)
            unassigned.remove(nxt)
            current = nxt
        cycles.append(Cycle(tuple(members), cycle_coverage_time(profile, len(members)), 1))
    return CoveragePlan(tuple(cycles), "cle", scenario_hash(s))


def sm_plan(s: Scenario, profile: EnergyProfile | None = None) -> CoveragePlan:
    """One cycle and one spare UAV per subarea."""
    profile = profile or energy_profile(s)
    _require_singletons(profile, s, "SM")
    t_cov = cycle_coverage_time(profile, 1)
    cycles = tuple(Cycle((j,), t_cov, 1) for j in s.coverage_subareas)
    return CoveragePlan(cycles, "sm", scenario_hash(s))


PLANNERS = {"cle": cle_plan, "sm": sm_plan}


def algorithm_output_total(plan: CoveragePlan) -> int:
    """Total UAVs written with the station at both ends of each cycle: sum(|c|-2) + |C|."""
    return sum((c.n + 2) - 2 for c in plan.cycles) + len(plan.cycles)


def partition_errors(s: Scenario, plan: CoveragePlan) -> list[str]:
    seen: dict[int, int] = {}
    problems = []
    for ci, c in enumerate(plan.cycles):
        for j in c.subareas:
            if j == s.charging_station:
                problems.append(f"cycle {ci} contains the charging station")
            elif j in seen:
                problems.append(f"subarea {j} in cycles {seen[j]} and {ci}")
            seen[j] = ci
    missing = set(s.coverage_subareas) - set(seen)
    if missing:
        problems.append(f"subareas not covered: {sorted(missing)}")
    return problems


# --- serialization -----------------------------------------------------------

def _frac_json(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


def _frac_from(raw) -> Fraction:
    if isinstance(raw, dict):
        return Fraction(int(raw["num"]), int(raw["den"]))
    return Fraction(raw)


def plan_to_dict(plan: CoveragePlan) -> dict:
    return {
        "method": plan.method,
        "scenario_hash": plan.scenario_hash,
        "cycles": [
            {
                "subareas": list(c.subareas),
                "k": c.additional_uavs,
                "coverage_s": _frac_json(c.coverage_time_s),
                "dwell_s": _frac_json(c.dwell_time_s),
            }
            for c in plan.cycles
        ],
        "covering_uavs": plan.covering_uavs,
        "additional_uavs": plan.additional_uavs,
        "total_uavs": plan.total_uavs,
    }


def plan_from_dict(data: dict) -> CoveragePlan:
    cycles = []
    for raw in data["cycles"]:
        subareas = tuple(int(j) for j in raw["subareas"])
        if "coverage_s" in raw:
            t_cov = _frac_from(raw["coverage_s"])
        else:
            t_cov = _frac_from(raw["dwell_s"]) * len(subareas)
        cycles.append(Cycle(subareas, t_cov, int(raw["k"])))
    return CoveragePlan(tuple(cycles), data.get("method", "cle"), data.get("scenario_hash", ""))


def save_plan(plan: CoveragePlan, path) -> None:
    Path(path).write_text(json.dumps(plan_to_dict(plan), indent=2) + "\n")


def load_plan(path) -> CoveragePlan:
    return plan_from_dict(json.loads(Path(path).read_text()))
