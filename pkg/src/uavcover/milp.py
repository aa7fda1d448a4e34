"""Time-expanded integer program for the continuous coverage problem, LP-format export.

Slots last one hop time. Variable grammar::

    x_<m>                 UAV m participates
    y_<i>_<j>_<m>_t<t>    UAV m moves along edge i->j during slot t (i, j grid cell ids)
    z_<j>_<m>_t<t>        UAV m covers subarea j during slot t
    w_<m>_t<t>            auxiliary: UAV m leaves or reaches the station in slot t

Rows are named ``c<family>_<running index>`` with family 1..10. Families 1-9
are direct transcriptions; family 10 is a big-M linearisation of the
per-trip energy budget over every slot window.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .energy import energy_profile
from .scenario import Scenario, scenario_hash

DEFAULT_SIZE_CAP = 20_000
SIZE_CAP_ENV = "UAVCOVER_MILP_CAP"


class ModelTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Row:
    name: str
    family: int
    terms: tuple[tuple[int, str], ...]
    sense: str  # "<=", ">=", "="
    rhs: int


@dataclass
class MilpModel:
    uav_budget: int
    slots: int
    cells: tuple[int, ...]
    station: int
    targets: tuple[int, ...]
    slot_s: Fraction
    charge_slots: int
    hop_energy: int
    cover_energy: int
    battery: int
    scenario_hash: str = ""
    variables: list[str] = field(default_factory=list)
    rows: list[Row] = field(default_factory=list)
    _known: set[str] = field(default_factory=set, repr=False)
    _counters: dict[int, int] = field(default_factory=dict, repr=False)

    def var(self, name: str) -> str:
        if name not in self._known:
            self._known.add(name)
            self.variables.append(name)
        return name

    def add_row(self, family: int, terms, sense: str, rhs: int) -> None:
        merged: dict[str, int] = {}
        for coef, name in terms:
            if name not in self._known:
                raise KeyError(f"row references unregistered variable {name}")
            merged[name] = merged.get(name, 0) + coef
        terms = tuple((c, v) for v, c in merged.items() if c != 0)
        if not terms:
            return
        idx = self._counters.get(family, 0)
        self._counters[family] = idx + 1
        self.rows.append(Row(f"c{family}_{idx}", family, terms, sense, rhs))

    @property
    def objective(self) -> list[str]:
        return [x(m) for m in range(self.uav_budget)]

    def rows_of(self, family: int) -> list[Row]:
        return [r for r in self.rows if r.family == family]

    def core_variable_count(self) -> int:
        return sum(1 for v in self.variables if not v.startswith("w_"))


def x(m: int) -> str:
    return f"x_{m}"


def y(i: int, j: int, m: int, t: int) -> str:
    return f"y_{i}_{j}_{m}_t{t}"


def z(j: int, m: int, t: int) -> str:
    return f"z_{j}_{m}_t{t}"


def w(m: int, t: int) -> str:
    return f"w_{m}_t{t}"


def size_cap() -> int:
    raw = os.environ.get(SIZE_CAP_ENV)
    return int(raw) if raw else DEFAULT_SIZE_CAP


def expected_core_variables(n_cells: int, n_targets: int, M: int, T: int) -> int:
    return M + M * n_cells**2 * (T + 1) + M * n_targets * (T - 1)


def build_model(s: Scenario, uav_budget: int, horizon_slots: int, cap: int | None = None) -> MilpModel:
    M, T = uav_budget, horizon_slots
    if M < 1:
        raise ValueError("uav budget must be at least 1")
    if T < 2:
        raise ValueError("need at least 2 slots")
    cap = size_cap() if cap is None else cap
    if M * s.n_coverage * T > cap:
        est = expected_core_variables(s.n_cells, s.n_coverage, M, T)
        raise ModelTooLarge(f"M*N*T = {M * s.n_coverage * T} exceeds cap {cap} (~{est} core variables)")

    profile = energy_profile(s)
    slot_s = s.travel_time_s
    model = MilpModel(
        uav_budget=M,
        slots=T,
        cells=tuple(range(s.n_cells)),
        station=s.charging_station,
        targets=tuple(s.coverage_subareas),
        slot_s=slot_s,
        charge_slots=math.ceil(s.charge_time_s / slot_s),
        hop_energy=round(profile.hop_energy_J),
        cover_energy=round(Fraction(profile.coverage_power_W) * slot_s),
        battery=round(profile.battery_J),
        scenario_hash=scenario_hash(s),
    )
    G, G0, st = model.cells, model.targets, model.station
    full = range(T + 1)  # [0, T]
    inner = range(1, T)  # (0, T)

    for m in range(M):
        model.var(x(m))
    for m in range(M):
        for t in full:
            for i in G:
                for j in G:
                    model.var(y(i, j, m, t))
    for m in range(M):
        for t in inner:
            for j in G0:
                model.var(z(j, m, t))
    for m in range(M):
        for t in full:
            model.var(w(m, t))

    for i in G:
        for j in G:
            for t in full:
                for m in range(M):
                    model.add_row(1, [(1, y(i, j, m, t)), (-1, x(m))], "<=", 0)
    for j in G0:
        for t in inner:
            for m in range(M):
                model.add_row(2, [(1, z(j, m, t)), (-1, x(m))], "<=", 0)
    for j in G0:
        model.add_row(3, [(1, y(st, j, m, 0)) for m in range(M)], "=", 1)
    for j in G0:
        for t in inner:
            model.add_row(4, [(1, z(j, m, t)) for m in range(M)], "=", 1)
    for j in G0:
        for t in full:
            model.add_row(5, [(1, y(i, j, m, t)) for i in G if i != j for m in range(M)], "<=", 1)
    for j in G0:
        for t in inner:
            arrive = [(1, y(i1, j, m, t)) for m in range(M) for i1 in G]
            leave = [(-1, y(j, i2, m, t + 1)) for m in range(M) for i2 in G]
            model.add_row(6, arrive + leave, "=", 0)
    for j in G0:
        for t in inner:
            for m in range(M):
                # the UAV that arrives cannot be the one that hands over
                terms = [(1, y(i1, j, m, t)) for i1 in G] + [(1, y(j, i2, m, t + 1)) for i2 in G]
                model.add_row(6, terms, "<=", 1)
    for j in G0:
        visits = [(1, y(i, j, m, t)) for m in range(M) for t in range(T) for i in G]
        covers = [(-1, z(j, m, t)) for m in range(M) for t in inner]
        model.add_row(7, visits + covers, "<=", 0)
    for m in range(M):
        for t in inner:
            for tau in range(1, model.charge_slots + 1):
                if t + tau > T:
                    break
                terms = [(1, y(j, st, m, t)) for j in G0] + [(1, y(st, j, m, t + tau)) for j in G0]
                model.add_row(8, terms, "<=", 1)
    out_terms = [(1, y(st, j, m, t)) for m in range(M) for t in full for j in G0]
    in_terms = [(-1, y(i, st, m, t)) for m in range(M) for t in full for i in G0]
    model.add_row(9, out_terms + in_terms, "=", 0)
    _energy_rows(model)
    return model


def _energy_rows(model: MilpModel) -> None:
    G, G0, st, T = model.cells, model.targets, model.station, model.slots
    for m in range(model.uav_budget):
        for t in range(T + 1):
            events = [y(st, j, m, t) for j in G0] + [y(i, st, m, t) for i in G0]
            for ev in events:
                model.add_row(10, [(1, w(m, t)), (-1, ev)], ">=", 0)
            model.add_row(10, [(1, w(m, t))] + [(-1, ev) for ev in events], "<=", 0)
    for m in range(model.uav_budget):
        for t1 in range(T + 1):
            for t2 in range(t1 + 1, T + 1):
                usage = []
                for t in range(t1, t2 + 1):
                    usage += [(model.hop_energy, y(i, j, m, t)) for i in G for j in G if i != j]
                    if 0 < t < T:
                        usage += [(model.cover_energy, z(j, m, t)) for j in G0]
                big_m = max(sum(c for c, _ in usage), model.battery + 1)
                guard = [(big_m, y(st, j, m, t1)) for j in G0]
                guard += [(big_m, y(i, st, m, t2)) for i in G0]
                guard += [(-big_m, w(m, t3)) for t3 in range(t1 + 1, t2)]
                model.add_row(10, usage + guard, "<=", model.battery + 2 * big_m)


def _expr(terms) -> str:
    parts = []
    for n, (coef, name) in enumerate(terms):
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = name if mag == 1 else f"{mag} {name}"
        parts.append(f"{sign} {body}" if n else (f"- {body}" if coef < 0 else body))
    lines = [" ".join(parts[i:i + 6]) for i in range(0, len(parts), 6)]
    return "\n   ".join(lines)


def lp_text(model: MilpModel) -> str:
    out = [
        "\\ continuous UAV coverage: time-expanded model",
        f"\\ scenario {model.scenario_hash}",
        f"\\ cells 0..{len(model.cells) - 1}, station {model.station}, targets {list(model.targets)}",
        f"\\ M = {model.uav_budget}, T = {model.slots} slots of {model.slot_s} s, charge = {model.charge_slots} slots",
        f"\\ energies (J): hop {model.hop_energy}, cover per slot {model.cover_energy}, battery {model.battery}",
        "\\ slot domains: c1,c5,c9 t in [0,T]; c2,c4,c6,c8 t in (0,T); c7 visits t in [0,T), covers t in (0,T)",
        "\\ c6: aggregate handoff equality, then per-UAV rows forbidding self-handoff",
        "\\ c8: one row per (m, t, tau), tau = 1..charge slots",
        "\\ c10: w_<m>_t<t> link rows, then one big-M row per UAV and slot window [t1, t2]",
        "Minimize",
        " obj: " + _expr([(1, v) for v in model.objective]),
        "Subject To",
    ]
    for row in model.rows:
        out.append(f" {row.name}: {_expr(row.terms)} {row.sense} {row.rhs}")
    out.append("Binary")
    out.extend(f" {v}" for v in model.variables)
    out.append("End")
    return "\n".join(out) + "\n"


def export_lp(model: MilpModel, path) -> None:
    if model.uav_budget < 1:
        raise ValueError("refusing to export a model with no UAVs")
    Path(path).write_text(lp_text(model))


def row_violations(model: MilpModel, active: set[str], families=None) -> list[str]:
    """Names of rows violated by the 0/1 assignment where exactly ``active`` variables are 1."""
    bad = []
    for row in model.rows:
        if families is not None and row.family not in families:
            continue
        lhs = sum(c for c, v in row.terms if v in active)
        ok = lhs <= row.rhs if row.sense == "<=" else lhs >= row.rhs if row.sense == ">=" else lhs == row.rhs
        if not ok:
            bad.append(row.name)
    return bad
