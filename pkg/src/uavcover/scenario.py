"""Geographical area, uniform grid decomposition and scenario files."""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from fractions import Fraction
from pathlib import Path

from .energy import LinkParams, PowerParams

SCHEMA_VERSION = 1

ENERGY_UNITS = {"J": Fraction(1), "Wh": Fraction(3600), "kWh": Fraction(3_600_000)}
TIME_UNITS = {"s": Fraction(1), "min": Fraction(60), "h": Fraction(3600)}


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    area_width_m: float
    area_height_m: float
    grid_rows: int
    grid_cols: int
    battery_capacity_J: Fraction
    travel_time_s: Fraction
    charge_time_s: Fraction
    charging_station: int = 0
    power: PowerParams = field(default_factory=PowerParams)
    link: LinkParams = field(default_factory=LinkParams)
    # Reserved: only "constant" (one fixed hop energy per edge) is implemented.
    hop_energy_mode: str = "constant"

    def __post_init__(self):
        # normalise numeric inputs so equality and hashing are exact
        for name in ("battery_capacity_J", "travel_time_s", "charge_time_s"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.grid_rows < 1 or self.grid_cols < 1:
            raise ScenarioError("grid must have at least one row and one column")
        if self.grid_rows * self.grid_cols < 2:
            raise ScenarioError("grid needs at least one subarea besides the charging station")
        if not 0 <= self.charging_station < self.n_cells:
            raise ScenarioError(f"charging_station {self.charging_station} outside [0, {self.n_cells})")
        if not (self.area_width_m > 0 and self.area_height_m > 0):
            raise ScenarioError("area dimensions must be positive")
        if self.battery_capacity_J <= 0:
            raise ScenarioError("battery_capacity must be positive")
        if self.travel_time_s <= 0:
            raise ScenarioError("travel_time must be positive")
        if self.charge_time_s < 0:
            raise ScenarioError("charge_time must be non-negative")
        if self.hop_energy_mode != "constant":
            raise ScenarioError(f"hop_energy_mode {self.hop_energy_mode!r} is not supported")

    @property
    def n_cells(self) -> int:
        return self.grid_rows * self.grid_cols

    @property
    def coverage_subareas(self) -> list[int]:
        """Subarea ids that need coverage (every cell except the station's)."""
        return [i for i in range(self.n_cells) if i != self.charging_station]

    @property
    def n_coverage(self) -> int:
        return self.n_cells - 1

    def with_changes(self, **changes) -> Scenario:
        return replace(self, **changes)


def reference_scenario(**overrides) -> Scenario:
    """The reference scenario: 1 km x 1 km, 4x4 grid, 0.88 kWh, 2.5 min hops, 5 min charge."""
    base = Scenario(
        area_width_m=1000.0,
        area_height_m=1000.0,
        grid_rows=4,
        grid_cols=4,
        battery_capacity_J=Fraction("0.88") * ENERGY_UNITS["kWh"],
        travel_time_s=Fraction("2.5") * TIME_UNITS["min"],
        charge_time_s=5 * TIME_UNITS["min"],
        charging_station=0,
    )
    return replace(base, **overrides)


def _check_id(s: Scenario, idx: int) -> None:
    if not isinstance(idx, int) or not 0 <= idx < s.n_cells:
        raise ScenarioError(f"invalid subarea id {idx!r} for a {s.grid_rows}x{s.grid_cols} grid")


def subarea_center(s: Scenario, idx: int) -> tuple[float, float]:
    """Center of cell ``idx`` (row-major from the origin corner), in meters."""
    _check_id(s, idx)
    row, col = divmod(idx, s.grid_cols)
    return ((col + 0.5) * s.area_width_m / s.grid_cols, (row + 0.5) * s.area_height_m / s.grid_rows)


def distance(s: Scenario, a: int, b: int) -> float:
    ax, ay = subarea_center(s, a)
    bx, by = subarea_center(s, b)
    return math.hypot(ax - bx, ay - by)


# --- persistence -----------------------------------------------------------

def _rational_to_json(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _parse_quantity(raw, key: str, units: dict[str, Fraction]) -> Fraction:
    if not isinstance(raw, dict) or "value" not in raw:
        raise ScenarioError(f"field {key!r}: expected {{value, unit}}")
    unit = raw.get("unit", next(iter(units)))
    if unit not in units:
        raise ScenarioError(f"field {key!r}: unknown unit {unit!r} (accepted: {'|'.join(units)})")
    value = raw["value"]
    try:
        if isinstance(value, bool):
            raise TypeError
        q = Fraction(value) if not isinstance(value, str) else Fraction(value.strip())
    except (TypeError, ValueError, ZeroDivisionError):
        raise ScenarioError(f"field {key!r}: value {value!r} is not a number") from None
    return q * units[unit]


def _params_from_dict(cls, raw, key: str):
    if raw is None:
        return cls()
    if not isinstance(raw, dict):
        raise ScenarioError(f"field {key!r}: expected an object")
    known = {f.name for f in fields(cls)}
    unknown = set(raw) - known
    if unknown:
        raise ScenarioError(f"field {key!r}: unknown keys {sorted(unknown)}")
    kwargs = {}
    for name, value in raw.items():
        kwargs[name] = value if isinstance(value, str) else float(value)
    try:
        return cls(**kwargs)
    except ValueError as exc:
        raise ScenarioError(f"field {key!r}: {exc}") from None


def scenario_from_dict(data: dict) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("scenario file must contain a JSON object")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ScenarioError(f"schema_version mismatch: expected {SCHEMA_VERSION}, got {version!r}")
    for key in ("area_m", "grid", "battery_capacity", "travel_time", "charge_time"):
        if key not in data:
            raise ScenarioError(f"missing field {key!r}")
    area, grid = data["area_m"], data["grid"]
    if not (isinstance(area, list) and len(area) == 2):
        raise ScenarioError("field 'area_m': expected [width, height]")
    if not (isinstance(grid, list) and len(grid) == 2 and all(isinstance(g, int) for g in grid)):
        raise ScenarioError("field 'grid': expected [rows, cols] integers")
    station = data.get("charging_station", 0)
    if not isinstance(station, int) or isinstance(station, bool):
        raise ScenarioError("field 'charging_station': expected an integer index")
    return Scenario(
        area_width_m=float(area[0]),
        area_height_m=float(area[1]),
        grid_rows=grid[0],
        grid_cols=grid[1],
        charging_station=station,
        battery_capacity_J=_parse_quantity(data["battery_capacity"], "battery_capacity", ENERGY_UNITS),
        travel_time_s=_parse_quantity(data["travel_time"], "travel_time", TIME_UNITS),
        charge_time_s=_parse_quantity(data["charge_time"], "charge_time", TIME_UNITS),
        power=_params_from_dict(PowerParams, data.get("power"), "power"),
        link=_params_from_dict(LinkParams, data.get("link"), "link"),
        hop_energy_mode=data.get("hop_energy_mode", "constant"),
    )


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "area_m": [s.area_width_m, s.area_height_m],
        "grid": [s.grid_rows, s.grid_cols],
        "charging_station": s.charging_station,
        "battery_capacity": {"value": _rational_to_json(s.battery_capacity_J), "unit": "J"},
        "travel_time": {"value": _rational_to_json(s.travel_time_s), "unit": "s"},
        "charge_time": {"value": _rational_to_json(s.charge_time_s), "unit": "s"},
        "power": asdict(s.power),
        "link": asdict(s.link),
        "hop_energy_mode": s.hop_energy_mode,
    }


def load_scenario(path) -> Scenario:
    text = Path(path).read_text()
    try:
        # exact decimals: 0.88 kWh must become exactly 3,168,000 J
        data = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return scenario_from_dict(data)
    except ScenarioError as exc:
        raise ScenarioError(f"{path}: {exc}") from None


def save_scenario(s: Scenario, path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(s), indent=2) + "\n")


def scenario_hash(s: Scenario) -> str:
    canonical = json.dumps(scenario_to_dict(s), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()
