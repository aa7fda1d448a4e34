"""Power models for a quadcopter UAV and the per-scenario energy profile.

Hover and forward-flight power use the classic momentum-theory and
lift-to-drag approximations. The air-to-ground link budget (LOS/NLOS mean
path loss) is exposed as standalone dB utilities and can optionally drive the
transmit-power term of the coverage budget.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .scenario import Scenario

GRAVITY = 9.81
SPEED_OF_LIGHT = 299_792_458.0


class EnergyError(ValueError):
    pass


@dataclass(frozen=True)
class PowerParams:
    vehicle_mass_kg: float = 8.5
    payload_mass_kg: float = 2.0
    electronics_power_W: float = 150.0
    air_density_kg_m3: float = 1.225
    rotor_swept_area_m2: float = 0.2  # per rotor
    lift_to_drag: float = 3.0
    transfer_efficiency: float = 0.7
    speed_m_s: float = 12.0
    tx_power_W: float = 20.0
    tx_power_mode: str = "constant"  # or "link_budget"

    def __post_init__(self):
        for name in ("vehicle_mass_kg", "payload_mass_kg", "electronics_power_W",
                     "air_density_kg_m3", "rotor_swept_area_m2", "lift_to_drag"):
            if not getattr(self, name) > 0:
                raise EnergyError(f"{name} must be positive, got {getattr(self, name)}")
        if not 0 < self.transfer_efficiency <= 1:
            raise EnergyError(f"transfer_efficiency must be in (0, 1], got {self.transfer_efficiency}")
        if self.speed_m_s < 0:
            raise EnergyError(f"speed_m_s must be non-negative, got {self.speed_m_s}")
        if self.tx_power_W < 0:
            raise EnergyError(f"tx_power_W must be non-negative, got {self.tx_power_W}")
        if self.tx_power_mode not in ("constant", "link_budget"):
            raise EnergyError(f"unknown tx_power_mode {self.tx_power_mode!r}")

    @property
    def total_mass_kg(self) -> float:
        return self.vehicle_mass_kg + self.payload_mass_kg


@dataclass(frozen=True)
class LinkParams:
    required_rx_power_dB: float = -70.0
    env_alpha: float = 9.61
    env_beta: float = 0.16
    carrier_freq_Hz: float = 2.0e9
    excess_loss_los_dB: float = 1.0
    excess_loss_nlos_dB: float = 20.0
    altitude_m: float = 120.0
    coverage_radius_m: float = 180.0

    def __post_init__(self):
        if not self.carrier_freq_Hz > 0:
            raise EnergyError("carrier_freq_Hz must be positive")
        if self.altitude_m < 0:
            raise EnergyError("altitude_m must be non-negative")
        if not self.coverage_radius_m > 0:
            raise EnergyError("coverage_radius_m must be positive")
        if not (self.env_alpha > 0 and self.env_beta > 0):
            raise EnergyError("env_alpha and env_beta must be positive")


@dataclass(frozen=True)
class EnergyProfile:
    """Energy quantities the planner consumes.

    Powers are floats (they come out of square roots); the hop energy and the
    battery capacity are exact rationals so feasibility tests never flip on
    rounding noise.
    """

    hover_power_W: float
    travel_power_W: float
    coverage_power_W: float
    hop_energy_J: Fraction
    battery_J: Fraction


def hover_power(pp: PowerParams) -> float:
    """Hover power in watts: 4 * Th^1.5 / sqrt(2 Q S) + p, Th = one rotor's share of the weight."""
    if pp.air_density_kg_m3 <= 0 or pp.rotor_swept_area_m2 <= 0:
        raise EnergyError("air density and rotor swept area must be positive")
    thrust_per_rotor = pp.total_mass_kg * GRAVITY / 4
    induced = 4 * thrust_per_rotor**1.5 / math.sqrt(2 * pp.air_density_kg_m3 * pp.rotor_swept_area_m2)
    return induced + pp.electronics_power_W


def travel_power(pp: PowerParams) -> float:
    """Forward-flight power in watts.

    The model is stated in kW with speed in km/h:
    ``P = (m_p + m_v) v / (370 eta r) + p``.
    """
    if pp.transfer_efficiency <= 0 or pp.lift_to_drag <= 0:
        raise EnergyError("transfer_efficiency and lift_to_drag must be positive")
    speed_kmh = pp.speed_m_s * 3.6
    propulsion_kW = pp.total_mass_kg * speed_kmh / (370 * pp.transfer_efficiency * pp.lift_to_drag)
    return (propulsion_kW + pp.electronics_power_W / 1000) * 1000


def los_probability(lp: LinkParams, elevation_rad: float) -> float:
    theta_deg = math.degrees(elevation_rad)
    return 1.0 / (1.0 + lp.env_alpha * math.exp(-lp.env_beta * (theta_deg - lp.env_alpha)))


def elevation_angle(lp: LinkParams, distance_m: float) -> float:
    """Elevation seen by a ground user at slant distance ``distance_m``."""
    if distance_m < lp.altitude_m:
        raise EnergyError(f"slant distance {distance_m} m is shorter than altitude {lp.altitude_m} m")
    ground = math.sqrt(distance_m**2 - lp.altitude_m**2)
    return math.atan2(lp.altitude_m, ground)


def free_space_loss_dB(carrier_freq_Hz: float, distance_m: float) -> float:
    return 20 * math.log10(4 * math.pi * carrier_freq_Hz * distance_m / SPEED_OF_LIGHT)


def mean_path_loss(lp: LinkParams, distance_m: float, elevation_rad: float | None = None) -> float:
    """LOS/NLOS-weighted mean path loss in dB."""
    if distance_m <= 0:
        raise EnergyError(f"distance must be positive, got {distance_m}")
    if elevation_rad is None:
        elevation_rad = elevation_angle(lp, distance_m)
    p_los = los_probability(lp, elevation_rad)
    fs = free_space_loss_dB(lp.carrier_freq_Hz, distance_m)
    loss_los = fs + lp.excess_loss_los_dB
    loss_nlos = fs + lp.excess_loss_nlos_dB
    return p_los * loss_los + (1 - p_los) * loss_nlos


def required_tx_power(lp: LinkParams, distance_m: float, elevation_rad: float | None = None) -> float:
    """Transmit power (dB) needed to deliver the required received power."""
    return lp.required_rx_power_dB + mean_path_loss(lp, distance_m, elevation_rad)


def db_to_watts(value_dB: float) -> float:
    return 10 ** (value_dB / 10)


def link_budget_tx_power_W(lp: LinkParams) -> float:
    """Transmit power in watts needed at the edge of the coverage disk."""
    edge = math.hypot(lp.coverage_radius_m, lp.altitude_m)
    return db_to_watts(required_tx_power(lp, edge))


def energy_profile(s: Scenario) -> EnergyProfile:
    pp = s.power
    hover = hover_power(pp)
    travel = travel_power(pp)
    if pp.tx_power_mode == "link_budget":
        tx = link_budget_tx_power_W(s.link)
    else:
        tx = pp.tx_power_W
    hop = Fraction(travel) * s.travel_time_s
    battery = Fraction(s.battery_capacity_J)
    if hop >= battery:
        raise EnergyError("battery cannot complete a single hop")
    return EnergyProfile(
        hover_power_W=hover,
        travel_power_W=travel,
        coverage_power_W=hover + tx,
        hop_energy_J=hop,
        battery_J=battery,
    )
