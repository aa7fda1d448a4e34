"""Continuous UAV coverage planning with battery-charging rotations."""
from .energy import EnergyError, EnergyProfile, LinkParams, PowerParams, energy_profile
from .planner import CoveragePlan, Cycle, InfeasibleError, cle_plan, min_additional_uavs, sm_plan
from .scenario import Scenario, ScenarioError, load_scenario, save_scenario, reference_scenario

__all__ = [
    "CoveragePlan", "Cycle", "EnergyError", "EnergyProfile", "InfeasibleError", "LinkParams",
    "PowerParams", "Scenario", "ScenarioError", "cle_plan", "energy_profile", "load_scenario",
    "min_additional_uavs", "save_scenario", "sm_plan", "reference_scenario",
]
__version__ = "0.1.0"
