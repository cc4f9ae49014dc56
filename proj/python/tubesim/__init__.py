"""Python bindings for the tubesim simulation core."""

from ._core import (
    IntegrationError,
    LaunchError,
    ScenarioError,
    adiabatic_energy,
    analyze,
    default_scenario_toml,
    froude_number,
    mass_properties,
    run,
    scale_scenario,
    static_margin,
    tube_exit,
)

__all__ = [
    "IntegrationError",
    "LaunchError",
    "ScenarioError",
    "adiabatic_energy",
    "analyze",
    "default_scenario_toml",
    "froude_number",
    "mass_properties",
    "run",
    "scale_scenario",
    "static_margin",
    "tube_exit",
]
