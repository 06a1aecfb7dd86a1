"""Deterministic detuning x amplitude sweeps and scenario presets."""

from .engine import amplitude_cut, cell_rates, evaluate, evaluate_cell, locate_peaks, rate_grid, ridge_locate
from .scenarios import (
    ConfigError,
    UnitViolationError,
    UnknownKeyError,
    UnknownScenarioError,
    list_scenarios,
    list_traces,
    scenario,
    spec_from_mapping,
    trace,
)
from .types import AxisSpec, CellFailure, NoiseSpec, PatternGrid, SweepSpec

__all__ = [
    "AxisSpec",
    "CellFailure",
    "ConfigError",
    "NoiseSpec",
    "PatternGrid",
    "SweepSpec",
    "UnitViolationError",
    "UnknownKeyError",
    "UnknownScenarioError",
    "amplitude_cut",
    "cell_rates",
    "evaluate",
    "evaluate_cell",
    "list_scenarios",
    "list_traces",
    "locate_peaks",
    "rate_grid",
    "ridge_locate",
    "scenario",
    "spec_from_mapping",
    "trace",
]
