"""Unified entry point for the CLI and the MCP server."""

import contextlib
import logging
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Generator, List, Optional, Tuple

import numpy as np

from .config import get_section_config
from .dynamics import IntegrationError, UndefinedStationaryError, transient_series
from .oracle import (
    OracleInconclusiveError,
    OracleReport,
    OracleTruncationError,
    check_lzs_rate,
    check_relax_rate,
    check_roii_rate,
)
from .params import DriveField, InvalidParameterError, QubitParams, caption_from_freq
from .rates import AmbiguousResonanceError, RiiMode, RoiiMode, resonance_report
from .render import json_report
from .render.csv_writer import summary_line, write_csv
from .render.heatmap import write_heatmap
from .render.run_config import RunConfig
from .resources import presets
from .specfun import QuadratureError, UnsupportedRangeError
from .spectral import UnsupportedQueryError
from .sweep import engine
from .sweep.scenarios import ConfigError, list_scenarios, list_traces, resolve_preset, trace
from .sweep.types import PatternGrid, SweepSpec
from .types import Direction, InitMode
from .utils.yaml_utils import PresetParseError

logger = logging.getLogger("eii-sim.simulation_manager")

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_VALIDATION = 2
EXIT_INCONCLUSIVE = 3

DEFAULT_ORACLE_TOLERANCE = {"relax": 0.02, "lzs": 0.05, "roii": 0.1}

VALIDATION_ERRORS = (InvalidParameterError, ConfigError, UnsupportedQueryError, ValueError)
NUMERIC_ERRORS = (
    QuadratureError,
    UnsupportedRangeError,
    UndefinedStationaryError,
    IntegrationError,
    AmbiguousResonanceError,
    OracleTruncationError,
    PresetParseError,
    ArithmeticError,
    OSError,
)


@dataclass
class CommandOutcome:
    """Exit code and error details of one command."""
    exit_code: int = EXIT_OK
    error: Optional[str] = None
    details: Dict[str, Any] = field(default_factory=dict)
    report: Dict[str, Any] = field(default_factory=dict)


@contextlib.contextmanager
def handle_command_errors(
    operation_description: str,
    outcome: CommandOutcome,
    context_identifier: Optional[Any] = None,
) -> Generator[None, None, None]:
    """
    Context manager mapping simulator errors onto exit codes.

    Validation errors set 2, an inconclusive oracle sets 3, numeric failures and anything
    unexpected set 1. The exception is logged and swallowed; the outcome carries the result.

    Args:
        operation_description: Description of the operation being performed
        outcome: Outcome updated in place
        context_identifier: Optional context (scenario name, oracle kind)
    """
    context_str = f" on {context_identifier}" if context_identifier else ""
    try:
        yield
    except OracleInconclusiveError as e:
        logger.error(f"Inconclusive {operation_description}{context_str}: {str(e)}")
        outcome.exit_code, outcome.error, outcome.details = EXIT_INCONCLUSIVE, str(e), e.details
        outcome.report = e.report
    except VALIDATION_ERRORS as e:
        logger.error(f"Invalid input for {operation_description}{context_str}: {str(e)}")
        outcome.exit_code, outcome.error = EXIT_VALIDATION, str(e)
    except NUMERIC_ERRORS as e:
        logger.error(f"Error {operation_description}{context_str}: {str(e)}")
        outcome.exit_code, outcome.error = EXIT_NUMERIC, str(e)
    except Exception as e:
        logger.error(f"Unexpected error {operation_description}{context_str}: {str(e)}")
        outcome.exit_code, outcome.error = EXIT_NUMERIC, str(e)


def _point(spec: SweepSpec, eps0: float) -> QubitParams:
    return QubitParams(delta=spec.qubit.delta, eps0=eps0, gamma2=spec.qubit.gamma2)


class SimulationManager:
    """Manager for rate evaluation, sweeps and oracle checks."""

    @staticmethod
    def rates(spec: SweepSpec, eps0: float, amp: float) -> Dict[str, Any]:
        """
        All enabled rates at one point.

        Args:
            spec: Channel and parameter selection; its axes are ignored
            eps0: Static detuning (rad/ns)
            amp: Drive amplitude (rad/ns)

        Returns:
            Parameter echo, rates (1/ns) and n_max
        """
        if violations := spec.validate():
            raise InvalidParameterError("; ".join(violations))
        rate_set = engine.cell_rates(spec, eps0, amp)
        return {
            "parameters": {
                "eps0_ghz_over_2pi": caption_from_freq(eps0),
                "amp_ghz_over_2pi": caption_from_freq(amp),
                "spec": spec.to_dict(),
            },
            "rates": {k: v for k, v in rate_set.to_dict().items() if k != "n_max"},
            "n_max": rate_set.n_max,
        }

    @staticmethod
    def pattern(config: RunConfig, workers: Optional[int] = None) -> Tuple[PatternGrid, str, List[str]]:
        """
        Evaluate a run configuration and write its outputs.

        Paths missing from the configuration default to ``<EII_OUTPUT_DIR>/<name>.csv`` and
        ``<EII_OUTPUT_DIR>/<name>.<format>``.

        Returns:
            (grid, summary line, written paths)
        """
        started = time.perf_counter()
        grid = engine.evaluate(config.spec, workers)
        elapsed = time.perf_counter() - started

        output_dir = Path(get_section_config("sweep")["output_dir"])
        name = config.spec.name
        csv_path = config.output.csv or str(output_dir / f"{name}.csv")
        image_path = config.output.heatmap or str(output_dir / f"{name}.{config.output.format}")
        for path in (csv_path, image_path):
            parent = os.path.dirname(path)
            if parent:
                os.makedirs(parent, exist_ok=True)

        write_csv(grid, csv_path)
        write_heatmap(grid, image_path, config.output.format, config.output.colormap, config.output.clamp)
        return grid, summary_line(grid.summary(), elapsed), [csv_path, image_path]

    @staticmethod
    def summarize(spec: SweepSpec, workers: Optional[int] = None) -> Dict[str, Any]:
        """Evaluate a sweep and return its summary without writing files."""
        grid = engine.evaluate(spec, workers)
        summary = grid.summary()
        summary["shape"] = list(grid.shape)
        summary["scenario"] = spec.name
        return summary

    @staticmethod
    def transient(
        spec: SweepSpec,
        eps0: float,
        amp: float,
        t_max: Optional[float],
        points: int,
        init: InitMode = InitMode.TANH,
        p00_init: Optional[float] = None,
    ) -> List[Tuple[float, float]]:
        """
        p00 on a uniform time grid from 0 to t_max.

        Args:
            t_max: Final time (ns); defaults to 20/R, or 1 ns when R = 0
            points: Number of samples, >= 2

        Returns:
            List of (time_ns, p00)
        """
        if points < 2:
            raise InvalidParameterError(f"points must be >= 2, got {points}")
        if violations := spec.validate():
            raise InvalidParameterError("; ".join(violations))
        rate_set = engine.cell_rates(spec, eps0, amp)
        if t_max is None:
            t_max = 20.0 / rate_set.total if rate_set.total > 0 else 1.0
        if not t_max > 0:
            raise InvalidParameterError(f"t_max must be > 0, got {t_max}")
        times = np.linspace(0.0, t_max, points)
        states = transient_series(rate_set, eps0, spec.temperature, times, init, p00_init)
        return [(state.time, state.p00) for state in states]

    @staticmethod
    def resonances(
        d: DriveField, mode: str, frequency: float, eps_window: Tuple[float, float], n_min: int = 0
    ) -> Dict[str, Any]:
        """
        Resonance positions in caption units.

        Args:
            d: Drive field (amplitude unused)
            mode: "rii" (frequency = omega_c) or "roii" (frequency = omega_tilde)
            frequency: Mode frequency (rad/ns)
            eps_window: Detuning window (rad/ns)
            n_min: Smallest photon number listed
        """
        if mode not in ("rii", "roii"):
            raise InvalidParameterError(f"mode must be rii or roii, got {mode!r}")
        resonance_mode = RiiMode(frequency) if mode == "rii" else RoiiMode(frequency)
        report = resonance_report(d, resonance_mode, eps_window, n_min)
        return {
            "theta_a": report.theta_a,
            "theta_b": report.theta_b,
            "n_range": list(report.n_range),
            "resonant_detunings_from_1to0_ghz": [caption_from_freq(v) for v in report.resonant_detunings_from_1to0],
            "resonant_detunings_from_0to1_ghz": [caption_from_freq(v) for v in report.resonant_detunings_from_0to1],
            "branches": {
                name: [[n, caption_from_freq(v)] for n, v in branch] for name, branch in report.branches.items()
            },
        }

    @staticmethod
    def oracle(
        kind: str,
        spec: SweepSpec,
        eps0: float,
        amp: float,
        rel_tol: float,
        direction: Direction = Direction.DOWN,
    ) -> OracleReport:
        """
        Run one oracle check.

        Args:
            kind: "relax", "lzs" or "roii"
            spec: Supplies qubit, drive frequency, bath and weak tone
            eps0: Static detuning (rad/ns)
            amp: Drive amplitude (rad/ns)
            rel_tol: Acceptance tolerance, > 0
            direction: Rate checked by the relaxation oracle
        """
        if not rel_tol > 0:
            raise InvalidParameterError(f"Tolerance must be > 0, got {rel_tol}")
        d = DriveField(amp=amp, omega=spec.omega)
        if kind == "relax":
            if spec.bath is None:
                raise InvalidParameterError("The relaxation oracle needs a bath")
            return check_relax_rate(spec.bath, d, eps0, rel_tol, direction)
        if kind == "lzs":
            return check_lzs_rate(_point(spec, eps0), d, rel_tol)
        if kind == "roii":
            if spec.weak is None:
                raise InvalidParameterError("The Rabi-induced oracle needs a weak tone")
            return check_roii_rate(_point(spec, eps0), d, spec.weak, rel_tol)
        raise InvalidParameterError(f"Unknown oracle kind {kind!r}; expected relax, lzs or roii")

    @staticmethod
    def list_presets() -> List[Dict[str, str]]:
        """Preset names with their kind and description."""
        entries = []
        for kind, names in (("grid", list_scenarios()), ("trace", list_traces())):
            for name in names:
                description = resolve_preset(name).get("description", "")
                entries.append({"name": name, "kind": kind, "description": description})
        return entries

    @staticmethod
    def get_presets_yaml() -> str:
        """The preset table as shipped."""
        return presets.get_scenarios_yaml()

    @staticmethod
    def cut(name: str, overrides: Optional[Dict[str, Any]] = None) -> List[Tuple[float, float]]:
        """
        Amplitude trace of a cut preset.

        Returns:
            List of (amp_ghz_over_2pi, p00)
        """
        spec, eps0_ghz = trace(name, overrides)
        amps, values = engine.amplitude_cut(spec, eps0_ghz)
        return list(zip(amps.tolist(), values.tolist()))

    @staticmethod
    def to_json(value: Any) -> str:
        return json_report.dumps(value)
