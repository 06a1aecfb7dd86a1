"""Grid evaluation, amplitude cuts and ridge location."""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.signal import find_peaks

from ..config import get_worker_count
from ..dynamics import IntegrationError, PopulationState, UndefinedStationaryError, stationary, transient
from ..params import DriveField, InvalidParameterError, QubitParams, freq_from_caption
from ..rates import (
    ROII_FREQUENCY_RATIO,
    AmbiguousResonanceError,
    RateSet,
    relax_rates_delta,
    relax_rates_ohmic,
    relax_rates_phenomenological,
    roii_rates,
    truncation_order,
    w_rate_gaussian,
    w_rate_lorentzian,
)
from ..specfun import QuadratureError, UnsupportedRangeError
from ..types import Direction, LzsModel, RelaxModel, WeakChannel
from ..version import __version__
from .types import CellFailure, PatternGrid, SweepSpec

logger = logging.getLogger("eii-sim.sweep.engine")

# Quantities a grid can hold besides p00
RATE_CHANNELS = ("w10", "w01", "g10", "g01", "inversion_drive")

# Peaks lower than this fraction of the slice's range are ignored
PEAK_PROMINENCE_FRACTION = 0.01

CELL_ERRORS = (
    InvalidParameterError,
    UndefinedStationaryError,
    IntegrationError,
    QuadratureError,
    UnsupportedRangeError,
    AmbiguousResonanceError,
    ArithmeticError,
)


def cell_rates(spec: SweepSpec, eps0: float, amp: float) -> RateSet:
    """
    Assemble the rate set of every enabled channel at one grid point.

    Args:
        spec: Sweep specification
        eps0: Static detuning (rad/ns)
        amp: Drive amplitude (rad/ns)

    Returns:
        RateSet with tunneling rates summed over the LZS and weak-field channels
    """
    q = QubitParams(delta=spec.qubit.delta, eps0=eps0, gamma2=spec.qubit.gamma2)
    d = DriveField(amp=amp, omega=spec.omega)
    w10 = w01 = g10 = g01 = 0.0

    if spec.lzs == LzsModel.LORENTZIAN:
        w10 += w_rate_lorentzian(q, d, Direction.DOWN)
        w01 += w_rate_lorentzian(q, d, Direction.UP)
    elif spec.lzs == LzsModel.GAUSSIAN:
        model = spec.noise.model()
        w10 += w_rate_gaussian(q, d, model, spec.polaron_time, Direction.DOWN)
        w01 += w_rate_gaussian(q, d, model, spec.polaron_time, Direction.UP)

    if spec.weak_field != WeakChannel.OFF:
        rabi = roii_rates(q, d, spec.weak, spec.weak_field, check_regime=False)
        w10 += rabi
        w01 += rabi

    if spec.relaxation == RelaxModel.OHMIC:
        g10, g01 = relax_rates_ohmic(spec.bath, d, eps0)
    elif spec.relaxation == RelaxModel.DELTA:
        g10, g01 = relax_rates_delta(spec.bath, d, eps0, spec.match_tol)
    elif spec.relaxation == RelaxModel.PHENOMENOLOGICAL:
        g10, g01 = relax_rates_phenomenological(spec.gamma01, eps0, spec.temperature)

    return RateSet(w10=w10, w01=w01, g10=g10, g01=g01, n_max=truncation_order(amp, spec.omega))


def evaluate_cell(spec: SweepSpec, eps0: float, amp: float) -> PopulationState:
    """
    Population of |0> at one grid point, stationary or at the spec's transient time.

    Args:
        spec: Sweep specification
        eps0: Static detuning (rad/ns)
        amp: Drive amplitude (rad/ns)

    Returns:
        PopulationState, clamped to [0, 1]
    """
    rates = cell_rates(spec, eps0, amp)
    if spec.stationary:
        return PopulationState.from_p00(stationary(rates).p00, float("inf"))
    return transient(rates, eps0, spec.temperature, spec.transient_ns, spec.init, spec.init_p00)


def _cell_value(spec: SweepSpec, quantity: str, eps0: float, amp: float) -> Tuple[float, bool, bool]:
    """(value, clamped, general-balance branch used)."""
    if quantity == "p00" and spec.stationary:
        result = stationary(cell_rates(spec, eps0, amp))
        state = PopulationState.from_p00(result.p00, float("inf"))
        return state.p00, state.clamped > 0, result.branch == "general"
    if quantity == "p00":
        state = evaluate_cell(spec, eps0, amp)
        return state.p00, state.clamped > 0, False
    rates = cell_rates(spec, eps0, amp)
    if quantity == "inversion_drive":
        return rates.g10 - rates.g01, False, False
    return getattr(rates, quantity), False, False


RowTask = Tuple[SweepSpec, str, int, float, Sequence[float]]


@dataclass
class RowResult:
    values: List[float] = field(default_factory=list)
    failures: List[CellFailure] = field(default_factory=list)
    clamps: int = 0
    general_balance: int = 0


def _evaluate_row(task: RowTask) -> RowResult:
    spec, quantity, i_eps, eps0, amps = task
    row = RowResult()
    for j, amp in enumerate(amps):
        try:
            value, clamped, general = _cell_value(spec, quantity, eps0, amp)
        except CELL_ERRORS as e:
            row.values.append(float("nan"))
            row.failures.append(CellFailure(i_eps=i_eps, i_amp=j, reason=f"{type(e).__name__}: {e}"))
            continue
        row.values.append(value)
        row.clamps += clamped
        row.general_balance += general
    return row


def _require_valid_spec(spec: SweepSpec) -> None:
    if violations := spec.validate():
        raise InvalidParameterError("; ".join(violations))
    if spec.weak_field != WeakChannel.OFF and spec.weak.omega_tilde < ROII_FREQUENCY_RATIO * spec.omega:
        logger.warning(
            f"{spec.name}: weak tone {spec.weak.omega_tilde:.4g} is below {ROII_FREQUENCY_RATIO:g} x drive frequency "
            f"{spec.omega:.4g}; the Rabi-induced rates assume w~ >> w"
        )


def _run_rows(spec: SweepSpec, quantity: str, workers: Optional[int]) -> Tuple[np.ndarray, RowResult]:
    eps_internal = [freq_from_caption(v) for v in spec.eps_axis.values()]
    amp_internal = [freq_from_caption(v) for v in spec.amp_axis.values()]
    tasks = [(spec, quantity, i, eps0, amp_internal) for i, eps0 in enumerate(eps_internal)]

    workers = workers or get_worker_count()
    if workers <= 1:
        rows = [_evaluate_row(task) for task in tasks]
    else:
        chunksize = max(1, len(tasks) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as executor:
            # map keeps row order
            rows = list(executor.map(_evaluate_row, tasks, chunksize=chunksize))

    matrix = np.array([row.values for row in rows], dtype=float)
    merged = RowResult(
        failures=[failure for row in rows for failure in row.failures],
        clamps=sum(row.clamps for row in rows),
        general_balance=sum(row.general_balance for row in rows),
    )
    return matrix, merged


def _provenance(spec: SweepSpec, quantity: str) -> Dict[str, Any]:
    return {
        "version": __version__,
        "quantity": quantity,
        "spec": spec.to_dict(),
        "n_max": truncation_order(freq_from_caption(spec.amp_axis.max), spec.omega),
    }


def evaluate(spec: SweepSpec, workers: Optional[int] = None) -> PatternGrid:
    """
    Evaluate p00 on every cell of the grid.

    Cells are independent; rows are distributed over worker processes and reassembled in order,
    so the matrix does not depend on the worker count. Failing cells become NaN and are listed
    in ``failures``.

    Args:
        spec: Sweep specification
        workers: Number of worker processes; defaults to the configured count

    Returns:
        PatternGrid

    Raises:
        InvalidParameterError: If the spec is invalid
    """
    _require_valid_spec(spec)
    started = time.perf_counter()
    matrix, cells = _run_rows(spec, "p00", workers)
    elapsed = time.perf_counter() - started
    logger.info(f"Evaluated {spec.name} on {matrix.shape[0]}x{matrix.shape[1]} cells in {elapsed:.2f} s")
    if cells.failures:
        logger.warning(f"{len(cells.failures)} cells of {spec.name} could not be evaluated")
    if cells.general_balance:
        logger.info(f"{cells.general_balance} stationary cells of {spec.name} have W_10 != W_01 (general balance)")
    provenance = _provenance(spec, "p00")
    provenance["general_balance_cells"] = cells.general_balance
    return PatternGrid(
        eps_values=spec.eps_axis.values(),
        amp_values=spec.amp_axis.values(),
        p00=matrix,
        provenance=provenance,
        failures=cells.failures,
        clamp_events=cells.clamps,
    )


def rate_grid(spec: SweepSpec, channel: str, workers: Optional[int] = None) -> PatternGrid:
    """
    Evaluate a single rate, or the inversion drive G_10 - G_01, on the sweep grid.

    Args:
        spec: Sweep specification
        channel: One of w10, w01, g10, g01, inversion_drive
        workers: Number of worker processes

    Returns:
        PatternGrid whose matrix holds the rate in 1/ns
    """
    if channel not in RATE_CHANNELS:
        raise InvalidParameterError(f"Unknown rate channel {channel!r}; expected one of {', '.join(RATE_CHANNELS)}")
    _require_valid_spec(spec)
    matrix, cells = _run_rows(spec, channel, workers)
    return PatternGrid(
        eps_values=spec.eps_axis.values(),
        amp_values=spec.amp_axis.values(),
        p00=matrix,
        provenance=_provenance(spec, channel),
        failures=cells.failures,
    )


def amplitude_cut(spec: SweepSpec, eps0_ghz: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    p00 along the amplitude axis at a fixed detuning.

    Args:
        spec: Sweep specification; only its amplitude axis is used
        eps0_ghz: Detuning in caption units

    Returns:
        (amplitudes in caption units, p00 values with NaN for failed cells)
    """
    _require_valid_spec(spec)
    amps = spec.amp_axis.values()
    row = _evaluate_row(
        (spec, "p00", 0, freq_from_caption(eps0_ghz), [freq_from_caption(a) for a in amps])
    )
    for failure in row.failures:
        logger.warning(f"Cut at eps0={eps0_ghz:g} GHz, amp index {failure.i_amp}: {failure.reason}")
    return amps, np.array(row.values, dtype=float)


def locate_peaks(values: Sequence[float], axis: Sequence[float]) -> List[float]:
    """
    Local maxima of a sampled curve with quadratic sub-cell refinement.

    Args:
        values: Samples; NaN entries are treated as the slice minimum
        axis: Uniformly spaced sample positions

    Returns:
        Peak positions in axis units, ascending
    """
    v = np.asarray(values, dtype=float)
    x = np.asarray(axis, dtype=float)
    if v.size < 3 or not np.isfinite(v).any():
        return []
    filled = np.where(np.isfinite(v), v, np.nanmin(v))
    span = float(np.ptp(filled))
    if span <= 1e-12 * max(float(np.max(np.abs(filled))), 1e-300):
        return []

    indices, _ = find_peaks(filled, prominence=PEAK_PROMINENCE_FRACTION * span)
    step = (x[-1] - x[0]) / (len(x) - 1)
    peaks = []
    for i in indices:
        left, centre, right = filled[i - 1], filled[i], filled[i + 1]
        curvature = left - 2.0 * centre + right
        offset = 0.5 * (left - right) / curvature if curvature < 0 else 0.0
        peaks.append(float(x[i] + offset * step))
    return peaks


def ridge_locate(grid: PatternGrid, amp_index: int, invert: bool = False) -> List[float]:
    """
    Ridge positions along eps0 at one amplitude.

    Args:
        grid: Evaluated grid
        amp_index: Index into the amplitude axis
        invert: Locate maxima of 1 - p00 instead of p00

    Returns:
        Detuning positions in caption units
    """
    if not 0 <= amp_index < len(grid.amp_values):
        raise IndexError(f"Amplitude index {amp_index} outside 0..{len(grid.amp_values) - 1}")
    column = grid.p00[:, amp_index]
    return locate_peaks(1.0 - column if invert else column, grid.eps_values)
