"""Two-state rate equations: stationary populations, closed-form transients and an RK4 integrator."""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy import special

from .params import InvalidParameterError
from .rates import RateSet
from .types import InitMode

logger = logging.getLogger("eii-sim.dynamics")

# Clamping larger than this indicates a population outside [0, 1] that is not round-off
CLAMP_WARN_LIMIT = 1e-10

# Relative tolerance under which W_10 and W_01 count as symmetric
SYMMETRY_TOLERANCE = 1e-9

# RK4 steps per characteristic time 1/R
STEPS_PER_RATE_TIME = 100


class UndefinedStationaryError(Exception):
    """Error raised when the total rate vanishes and no stationary state exists."""
    pass


class IntegrationError(Exception):
    """Error raised when the rate-equation integrator cannot take a valid step."""
    pass


@dataclass(frozen=True)
class PopulationState:
    """Populations of |0> and |1> at a given time (ns)."""
    p00: float
    p11: float
    time: float
    clamped: float = 0.0

    @classmethod
    def from_p00(cls, p00: float, time: float) -> "PopulationState":
        """Build a state, clamping p00 to [0, 1] and recording the clamp magnitude."""
        clipped = min(max(p00, 0.0), 1.0)
        clamped = abs(p00 - clipped)
        if clamped > CLAMP_WARN_LIMIT:
            logger.warning(f"Population {p00:.6g} at t={time:g} ns clamped to {clipped:g}")
        return cls(p00=clipped, p11=1.0 - clipped, time=time, clamped=clamped)


@dataclass(frozen=True)
class StationaryPopulation:
    """Stationary p00 and the balance formula that produced it."""
    p00: float
    branch: str


def stationary(rates: RateSet) -> StationaryPopulation:
    """
    Stationary population of |0>.

    With W_10 = W_01 this is (W_10 + G_10) / (G_10 + 2 W_10 + G_01) ("symmetric"); otherwise the
    general balance (W_10 + G_10) / (W_10 + W_01 + G_10 + G_01) is used ("general").

    Args:
        rates: Rate set

    Returns:
        StationaryPopulation

    Raises:
        UndefinedStationaryError: If the total rate is zero
    """
    if not rates.total > 0:
        raise UndefinedStationaryError("Total rate is zero; stationary population is undefined")
    upward_to_zero = rates.w10 + rates.g10
    if math.isclose(rates.w10, rates.w01, rel_tol=SYMMETRY_TOLERANCE, abs_tol=0.0):
        return StationaryPopulation(p00=upward_to_zero / (rates.g10 + 2.0 * rates.w10 + rates.g01), branch="symmetric")
    return StationaryPopulation(p00=upward_to_zero / rates.total, branch="general")


def stationary_rii(g10: float, g01: float) -> float:
    """
    Stationary population of |0> with relaxation only.

    Returns:
        g10 / (g10 + g01)

    Raises:
        UndefinedStationaryError: If g10 + g01 is zero
    """
    if not g10 + g01 > 0:
        raise UndefinedStationaryError("g10 + g01 is zero; stationary population is undefined")
    return g10 / (g10 + g01)


def initial_population(
    eps0: float, temperature: float, init: InitMode = InitMode.TANH, p00_init: Optional[float] = None
) -> float:
    """
    Population of |0> at t = 0.

    ``tanh`` uses tanh(eps0 / 2T), which is the equilibrium population difference rather than a
    population; ``boltzmann`` uses 1 / (1 + exp(eps0/T)); ``custom`` uses p00_init.
    """
    init = InitMode(init)
    if init == InitMode.CUSTOM:
        if p00_init is None or not 0.0 <= p00_init <= 1.0:
            raise InvalidParameterError(f"custom initial population must lie in [0, 1], got {p00_init}")
        return p00_init
    if temperature < 0:
        raise InvalidParameterError(f"temperature must be >= 0, got {temperature}")
    if init == InitMode.TANH:
        if temperature == 0:
            return float(np.sign(eps0))
        return math.tanh(eps0 / (2.0 * temperature))
    if temperature == 0:
        return 0.5 if eps0 == 0 else float(eps0 < 0)
    return float(special.expit(-eps0 / temperature))


def transient(
    rates: RateSet,
    eps0: float,
    temperature: float,
    t: float,
    init: InitMode = InitMode.TANH,
    p00_init: Optional[float] = None,
) -> PopulationState:
    """
    Closed-form solution of the rate equations with constant rates.

    p00(t) = p_inf + (p00(0) - p_inf) exp(-R t) with R = W_10 + W_01 + G_10 + G_01, which reduces to
    G_10 + 2 W_10 + G_01 for symmetric tunneling rates.

    Args:
        rates: Rate set
        eps0: Static detuning (rad/ns), used by the initial condition
        temperature: Temperature (rad/ns), used by the initial condition
        t: Time in ns, >= 0
        init: Initial-condition mode
        p00_init: Initial population for ``custom``

    Returns:
        PopulationState at time t
    """
    if not t >= 0:
        raise InvalidParameterError(f"t must be >= 0, got {t}")
    p0 = initial_population(eps0, temperature, init, p00_init)
    total = rates.total
    if total == 0:
        return PopulationState.from_p00(p0, t)
    p_inf = stationary(rates).p00
    return PopulationState.from_p00(p_inf + (p0 - p_inf) * math.exp(-total * t), t)


def transient_series(
    rates: RateSet,
    eps0: float,
    temperature: float,
    times: Sequence[float],
    init: InitMode = InitMode.TANH,
    p00_init: Optional[float] = None,
) -> List[PopulationState]:
    """Closed-form transient on a time grid."""
    return [transient(rates, eps0, temperature, float(t), init, p00_init) for t in times]


RateFunction = Callable[[float], float]


def integrate_rate_ode(
    g10: RateFunction,
    g01: RateFunction,
    w10: RateFunction,
    w01: RateFunction,
    p0: float,
    t_grid: Sequence[float],
) -> List[PopulationState]:
    """
    Fourth-order Runge-Kutta integration of dp00/dt = (W_10 + G_10)(1 - p00) - (W_01 + G_01) p00.

    The step never exceeds the grid spacing or 1/(100 R_max), where R_max is the largest total rate
    sampled on the grid and its midpoints.

    Args:
        g10, g01, w10, w01: Time-dependent rates (1/ns)
        p0: p00 at t_grid[0]
        t_grid: Strictly increasing times (ns)

    Returns:
        PopulationState at every grid time

    Raises:
        InvalidParameterError: For a non-increasing grid or negative rates
        IntegrationError: If the step size underflows
    """
    times = np.asarray(t_grid, dtype=float)
    if times.ndim != 1 or len(times) == 0:
        raise InvalidParameterError("t_grid must be a non-empty 1-D sequence")
    if np.any(np.diff(times) <= 0):
        raise InvalidParameterError("t_grid must be strictly increasing")
    if not 0.0 <= p0 <= 1.0:
        raise InvalidParameterError(f"p0 must lie in [0, 1], got {p0}")

    def inflow_outflow(t: float):
        up = w10(t) + g10(t)
        down = w01(t) + g01(t)
        if up < 0 or down < 0:
            raise InvalidParameterError(f"Negative rate at t={t:g} ns")
        return up, down

    samples = np.concatenate([times, 0.5 * (times[1:] + times[:-1])])
    r_max = max(sum(inflow_outflow(t)) for t in samples)
    h_max = 1.0 / (STEPS_PER_RATE_TIME * r_max) if r_max > 0 else math.inf

    def derivative(t: float, p: float) -> float:
        up, down = inflow_outflow(t)
        return up * (1.0 - p) - down * p

    p = p0
    states = [PopulationState.from_p00(p, float(times[0]))]
    for start, end in zip(times[:-1], times[1:]):
        span = end - start
        n_sub = max(1, math.ceil(span / h_max))
        h = span / n_sub
        if h <= 1e-15 * max(abs(end), 1.0):
            raise IntegrationError(f"Step size {h:g} ns underflows on [{start:g}, {end:g}]")
        t = start
        for _ in range(n_sub):
            k1 = derivative(t, p)
            k2 = derivative(t + 0.5 * h, p + 0.5 * h * k1)
            k3 = derivative(t + 0.5 * h, p + 0.5 * h * k2)
            k4 = derivative(t + h, p + h * k3)
            p += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
            t += h
        states.append(PopulationState.from_p00(p, float(end)))
    return states
