"""Special functions: integer-order Bessel functions and adaptive quadrature."""

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy import integrate, special

logger = logging.getLogger("eii-sim.specfun")

MAX_ARGUMENT = 1e4
MAX_ORDER = 1000
ABS_FLOOR = 1e-300


class UnsupportedRangeError(Exception):
    """Error raised when a Bessel evaluation falls outside the supported envelope."""
    pass


class QuadratureError(Exception):
    """Error raised when adaptive quadrature does not reach the requested tolerance."""

    def __init__(self, message: str, estimate: Union[float, complex], error: float):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class BesselRow:
    """J_n(x) for all orders -n_max..n_max."""
    x: float
    orders: np.ndarray
    values: np.ndarray

    @property
    def n_max(self) -> int:
        return int(self.orders[-1])

    def value(self, n: int) -> float:
        return float(self.values[n + self.n_max])

    def sum_of_squares(self) -> float:
        return float(np.sum(self.values**2))


@dataclass(frozen=True)
class QuadResult:
    """Quadrature estimate with its absolute error bound."""
    value: Union[float, complex]
    error: float


def _check_envelope(n_abs: int, x: float) -> None:
    if not math.isfinite(x) or abs(x) > MAX_ARGUMENT:
        raise UnsupportedRangeError(f"Bessel argument {x} outside |x| <= {MAX_ARGUMENT:g}")
    if n_abs > MAX_ORDER:
        raise UnsupportedRangeError(f"Bessel order {n_abs} outside |n| <= {MAX_ORDER}")


def bessel_j(n: int, x: float) -> float:
    """
    Bessel function of the first kind for integer order.

    Args:
        n: Integer order
        x: Real argument

    Returns:
        J_n(x)

    Raises:
        UnsupportedRangeError: If |x| > 1e4 or |n| > 1000
    """
    n = int(n)
    _check_envelope(abs(n), x)
    # J_{-n}(x) = (-1)^n J_n(x) and J_n(-x) = (-1)^n J_n(x)
    sign = -1.0 if (n < 0) != (x < 0) and n % 2 else 1.0
    return sign * float(special.jv(abs(n), abs(x)))


def bessel_row(x: float, n_max: int) -> BesselRow:
    """
    All orders -n_max..n_max of J_n(x) in one pass.

    Args:
        x: Real argument
        n_max: Largest order, >= 0

    Returns:
        BesselRow with orders ascending

    Raises:
        UnsupportedRangeError: As for ``bessel_j``
        ValueError: If n_max is negative
    """
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    _check_envelope(n_max, x)

    positive = special.jv(np.arange(n_max + 1), abs(x))
    odd = np.arange(n_max + 1) % 2 == 1
    negative = np.where(odd, -positive, positive)
    if x < 0:
        positive, negative = negative, positive

    values = np.concatenate([negative[:0:-1], positive])
    values.setflags(write=False)
    orders = np.arange(-n_max, n_max + 1)
    orders.setflags(write=False)
    return BesselRow(x=float(x), orders=orders, values=values)


def _quad_real(
    f: Callable[[float], float],
    a: float,
    b: float,
    rel_tol: float,
    abs_tol: float,
    points: Optional[Sequence[float]],
    weight: Optional[str],
    wvar: Optional[float],
    limit: int,
) -> QuadResult:
    kwargs = {"epsrel": rel_tol, "epsabs": abs_tol, "limit": limit}
    if weight is not None:
        kwargs.update(weight=weight, wvar=wvar)
    elif points is not None:
        inner = [p for p in points if a < p < b]
        if inner:
            kwargs["points"] = inner

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        value, error = integrate.quad(f, a, b, **kwargs)
    for warning in caught:
        logger.debug(f"quad on [{a}, {b}]: {warning.message}")

    if not math.isfinite(value) or error > rel_tol * abs(value) + abs_tol:
        raise QuadratureError(
            f"Quadrature on [{a}, {b}] did not converge: estimate {value}, error {error}",
            estimate=value,
            error=error,
        )
    return QuadResult(value=float(value), error=float(error))


def integrate_adaptive(
    f: Callable[[float], Union[float, complex]],
    a: float,
    b: float,
    rel_tol: float = 1e-10,
    abs_tol: float = ABS_FLOOR,
    points: Optional[Sequence[float]] = None,
    weight: Optional[str] = None,
    wvar: Optional[float] = None,
    is_complex: bool = False,
    limit: int = 200,
) -> QuadResult:
    """
    Adaptive Gauss-Kronrod quadrature of a real or complex integrand.

    Args:
        f: Integrand
        a: Lower limit
        b: Upper limit, > a
        rel_tol: Relative tolerance
        abs_tol: Absolute floor added to the tolerance
        points: Interior break points (kinks, peaks)
        weight: Optional oscillatory weight "cos" or "sin" applied to f
        wvar: Frequency of the oscillatory weight
        is_complex: Integrate real and imaginary parts of f separately
        limit: Maximum number of subintervals

    Returns:
        QuadResult whose error satisfies error <= rel_tol * |value| + abs_tol

    Raises:
        QuadratureError: If the tolerance is not reached, carrying the best estimate
    """
    if not a < b:
        raise ValueError(f"Integration limits must satisfy a < b, got [{a}, {b}]")

    if not is_complex:
        return _quad_real(f, a, b, rel_tol, abs_tol, points, weight, wvar, limit)

    real = _quad_real(lambda x: f(x).real, a, b, rel_tol, abs_tol, points, weight, wvar, limit)
    # The imaginary part is judged against the size of the whole integral
    imag_abs_tol = max(abs_tol, rel_tol * abs(real.value))
    try:
        imag = _quad_real(lambda x: f(x).imag, a, b, rel_tol, imag_abs_tol, points, weight, wvar, limit)
    except QuadratureError as e:
        raise QuadratureError(str(e), estimate=complex(real.value, e.estimate), error=real.error + e.error) from e
    return QuadResult(value=complex(real.value, imag.value), error=real.error + imag.error)
