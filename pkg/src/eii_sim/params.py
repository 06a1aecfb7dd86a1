"""Parameter records, unit conversions and validation.

Every energy-like quantity (detunings, amplitudes, frequencies, temperatures and rates)
is stored internally as an angular frequency in rad/ns. Times are stored in ns.
Caption values quoted as "X/2pi = f GHz" are converted with ``freq_from_caption``.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Union

from .types import Unit

logger = logging.getLogger("eii-sim.params")

TWO_PI = 2.0 * math.pi

# Boltzmann constant over Planck constant (CODATA)
KB_OVER_H_GHZ_PER_K = 20.836619123


class InvalidParameterError(Exception):
    """Error raised when a physical parameter violates its invariants."""
    pass


@dataclass(frozen=True)
class QubitParams:
    """Two-level system: tunnel splitting, static detuning and dephasing rate (rad/ns)."""
    delta: float
    eps0: float
    gamma2: float


@dataclass(frozen=True)
class DriveField:
    """Strong longitudinal drive A cos(omega t) (rad/ns)."""
    amp: float
    omega: float


@dataclass(frozen=True)
class WeakField:
    """Weak second tone with amplitude amp_tilde and frequency omega_tilde (rad/ns)."""
    amp_tilde: float
    omega_tilde: float


@dataclass(frozen=True)
class BathParams:
    """Bath coupling alpha, transverse strength phi, characteristic frequency and temperature (rad/ns)."""
    alpha: float
    phi: float
    omega_c: float
    temperature: float


@dataclass(frozen=True)
class UnitValue:
    """A magnitude tagged with its unit, convertible to internal units."""
    magnitude: float
    unit: Unit

    def to_internal(self) -> float:
        """
        Convert to internal units.

        Returns:
            rad/ns for frequencies and temperatures, ns for times
        """
        if self.unit == Unit.GHZ_OVER_2PI:
            return freq_from_caption(self.magnitude)
        if self.unit == Unit.MILLIKELVIN:
            return temp_from_millikelvin(self.magnitude)
        if self.unit == Unit.MICROSECOND:
            return time_from_microseconds(self.magnitude)
        _require_finite(self.magnitude, self.unit.value)
        return float(self.magnitude)

    @classmethod
    def from_internal(cls, value: float, unit: Unit) -> "UnitValue":
        """
        Express an internal value in the given unit.

        Args:
            value: Value in rad/ns (frequencies, temperatures) or ns (times)
            unit: Target unit

        Returns:
            UnitValue carrying the converted magnitude
        """
        if unit == Unit.GHZ_OVER_2PI:
            return cls(value / TWO_PI, unit)
        if unit == Unit.MILLIKELVIN:
            return cls(value / (TWO_PI * KB_OVER_H_GHZ_PER_K * 1e-3), unit)
        if unit == Unit.MICROSECOND:
            return cls(value * 1e-3, unit)
        return cls(value, unit)

    @property
    def is_time(self) -> bool:
        return self.unit in (Unit.MICROSECOND, Unit.NANOSECOND)

    @property
    def is_temperature(self) -> bool:
        return self.unit == Unit.MILLIKELVIN


def _require_finite(value: float, name: str) -> None:
    if not math.isfinite(value):
        raise InvalidParameterError(f"{name} must be finite, got {value}")


def freq_from_caption(value_ghz_over_2pi: float) -> float:
    """
    Convert a caption frequency (X/2pi in GHz) to rad/ns.

    Args:
        value_ghz_over_2pi: Caption value in GHz

    Returns:
        Angular frequency in rad/ns

    Raises:
        InvalidParameterError: If the value is not finite
    """
    _require_finite(value_ghz_over_2pi, "frequency")
    return TWO_PI * value_ghz_over_2pi


def caption_from_freq(value_rad_per_ns: float) -> float:
    """Inverse of ``freq_from_caption``."""
    return value_rad_per_ns / TWO_PI


def temp_from_millikelvin(t_mk: float) -> float:
    """
    Convert a temperature in mK to an energy in rad/ns.

    Args:
        t_mk: Temperature in millikelvin

    Returns:
        2pi * (k_B/h) * T in rad/ns

    Raises:
        InvalidParameterError: If the temperature is negative or not finite
    """
    _require_finite(t_mk, "temperature")
    if t_mk < 0:
        raise InvalidParameterError(f"temperature must be >= 0 mK, got {t_mk}")
    return TWO_PI * KB_OVER_H_GHZ_PER_K * t_mk * 1e-3


def time_from_microseconds(t_us: float) -> float:
    """Convert microseconds to ns."""
    _require_finite(t_us, "time")
    return t_us * 1e3


ParamRecord = Union[QubitParams, DriveField, WeakField, BathParams]


def validate(params: ParamRecord) -> List[str]:
    """
    Check a parameter record against its invariants.

    Args:
        params: Any parameter record

    Returns:
        List of violated invariants; empty when the record is usable
    """
    report = []
    for name, value in vars(params).items():
        if not math.isfinite(value):
            report.append(f"{name} must be finite")

    if isinstance(params, QubitParams):
        if params.delta < 0:
            report.append("delta >= 0")
        if params.gamma2 < 0:
            report.append("gamma2 >= 0")
    elif isinstance(params, DriveField):
        if params.amp < 0:
            report.append("amp >= 0")
        if not params.omega > 0:
            report.append("omega > 0")
    elif isinstance(params, WeakField):
        if params.amp_tilde < 0:
            report.append("amp_tilde >= 0")
        if not params.omega_tilde > 0:
            report.append("omega_tilde > 0")
        elif not params.amp_tilde < params.omega_tilde:
            report.append("amp_tilde < omega_tilde")
    elif isinstance(params, BathParams):
        if params.alpha < 0:
            report.append("alpha >= 0")
        if params.phi < 0:
            report.append("phi >= 0")
        if not params.omega_c > 0:
            report.append("omega_c > 0")
        if params.temperature < 0:
            report.append("temperature >= 0")
    else:
        raise TypeError(f"Unsupported parameter record: {type(params).__name__}")

    return report


def require_valid(*records: ParamRecord) -> None:
    """
    Raise if any record violates its invariants.

    Raises:
        InvalidParameterError: Listing every violation found
    """
    violations = []
    for record in records:
        violations.extend(f"{type(record).__name__}: {v}" for v in validate(record))
    if violations:
        raise InvalidParameterError("; ".join(violations))
