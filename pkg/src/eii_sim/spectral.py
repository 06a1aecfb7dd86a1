"""Bath spectral densities S(w') and the quantities derived from them.

Supported families:

- ``ohmic_cutoff``: S(w') = alpha w' exp(-|w'|/w_c) / (1 - exp(-w'/T)), with the analytic
  limits S(0) = alpha T and, at T = 0, S(w') = alpha w' exp(-w'/w_c) for w' > 0 only.
- ``delta_mode``: a single mode at w_c with weight alpha w_c, only reachable through
  ``resonant_weight``.
- ``white``: constant S = s0, wiring the dephasing rate Gamma_2 = pi s0.
- ``one_over_f``: S(w') = a1f / w' on [ir_cut, uv_cut] (positive branch), used for the
  Gaussian line shape and its polaron shift.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .config import get_section_config
from .params import BathParams, InvalidParameterError, require_valid
from .specfun import integrate_adaptive
from .types import SpectralKind

logger = logging.getLogger("eii-sim.spectral")

# Lower bound on |tau| when sizing the correlation integration window
TAU_FLOOR_NS = 1.0

# Below this value of uv_cut * t the polaron integrand is integrated directly
POLARON_DIRECT_LIMIT = 50.0


class UnsupportedQueryError(Exception):
    """Error raised when a spectral model cannot answer a query pointwise."""
    pass


@dataclass(frozen=True)
class SpectralModel:
    """Tagged spectral density. Build instances with the classmethod constructors."""
    kind: SpectralKind
    bath: Optional[BathParams] = None
    s0: float = 0.0
    a1f: float = 0.0
    ir_cut: float = 0.0
    uv_cut: float = 0.0

    @classmethod
    def ohmic(cls, bath: BathParams) -> "SpectralModel":
        require_valid(bath)
        return cls(kind=SpectralKind.OHMIC_CUTOFF, bath=bath)

    @classmethod
    def delta(cls, bath: BathParams) -> "SpectralModel":
        require_valid(bath)
        return cls(kind=SpectralKind.DELTA_MODE, bath=bath)

    @classmethod
    def white(cls, s0: float) -> "SpectralModel":
        if not s0 >= 0:
            raise InvalidParameterError(f"white noise height must be >= 0, got {s0}")
        return cls(kind=SpectralKind.WHITE, s0=s0)

    @classmethod
    def one_over_f(
        cls, a1f: float, ir_cut: Optional[float] = None, uv_cut: Optional[float] = None
    ) -> "SpectralModel":
        spectral_config = get_section_config("spectral")
        ir_cut = spectral_config["ir_cut"] if ir_cut is None else ir_cut
        uv_cut = spectral_config["uv_cut"] if uv_cut is None else uv_cut
        if not a1f >= 0:
            raise InvalidParameterError(f"1/f amplitude must be >= 0, got {a1f}")
        if not 0 < ir_cut < uv_cut:
            raise InvalidParameterError(f"1/f cutoffs must satisfy 0 < ir_cut < uv_cut, got {ir_cut}, {uv_cut}")
        return cls(kind=SpectralKind.ONE_OVER_F, a1f=a1f, ir_cut=ir_cut, uv_cut=uv_cut)

    @property
    def support(self) -> Tuple[float, float]:
        """Frequency interval on which the model is nonzero."""
        if self.kind == SpectralKind.ONE_OVER_F:
            return (self.ir_cut, self.uv_cut)
        if self.kind == SpectralKind.DELTA_MODE:
            return (self.bath.omega_c, self.bath.omega_c)
        return (-math.inf, math.inf)


def ohmic_density(omega_prime: np.ndarray, alpha: float, omega_c: float, temperature: float) -> np.ndarray:
    """Vectorised Ohmic spectral density with its analytic T -> 0 and w' -> 0 limits."""
    w = np.asarray(omega_prime, dtype=float)
    magnitude = np.abs(w)
    cutoff = np.exp(-magnitude / omega_c)

    if temperature == 0:
        return np.where(w > 0, alpha * w * cutoff, 0.0)

    x = magnitude / temperature
    with np.errstate(divide="ignore", invalid="ignore"):
        # |w| / (1 - exp(-|w|/T)), the absorption branch
        thermal = np.where(x > 0, magnitude / -np.expm1(-x), temperature)
    # Emission branch carries the Boltzmann factor exactly
    thermal = np.where(w < 0, thermal * np.exp(-x), thermal)
    return alpha * thermal * cutoff


def s_eval(model: SpectralModel, omega_prime: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """
    Evaluate S(w').

    Args:
        model: Spectral model
        omega_prime: Frequency or array of frequencies (rad/ns)

    Returns:
        S(w') with the same shape as the input

    Raises:
        UnsupportedQueryError: For delta_mode, which has no pointwise value
    """
    w = np.asarray(omega_prime, dtype=float)

    if model.kind == SpectralKind.OHMIC_CUTOFF:
        bath = model.bath
        result = ohmic_density(w, bath.alpha, bath.omega_c, bath.temperature)
    elif model.kind == SpectralKind.WHITE:
        result = np.full_like(w, model.s0)
    elif model.kind == SpectralKind.ONE_OVER_F:
        inside = (w >= model.ir_cut) & (w <= model.uv_cut)
        with np.errstate(divide="ignore"):
            result = np.where(inside, model.a1f / np.where(inside, w, 1.0), 0.0)
    else:
        raise UnsupportedQueryError("delta_mode has no pointwise value; use resonant_weight")

    return float(result) if result.ndim == 0 else result


def resonant_weight(model: SpectralModel) -> Optional[Tuple[float, float]]:
    """
    Symbolic form of a delta-mode bath.

    Returns:
        (w_c, alpha * w_c) for delta_mode, None for every other kind
    """
    if model.kind != SpectralKind.DELTA_MODE:
        return None
    return (model.bath.omega_c, model.bath.alpha * model.bath.omega_c)


@dataclass(frozen=True)
class CorrelationSample:
    """Bath correlation function C(tau) at one delay."""
    tau: float
    value: complex


def _correlation_window(model: SpectralModel, tau: float) -> float:
    bath = model.bath
    return 10.0 * max(bath.omega_c, bath.temperature) + 50.0 / max(abs(tau), TAU_FLOOR_NS)


def correlation(model: SpectralModel, tau: float, rel_tol: float = 1e-10) -> complex:
    """
    Bath correlation function C(tau) = integral of exp(-i w' tau) S(w') dw'.

    Args:
        model: Ohmic spectral model
        tau: Delay in ns
        rel_tol: Quadrature tolerance in [1e-12, 1e-4]

    Returns:
        C(tau); C(-tau) is the exact complex conjugate of C(tau)

    Raises:
        UnsupportedQueryError: For models without a pointwise correlation function
        QuadratureError: If the quadrature does not converge
    """
    if model.kind != SpectralKind.OHMIC_CUTOFF:
        raise UnsupportedQueryError(f"correlation is not available pointwise for {model.kind.value}")
    if not 1e-12 <= rel_tol <= 1e-4:
        raise InvalidParameterError(f"rel_tol must lie in [1e-12, 1e-4], got {rel_tol}")

    t = abs(tau)
    window = _correlation_window(model, t)
    breaks = [0.0, -model.bath.omega_c, model.bath.omega_c]

    def density(w: float) -> float:
        return float(s_eval(model, w))

    total = integrate_adaptive(density, -window, window, rel_tol=rel_tol, points=breaks).value
    if t == 0:
        return complex(total, 0.0)

    # |C(tau)| <= C(0), so both parts are resolved relative to C(0)
    floor = rel_tol * abs(total)
    real = integrate_adaptive(density, -window, window, rel_tol=rel_tol, abs_tol=floor, weight="cos", wvar=t).value
    sine = integrate_adaptive(density, -window, window, rel_tol=rel_tol, abs_tol=floor, weight="sin", wvar=t).value
    value = complex(real, -sine)
    return value.conjugate() if tau < 0 else value


def correlation_series(model: SpectralModel, taus: Sequence[float], rel_tol: float = 1e-10) -> List[CorrelationSample]:
    """Sample C(tau) on a list of delays."""
    return [CorrelationSample(tau=float(tau), value=correlation(model, tau, rel_tol)) for tau in taus]


def spectral_weight(model: SpectralModel, rel_tol: float = 1e-10) -> float:
    """Total weight of S over the model's support."""
    if model.kind == SpectralKind.OHMIC_CUTOFF:
        return correlation(model, 0.0, rel_tol).real
    if model.kind == SpectralKind.ONE_OVER_F:
        if model.a1f == 0:
            return 0.0
        breaks = np.geomspace(model.ir_cut, model.uv_cut, 9)[1:-1]
        return integrate_adaptive(
            lambda w: model.a1f / w, model.ir_cut, model.uv_cut, rel_tol=rel_tol, points=breaks
        ).value
    if model.kind == SpectralKind.DELTA_MODE:
        return resonant_weight(model)[1]
    raise UnsupportedQueryError("white noise has unbounded total weight")


def gamma2_white(s0: float) -> float:
    """Dephasing rate Gamma_2 = pi S(0) for white low-frequency noise."""
    if not s0 >= 0:
        raise InvalidParameterError(f"s0 must be >= 0, got {s0}")
    return math.pi * s0


def gamma2_lowfreq(model: SpectralModel, rel_tol: float = 1e-10) -> float:
    """
    Gaussian dephasing width for strong low-frequency noise.

    The integral runs over the model's declared support [ir_cut, uv_cut].

    Args:
        model: one_over_f model

    Returns:
        sqrt of the integral of S(w') over the support
    """
    if model.kind != SpectralKind.ONE_OVER_F:
        raise UnsupportedQueryError(f"gamma2_lowfreq needs a one_over_f model, got {model.kind.value}")
    return math.sqrt(spectral_weight(model, rel_tol))


def polaron_shift(model: SpectralModel, t: float, rel_tol: float = 1e-8) -> float:
    """
    Polaron shift eps_p(t) = integral of (S(w')/w') (1 - cos w't) dw'.

    Args:
        model: one_over_f model
        t: Time in ns, >= 0

    Returns:
        eps_p(t) in rad/ns

    Raises:
        InvalidParameterError: If t is negative
        QuadratureError: If the quadrature does not converge
    """
    if model.kind != SpectralKind.ONE_OVER_F:
        raise UnsupportedQueryError(f"polaron_shift needs a one_over_f model, got {model.kind.value}")
    if not t >= 0:
        raise InvalidParameterError(f"t must be >= 0, got {t}")
    if t == 0 or model.a1f == 0:
        return 0.0

    a1f, ir, uv = model.a1f, model.ir_cut, model.uv_cut
    breaks = np.geomspace(ir, uv, 9)[1:-1]

    if uv * t <= POLARON_DIRECT_LIMIT:
        # 1 - cos(w t) = 2 sin^2(w t / 2) avoids cancellation at small t
        return integrate_adaptive(
            lambda w: 2.0 * a1f * math.sin(0.5 * w * t) ** 2 / w, ir, uv, rel_tol=rel_tol, points=breaks
        ).value

    static = integrate_adaptive(lambda w: a1f / w, ir, uv, rel_tol=rel_tol, points=breaks).value
    oscillating = integrate_adaptive(
        lambda w: a1f / w, ir, uv, rel_tol=rel_tol, abs_tol=rel_tol * static, weight="cos", wvar=t
    ).value
    return static - oscillating
