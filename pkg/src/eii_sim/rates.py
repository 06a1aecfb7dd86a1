"""Closed-form incoherent transition rates and the resonance predictor.

Every Bessel sum runs over the sidebands n = -n_max..n_max with weights J_n(A/w)^2,
where n_max comes from ``truncation_order``. The displayed Lorentzian uses (eps0 + n w);
since n covers both signs this is the same sum as the (eps0 - n w) form.
"""

import functools
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .config import get_section_config
from .params import BathParams, DriveField, InvalidParameterError, QubitParams, WeakField, require_valid
from .specfun import bessel_j, bessel_row
from .spectral import SpectralModel, gamma2_lowfreq, ohmic_density, polaron_shift, resonant_weight
from .types import Direction, SpectralKind, WeakChannel

logger = logging.getLogger("eii-sim.rates")

# Weak tone frequency ratio below which the Rabi-induced rates are flagged
ROII_FREQUENCY_RATIO = 5.0


class AmbiguousResonanceError(Exception):
    """Error raised when two sidebands match a delta-mode resonance within tolerance."""
    pass


@dataclass(frozen=True)
class RateSet:
    """The four incoherent rates at one operating point (1/ns)."""
    w10: float
    w01: float
    g10: float
    g01: float
    n_max: int = 0

    @property
    def total(self) -> float:
        return self.w10 + self.w01 + self.g10 + self.g01

    def combine(self, other: "RateSet") -> "RateSet":
        """Rates of two independent channels add."""
        return RateSet(
            w10=self.w10 + other.w10,
            w01=self.w01 + other.w01,
            g10=self.g10 + other.g10,
            g01=self.g01 + other.g01,
            n_max=max(self.n_max, other.n_max),
        )

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class RiiMode:
    """Resonances created by a bath mode at omega_c."""
    omega_c: float


@dataclass(frozen=True)
class RoiiMode:
    """Resonances created by a weak tone at omega_tilde."""
    omega_tilde: float


@dataclass(frozen=True)
class ResonanceReport:
    """Phases per period and resonant detunings inside a window (rad/ns)."""
    theta_a: float
    theta_b: float
    resonant_detunings_from_1to0: List[float]
    resonant_detunings_from_0to1: List[float]
    n_range: Tuple[int, int]
    branches: Dict[str, List[Tuple[int, float]]] = field(default_factory=dict)


def truncation_order(amp: float, omega: float) -> int:
    """
    Number of sidebands kept on each side of a Bessel sum.

    Args:
        amp: Drive amplitude (rad/ns)
        omega: Drive frequency (rad/ns), > 0

    Returns:
        ceil(A/w) + max(20, ceil(5 (A/w)^(1/3)))
    """
    if not omega > 0:
        raise InvalidParameterError(f"omega must be > 0, got {omega}")
    ratio = abs(amp) / omega
    return math.ceil(ratio) + max(20, math.ceil(5.0 * ratio ** (1.0 / 3.0)))


@functools.lru_cache(maxsize=2048)
def sidebands(amp: float, omega: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Sideband orders and weights J_n(A/w)^2 for a drive.

    Returns:
        (orders, weights) as read-only arrays
    """
    row = bessel_row(amp / omega, truncation_order(amp, omega))
    weights = row.values**2
    weights.setflags(write=False)
    return row.orders, weights


def _signed_detuning(eps0: float, direction: Direction) -> float:
    return eps0 if Direction(direction) == Direction.DOWN else -eps0


def _lorentzian_sum(eps: float, orders: np.ndarray, weights: np.ndarray, omega: float, gamma2: float) -> float:
    return float(np.sum(gamma2 * weights / ((eps + orders * omega) ** 2 + gamma2**2)))


def _require_gamma2(q: QubitParams) -> None:
    require_valid(q)
    if not q.gamma2 > 0:
        raise InvalidParameterError(f"gamma2 must be > 0 for Lorentzian rates, got {q.gamma2}")


def w_rate_lorentzian(q: QubitParams, d: DriveField, direction: Direction = Direction.DOWN) -> float:
    """
    Landau-Zener-Stueckelberg rate with white dephasing.

    W_10 = (D^2/2) sum_n G2 J_n^2(A/w) / ((eps0 + n w)^2 + G2^2), and W_01(eps0) = W_10(-eps0).

    Args:
        q: Qubit parameters, gamma2 > 0
        d: Drive field
        direction: DOWN for 1->0, UP for 0->1

    Returns:
        Rate in 1/ns

    Raises:
        InvalidParameterError: If parameters are invalid
    """
    _require_gamma2(q)
    require_valid(d)
    orders, weights = sidebands(d.amp, d.omega)
    eps = _signed_detuning(q.eps0, direction)
    return 0.5 * q.delta**2 * _lorentzian_sum(eps, orders, weights, d.omega, q.gamma2)


@functools.lru_cache(maxsize=256)
def lowfreq_constants(model: SpectralModel, t: float) -> Tuple[float, float]:
    """(Gamma_2, eps_p(t)) of a 1/f model."""
    return gamma2_lowfreq(model), polaron_shift(model, t)


def w_rate_gaussian(
    q: QubitParams, d: DriveField, model: SpectralModel, t: float, direction: Direction = Direction.DOWN
) -> float:
    """
    Tunneling rate under strong 1/f noise.

    sqrt(pi/8) (D^2/G2) sum_n J_n^2(A/w) exp(-(eps0 + n w + eps_p(t))^2 / (2 G2^2)), with G2 taken
    from the noise model rather than from q. The 0->1 direction uses eps0 -> -eps0.

    Args:
        q: Qubit parameters (gamma2 unused)
        d: Drive field
        model: one_over_f spectral model
        t: Time at which the polaron shift is evaluated (ns)
        direction: DOWN for 1->0, UP for 0->1

    Returns:
        Rate in 1/ns
    """
    require_valid(q, d)
    gamma2, shift = lowfreq_constants(model, t)
    if not gamma2 > 0:
        raise InvalidParameterError("1/f noise model gives gamma2 = 0")
    orders, weights = sidebands(d.amp, d.omega)
    eps = _signed_detuning(q.eps0, direction)
    exponent = -((eps + orders * d.omega + shift) ** 2) / (2.0 * gamma2**2)
    return math.sqrt(math.pi / 8.0) * q.delta**2 / gamma2 * float(np.sum(weights * np.exp(exponent)))


def relax_rates_ohmic(b: BathParams, d: DriveField, eps0: float) -> Tuple[float, float]:
    """
    Relaxation-induced rates for an Ohmic bath under strong driving.

    G_01 = (phi^2/4) sum_n J_n^2(A/w) S(eps0 - n w) and G_10(eps0) = G_01(-eps0). Each summand at
    eps0 - n w = 0 takes the analytic limit alpha T.

    Args:
        b: Bath parameters
        d: Drive field
        eps0: Static detuning (rad/ns)

    Returns:
        (g10, g01) in 1/ns
    """
    require_valid(b, d)
    if not math.isfinite(eps0):
        raise InvalidParameterError(f"eps0 must be finite, got {eps0}")
    orders, weights = sidebands(d.amp, d.omega)
    prefactor = b.phi**2 / 4.0
    spectrum = (b.alpha, b.omega_c, b.temperature)
    g01 = prefactor * float(np.sum(weights * ohmic_density(eps0 - orders * d.omega, *spectrum)))
    g10 = prefactor * float(np.sum(weights * ohmic_density(-eps0 - orders * d.omega, *spectrum)))
    return g10, g01


def _matching_order(offset: float, omega: float, n_max: int, match_tol: float) -> Optional[int]:
    centre = round(offset / omega)
    matches = [n for n in (centre - 1, centre, centre + 1) if abs(n) <= n_max and abs(offset - n * omega) <= match_tol]
    if len(matches) > 1:
        raise AmbiguousResonanceError(f"Sidebands {matches} all match within tolerance {match_tol}")
    return matches[0] if matches else None


def relax_rates_delta(
    b: BathParams, d: DriveField, eps0: float, match_tol: Optional[float] = None
) -> Tuple[float, float]:
    """
    Relaxation-induced rates for a single bath mode at omega_c.

    G_01 = (phi^2 alpha w_c / 4) J_n^2(A/w) when |eps0 - w_c - n w| <= match_tol, G_10 likewise with
    eps0 + w_c - n w; zero off resonance.

    Args:
        b: Bath parameters
        d: Drive field
        eps0: Static detuning (rad/ns)
        match_tol: Resonance tolerance (rad/ns); defaults to a configured fraction of omega

    Returns:
        (g10, g01) in 1/ns

    Raises:
        AmbiguousResonanceError: If two sidebands match within the tolerance
    """
    require_valid(b, d)
    if match_tol is None:
        match_tol = get_section_config("rates")["match_tol_fraction"] * d.omega
    if not match_tol > 0:
        raise InvalidParameterError(f"match_tol must be > 0, got {match_tol}")

    mode_frequency, mode_weight = resonant_weight(SpectralModel(kind=SpectralKind.DELTA_MODE, bath=b))
    n_max = truncation_order(d.amp, d.omega)
    prefactor = b.phi**2 * mode_weight / 4.0
    x = d.amp / d.omega

    rates = []
    for offset in (eps0 + mode_frequency, eps0 - mode_frequency):
        n = _matching_order(offset, d.omega, n_max, match_tol)
        rates.append(0.0 if n is None else prefactor * bessel_j(n, x) ** 2)
    return rates[0], rates[1]


def relax_rates_phenomenological(gamma01: float, eps0: float, temperature: float) -> Tuple[float, float]:
    """
    Constant upward rate with a detailed-balance downward rate.

    Returns:
        (gamma01 * exp(-eps0/T), gamma01)
    """
    if not gamma01 >= 0:
        raise InvalidParameterError(f"gamma01 must be >= 0, got {gamma01}")
    if not temperature > 0:
        raise InvalidParameterError(f"temperature must be > 0, got {temperature}")
    try:
        g10 = gamma01 * math.exp(-eps0 / temperature)
    except OverflowError:
        g10 = math.inf
    if not math.isfinite(g10):
        raise InvalidParameterError(f"exp(-eps0/T) overflows for eps0={eps0}, T={temperature}")
    return g10, gamma01


def roii_rates(
    q: QubitParams,
    d: DriveField,
    wf: WeakField,
    which: WeakChannel = WeakChannel.BOTH,
    check_regime: bool = True,
) -> float:
    """
    Rabi-oscillation-induced rate, identical in both directions.

    The weak tone splits the primary coupling into two couplings at eps0 = +/- w~ of strength
    D J_1(A~/w~). ``a_prime`` keeps the (eps0 + n w - w~) Lorentzians, ``b_prime`` the
    (eps0 + n w + w~) ones, and ``both`` is their sum.

    Args:
        q: Qubit parameters, gamma2 > 0
        d: Strong drive
        wf: Weak tone
        which: Coupling(s) to include
        check_regime: Log a warning when w~ < 5 w

    Returns:
        Rate in 1/ns
    """
    _require_gamma2(q)
    require_valid(d, wf)
    which = WeakChannel(which)
    if which == WeakChannel.OFF:
        return 0.0
    if check_regime and wf.omega_tilde < ROII_FREQUENCY_RATIO * d.omega:
        logger.warning(
            f"Weak tone frequency {wf.omega_tilde:.4g} is below {ROII_FREQUENCY_RATIO:g} x drive frequency "
            f"{d.omega:.4g}; the Rabi-induced rates assume w~ >> w"
        )
    if which == WeakChannel.BOTH:
        return roii_rates(q, d, wf, WeakChannel.A_PRIME, False) + roii_rates(q, d, wf, WeakChannel.B_PRIME, False)

    orders, weights = sidebands(d.amp, d.omega)
    shift = -wf.omega_tilde if which == WeakChannel.A_PRIME else wf.omega_tilde
    coupling = 0.5 * q.delta**2 * bessel_j(1, wf.amp_tilde / wf.omega_tilde) ** 2
    return coupling * _lorentzian_sum(q.eps0 + shift, orders, weights, d.omega, q.gamma2)


def _branch(omega: float, offset: float, lo: float, hi: float, n_min: int) -> List[Tuple[int, float]]:
    first = max(n_min, math.floor((lo - offset) / omega) - 1)
    last = math.ceil((hi - offset) / omega) + 1
    branch = []
    for n in range(first, last + 1):
        value = n * omega + offset
        if lo <= value <= hi:
            branch.append((n, value))
    return branch


def resonance_report(
    d: DriveField, mode: Union[RiiMode, RoiiMode], eps_window: Tuple[float, float], n_min: int = 0
) -> ResonanceReport:
    """
    Phase accumulation and resonance positions inside a detuning window.

    In RII mode the 1->0 resonances sit at n w - w_c and the 0->1 ones at n w + w_c. In ROII mode
    the rates are direction-symmetric, so both lists hold the union of n w - w~ and n w + w~.

    Args:
        d: Drive field
        mode: RiiMode(omega_c) or RoiiMode(omega_tilde)
        eps_window: (low, high) detuning window in rad/ns
        n_min: Smallest photon number listed

    Returns:
        ResonanceReport with theta_a, theta_b evaluated at the window midpoint
    """
    lo, hi = eps_window
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
        raise InvalidParameterError(f"Invalid detuning window: {eps_window}")
    if not d.omega > 0:
        raise InvalidParameterError(f"omega must be > 0, got {d.omega}")

    shift = mode.omega_c if isinstance(mode, RiiMode) else mode.omega_tilde
    midpoint = 0.5 * (lo + hi)
    theta_a = 2.0 * math.pi * (midpoint + shift) / d.omega
    theta_b = 2.0 * math.pi * (-midpoint + shift) / d.omega

    minus = _branch(d.omega, -shift, lo, hi, n_min)
    plus = _branch(d.omega, shift, lo, hi, n_min)
    orders = [n for n, _ in minus + plus]
    n_range = (min(orders), max(orders)) if orders else (n_min, n_min)

    if isinstance(mode, RiiMode):
        return ResonanceReport(
            theta_a=theta_a,
            theta_b=theta_b,
            resonant_detunings_from_1to0=[v for _, v in minus],
            resonant_detunings_from_0to1=[v for _, v in plus],
            n_range=n_range,
            branches={"n_omega_minus_omega_c": minus, "n_omega_plus_omega_c": plus},
        )

    union = sorted(v for _, v in minus + plus)
    return ResonanceReport(
        theta_a=theta_a,
        theta_b=theta_b,
        resonant_detunings_from_1to0=union,
        resonant_detunings_from_0to1=list(union),
        n_range=n_range,
        branches={"n_omega_minus_omega_tilde": minus, "n_omega_plus_omega_tilde": plus},
    )
