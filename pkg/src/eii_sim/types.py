"""Common type definitions for eii-simulator."""

from enum import Enum


class Direction(str, Enum):
    """Direction of an incoherent transition between the localized states."""
    DOWN = "1to0"
    UP = "0to1"


class Unit(str, Enum):
    """Units accepted at the input boundary."""
    GHZ_OVER_2PI = "GHz-over-2pi"
    RAD_PER_NS = "rad-per-ns"
    MILLIKELVIN = "mK"
    MICROSECOND = "microsecond"
    NANOSECOND = "ns"


class SpectralKind(str, Enum):
    """Families of bath spectral densities."""
    OHMIC_CUTOFF = "ohmic_cutoff"
    DELTA_MODE = "delta_mode"
    WHITE = "white"
    ONE_OVER_F = "one_over_f"


class LzsModel(str, Enum):
    """Line shape used for the tunneling-induced rates."""
    LORENTZIAN = "lorentzian"
    GAUSSIAN = "gaussian"
    OFF = "off"


class RelaxModel(str, Enum):
    """Relaxation channel."""
    OHMIC = "ohmic"
    DELTA = "delta"
    PHENOMENOLOGICAL = "phenomenological"
    OFF = "off"


class WeakChannel(str, Enum):
    """Rabi-induced couplings created by the weak tone."""
    OFF = "off"
    BOTH = "both"
    A_PRIME = "a_prime"
    B_PRIME = "b_prime"


class InitMode(str, Enum):
    """Initial population used by transient solutions."""
    TANH = "tanh"
    BOLTZMANN = "boltzmann"
    CUSTOM = "custom"
