"""Sweep specification and result grid."""

import math
from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..params import BathParams, QubitParams, WeakField, validate
from ..spectral import SpectralModel
from ..types import InitMode, LzsModel, RelaxModel, WeakChannel


@dataclass(frozen=True)
class AxisSpec:
    """Uniform axis in caption units (GHz over 2pi)."""
    min: float
    max: float
    count: int

    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.count)

    @property
    def step(self) -> float:
        return (self.max - self.min) / (self.count - 1)


@dataclass(frozen=True)
class NoiseSpec:
    """1/f noise feeding the Gaussian tunneling rate (rad/ns)."""
    a1f: float
    ir_cut: Optional[float] = None
    uv_cut: Optional[float] = None

    def model(self) -> SpectralModel:
        return SpectralModel.one_over_f(self.a1f, self.ir_cut, self.uv_cut)


@dataclass(frozen=True)
class SweepSpec:
    """
    A full epsilon_0 x A sweep.

    Axes are in caption units; every physical parameter is in internal units (rad/ns, ns).
    The qubit's eps0 is ignored, each cell supplies its own.
    """
    eps_axis: AxisSpec
    amp_axis: AxisSpec
    qubit: QubitParams
    omega: float
    lzs: LzsModel = LzsModel.OFF
    relaxation: RelaxModel = RelaxModel.OFF
    weak_field: WeakChannel = WeakChannel.OFF
    transient_ns: Optional[float] = None
    temperature: float = 0.0
    bath: Optional[BathParams] = None
    weak: Optional[WeakField] = None
    gamma01: Optional[float] = None
    noise: Optional[NoiseSpec] = None
    init: InitMode = InitMode.TANH
    init_p00: Optional[float] = None
    polaron_time_ns: Optional[float] = None
    match_tol: Optional[float] = None
    name: str = "custom"
    description: str = ""

    @property
    def stationary(self) -> bool:
        return self.transient_ns is None

    @property
    def polaron_time(self) -> float:
        """Time at which the polaron shift is evaluated (ns)."""
        if self.polaron_time_ns is not None:
            return self.polaron_time_ns
        return self.transient_ns or 0.0

    def validate(self) -> List[str]:
        """
        Check the spec before any cell is evaluated.

        Returns:
            List of violations; empty when the spec can be evaluated
        """
        report = []
        for label, axis in (("eps_axis", self.eps_axis), ("amp_axis", self.amp_axis)):
            if axis.count < 2:
                report.append(f"{label}.count >= 2")
            if not (math.isfinite(axis.min) and math.isfinite(axis.max)) or not axis.min < axis.max:
                report.append(f"{label}.min < {label}.max")
        if qubit_violations := validate(self.qubit):
            report.extend(f"qubit: {v}" for v in qubit_violations)
        if not math.isfinite(self.omega) or not self.omega > 0:
            report.append("omega > 0")
        if self.amp_axis.min < 0:
            report.append("amp_axis.min >= 0")
        if not self.temperature >= 0:
            report.append("temperature >= 0")

        if (self.lzs, self.relaxation, self.weak_field) == (LzsModel.OFF, RelaxModel.OFF, WeakChannel.OFF):
            report.append("at least one rate channel must be enabled")
        if self.lzs == LzsModel.LORENTZIAN and not self.qubit.gamma2 > 0:
            report.append("lorentzian tunneling needs gamma2 > 0")
        if self.lzs == LzsModel.GAUSSIAN and self.noise is None:
            report.append("gaussian tunneling needs a noise block")
        if self.weak_field != WeakChannel.OFF:
            if self.weak is None:
                report.append("weak_field needs a weak tone")
            else:
                report.extend(f"weak: {v}" for v in validate(self.weak))
            if not self.qubit.gamma2 > 0:
                report.append("weak-field rates need gamma2 > 0")
        if self.relaxation in (RelaxModel.OHMIC, RelaxModel.DELTA):
            if self.bath is None:
                report.append(f"{self.relaxation.value} relaxation needs a bath")
            else:
                report.extend(f"bath: {v}" for v in validate(self.bath))
                if self.bath.temperature != self.temperature:
                    report.append("bath temperature must equal the sweep temperature")
        if self.relaxation == RelaxModel.PHENOMENOLOGICAL:
            if self.gamma01 is None or not self.gamma01 >= 0:
                report.append("phenomenological relaxation needs gamma01 >= 0")
            if not self.temperature > 0:
                report.append("phenomenological relaxation needs temperature > 0")
        if self.transient_ns is not None and not self.transient_ns >= 0:
            report.append("transient time >= 0")
        if self.init == InitMode.CUSTOM and (self.init_p00 is None or not 0.0 <= self.init_p00 <= 1.0):
            report.append("custom init needs init_p00 in [0, 1]")
        return report

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready echo of the spec; enums become their values."""
        return {f.name: _plain(getattr(self, f.name)) for f in fields(self)}


def _plain(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if hasattr(value, "__dataclass_fields__"):
        return {f.name: _plain(getattr(value, f.name)) for f in fields(value)}
    return value


@dataclass(frozen=True)
class CellFailure:
    """A grid cell that could not be evaluated."""
    i_eps: int
    i_amp: int
    reason: str


@dataclass
class PatternGrid:
    """p00 over the sweep grid, indexed [i_eps][i_amp], with provenance."""
    eps_values: np.ndarray
    amp_values: np.ndarray
    p00: np.ndarray
    provenance: Dict[str, Any] = field(default_factory=dict)
    failures: List[CellFailure] = field(default_factory=list)
    clamp_events: int = 0

    @property
    def shape(self) -> Tuple[int, int]:
        return self.p00.shape

    def inverted_fraction(self) -> float:
        """Fraction of finite cells at eps0 > 0 whose p00 exceeds 1/2."""
        upper = self.p00[self.eps_values > 0]
        finite = upper[np.isfinite(upper)]
        if finite.size == 0:
            return 0.0
        return float(np.count_nonzero(finite > 0.5)) / finite.size

    def summary(self) -> Dict[str, Any]:
        finite = self.p00[np.isfinite(self.p00)]
        return {
            "min_p00": float(finite.min()) if finite.size else None,
            "max_p00": float(finite.max()) if finite.size else None,
            "inverted_fraction": self.inverted_fraction(),
            "nan_cells": len(self.failures),
            "clamp_events": self.clamp_events,
        }
