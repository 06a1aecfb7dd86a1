"""Scenario presets and the caption-unit mapping format shared with run configurations."""

import copy
import functools
import logging
import math
from typing import Any, Dict, List, Optional, Tuple

from ..config import get_section_config
from ..params import BathParams, QubitParams, UnitValue, WeakField
from ..resources import presets
from ..types import InitMode, LzsModel, RelaxModel, Unit, WeakChannel
from ..utils.yaml_utils import parse_yaml
from .types import AxisSpec, NoiseSpec, SweepSpec

logger = logging.getLogger("eii-sim.sweep.scenarios")

DEFAULT_AXIS = (0.0, 10.0)

FREQUENCY_UNITS = (Unit.GHZ_OVER_2PI, Unit.RAD_PER_NS)
TEMPERATURE_UNITS = (Unit.MILLIKELVIN,)
TIME_UNITS = (Unit.MICROSECOND, Unit.NANOSECOND)

# Allowed keys per block; None marks a leaf
MAPPING_KEYS: Dict[str, Optional[Tuple[str, ...]]] = {
    "description": None,
    "extends": None,
    "qubit": ("delta_ghz", "gamma2_ghz"),
    "drive": ("omega_ghz",),
    "bath": ("phi2alpha", "omegac_ghz"),
    "temp_mk": None,
    "gamma01_ghz": None,
    "weak": ("omega_tilde_ghz", "amp_ratio"),
    "noise": ("a1f", "ir_cut_rad_per_ns", "uv_cut_rad_per_ns"),
    "channels": ("lzs", "relaxation", "weak_field"),
    "time": None,
    "init": ("mode", "p00"),
    "grid": ("eps", "amp"),
    "polaron_time_us": None,
    "match_tol_ghz": None,
    "cut": ("eps0_ghz",),
}


class ConfigError(Exception):
    """Error raised when a scenario or run configuration cannot be resolved."""
    pass


class UnknownKeyError(ConfigError):
    """Error raised for keys outside the configuration schema."""
    pass


class UnitViolationError(ConfigError):
    """Error raised when a value carries a unit its key does not accept."""
    pass


class UnknownScenarioError(ConfigError):
    """Error raised for a scenario name that is not in the preset table."""
    pass


def deep_merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """Recursively merge overrides into a copy of base; non-mapping values replace."""
    merged = copy.deepcopy(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def check_keys(mapping: Dict[str, Any], where: str = "") -> None:
    """
    Reject keys outside the mapping schema.

    Raises:
        UnknownKeyError: Naming the first offending key path
    """
    for key, value in mapping.items():
        path = f"{where}{key}"
        if key not in MAPPING_KEYS:
            raise UnknownKeyError(f"Unknown key {path!r}")
        allowed = MAPPING_KEYS[key]
        if allowed is None:
            continue
        if not isinstance(value, dict):
            raise ConfigError(f"{path} must be a mapping")
        for sub in value:
            if sub not in allowed:
                raise UnknownKeyError(f"Unknown key {path}.{sub!r}; expected one of {', '.join(allowed)}")


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise UnitViolationError(f"{path}: expected a plain number, got {value!r}")
    if not math.isfinite(value):
        raise UnitViolationError(f"{path}: expected a finite number, got {value!r}")
    return float(value)


def _quantity(value: Any, path: str, default_unit: Unit, allowed: Tuple[Unit, ...]) -> float:
    """Convert a bare number (in the key's caption unit) or a {magnitude, unit} object to internal units."""
    if isinstance(value, dict):
        if extra := set(value) - {"magnitude", "unit"}:
            raise UnknownKeyError(f"{path}: unknown keys {sorted(extra)} in unit value")
        try:
            unit = Unit(value["unit"])
        except (KeyError, ValueError):
            raise UnitViolationError(f"{path}: unit must be one of {', '.join(u.value for u in Unit)}")
        if unit not in allowed:
            raise UnitViolationError(
                f"{path}: unit {unit.value} not accepted; expected {', '.join(u.value for u in allowed)}"
            )
        return UnitValue(_number(value.get("magnitude"), f"{path}.magnitude"), unit).to_internal()
    return UnitValue(_number(value, path), default_unit).to_internal()


def _frequency(value: Any, path: str) -> float:
    return _quantity(value, path, Unit.GHZ_OVER_2PI, FREQUENCY_UNITS)


def _time(value: Any, path: str) -> float:
    return _quantity(value, path, Unit.MICROSECOND, TIME_UNITS)


def _required(block: Dict[str, Any], key: str, path: str) -> Any:
    if key not in block:
        raise ConfigError(f"{path}.{key} is required")
    return block[key]


def _choice(enum_type, value: Any, path: str):
    try:
        return enum_type(value)
    except ValueError:
        choices = ", ".join(e.value for e in enum_type)
        raise ConfigError(f"{path}: {value!r} is not one of {choices} (quote \"off\" in YAML)")


def _axis(value: Any, path: str) -> AxisSpec:
    if not isinstance(value, list) or len(value) != 3:
        raise ConfigError(f"{path} must be [min, max, count] in GHz over 2pi")
    lo, hi, count = value
    if isinstance(count, bool) or not isinstance(count, int):
        raise ConfigError(f"{path}: count must be an integer, got {count!r}")
    return AxisSpec(min=_number(lo, f"{path}[0]"), max=_number(hi, f"{path}[1]"), count=count)


def spec_from_mapping(mapping: Dict[str, Any], name: str = "custom") -> SweepSpec:
    """
    Build a SweepSpec from a caption-unit mapping.

    Args:
        mapping: Resolved mapping (no ``extends``)
        name: Name recorded in the spec

    Returns:
        SweepSpec in internal units

    Raises:
        UnknownKeyError: For keys outside the schema
        UnitViolationError: For values in the wrong unit
        ConfigError: For missing or malformed blocks
    """
    check_keys(mapping)

    qubit_block = mapping.get("qubit", {})
    qubit = QubitParams(
        delta=_frequency(qubit_block.get("delta_ghz", 0.0), "qubit.delta_ghz"),
        eps0=0.0,
        gamma2=_frequency(qubit_block.get("gamma2_ghz", 0.0), "qubit.gamma2_ghz"),
    )
    omega = _frequency(_required(mapping.get("drive", {}), "omega_ghz", "drive"), "drive.omega_ghz")
    temperature = _quantity(mapping.get("temp_mk", 0.0), "temp_mk", Unit.MILLIKELVIN, TEMPERATURE_UNITS)

    bath = None
    if "bath" in mapping:
        block = mapping["bath"]
        bath = BathParams(
            alpha=_number(_required(block, "phi2alpha", "bath"), "bath.phi2alpha"),
            phi=1.0,
            omega_c=_frequency(_required(block, "omegac_ghz", "bath"), "bath.omegac_ghz"),
            temperature=temperature,
        )

    weak = None
    if "weak" in mapping:
        block = mapping["weak"]
        omega_tilde = _frequency(_required(block, "omega_tilde_ghz", "weak"), "weak.omega_tilde_ghz")
        ratio = _number(_required(block, "amp_ratio", "weak"), "weak.amp_ratio")
        weak = WeakField(amp_tilde=ratio * omega_tilde, omega_tilde=omega_tilde)

    noise = None
    if "noise" in mapping:
        block = mapping["noise"]
        cuts = {
            key: _number(block[f"{key}_rad_per_ns"], f"noise.{key}_rad_per_ns")
            for key in ("ir_cut", "uv_cut")
            if f"{key}_rad_per_ns" in block
        }
        noise = NoiseSpec(a1f=_number(_required(block, "a1f", "noise"), "noise.a1f"), **cuts)

    channels = mapping.get("channels", {})
    lzs = _choice(LzsModel, channels.get("lzs", "off"), "channels.lzs")
    relaxation = _choice(RelaxModel, channels.get("relaxation", "off"), "channels.relaxation")
    weak_field = _choice(WeakChannel, channels.get("weak_field", "off"), "channels.weak_field")

    time_block = mapping.get("time", "stationary")
    if time_block == "stationary":
        transient_ns = None
    elif isinstance(time_block, dict) and set(time_block) == {"transient_us"}:
        transient_ns = _time(time_block["transient_us"], "time.transient_us")
    else:
        raise ConfigError("time must be \"stationary\" or {transient_us: t}")

    init_block = mapping.get("init", {})
    init = _choice(InitMode, init_block.get("mode", "tanh"), "init.mode")
    init_p00 = _number(init_block["p00"], "init.p00") if "p00" in init_block else None

    count = get_section_config("sweep")["grid_count"]
    grid = mapping.get("grid", {})
    eps_axis = _axis(grid.get("eps", [*DEFAULT_AXIS, count]), "grid.eps")
    amp_axis = _axis(grid.get("amp", [*DEFAULT_AXIS, count]), "grid.amp")

    gamma01 = _frequency(mapping["gamma01_ghz"], "gamma01_ghz") if "gamma01_ghz" in mapping else None
    polaron_time = _time(mapping["polaron_time_us"], "polaron_time_us") if "polaron_time_us" in mapping else None
    match_tol = _frequency(mapping["match_tol_ghz"], "match_tol_ghz") if "match_tol_ghz" in mapping else None

    return SweepSpec(
        eps_axis=eps_axis,
        amp_axis=amp_axis,
        qubit=qubit,
        omega=omega,
        lzs=lzs,
        relaxation=relaxation,
        weak_field=weak_field,
        transient_ns=transient_ns,
        temperature=temperature,
        bath=bath,
        weak=weak,
        gamma01=gamma01,
        noise=noise,
        init=init,
        init_p00=init_p00,
        polaron_time_ns=polaron_time,
        match_tol=match_tol,
        name=name,
        description=str(mapping.get("description", "")),
    )


@functools.lru_cache(maxsize=1)
def _preset_table() -> Dict[str, Dict[str, Any]]:
    return parse_yaml(presets.get_scenarios_yaml())


def resolve_preset(name: str, _seen: Tuple[str, ...] = ()) -> Dict[str, Any]:
    """
    Flatten a preset and its ``extends`` chain into one mapping.

    Raises:
        UnknownScenarioError: For an unknown name
        ConfigError: For a cyclic chain
    """
    table = _preset_table()
    if name not in table:
        raise UnknownScenarioError(f"Unknown scenario {name!r}; available: {', '.join(sorted(table))}")
    if name in _seen:
        raise ConfigError(f"Cyclic extends chain: {' -> '.join(_seen + (name,))}")

    entry = copy.deepcopy(table[name])
    parent = entry.pop("extends", None)
    if parent is None:
        return entry
    base = resolve_preset(parent, _seen + (name,))
    base.pop("cut", None)
    return deep_merge(base, entry)


def list_scenarios() -> List[str]:
    """Names of grid presets."""
    return sorted(name for name in _preset_table() if "cut" not in resolve_preset(name))


def list_traces() -> List[str]:
    """Names of amplitude-cut presets."""
    return sorted(name for name in _preset_table() if "cut" in resolve_preset(name))


def scenario_mapping(name: str, overrides: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Resolved preset mapping with optional overrides merged on top."""
    mapping = resolve_preset(name)
    if overrides:
        check_keys(overrides)
        mapping = deep_merge(mapping, overrides)
    return mapping


def scenario(name: str, overrides: Optional[Dict[str, Any]] = None) -> SweepSpec:
    """
    SweepSpec for a named preset.

    Args:
        name: Preset name, e.g. fig3a or fig7c
        overrides: Caption-unit mapping merged over the preset

    Returns:
        SweepSpec

    Raises:
        UnknownScenarioError: For an unknown name
    """
    return spec_from_mapping(scenario_mapping(name, overrides), name=name)


def trace(name: str, overrides: Optional[Dict[str, Any]] = None) -> Tuple[SweepSpec, float]:
    """
    SweepSpec and detuning (GHz over 2pi) of an amplitude-cut preset.

    Raises:
        UnknownScenarioError: If the name is unknown or is not a trace
    """
    mapping = scenario_mapping(name, overrides)
    if "cut" not in mapping:
        raise UnknownScenarioError(f"Scenario {name!r} is not an amplitude trace")
    eps0 = _number(_required(mapping["cut"], "eps0_ghz", "cut"), "cut.eps0_ghz")
    return spec_from_mapping(mapping, name=name), eps0
