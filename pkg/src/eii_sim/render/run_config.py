"""Strict JSON run configurations."""

import json
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from ..sweep.scenarios import (
    ConfigError,
    UnitViolationError,
    UnknownKeyError,
    UnknownScenarioError,
    deep_merge,
    scenario,
    scenario_mapping,
    spec_from_mapping,
)
from ..sweep.types import SweepSpec

logger = logging.getLogger("eii-sim.render.run_config")

RUN_CONFIG_KEYS = ("scenario", "spec", "overrides", "output")
OUTPUT_KEYS = ("csv", "heatmap", "format", "colormap", "clamp")
HEATMAP_FORMATS = ("pgm", "png")
COLORMAPS = ("gray", "viridis")

__all__ = [
    "ConfigError",
    "ConfigParseError",
    "OutputSpec",
    "RunConfig",
    "UnitViolationError",
    "UnknownKeyError",
    "UnknownScenarioError",
    "parse_config",
]


class ConfigParseError(ConfigError):
    """Error raised when a run configuration is not well-formed JSON."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        location = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{location}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class OutputSpec:
    """Where and how a pattern is written."""
    csv: Optional[str] = None
    heatmap: Optional[str] = None
    format: str = "pgm"
    colormap: str = "gray"
    clamp: Tuple[float, float] = (0.0, 1.0)


@dataclass(frozen=True)
class RunConfig:
    """A resolved run: the sweep to evaluate and its outputs."""
    spec: SweepSpec
    output: OutputSpec
    scenario: Optional[str] = None


def _reject_constant(name: str) -> float:
    raise ConfigParseError(f"Non-standard JSON constant {name}")


def _unique_keys(pairs: List[Tuple[str, Any]]) -> Dict[str, Any]:
    document = {}
    for key, value in pairs:
        if key in document:
            raise ConfigParseError(f"Duplicate key {key!r}")
        document[key] = value
    return document


def _output(block: Dict[str, Any]) -> OutputSpec:
    if not isinstance(block, dict):
        raise ConfigError("output must be an object")
    if unknown := sorted(set(block) - set(OUTPUT_KEYS)):
        raise UnknownKeyError(f"Unknown output keys {unknown}; expected {', '.join(OUTPUT_KEYS)}")

    fmt = block.get("format", "pgm")
    if fmt not in HEATMAP_FORMATS:
        raise ConfigError(f"output.format must be one of {', '.join(HEATMAP_FORMATS)}, got {fmt!r}")
    colormap = block.get("colormap", "gray")
    if colormap not in COLORMAPS:
        raise ConfigError(f"output.colormap must be one of {', '.join(COLORMAPS)}, got {colormap!r}")
    if fmt == "pgm" and colormap != "gray":
        raise ConfigError("PGM output is grayscale; use format png for a colormap")

    clamp = block.get("clamp", [0.0, 1.0])
    if (
        not isinstance(clamp, list)
        or len(clamp) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in clamp)
        or not clamp[0] < clamp[1]
    ):
        raise ConfigError(f"output.clamp must be [low, high] with low < high, got {clamp!r}")

    for key in ("csv", "heatmap"):
        if key in block and not isinstance(block[key], str):
            raise ConfigError(f"output.{key} must be a path string")

    return OutputSpec(
        csv=block.get("csv"),
        heatmap=block.get("heatmap"),
        format=fmt,
        colormap=colormap,
        clamp=(float(clamp[0]), float(clamp[1])),
    )


def parse_config(text: str) -> RunConfig:
    """
    Parse a run configuration.

    The document holds either ``scenario`` (with optional ``overrides``) or a full ``spec``,
    both in caption units, plus an optional ``output`` block. A ``spec`` may name a preset in
    ``extends``.

    Args:
        text: UTF-8 JSON document

    Returns:
        RunConfig

    Raises:
        ConfigParseError: For malformed JSON, with line and column
        UnknownKeyError: For keys outside the schema
        UnitViolationError: For values in the wrong unit
        UnknownScenarioError: For an unknown scenario name
    """
    try:
        document = json.loads(text, parse_constant=_reject_constant, object_pairs_hook=_unique_keys)
    except json.JSONDecodeError as e:
        raise ConfigParseError(e.msg, e.lineno, e.colno) from e

    if not isinstance(document, dict):
        raise ConfigParseError("Top level must be a JSON object", 1, 1)
    if unknown := sorted(set(document) - set(RUN_CONFIG_KEYS)):
        raise UnknownKeyError(f"Unknown keys {unknown}; expected {', '.join(RUN_CONFIG_KEYS)}")
    if ("scenario" in document) == ("spec" in document):
        raise ConfigError("Exactly one of 'scenario' or 'spec' is required")

    output = _output(document.get("output", {}))

    if "scenario" in document:
        name = document["scenario"]
        if not isinstance(name, str):
            raise ConfigError("scenario must be a string")
        overrides = document.get("overrides", {})
        if not isinstance(overrides, dict):
            raise ConfigError("overrides must be an object")
        logger.debug(f"Resolving scenario {name} with overrides {overrides}")
        return RunConfig(spec=scenario(name, overrides), output=output, scenario=name)

    if "overrides" in document:
        raise ConfigError("'overrides' only applies to 'scenario'")
    mapping = document["spec"]
    if not isinstance(mapping, dict):
        raise ConfigError("spec must be an object")
    if parent := mapping.get("extends"):
        rest = {k: v for k, v in mapping.items() if k != "extends"}
        mapping = deep_merge(scenario_mapping(parent), rest)
    return RunConfig(spec=spec_from_mapping(mapping), output=output)
