"""YAML utilities for eii-simulator."""

import logging
from typing import Any, Dict

import yaml

logger = logging.getLogger("eii-sim.utils.yaml_utils")


class PresetParseError(Exception):
    """Error raised when parsing a preset file fails."""
    pass


def parse_yaml(content: str | bytes) -> Dict[str, Any]:
    """
    Parse a YAML string or bytes into a dictionary.

    Args:
        content: YAML content (string or bytes)

    Returns:
        Dictionary representation of the YAML content

    Raises:
        PresetParseError: If YAML is invalid or does not hold a mapping
    """
    try:
        presets = yaml.safe_load(content)
    except yaml.YAMLError as e:
        raise PresetParseError(f"Error parsing YAML: {str(e)}")

    if not isinstance(presets, dict):
        raise PresetParseError("YAML content does not represent a dictionary")

    for name, entry in presets.items():
        if not isinstance(entry, dict):
            raise PresetParseError(f"Preset {name!r} is not a mapping")
        if "description" not in entry:
            logger.warning(f"Preset {name!r} has no description")

    return presets
