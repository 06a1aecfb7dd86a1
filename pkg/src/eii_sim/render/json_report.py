"""Stable JSON rendering for reports printed by the CLI and the MCP server."""

import dataclasses
import json
import math
from enum import Enum
from typing import Any

import numpy as np


def to_plain(value: Any) -> Any:
    """Convert dataclasses, enums, tuples and numpy scalars into JSON-ready values."""
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_plain(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [to_plain(v) for v in value]
    if isinstance(value, np.generic):
        return to_plain(value.item())
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def dumps(value: Any) -> str:
    """Serialise with sorted keys and two-space indentation."""
    return json.dumps(to_plain(value), sort_keys=True, indent=2)
