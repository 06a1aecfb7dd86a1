"""Simple environment variable-based configuration."""

import logging
import os
from typing import Any, Dict, Literal

logger = logging.getLogger("eii-sim.config")

# Configuration sections
SectionName = Literal["sweep", "rates", "spectral", "oracle"]

# Environment variables and their defaults
ENV_DEFAULTS = {
    "sweep": {
        "EII_WORKERS": "",  # Empty means all cores
        "EII_GRID_COUNT": "401",
        "EII_OUTPUT_DIR": ".",
    },
    "rates": {
        "EII_MATCH_TOL_FRACTION": "1e-3",  # Delta-mode resonance tolerance as a fraction of the drive frequency
    },
    "spectral": {
        "EII_ONE_OVER_F_IR_CUT": "1e-3",  # rad/ns
        "EII_ONE_OVER_F_UV_CUT": "10",  # rad/ns
    },
    "oracle": {
        "EII_ORACLE_TAU_MAX_NS": "1e4",
    },
}


def _env(section: str, name: str) -> str:
    return os.getenv(name, ENV_DEFAULTS[section][name])


def _positive_float(section: str, name: str) -> float:
    raw = _env(section, name)
    try:
        value = float(raw)
    except ValueError:
        logger.warning(f"Ignoring non-numeric {name}={raw!r}, using default")
        value = float(ENV_DEFAULTS[section][name])
    if not value > 0:
        logger.warning(f"Ignoring non-positive {name}={raw!r}, using default")
        value = float(ENV_DEFAULTS[section][name])
    return value


def get_worker_count() -> int:
    """
    Get the number of sweep workers.

    Returns:
        Worker count from EII_WORKERS, or the number of CPU cores when unset
    """
    raw = _env("sweep", "EII_WORKERS").strip()
    if raw:
        try:
            workers = int(raw)
            if workers >= 1:
                return workers
        except ValueError:
            pass
        logger.warning(f"Ignoring invalid EII_WORKERS={raw!r}, using all cores")
    return os.cpu_count() or 1


def get_config() -> Dict[str, Any]:
    """
    Get configuration based on environment variables.

    Returns:
        Dictionary with configuration
    """
    config = {}

    config["sweep"] = {
        "workers": get_worker_count(),
        "grid_count": int(_positive_float("sweep", "EII_GRID_COUNT")),
        "output_dir": _env("sweep", "EII_OUTPUT_DIR"),
    }

    config["rates"] = {
        "match_tol_fraction": _positive_float("rates", "EII_MATCH_TOL_FRACTION"),
    }

    config["spectral"] = {
        "ir_cut": _positive_float("spectral", "EII_ONE_OVER_F_IR_CUT"),
        "uv_cut": _positive_float("spectral", "EII_ONE_OVER_F_UV_CUT"),
    }

    config["oracle"] = {
        "tau_max_ns": _positive_float("oracle", "EII_ORACLE_TAU_MAX_NS"),
    }

    return config


def get_section_config(section: SectionName) -> Dict[str, Any]:
    """
    Get configuration for a specific section.

    Args:
        section: Name of the section ("sweep", "rates", "spectral" or "oracle")

    Returns:
        Dictionary of configuration for the section
    """
    return get_config().get(section, {})
