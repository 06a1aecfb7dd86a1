"""
Scenario preset table shipped with the package.
"""

import functools
import logging
from importlib import resources

logger = logging.getLogger("eii-sim.resources.presets")

SCENARIOS_FILE = "scenarios.yaml"


@functools.lru_cache(maxsize=1)
def get_scenarios_yaml() -> str:
    """
    Get the scenario preset table, in caption units.

    Returns:
        YAML document as string

    Raises:
        FileNotFoundError: If the package data was not installed
    """
    resource = resources.files("eii_sim.resources").joinpath("yaml").joinpath(SCENARIOS_FILE)
    if not resource.is_file():
        raise FileNotFoundError(f"Preset table {SCENARIOS_FILE} is missing from the installed package")
    content = resource.read_text(encoding="utf-8")
    logger.debug(f"Loaded preset table ({len(content)} characters)")
    return content
