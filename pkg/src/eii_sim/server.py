import dataclasses
import logging
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv
from mcp.server import FastMCP

from .params import DriveField, freq_from_caption
from .simulation_manager import DEFAULT_ORACLE_TOLERANCE, SimulationManager
from .sweep.scenarios import scenario
from .sweep.types import AxisSpec
from .types import Direction

load_dotenv()

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger("eii-sim")

app = FastMCP("eii-sim")

# Prompts
@app.prompt(name="Units and Conventions")
def units_prompt() -> str:
    return """
You are now connected to the EII simulator through the Model Context Protocol (MCP).

It computes transition rates and occupation patterns of a strongly driven flux qubit.

1. UNITS
 - Every frequency, detuning and amplitude argument is X/2pi in GHz ("GHz over 2pi")
 - Temperatures are in mK, times in microseconds
 - Returned rates are in 1/ns (angular units, no 2pi removed)

2. SCENARIOS
 - Every tool that needs qubit, bath or weak-tone parameters takes a scenario name
 - Call scenarios_list first; fig4a is a good default for tunneling and ohmic relaxation
 - Overrides use the scenario schema, e.g. {"bath": {"omegac_ghz": 6}}

3. POPULATIONS
 - p00 is the occupation of the state that lies higher for positive detuning
 - p00 > 0.5 at positive detuning means population inversion

Available tools:
- scenarios_list - Lists presets with their descriptions
- rates_compute - All enabled rates at one point
- resonances_report - Resonance positions for a bath mode or a weak tone
- pattern_summary - Evaluates a coarse sweep and returns its summary
- oracle_check - Compares a closed-form rate against a brute-force oracle
    """

# Resources
@app.resource("eii-ref://scenarios", name="Scenario Presets")
async def scenarios_resource() -> str:
    """The preset table in YAML, caption units"""
    logger.debug("Fetching scenario presets")
    return SimulationManager.get_presets_yaml()

# Tools
@app.tool("scenarios_list")
async def scenarios_list() -> List[Dict[str, str]]:
    """Lists all scenario presets with their kind (grid or trace) and description."""
    return SimulationManager.list_presets()

@app.tool("rates_compute")
async def rates_compute(
    eps0_ghz: float,
    amp_ghz: float,
    scenario_name: str = "fig4a",
    overrides: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    """
    Compute the enabled rates of a scenario at one point.

    Args:
        eps0_ghz: Static detuning eps0/2pi in GHz
        amp_ghz: Drive amplitude A/2pi in GHz
        scenario_name: Preset supplying qubit, drive, bath and channel selection
        overrides: Optional scenario overrides

    Returns:
        Parameter echo, rates w10, w01, g10, g01 in 1/ns and the Bessel truncation order
    """
    spec = scenario(scenario_name, overrides)
    return SimulationManager.rates(spec, freq_from_caption(eps0_ghz), freq_from_caption(amp_ghz))

@app.tool("resonances_report")
async def resonances_report(
    omega_ghz: float,
    frequency_ghz: float,
    mode: str = "rii",
    eps_min_ghz: float = 0.0,
    eps_max_ghz: float = 10.0,
    n_min: int = 0,
) -> Dict[str, Any]:
    """
    Resonance positions in a detuning window.

    Args:
        omega_ghz: Drive frequency w/2pi in GHz
        frequency_ghz: Bath mode w_c/2pi (mode "rii") or weak-tone w~/2pi (mode "roii") in GHz
        mode: "rii" or "roii"
        eps_min_ghz: Window start in GHz over 2pi
        eps_max_ghz: Window end in GHz over 2pi
        n_min: Smallest photon number listed
    """
    return SimulationManager.resonances(
        DriveField(amp=0.0, omega=freq_from_caption(omega_ghz)),
        mode,
        freq_from_caption(frequency_ghz),
        (freq_from_caption(eps_min_ghz), freq_from_caption(eps_max_ghz)),
        n_min,
    )

@app.tool("pattern_summary")
async def pattern_summary(
    scenario_name: str,
    count: int = 61,
    overrides: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    """
    Evaluate a scenario on a coarse grid and summarize it.

    Args:
        scenario_name: Grid preset, e.g. fig3a
        count: Points per axis; the preset ranges are kept
        overrides: Optional scenario overrides

    Returns:
        min_p00, max_p00, inverted_fraction, nan_cells, clamp_events and shape
    """
    spec = scenario(scenario_name, overrides)
    spec = dataclasses.replace(
        spec,
        eps_axis=AxisSpec(spec.eps_axis.min, spec.eps_axis.max, count),
        amp_axis=AxisSpec(spec.amp_axis.min, spec.amp_axis.max, count),
    )
    try:
        return SimulationManager.summarize(spec)
    except Exception as e:
        logger.error(f"Error evaluating {scenario_name}: {str(e)}")
        raise

@app.tool("oracle_check")
async def oracle_check(
    kind: str,
    eps0_ghz: float,
    amp_ghz: float,
    scenario_name: str = "fig4a",
    rel_tol: Optional[float] = None,
    direction: str = "1to0",
) -> Dict[str, Any]:
    """
    Compare a closed-form rate against its brute-force oracle.

    Args:
        kind: "relax" (needs a bath), "lzs" or "roii" (needs a weak tone, e.g. scenario fig7c)
        eps0_ghz: Static detuning eps0/2pi in GHz
        amp_ghz: Drive amplitude A/2pi in GHz
        scenario_name: Preset supplying the parameters
        rel_tol: Acceptance tolerance (default relax 0.02, lzs 0.05, roii 0.1)
        direction: "1to0" or "0to1", used by the relax oracle

    Returns:
        The report: closed form, oracle value, relative error, pass flag and details
    """
    if kind not in DEFAULT_ORACLE_TOLERANCE:
        raise ValueError(f"Unknown oracle kind {kind!r}; expected relax, lzs or roii")
    spec = scenario(scenario_name)
    tolerance = DEFAULT_ORACLE_TOLERANCE[kind] if rel_tol is None else rel_tol
    report = SimulationManager.oracle(
        kind,
        spec,
        freq_from_caption(eps0_ghz),
        freq_from_caption(amp_ghz),
        tolerance,
        Direction(direction),
    )
    return report.to_dict()

def main():
    """Entry point for MCP server execution"""
    app.run(transport="stdio")


if __name__ == "__main__":
    main()
