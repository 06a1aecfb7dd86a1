"""EII simulator - rates and occupation patterns of strongly driven flux qubits."""

from .dynamics import IntegrationError, UndefinedStationaryError, stationary, transient
from .oracle import OracleInconclusiveError, OracleReport, check_lzs_rate, check_relax_rate, check_roii_rate
from .params import BathParams, DriveField, InvalidParameterError, QubitParams, WeakField
from .rates import RateSet, relax_rates_ohmic, roii_rates, w_rate_gaussian, w_rate_lorentzian
from .simulation_manager import SimulationManager
from .sweep import PatternGrid, SweepSpec, evaluate, scenario
from .types import Direction, InitMode, LzsModel, RelaxModel, WeakChannel
from .version import __version__


def main():
    """Main entry point for the package: the MCP server."""
    from . import server

    server.main()

# Expose core API at package level
__all__ = [
    'main',
    '__version__',
    'BathParams',
    'Direction',
    'DriveField',
    'InitMode',
    'IntegrationError',
    'InvalidParameterError',
    'LzsModel',
    'OracleInconclusiveError',
    'OracleReport',
    'PatternGrid',
    'QubitParams',
    'RateSet',
    'RelaxModel',
    'SimulationManager',
    'SweepSpec',
    'UndefinedStationaryError',
    'WeakChannel',
    'WeakField',
    'check_lzs_rate',
    'check_relax_rate',
    'check_roii_rate',
    'evaluate',
    'relax_rates_ohmic',
    'roii_rates',
    'scenario',
    'stationary',
    'transient',
    'w_rate_gaussian',
    'w_rate_lorentzian',
]
