"""Command-line front end: ``eii-sim <command> [flags]``."""

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from .params import DriveField, freq_from_caption, time_from_microseconds
from .render.csv_writer import write_series
from .render.run_config import COLORMAPS, HEATMAP_FORMATS, OutputSpec, RunConfig, parse_config
from .simulation_manager import (
    DEFAULT_ORACLE_TOLERANCE,
    EXIT_INCONCLUSIVE,
    EXIT_NUMERIC,
    EXIT_OK,
    CommandOutcome,
    SimulationManager,
    handle_command_errors,
)
from .sweep.scenarios import ConfigError, scenario, spec_from_mapping
from .sweep.types import SweepSpec
from .types import Direction, InitMode, LzsModel, RelaxModel, WeakChannel
from .version import __version__

logger = logging.getLogger("eii-sim.cli")

UNITS_EPILOG = (
    "Units: frequencies, detunings and amplitudes are X/2pi in GHz (GHz-over-2pi); temperatures in mK; "
    "times in microseconds (us). Rates are reported in 1/ns; 1/f cutoffs are given in rad/ns."
)

# Single-cell axes for point commands; only the channel and parameter selection is used
POINT_GRID = {"eps": [0.0, 1.0, 2], "amp": [0.0, 1.0, 2]}


def _add_point_flags(parser: argparse.ArgumentParser) -> None:
    qubit = parser.add_argument_group("qubit and drive (GHz over 2pi)")
    qubit.add_argument("--delta-ghz", type=float, default=0.013, help="tunnel splitting D/2pi in GHz (default 0.013)")
    qubit.add_argument("--gamma2-ghz", type=float, default=0.06, help="dephasing rate G2/2pi in GHz (default 0.06)")
    qubit.add_argument("--eps0-ghz", type=float, default=0.0, help="static detuning eps0/2pi in GHz (default 0)")
    qubit.add_argument("--amp-ghz", type=float, default=0.0, help="drive amplitude A/2pi in GHz (default 0)")
    qubit.add_argument("--omega-ghz", type=float, default=0.6, help="drive frequency w/2pi in GHz (default 0.6)")

    channels = parser.add_argument_group("rate channels")
    channels.add_argument("--lzs", choices=[m.value for m in LzsModel], default=LzsModel.LORENTZIAN.value,
                          help="tunneling line shape (default lorentzian)")
    channels.add_argument("--relax", choices=[m.value for m in RelaxModel], default=RelaxModel.OFF.value,
                          help="relaxation channel (default off)")
    channels.add_argument("--weak", choices=[m.value for m in WeakChannel], default=WeakChannel.OFF.value,
                          help="weak-tone couplings (default off)")

    bath = parser.add_argument_group("bath")
    bath.add_argument("--phi2alpha-ghz", type=float, default=0.0002,
                      help="coupling product phi^2 alpha as quoted in GHz, used as a dimensionless number")
    bath.add_argument("--omegac-ghz", type=float, default=0.05, help="bath frequency w_c/2pi in GHz (default 0.05)")
    bath.add_argument("--temp-mk", type=float, default=20.0, help="temperature in mK (default 20)")
    bath.add_argument("--gamma01-ghz", type=float, default=0.000008,
                      help="phenomenological upward rate G01/2pi in GHz (default 8e-6)")
    bath.add_argument("--match-tol-ghz", type=float, default=None,
                      help="delta-mode resonance tolerance /2pi in GHz (default: EII_MATCH_TOL_FRACTION x w)")

    weak = parser.add_argument_group("weak tone")
    weak.add_argument("--omega-tilde-ghz", type=float, default=2.0, help="weak-tone frequency w~/2pi in GHz")
    weak.add_argument("--amp-tilde-ratio", type=float, default=0.9, help="weak-tone amplitude ratio A~/w~")

    noise = parser.add_argument_group("1/f noise for --lzs gaussian")
    noise.add_argument("--a1f", type=float, default=None, help="1/f amplitude: S(w') = a1f / w' (rad/ns)")
    noise.add_argument("--ir-cut", type=float, default=None,
                       help="1/f low cutoff in rad/ns (default EII_ONE_OVER_F_IR_CUT)")
    noise.add_argument("--uv-cut", type=float, default=None,
                       help="1/f high cutoff in rad/ns (default EII_ONE_OVER_F_UV_CUT)")
    noise.add_argument("--time-us", type=float, default=None,
                       help="time in microseconds at which the polaron shift is evaluated (default 0)")


def _point_mapping(args: argparse.Namespace) -> Dict[str, Any]:
    mapping: Dict[str, Any] = {
        "qubit": {"delta_ghz": args.delta_ghz, "gamma2_ghz": args.gamma2_ghz},
        "drive": {"omega_ghz": args.omega_ghz},
        "bath": {"phi2alpha": args.phi2alpha_ghz, "omegac_ghz": args.omegac_ghz},
        "temp_mk": args.temp_mk,
        "gamma01_ghz": args.gamma01_ghz,
        "weak": {"omega_tilde_ghz": args.omega_tilde_ghz, "amp_ratio": args.amp_tilde_ratio},
        "channels": {"lzs": args.lzs, "relaxation": args.relax, "weak_field": args.weak},
        "grid": POINT_GRID,
    }
    if args.a1f is not None:
        noise = {"a1f": args.a1f}
        if args.ir_cut is not None:
            noise["ir_cut_rad_per_ns"] = args.ir_cut
        if args.uv_cut is not None:
            noise["uv_cut_rad_per_ns"] = args.uv_cut
        mapping["noise"] = noise
    if args.time_us is not None:
        mapping["polaron_time_us"] = args.time_us
    if args.match_tol_ghz is not None:
        mapping["match_tol_ghz"] = args.match_tol_ghz
    return mapping


def _point_spec(args: argparse.Namespace) -> SweepSpec:
    return spec_from_mapping(_point_mapping(args), name="point")


def _print_json(value: Any) -> None:
    sys.stdout.write(SimulationManager.to_json(value) + "\n")


def cmd_rates(args: argparse.Namespace) -> int:
    spec = _point_spec(args)
    _print_json(SimulationManager.rates(spec, freq_from_caption(args.eps0_ghz), freq_from_caption(args.amp_ghz)))
    return EXIT_OK


def cmd_pattern(args: argparse.Namespace) -> int:
    if args.config:
        config = parse_config(Path(args.config).read_text(encoding="utf-8"))
    else:
        config = RunConfig(spec=scenario(args.scenario), output=OutputSpec(), scenario=args.scenario)

    changes = {key: getattr(args, key) for key in ("csv", "heatmap", "format", "colormap") if getattr(args, key)}
    output = dataclasses.replace(config.output, **changes)
    if output.format == "pgm" and output.colormap != "gray":
        raise ConfigError("PGM output is grayscale; use --format png for a colormap")
    config = dataclasses.replace(config, output=output)

    _, summary, paths = SimulationManager.pattern(config, args.workers)
    logger.info(f"Wrote {', '.join(paths)}")
    sys.stdout.write(summary + "\n")
    return EXIT_OK


def cmd_transient(args: argparse.Namespace) -> int:
    spec = _point_spec(args)
    t_max = time_from_microseconds(args.t_max_us) if args.t_max_us is not None else None
    rows = SimulationManager.transient(
        spec,
        freq_from_caption(args.eps0_ghz),
        freq_from_caption(args.amp_ghz),
        t_max,
        args.points,
        InitMode(args.init),
        args.p00_init,
    )
    write_series(("time_ns", "p00"), rows, sys.stdout)
    return EXIT_OK


def cmd_resonances(args: argparse.Namespace) -> int:
    report = SimulationManager.resonances(
        DriveField(amp=0.0, omega=freq_from_caption(args.omega_ghz)),
        args.mode,
        freq_from_caption(args.frequency_ghz),
        (freq_from_caption(args.eps_min_ghz), freq_from_caption(args.eps_max_ghz)),
        args.n_min,
    )
    _print_json(report)
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    mapping = _point_mapping(args)
    # The oracles take their channels from the kind, not from the flags
    mapping["channels"] = {"lzs": "lorentzian", "relaxation": "off", "weak_field": "off"}
    spec = spec_from_mapping(mapping, name=f"oracle-{args.kind}")
    rel_tol = DEFAULT_ORACLE_TOLERANCE[args.kind] if args.rel_tol is None else args.rel_tol
    report = SimulationManager.oracle(
        args.kind,
        spec,
        freq_from_caption(args.eps0_ghz),
        freq_from_caption(args.amp_ghz),
        rel_tol,
        Direction(args.direction),
    )
    _print_json(report.to_dict())
    return EXIT_OK if report.passed else EXIT_NUMERIC


def cmd_scenarios(args: argparse.Namespace) -> int:
    _print_json(SimulationManager.list_presets())
    return EXIT_OK


def cmd_cut(args: argparse.Namespace) -> int:
    overrides: Dict[str, Any] = {}
    if args.eps0_ghz is not None:
        overrides["cut"] = {"eps0_ghz": args.eps0_ghz}
    if args.amp_grid is not None:
        lo, hi, count = args.amp_grid
        overrides["grid"] = {"amp": [lo, hi, int(count)]}
    rows = SimulationManager.cut(args.scenario, overrides)
    write_series(("amp_ghz_over_2pi", "p00"), rows, sys.stdout)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eii-sim",
        description="Interference patterns and transition rates of strongly driven flux qubits.",
        epilog=UNITS_EPILOG,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")
    commands = parser.add_subparsers(dest="command", required=True)

    rates = commands.add_parser("rates", help="all enabled rates at one point, as JSON", epilog=UNITS_EPILOG)
    _add_point_flags(rates)
    rates.set_defaults(handler=cmd_rates)

    pattern = commands.add_parser("pattern", help="evaluate a sweep and write CSV and heatmap", epilog=UNITS_EPILOG)
    source = pattern.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", help="JSON run configuration (caption units)")
    source.add_argument("--scenario", help="preset name, e.g. fig3a")
    pattern.add_argument("--csv", help="CSV output path (default <EII_OUTPUT_DIR>/<name>.csv)")
    pattern.add_argument("--heatmap", help="heatmap output path (default <EII_OUTPUT_DIR>/<name>.<format>)")
    pattern.add_argument("--format", choices=HEATMAP_FORMATS, default=None, help="heatmap format (default pgm)")
    pattern.add_argument("--colormap", choices=COLORMAPS, default=None, help="png colormap (default gray)")
    pattern.add_argument("--workers", type=int, default=None,
                         help="worker processes (default EII_WORKERS or all cores)")
    pattern.set_defaults(handler=cmd_pattern)

    transient = commands.add_parser("transient", help="p00 versus time as CSV (time in ns)", epilog=UNITS_EPILOG)
    _add_point_flags(transient)
    transient.add_argument("--t-max-us", type=float, default=None, help="final time in microseconds (default 20/R)")
    transient.add_argument("--points", type=int, default=101, help="number of time samples (default 101)")
    transient.add_argument("--init", choices=[m.value for m in InitMode], default=InitMode.TANH.value,
                           help="initial population (default tanh)")
    transient.add_argument("--p00-init", type=float, default=None, help="initial p00 for --init custom")
    transient.set_defaults(handler=cmd_transient)

    resonances = commands.add_parser("resonances", help="resonance positions as JSON (GHz over 2pi)",
                                      epilog=UNITS_EPILOG)
    resonances.add_argument("--omega-ghz", type=float, default=0.6, help="drive frequency w/2pi in GHz (default 0.6)")
    resonances.add_argument("--mode", choices=("rii", "roii"), default="rii", help="bath mode or weak tone")
    resonances.add_argument("--frequency-ghz", type=float, required=True,
                            help="w_c/2pi (rii) or w~/2pi (roii) in GHz")
    resonances.add_argument("--eps-min-ghz", type=float, default=0.0, help="window start eps0/2pi in GHz")
    resonances.add_argument("--eps-max-ghz", type=float, default=10.0, help="window end eps0/2pi in GHz")
    resonances.add_argument("--n-min", type=int, default=0, help="smallest photon number listed (default 0)")
    resonances.set_defaults(handler=cmd_resonances)

    oracle = commands.add_parser("oracle", help="check a closed-form rate against a brute-force oracle",
                                 epilog=UNITS_EPILOG)
    oracle.add_argument("kind", choices=tuple(DEFAULT_ORACLE_TOLERANCE), help="rate to check")
    _add_point_flags(oracle)
    oracle.add_argument("--rel-tol", type=float, default=None,
                        help="relative tolerance (default relax 0.02, lzs 0.05, roii 0.1)")
    oracle.add_argument("--direction", choices=[d.value for d in Direction], default=Direction.DOWN.value,
                        help="relaxation rate checked by the relax oracle (default 1to0)")
    oracle.set_defaults(handler=cmd_oracle)

    scenarios = commands.add_parser("scenarios", help="list presets as JSON", epilog=UNITS_EPILOG)
    scenarios.set_defaults(handler=cmd_scenarios)

    cut = commands.add_parser("cut", help="p00 versus amplitude at fixed detuning, as CSV", epilog=UNITS_EPILOG)
    cut.add_argument("--scenario", required=True, help="trace preset name, e.g. trace_rii_wide_bath")
    cut.add_argument("--eps0-ghz", type=float, default=None, help="override the trace detuning eps0/2pi in GHz")
    cut.add_argument("--amp-grid", type=float, nargs=3, metavar=("MIN", "MAX", "COUNT"), default=None,
                     help="amplitude axis A/2pi in GHz")
    cut.set_defaults(handler=cmd_cut)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point for CLI execution."""
    load_dotenv()
    args = build_parser().parse_args(argv)

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    outcome = CommandOutcome()
    with handle_command_errors(f"running {args.command}", outcome, getattr(args, "kind", None)):
        outcome.exit_code = args.handler(args)
    if outcome.exit_code == EXIT_INCONCLUSIVE:
        _print_json({"error": outcome.error, "report": outcome.report, "details": outcome.details})
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
