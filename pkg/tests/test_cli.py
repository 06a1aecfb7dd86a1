"""Tests for the command-line front end."""

import contextlib
import io
import json
import os
import tempfile
import unittest
from unittest.mock import patch

from eii_sim import cli
from eii_sim.oracle import OracleInconclusiveError, OracleReport
from eii_sim.params import freq_from_caption
from eii_sim.simulation_manager import EXIT_INCONCLUSIVE, EXIT_NUMERIC, EXIT_OK, EXIT_VALIDATION


def run(*argv):
    """Run the CLI and return (exit code, stdout)."""
    stdout = io.StringIO()
    with contextlib.redirect_stdout(stdout):
        code = cli.main(list(argv))
    return code, stdout.getvalue()


def failing_report(passed: bool) -> OracleReport:
    return OracleReport(
        quantity="w10",
        closed_form=1.0,
        oracle_value=1.0 if passed else 2.0,
        relative_error=0.0 if passed else 0.5,
        parameters={},
        tolerances={"rel_tol": 0.05},
    )


class TestPointCommands(unittest.TestCase):
    """Commands evaluated at a single operating point."""

    def test_rates(self):
        code, out = run("rates", "--eps0-ghz", "1.2", "--amp-ghz", "2.0", "--relax", "ohmic")
        self.assertEqual(EXIT_OK, code)
        report = json.loads(out)
        self.assertEqual({"w10", "w01", "g10", "g01"}, set(report["rates"]))
        self.assertGreater(report["rates"]["w10"], 0.0)
        self.assertGreater(report["rates"]["g01"], 0.0)
        self.assertAlmostEqual(1.2, report["parameters"]["eps0_ghz_over_2pi"], places=12)
        self.assertEqual(24, report["n_max"])

    def test_rates_validation_error(self):
        code, out = run("rates", "--gamma2-ghz", "0")
        self.assertEqual(EXIT_VALIDATION, code)
        self.assertEqual("", out)

    def test_transient(self):
        code, out = run("transient", "--eps0-ghz", "1.0", "--points", "5", "--init", "custom", "--p00-init", "1")
        self.assertEqual(EXIT_OK, code)
        lines = out.splitlines()
        self.assertEqual("time_ns,p00", lines[0])
        self.assertEqual(6, len(lines))
        self.assertEqual("0.0,1.0", lines[1])
        last = float(lines[-1].split(",")[1])
        self.assertAlmostEqual(0.5, last, delta=1e-6)

    def test_transient_needs_two_points(self):
        code, _ = run("transient", "--points", "1")
        self.assertEqual(EXIT_VALIDATION, code)

    def test_resonances(self):
        code, out = run("resonances", "--frequency-ghz", "0.05", "--eps-max-ghz", "2")
        self.assertEqual(EXIT_OK, code)
        report = json.loads(out)
        down = report["resonant_detunings_from_1to0_ghz"]
        self.assertEqual(3, len(down))
        for expected, value in zip((0.55, 1.15, 1.75), down):
            self.assertAlmostEqual(expected, value, places=12)

    def test_resonances_bad_window(self):
        code, _ = run(
            "resonances", "--frequency-ghz", "2", "--mode", "roii", "--eps-min-ghz", "3", "--eps-max-ghz", "1"
        )
        self.assertEqual(EXIT_VALIDATION, code)


class TestOracleCommand(unittest.TestCase):
    """Exit codes of the oracle command."""

    def test_passing_report(self):
        with patch("eii_sim.cli.SimulationManager.oracle", return_value=failing_report(True)):
            code, out = run("oracle", "lzs")
        self.assertEqual(EXIT_OK, code)
        self.assertTrue(json.loads(out)["passed"])

    def test_failing_report(self):
        with patch("eii_sim.cli.SimulationManager.oracle", return_value=failing_report(False)):
            code, out = run("oracle", "lzs")
        self.assertEqual(EXIT_NUMERIC, code)
        self.assertFalse(json.loads(out)["passed"])

    def test_inconclusive(self):
        error = OracleInconclusiveError("not exponential", {"fit_residual": 0.3})
        with patch("eii_sim.cli.SimulationManager.oracle", side_effect=error):
            code, out = run("oracle", "roii")
        self.assertEqual(EXIT_INCONCLUSIVE, code)
        self.assertEqual(
            {"error": "not exponential", "report": {}, "details": {"fit_residual": 0.3}}, json.loads(out)
        )

    def test_inconclusive_prints_closed_form_and_parameters(self):
        error = OracleInconclusiveError("not exponential", {"fit_residual": 0.3})
        with patch("eii_sim.oracle._bloch_rate", side_effect=error):
            code, out = run("oracle", "lzs", "--eps0-ghz", "0.6", "--amp-ghz", "1.2")
        self.assertEqual(EXIT_INCONCLUSIVE, code)
        printed = json.loads(out)
        self.assertEqual("w10", printed["report"]["quantity"])
        self.assertGreater(printed["report"]["closed_form"], 0.0)
        self.assertAlmostEqual(freq_from_caption(0.6), printed["report"]["parameters"]["eps0"], places=12)
        self.assertAlmostEqual(freq_from_caption(1.2), printed["report"]["parameters"]["amp"], places=12)
        self.assertEqual(0.05, printed["report"]["tolerances"]["rel_tol"])
        self.assertEqual({"fit_residual": 0.3}, printed["details"])

    def test_default_tolerance_per_kind(self):
        with patch("eii_sim.cli.SimulationManager.oracle", return_value=failing_report(True)) as oracle:
            run("oracle", "relax", "--direction", "0to1")
        args = oracle.call_args.args
        self.assertEqual("relax", args[0])
        self.assertEqual(0.02, args[4])
        self.assertEqual("0to1", args[5].value)

    def test_zero_tolerance(self):
        code, _ = run("oracle", "lzs", "--rel-tol", "0")
        self.assertEqual(EXIT_VALIDATION, code)

    def test_no_tunnel_coupling(self):
        code, out = run("oracle", "lzs", "--delta-ghz", "0", "--eps0-ghz", "0.3")
        self.assertEqual(EXIT_OK, code)
        self.assertEqual("no tunnel coupling", json.loads(out)["details"]["note"])


class TestGridCommands(unittest.TestCase):
    """Sweeps, traces and preset listing."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def test_pattern_from_config(self):
        config_path = os.path.join(self.tmp.name, "run.json")
        csv_path = os.path.join(self.tmp.name, "out", "fig3a.csv")
        with open(config_path, "w", encoding="utf-8") as f:
            json.dump(
                {
                    "scenario": "fig3a",
                    "overrides": {"grid": {"eps": [0, 2, 5], "amp": [0, 2, 5]}},
                    "output": {"csv": csv_path},
                },
                f,
            )
        heatmap_path = os.path.join(self.tmp.name, "fig3a.png")
        code, out = run(
            "pattern", "--config", config_path, "--heatmap", heatmap_path, "--format", "png", "--workers", "1"
        )
        self.assertEqual(EXIT_OK, code)
        self.assertIn("inverted_fraction=", out)
        self.assertIn("wall_time_s=", out)
        self.assertTrue(os.path.exists(csv_path))
        with open(heatmap_path, "rb") as f:
            self.assertEqual(b"\x89PNG", f.read(4))

    def test_pattern_default_paths(self):
        config_path = os.path.join(self.tmp.name, "run.json")
        with open(config_path, "w", encoding="utf-8") as f:
            f.write('{"scenario": "fig5b", "overrides": {"grid": {"eps": [0, 1, 3], "amp": [0, 1, 3]}}}')
        with patch.dict(os.environ, {"EII_OUTPUT_DIR": self.tmp.name}):
            code, _ = run("pattern", "--config", config_path, "--workers", "1")
        self.assertEqual(EXIT_OK, code)
        self.assertTrue(os.path.exists(os.path.join(self.tmp.name, "fig5b.csv")))
        self.assertTrue(os.path.exists(os.path.join(self.tmp.name, "fig5b.pgm")))

    def test_pattern_gray_only_pgm(self):
        code, _ = run("pattern", "--scenario", "fig4a", "--colormap", "viridis")
        self.assertEqual(EXIT_VALIDATION, code)

    def test_pattern_bad_config(self):
        config_path = os.path.join(self.tmp.name, "run.json")
        with open(config_path, "w", encoding="utf-8") as f:
            f.write('{"scenario": "fig4a",')
        code, out = run("pattern", "--config", config_path)
        self.assertEqual(EXIT_VALIDATION, code)
        self.assertEqual("", out)

    def test_pattern_unknown_scenario(self):
        code, _ = run("pattern", "--scenario", "fig99")
        self.assertEqual(EXIT_VALIDATION, code)

    def test_pattern_missing_config_file(self):
        code, _ = run("pattern", "--config", os.path.join(self.tmp.name, "absent.json"))
        self.assertEqual(EXIT_NUMERIC, code)

    def test_cut(self):
        code, out = run("cut", "--scenario", "trace_phenomenological", "--amp-grid", "0", "10", "6")
        self.assertEqual(EXIT_OK, code)
        lines = out.splitlines()
        self.assertEqual("amp_ghz_over_2pi,p00", lines[0])
        self.assertEqual(7, len(lines))
        self.assertTrue(lines[-1].startswith("10.0,"))

    def test_scenarios(self):
        code, out = run("scenarios")
        self.assertEqual(EXIT_OK, code)
        entries = {entry["name"]: entry for entry in json.loads(out)}
        self.assertEqual("grid", entries["fig3a"]["kind"])
        self.assertEqual("trace", entries["trace_rii_wide_bath"]["kind"])

    def test_unknown_command(self):
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as context:
                cli.main(["plot"])
        self.assertEqual(2, context.exception.code)


if __name__ == "__main__":
    unittest.main()
