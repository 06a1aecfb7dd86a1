"""Tests for run configurations, CSV tables, heatmaps and JSON reports."""

import io
import json
import math
import os
import tempfile
import unittest

import numpy as np
from PIL import Image

from eii_sim.render import (
    ConfigParseError,
    OutputSpec,
    colormap_table,
    dumps,
    parse_config,
    pixel_levels,
    read_csv,
    write_csv,
    write_heatmap,
)
from eii_sim.render.csv_writer import summary_line, write_series
from eii_sim.render.run_config import ConfigError, UnitViolationError, UnknownKeyError, UnknownScenarioError
from eii_sim.sweep import CellFailure, PatternGrid
from eii_sim.types import RelaxModel


def small_grid(p00, failures=None):
    p00 = np.asarray(p00, dtype=float)
    return PatternGrid(
        eps_values=np.linspace(0.0, 1.0, p00.shape[0]),
        amp_values=np.linspace(0.0, 2.0, p00.shape[1]),
        p00=p00,
        provenance={"version": "1.0.0", "quantity": "p00", "spec": {"name": "unit"}, "n_max": 21},
        failures=failures or [],
    )


class TestParseConfig(unittest.TestCase):
    """Strict JSON run configurations."""

    def test_scenario_with_overrides(self):
        config = parse_config(
            '{"scenario": "fig4a", "overrides": {"bath": {"phi2alpha": 0.02}},'
            ' "output": {"csv": "out.csv", "heatmap": "out.png", "format": "png", "colormap": "viridis"}}'
        )
        self.assertEqual("fig4a", config.scenario)
        self.assertEqual(0.02, config.spec.bath.alpha)
        self.assertEqual(OutputSpec(csv="out.csv", heatmap="out.png", format="png", colormap="viridis"), config.output)

    def test_full_spec_with_extends(self):
        config = parse_config('{"spec": {"extends": "fig5a", "gamma01_ghz": 0.001}}')
        self.assertIsNone(config.scenario)
        self.assertEqual(RelaxModel.PHENOMENOLOGICAL, config.spec.relaxation)
        self.assertAlmostEqual(2 * math.pi * 0.001, config.spec.gamma01, places=15)
        self.assertEqual(OutputSpec(), config.output)

    def test_malformed_json_reports_position(self):
        with self.assertRaises(ConfigParseError) as context:
            parse_config('{"scenario": "fig4a",\n  "output": {]}')
        self.assertEqual(2, context.exception.line)
        self.assertIsNotNone(context.exception.column)
        self.assertIsInstance(context.exception, ConfigError)

    def test_non_standard_constant(self):
        with self.assertRaises(ConfigParseError):
            parse_config('{"scenario": "fig4a", "overrides": {"temp_mk": NaN}}')

    def test_duplicate_key(self):
        with self.assertRaises(ConfigParseError):
            parse_config('{"scenario": "fig4a", "scenario": "fig4b"}')

    def test_top_level_must_be_object(self):
        with self.assertRaises(ConfigParseError):
            parse_config("[1, 2]")

    def test_unknown_keys(self):
        with self.assertRaises(UnknownKeyError):
            parse_config('{"scenario": "fig4a", "verbose": true}')
        with self.assertRaises(UnknownKeyError):
            parse_config('{"scenario": "fig4a", "output": {"dpi": 300}}')
        with self.assertRaises(UnknownKeyError):
            parse_config('{"spec": {"extends": "fig4a", "qubit": {"gamma_ghz": 1}}}')

    def test_unit_violation(self):
        with self.assertRaises(UnitViolationError):
            parse_config('{"scenario": "fig4a", "overrides": {"temp_mk": {"magnitude": 1, "unit": "ns"}}}')

    def test_unknown_scenario(self):
        with self.assertRaises(UnknownScenarioError):
            parse_config('{"scenario": "fig1"}')

    def test_scenario_or_spec(self):
        with self.assertRaises(ConfigError):
            parse_config("{}")
        with self.assertRaises(ConfigError):
            parse_config('{"scenario": "fig4a", "spec": {}}')
        with self.assertRaises(ConfigError):
            parse_config('{"spec": {"extends": "fig4a"}, "overrides": {}}')

    def test_output_checks(self):
        with self.assertRaises(ConfigError):
            parse_config('{"scenario": "fig4a", "output": {"format": "jpeg"}}')
        with self.assertRaises(ConfigError):
            parse_config('{"scenario": "fig4a", "output": {"colormap": "viridis"}}')
        with self.assertRaises(ConfigError):
            parse_config('{"scenario": "fig4a", "output": {"format": "png", "clamp": [1, 0]}}')
        with self.assertRaises(ConfigError):
            parse_config('{"scenario": "fig4a", "output": {"csv": 3}}')


class TestCsv(unittest.TestCase):
    """Long-format tables."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.tmp.name, "grid.csv")

    def tearDown(self):
        self.tmp.cleanup()

    def test_layout(self):
        write_csv(small_grid([[0.25, 0.5], [0.75, 1.0]]), self.path)
        with open(self.path, encoding="utf-8") as f:
            lines = f.read().splitlines()
        self.assertTrue(lines[0].startswith("# eii-simulator 1.0.0"))
        data = [line for line in lines if not line.startswith("#")]
        self.assertEqual("eps0_ghz_over_2pi,amp_ghz_over_2pi,p00", data[0])
        self.assertEqual(["0.0,0.0,0.25", "0.0,2.0,0.5", "1.0,0.0,0.75", "1.0,2.0,1.0"], data[1:])

    def test_round_trip_with_nan(self):
        failure = CellFailure(i_eps=1, i_amp=0, reason="UndefinedStationaryError: Total rate is zero")
        grid = small_grid([[0.1, 1 / 3, 0.5], [math.nan, 0.9, 2 / 7]], [failure])
        grid.clamp_events = 4
        write_csv(grid, self.path)
        restored = read_csv(self.path)
        np.testing.assert_array_equal(grid.p00, restored.p00)
        np.testing.assert_array_equal(grid.eps_values, restored.eps_values)
        np.testing.assert_array_equal(grid.amp_values, restored.amp_values)
        self.assertEqual([failure], restored.failures)
        self.assertEqual(4, restored.clamp_events)
        self.assertEqual(grid.provenance, restored.provenance)

    def test_bad_header(self):
        with open(self.path, "w", encoding="utf-8") as f:
            f.write("x,y,z\n1,2,3\n")
        with self.assertRaises(ValueError):
            read_csv(self.path)

    def test_series(self):
        stream = io.StringIO()
        write_series(("time_ns", "p00"), [(0.0, 1.0), (10.0, 0.5)], stream)
        self.assertEqual("time_ns,p00\n0.0,1.0\n10.0,0.5\n", stream.getvalue())

    def test_summary_line(self):
        line = summary_line({"min_p00": 0.1, "max_p00": 0.9}, 1.23456)
        self.assertEqual("max_p00=0.9 min_p00=0.1 wall_time_s=1.235", line)


class TestHeatmap(unittest.TestCase):
    """PGM and PNG rendering."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def test_pgm_bytes(self):
        path = os.path.join(self.tmp.name, "grid.pgm")
        write_heatmap(small_grid([[0.0, 1.0], [0.5, 0.5]]), path)
        with open(path, "rb") as f:
            content = f.read()
        self.assertEqual(b"P5\n2 2\n255\n" + bytes([255, 128, 0, 128]), content)

    def test_constant_grids(self):
        for value, level in ((0.0, 0), (1.0, 255), (0.5, 128)):
            levels = pixel_levels(small_grid(np.full((3, 4), value)))
            self.assertEqual((4, 3), levels.shape)
            self.assertTrue(np.all(levels == level))

    def test_nan_and_clamp(self):
        levels = pixel_levels(small_grid([[math.nan, 2.0], [-1.0, 0.6]]), clamp=(0.2, 0.6))
        np.testing.assert_array_equal([[255, 255], [0, 0]], levels)

    def test_bad_clamp(self):
        with self.assertRaises(ValueError):
            pixel_levels(small_grid([[0.5]]), clamp=(1.0, 1.0))

    def test_png_viridis(self):
        path = os.path.join(self.tmp.name, "grid.png")
        write_heatmap(small_grid([[0.0, 1.0], [0.5, 0.5]]), path, format="png", colormap="viridis")
        with Image.open(path) as image:
            self.assertEqual("RGB", image.mode)
            self.assertEqual((2, 2), image.size)
            self.assertEqual((0x44, 0x01, 0x54), image.getpixel((0, 1)))
            self.assertEqual((0xFD, 0xE7, 0x25), image.getpixel((0, 0)))

    def test_colormaps(self):
        gray = colormap_table("gray")
        self.assertEqual((256, 3), gray.shape)
        self.assertEqual([7, 7, 7], gray[7].tolist())
        viridis = colormap_table("viridis")
        self.assertEqual([0x21, 0x91, 0x8C], viridis[128].tolist())
        self.assertEqual([0x44, 0x01, 0x54], viridis[0].tolist())
        with self.assertRaises(ValueError):
            colormap_table("jet")

    def test_rejections(self):
        grid = small_grid([[0.5]])
        with self.assertRaises(ValueError):
            write_heatmap(grid, os.path.join(self.tmp.name, "a.pgm"), colormap="viridis")
        with self.assertRaises(ValueError):
            write_heatmap(grid, os.path.join(self.tmp.name, "a.bmp"), format="bmp")
        empty = PatternGrid(eps_values=np.array([]), amp_values=np.array([]), p00=np.zeros((0, 0)))
        with self.assertRaises(ValueError):
            write_heatmap(empty, os.path.join(self.tmp.name, "b.pgm"))


class TestJsonReport(unittest.TestCase):
    """Stable JSON output."""

    def test_plain_values(self):
        text = dumps({"b": np.float64(0.5), "a": (1, 2), "c": RelaxModel.OHMIC, "d": math.nan})
        self.assertEqual({"a": [1, 2], "b": 0.5, "c": "ohmic", "d": "nan"}, json.loads(text))
        self.assertLess(text.index('"a"'), text.index('"b"'))

    def test_dataclass(self):
        failure = CellFailure(i_eps=1, i_amp=2, reason="x")
        self.assertEqual({"i_eps": 1, "i_amp": 2, "reason": "x"}, json.loads(dumps(failure)))


if __name__ == "__main__":
    unittest.main()
