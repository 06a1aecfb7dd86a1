"""Test that the MCP server starts up and its tools answer."""

import asyncio
import os
import unittest
from unittest.mock import patch


class TestServerStartup(unittest.TestCase):
    """Test server startup."""

    def test_import_server(self):
        """Test that server module can be imported without errors."""
        # This will fail if there are any import errors
        from eii_sim import server

        # Verify FastMCP app exists
        self.assertTrue(hasattr(server, "app"))
        self.assertTrue(callable(server.main))

    def test_scenarios_available(self):
        """Test that the packaged presets are served."""
        from eii_sim import server

        presets = asyncio.run(server.scenarios_list())
        names = [entry["name"] for entry in presets]
        self.assertIn("fig4a", names)
        self.assertIn("trace_rii_wide_bath", names)

        table = asyncio.run(server.scenarios_resource())
        self.assertIn("fig7c:", table)


class TestServerTools(unittest.TestCase):
    """Tool calls in caption units."""

    def test_rates_compute(self):
        from eii_sim import server

        result = asyncio.run(server.rates_compute(eps0_ghz=1.2, amp_ghz=2.0))
        self.assertEqual("fig4a", result["parameters"]["spec"]["name"])
        self.assertGreater(result["rates"]["w10"], 0.0)

    def test_rates_compute_with_overrides(self):
        from eii_sim import server

        result = asyncio.run(
            server.rates_compute(eps0_ghz=1.2, amp_ghz=2.0, overrides={"channels": {"relaxation": "off"}})
        )
        self.assertEqual(0.0, result["rates"]["g10"])
        self.assertEqual(0.0, result["rates"]["g01"])

    def test_resonances_report(self):
        from eii_sim import server

        result = asyncio.run(server.resonances_report(omega_ghz=0.6, frequency_ghz=2.0, mode="roii", eps_max_ghz=3.0))
        expected = [0.4, 1.0, 1.6, 2.0, 2.2, 2.6, 2.8]
        self.assertEqual(len(expected), len(result["resonant_detunings_from_1to0_ghz"]))
        for e, value in zip(expected, result["resonant_detunings_from_1to0_ghz"]):
            self.assertAlmostEqual(e, value, places=12)

    def test_pattern_summary(self):
        from eii_sim import server

        with patch.dict(os.environ, {"EII_WORKERS": "1"}):
            result = asyncio.run(server.pattern_summary("fig5b", count=5))
        self.assertEqual([5, 5], result["shape"])
        self.assertEqual("fig5b", result["scenario"])
        self.assertEqual(0, result["nan_cells"])

    def test_oracle_check_unknown_kind(self):
        from eii_sim import server

        with self.assertRaises(ValueError):
            asyncio.run(server.oracle_check("bloch", eps0_ghz=0.0, amp_ghz=0.0))

    def test_oracle_check_relax(self):
        from eii_sim import server

        result = asyncio.run(server.oracle_check("relax", eps0_ghz=0.08, amp_ghz=0.0))
        self.assertEqual("g10", result["quantity"])
        self.assertTrue(result["passed"])


if __name__ == "__main__":
    unittest.main()
