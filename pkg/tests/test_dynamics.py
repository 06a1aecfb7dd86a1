"""Tests for the two-state rate equations."""

import math
import unittest

import numpy as np

from eii_sim.dynamics import (
    IntegrationError,
    PopulationState,
    UndefinedStationaryError,
    initial_population,
    integrate_rate_ode,
    stationary,
    stationary_rii,
    transient,
    transient_series,
)
from eii_sim.params import InvalidParameterError
from eii_sim.rates import RateSet
from eii_sim.types import InitMode


def constant(value):
    return lambda t: value


class TestStationary(unittest.TestCase):
    """Stationary populations."""

    def test_symmetric_branch(self):
        result = stationary(RateSet(w10=0.2, w01=0.2, g10=0.1, g01=0.3))
        self.assertEqual("symmetric", result.branch)
        self.assertAlmostEqual(0.3 / 0.8, result.p00, places=15)

    def test_general_branch(self):
        result = stationary(RateSet(w10=0.5, w01=0.1, g10=0.0, g01=0.4))
        self.assertEqual("general", result.branch)
        self.assertAlmostEqual(0.5, result.p00, places=15)

    def test_branches_agree_when_symmetric(self):
        rates = RateSet(w10=0.2, w01=0.2, g10=0.05, g01=0.01)
        self.assertAlmostEqual(0.25 / 0.46, stationary(rates).p00, places=15)

    def test_stays_in_unit_interval(self):
        rng = np.random.default_rng(1)
        for w10, w01, g10, g01 in rng.exponential(size=(1000, 4)):
            p = stationary(RateSet(w10, w01, g10, g01)).p00
            self.assertTrue(0.0 <= p <= 1.0)

    def test_relaxation_only(self):
        self.assertEqual(0.75, stationary(RateSet(0.0, 0.0, 3.0, 1.0)).p00)
        self.assertEqual(0.75, stationary_rii(3.0, 1.0))
        self.assertEqual(1.0, stationary_rii(1.0, 0.0))

    def test_strong_tunneling_saturates(self):
        p = stationary(RateSet(w10=1e6, w01=1e6, g10=1.0, g01=0.0)).p00
        self.assertAlmostEqual(0.5, p, delta=1e-6)

    def test_zero_total_rate(self):
        with self.assertRaises(UndefinedStationaryError):
            stationary(RateSet(0.0, 0.0, 0.0, 0.0))
        with self.assertRaises(UndefinedStationaryError):
            stationary_rii(0.0, 0.0)


class TestInitialPopulation(unittest.TestCase):
    """Initial conditions."""

    def test_tanh(self):
        self.assertAlmostEqual(math.tanh(0.25), initial_population(1.0, 2.0), places=15)
        self.assertEqual(0.0, initial_population(0.0, 1.0))

    def test_tanh_zero_temperature(self):
        self.assertEqual(1.0, initial_population(0.3, 0.0))
        self.assertEqual(-1.0, initial_population(-0.3, 0.0))

    def test_boltzmann(self):
        self.assertAlmostEqual(1.0 / (1.0 + math.e), initial_population(2.0, 2.0, InitMode.BOLTZMANN), places=15)
        self.assertEqual(0.5, initial_population(0.0, 0.0, InitMode.BOLTZMANN))
        self.assertEqual(0.0, initial_population(1.0, 0.0, InitMode.BOLTZMANN))

    def test_custom(self):
        self.assertEqual(0.3, initial_population(5.0, 1.0, InitMode.CUSTOM, 0.3))
        with self.assertRaises(InvalidParameterError):
            initial_population(5.0, 1.0, InitMode.CUSTOM, 1.5)
        with self.assertRaises(InvalidParameterError):
            initial_population(5.0, 1.0, InitMode.CUSTOM)

    def test_negative_temperature(self):
        with self.assertRaises(InvalidParameterError):
            initial_population(1.0, -1.0)


class TestTransient(unittest.TestCase):
    """Closed-form relaxation towards the stationary state."""

    def setUp(self):
        self.rates = RateSet(w10=0.2, w01=0.2, g10=0.1, g01=0.3)

    def test_starts_at_initial_population(self):
        state = transient(self.rates, 1.0, 2.0, 0.0, InitMode.CUSTOM, 0.9)
        self.assertAlmostEqual(0.9, state.p00, places=15)
        self.assertAlmostEqual(0.1, state.p11, places=15)

    def test_approaches_stationary(self):
        state = transient(self.rates, 1.0, 2.0, 100.0, InitMode.BOLTZMANN)
        self.assertAlmostEqual(stationary(self.rates).p00, state.p00, places=12)

    def test_settled_after_twenty_decay_times(self):
        rng = np.random.default_rng(5)
        for w10, w01, g10, g01, eps0, temperature in rng.exponential(size=(1000, 6)):
            rates = RateSet(w10, w01, g10, g01)
            state = transient(rates, eps0, temperature, 20.0 / rates.total, InitMode.BOLTZMANN)
            self.assertAlmostEqual(stationary(rates).p00, state.p00, delta=1e-8)

    def test_exponential_decay(self):
        p0 = initial_population(1.0, 2.0)
        p_inf = 0.3 / 0.8
        state = transient(self.rates, 1.0, 2.0, 1.5)
        self.assertAlmostEqual(p_inf + (p0 - p_inf) * math.exp(-0.8 * 1.5), state.p00, places=15)

    def test_zero_rates_hold_initial_value(self):
        state = transient(RateSet(0.0, 0.0, 0.0, 0.0), 0.0, 1.0, 50.0, InitMode.CUSTOM, 0.4)
        self.assertEqual(0.4, state.p00)

    def test_negative_time(self):
        with self.assertRaises(InvalidParameterError):
            transient(self.rates, 1.0, 2.0, -1.0)

    def test_series(self):
        series = transient_series(self.rates, 1.0, 2.0, [0.0, 1.0, 2.0], InitMode.CUSTOM, 1.0)
        self.assertEqual([0.0, 1.0, 2.0], [s.time for s in series])
        self.assertTrue(series[0].p00 > series[1].p00 > series[2].p00)

    def test_clamping_is_recorded(self):
        state = PopulationState.from_p00(1.0 + 1e-13, 0.0)
        self.assertEqual(1.0, state.p00)
        self.assertGreater(state.clamped, 0.0)

    def test_large_clamp_logged(self):
        with self.assertLogs("eii-sim.dynamics", level="WARNING"):
            PopulationState.from_p00(-0.5, 1.0)


class TestIntegrateRateOde(unittest.TestCase):
    """Runge-Kutta integration of the rate equation."""

    def test_matches_closed_form(self):
        rates = RateSet(w10=0.2, w01=0.2, g10=0.1, g01=0.3)
        grid = np.linspace(0.0, 10.0, 21)
        states = integrate_rate_ode(
            constant(rates.g10), constant(rates.g01), constant(rates.w10), constant(rates.w01), 0.9, grid
        )
        for state in states:
            expected = transient(rates, 0.0, 1.0, state.time, InitMode.CUSTOM, 0.9).p00
            self.assertAlmostEqual(expected, state.p00, delta=1e-8)

    def test_time_dependent_rate(self):
        """dp/dt = -k t p has solution p0 exp(-k t^2 / 2)."""
        k = 0.4
        grid = [0.0, 1.0, 2.0, 3.0]
        states = integrate_rate_ode(constant(0.0), lambda t: k * t, constant(0.0), constant(0.0), 1.0, grid)
        for state in states:
            self.assertAlmostEqual(math.exp(-k * state.time**2 / 2), state.p00, delta=1e-8)

    def test_zero_rates(self):
        states = integrate_rate_ode(constant(0.0), constant(0.0), constant(0.0), constant(0.0), 0.25, [0.0, 5.0])
        self.assertEqual([0.25, 0.25], [s.p00 for s in states])

    def test_invalid_grid(self):
        zero = constant(0.0)
        with self.assertRaises(InvalidParameterError):
            integrate_rate_ode(zero, zero, zero, zero, 0.5, [0.0, 0.0])
        with self.assertRaises(InvalidParameterError):
            integrate_rate_ode(zero, zero, zero, zero, 0.5, [])
        with self.assertRaises(InvalidParameterError):
            integrate_rate_ode(zero, zero, zero, zero, 1.5, [0.0, 1.0])

    def test_negative_rate(self):
        with self.assertRaises(InvalidParameterError):
            integrate_rate_ode(constant(-1.0), constant(0.0), constant(0.0), constant(0.0), 0.5, [0.0, 1.0])

    def test_step_underflow(self):
        huge = constant(1e300)
        with self.assertRaises(IntegrationError):
            integrate_rate_ode(huge, huge, constant(0.0), constant(0.0), 0.5, [0.0, 1e-280])


if __name__ == "__main__":
    unittest.main()
