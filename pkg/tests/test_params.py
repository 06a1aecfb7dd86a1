"""Tests for parameter records and unit conversion."""

import math
import unittest

from eii_sim.params import (
    BathParams,
    DriveField,
    InvalidParameterError,
    QubitParams,
    UnitValue,
    WeakField,
    caption_from_freq,
    freq_from_caption,
    require_valid,
    temp_from_millikelvin,
    time_from_microseconds,
    validate,
)
from eii_sim.types import Unit


class TestUnitConversion(unittest.TestCase):
    """Caption units to internal units."""

    def test_caption_frequency(self):
        self.assertAlmostEqual(2 * math.pi * 0.013, freq_from_caption(0.013), places=15)
        self.assertAlmostEqual(0.6, caption_from_freq(freq_from_caption(0.6)), places=15)

    def test_temperature_20_mk(self):
        """20 mK is 0.41673 GHz, stored as an angular frequency."""
        t = temp_from_millikelvin(20)
        self.assertAlmostEqual(0.41673238246, t / (2 * math.pi), places=10)

    def test_time(self):
        self.assertEqual(500.0, time_from_microseconds(0.5))

    def test_non_finite_rejected(self):
        with self.assertRaises(InvalidParameterError):
            freq_from_caption(float("nan"))
        with self.assertRaises(InvalidParameterError):
            temp_from_millikelvin(float("inf"))
        with self.assertRaises(InvalidParameterError):
            time_from_microseconds(float("-inf"))

    def test_negative_temperature_rejected(self):
        with self.assertRaises(InvalidParameterError):
            temp_from_millikelvin(-1)

    def test_unit_value_round_trip(self):
        for unit, magnitude in ((Unit.GHZ_OVER_2PI, 0.05), (Unit.MILLIKELVIN, 20.0), (Unit.MICROSECOND, 13.0)):
            internal = UnitValue(magnitude, unit).to_internal()
            back = UnitValue.from_internal(internal, unit)
            self.assertAlmostEqual(magnitude, back.magnitude, places=12)

    def test_unit_value_flags(self):
        self.assertTrue(UnitValue(1.0, Unit.NANOSECOND).is_time)
        self.assertTrue(UnitValue(1.0, Unit.MILLIKELVIN).is_temperature)
        self.assertFalse(UnitValue(1.0, Unit.RAD_PER_NS).is_time)
        self.assertEqual(3.0, UnitValue(3.0, Unit.RAD_PER_NS).to_internal())


class TestValidation(unittest.TestCase):
    """Invariant checks on parameter records."""

    def test_valid_records(self):
        self.assertEqual([], validate(QubitParams(delta=0.1, eps0=-1.0, gamma2=0.4)))
        self.assertEqual([], validate(DriveField(amp=0.0, omega=3.77)))
        self.assertEqual([], validate(WeakField(amp_tilde=0.9, omega_tilde=1.0)))
        self.assertEqual([], validate(BathParams(alpha=2e-4, phi=1.0, omega_c=0.3, temperature=0.0)))

    def test_violations_listed(self):
        report = validate(QubitParams(delta=-1.0, eps0=0.0, gamma2=-0.1))
        self.assertIn("delta >= 0", report)
        self.assertIn("gamma2 >= 0", report)
        self.assertIn("omega > 0", validate(DriveField(amp=1.0, omega=0.0)))
        self.assertIn("amp_tilde < omega_tilde", validate(WeakField(amp_tilde=2.0, omega_tilde=1.0)))
        self.assertIn("omega_c > 0", validate(BathParams(alpha=1.0, phi=1.0, omega_c=0.0, temperature=1.0)))

    def test_non_finite_field(self):
        self.assertIn("eps0 must be finite", validate(QubitParams(delta=0.1, eps0=math.nan, gamma2=0.1)))

    def test_require_valid_raises(self):
        with self.assertRaises(InvalidParameterError) as context:
            require_valid(QubitParams(delta=0.1, eps0=0.0, gamma2=0.1), DriveField(amp=-1.0, omega=1.0))
        self.assertIn("DriveField: amp >= 0", str(context.exception))

    def test_unsupported_record(self):
        with self.assertRaises(TypeError):
            validate(UnitValue(1.0, Unit.NANOSECOND))


if __name__ == "__main__":
    unittest.main()
