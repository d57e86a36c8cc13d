"""
Unit tests for the threshold tracer
"""

import unittest

import pytest

from app.core.ksat_surface import alpha_d, eval_z, find_cusp
from app.core.threshold_tracer import (
    CUSP_ZONE_STEPS,
    BranchPolicy,
    Orientation,
    alpha_c,
    calibrate,
    log_weight_gap,
    slope,
    trace,
)
from app.utils.errors import DegenerateBranchError, SurfaceDomainError
from app.utils.reference_data import ALPHA_C_LOWER_BOUND, ALPHA_C_TABLE, ALPHA_C_UPPER_BOUND

FAST_STEP = 2e-3


class TestSlope(unittest.TestCase):

    def test_trivial_and_paired_examples(self):
        """Test Q at x = 0 for the paired and trivial-lower root pairs"""
        self.assertAlmostEqual(slope(3, 0.0, 4.396, (0.232, 0.411)), 4.47, delta=0.1)
        self.assertAlmostEqual(slope(3, 0.0, 4.396, (0.0, 0.411)), 7.36, delta=0.1)

    def test_cusp_limit(self):
        """Test the 0/0 limit at the cusp is finite and positive"""
        cusp = find_cusp(3)
        q = slope(3, cusp.x0, cusp.z0, (cusp.u0, cusp.u0))
        expected = (1 - cusp.u0 ** 3) / (3 * cusp.u0 ** 2 * (1 - cusp.x0 / 2 - cusp.u0))
        self.assertAlmostEqual(q, expected, places=12)
        self.assertGreater(q, 0.0)

    def test_coincident_roots_away_from_cusp(self):
        """Test coincident branches elsewhere are rejected"""
        with self.assertRaises(DegenerateBranchError):
            slope(3, 0.05, 4.0, (0.3, 0.3))

    def test_roots_out_of_order(self):
        """Test u_l > u_u is rejected"""
        with self.assertRaises(DegenerateBranchError):
            slope(3, 0.0, 4.4, (0.4, 0.2))

    def test_log_argument_domain(self):
        """Test a root beyond 1 - x/2 raises"""
        with self.assertRaises(SurfaceDomainError):
            slope(3, 0.2, 4.0, (0.1, 0.95))

    def test_equal_weight_along_slope(self):
        """Test a step along (-h, hQ) leaves the weight gap at zero"""
        roots = (0.232, 0.411)
        h = 1e-4
        q = slope(3, 0.0, 4.396, roots)
        self.assertAlmostEqual(log_weight_gap(3, 0.0, -h, h * q, *roots), 0.0, places=14)
        self.assertNotAlmostEqual(log_weight_gap(3, 0.0, -h, 0.0, *roots), 0.0, places=8)


class TestTrace(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        """Set up one coarse trace shared by the tests"""
        cls.curve = trace(3, FAST_STEP, BranchPolicy.TRIVIAL_LOWER.value, Orientation.RISING.value)

    def test_starts_at_cusp(self):
        """Test point zero is the cusp"""
        cusp = find_cusp(3)
        first = self.curve.points[0]
        self.assertEqual((first.x, first.z), (cusp.x0, cusp.z0))

    def test_x_decreases_to_zero(self):
        """Test x decreases strictly and ends exactly at 0"""
        xs = [p.x for p in self.curve.points]
        self.assertTrue(all(a > b for a, b in zip(xs, xs[1:])))
        self.assertEqual(xs[-1], 0.0)
        self.assertEqual(self.curve.alpha_c, self.curve.points[-1].z)

    def test_roots_solve_the_surface(self):
        """Test every nontrivial branch value lies on the surface"""
        for point in self.curve.points[1:]:
            self.assertLess(point.u_lower, point.u_upper)
            for u in (point.u_lower, point.u_upper):
                if u > 0.0:
                    self.assertLessEqual(abs(eval_z(3, point.x, u) - point.z), 1e-8 * max(1.0, point.z))

    def test_threshold_above_spinodal(self):
        """Test alpha_d(3) < alpha_c(3) within the rigorous bounds"""
        self.assertGreater(self.curve.alpha_c, alpha_d(3))
        self.assertGreater(self.curve.alpha_c, ALPHA_C_LOWER_BOUND[3])
        self.assertLess(self.curve.alpha_c, ALPHA_C_UPPER_BOUND[3])

    def test_local_continuation_carries_the_trace(self):
        """Test full scans are confined to the cusp zone and the x = 0 landing"""
        cusp_zone_scans = 5 * CUSP_ZONE_STEPS + 1
        self.assertLessEqual(self.curve.full_scans, cusp_zone_scans + 20)
        self.assertGreater(len(self.curve.points), 60)

    def test_step_bounds(self):
        """Test the step must lie in (0, 0.01]"""
        with self.assertRaises(SurfaceDomainError):
            trace(3, 0.0)
        with self.assertRaises(SurfaceDomainError):
            trace(3, 0.02)


class TestSteepBranches(unittest.TestCase):

    def test_k5_trace_reaches_zero(self):
        """Test the k = 5 trace survives the steep lower branch near x = 0"""
        curve = trace(5, FAST_STEP, BranchPolicy.TRIVIAL_LOWER.value, Orientation.RISING.value)
        self.assertEqual(curve.points[-1].x, 0.0)
        self.assertGreater(curve.alpha_c, alpha_d(5))
        self.assertLess(abs(curve.alpha_c - float(ALPHA_C_TABLE[5])) / float(ALPHA_C_TABLE[5]), 0.02)
        near_zero = [p for p in curve.points if 0.0 < p.x < 0.01]
        self.assertTrue(near_zero)
        for point in near_zero:
            self.assertLess(point.u_lower - point.x / 2.0, 1e-6)


class TestCalibration(unittest.TestCase):

    def test_report_covers_all_configurations(self):
        """Test the report lists every policy and orientation pair"""
        report = calibrate(3, 5e-3)
        pairs = {(r.policy, r.orientation) for r in report.configurations}
        self.assertEqual(len(pairs), 4)
        self.assertTrue(any(r.completed for r in report.configurations))
        for result in report.configurations:
            if result.completed:
                self.assertIsNotNone(result.end_error)
            else:
                self.assertTrue(result.failure)
        if report.satisfied:
            chosen = [r for r in report.configurations
                      if r.policy == report.chosen_policy and r.orientation == report.chosen_orientation]
            self.assertTrue(chosen[0].passed)


@pytest.mark.slow
class TestTraceAcceptance(unittest.TestCase):

    def test_step_refinement(self):
        """Test each halving of dx changes alpha_c by less than 4x the previous change"""
        values = [alpha_c(3, step) for step in (4e-4, 2e-4, 1e-4)]
        first, second = abs(values[1] - values[0]), abs(values[2] - values[1])
        self.assertLess(second, 4.0 * first + 1e-12)
        self.assertLess(second, 1e-3)

    def test_thresholds_k3_to_k7(self):
        """Test alpha_c(k) matches the published row to 1% inside the rigorous bounds"""
        for k, printed in ALPHA_C_TABLE.items():
            value = alpha_c(k)
            self.assertGreater(value, alpha_d(k), msg=f"k={k}")
            self.assertLess(abs(value - float(printed)) / float(printed), 0.01, msg=f"k={k}")
            self.assertGreater(value, ALPHA_C_LOWER_BOUND[k], msg=f"k={k}")
            self.assertLess(value, ALPHA_C_UPPER_BOUND[k], msg=f"k={k}")


if __name__ == '__main__':
    unittest.main()
