"""
Unit tests for the K-COL conservation-law solver
"""

import math
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from app.core.kcol_pde import (
    ColState,
    SingularityEvent,
    evolve,
    flux_f,
    init_grid,
    invert_state,
    pde_residual,
    rho_fields,
    step,
)
from app.utils.errors import InversionDomainError, SingularityError, SurfaceDomainError

X_RANGE = (0.02, 0.1)
Y_RANGE = (0.05, 0.1)


class TestPointwiseMaps(unittest.TestCase):

    def test_rho_fields_examples(self):
        """Test (rho1, rho2) at the origin and at an interior point"""
        self.assertEqual(rho_fields(ColState(u=0.0, u2=0.0), 0.0, 0.0), (0.0, 0.0))
        rho1, rho2 = rho_fields(ColState(u=0.1, u2=0.2), 0.1, 0.2)
        self.assertAlmostEqual(rho1, math.log(0.1), places=12)
        self.assertAlmostEqual(rho2, math.log(0.1), places=12)

    def test_rho_fields_domain(self):
        """Test a non-positive log argument is rejected"""
        with self.assertRaises(SurfaceDomainError):
            rho_fields(ColState(u=0.3, u2=0.3), 0.2, 0.2)

    def test_invert_example(self):
        """Test the inverse at the interior point"""
        state = invert_state(math.log(0.1), math.log(0.1), 0.1, 0.2)
        self.assertAlmostEqual(state.u, 0.1, places=12)
        self.assertAlmostEqual(state.u2, 0.2, places=12)

    def test_invert_negative_density(self):
        """Test an inversion to negative u is rejected"""
        with self.assertRaises(InversionDomainError):
            invert_state(0.0, math.log(0.5), 0.0, 0.0)

    def test_flux(self):
        """Test f(u, y) = ln(1 - 3u^2 - 6uy) / 3"""
        self.assertAlmostEqual(flux_f(0.1, 0.2), math.log(0.85) / 3, places=12)
        self.assertAlmostEqual(flux_f(0.1, 0.2), -0.05417, delta=1e-5)
        with self.assertRaises(SurfaceDomainError):
            flux_f(0.5, 0.1)

    @settings(max_examples=1000, deadline=None)
    @given(
        u=st.floats(min_value=0.0, max_value=0.1),
        u2=st.floats(min_value=0.0, max_value=0.1),
        x=st.floats(min_value=0.0, max_value=0.1),
        y=st.floats(min_value=0.0, max_value=0.1),
    )
    def test_inversion_round_trip(self, u, u2, x, y):
        """Test invert_state undoes rho_fields"""
        state = invert_state(*rho_fields(ColState(u=u, u2=u2), x, y), x, y)
        self.assertAlmostEqual(state.u, u, places=12)
        self.assertAlmostEqual(state.u2, u2, places=12)


class TestGrid(unittest.TestCase):

    def setUp(self):
        """Set up test fixtures"""
        self.grid = init_grid(16, 16, X_RANGE, Y_RANGE)

    def test_initial_condition(self):
        """Test u = x and u2 = y at z = 0"""
        self.assertTrue(np.array_equal(self.grid.u, self.grid.X))
        self.assertTrue(np.array_equal(self.grid.u2, self.grid.Y))
        self.assertEqual(self.grid.z, 0.0)
        u_x, u_y = self.grid.slopes()
        self.assertTrue(np.allclose(u_x, 1.0, atol=1e-9))
        self.assertTrue(np.allclose(u_y, 0.0, atol=1e-9))

    def test_initial_slopes_recorded(self):
        """Test the grid stores u_x = 1 and u_y = 0 from construction"""
        self.assertEqual(self.grid.initial_u_x.shape, (16, 16))
        self.assertTrue(np.allclose(self.grid.initial_u_x, 1.0, atol=1e-9))
        self.assertTrue(np.allclose(self.grid.initial_u_y, 0.0, atol=1e-9))

    def test_cell_centres(self):
        """Test cell centres sit half a cell inside the range"""
        self.assertAlmostEqual(self.grid.x[0], X_RANGE[0] + 0.5 * self.grid.hx)
        self.assertEqual(self.grid.nx, 16)

    def test_domain_and_size(self):
        """Test out-of-domain ranges and tiny grids are rejected"""
        with self.assertRaises(SurfaceDomainError):
            init_grid(8, 8, (0.2, 0.4), (0.1, 0.2))
        with self.assertRaises(SurfaceDomainError):
            init_grid(2, 8, X_RANGE, Y_RANGE)

    def test_step_keeps_invariants(self):
        """Test one CFL step stays admissible and moves u by O(dz)"""
        dz = self.grid.stable_dz()
        after = step(self.grid)
        self.assertAlmostEqual(after.z, dz)
        self.assertTrue(np.all(after.u >= 0.0))
        self.assertTrue(np.all(after.u2 >= 0.0))
        self.assertTrue(np.all(np.isfinite(after.rho1)))
        self.assertLess(float(np.max(np.abs(after.u - self.grid.u))), 5.0 * dz)

    def test_u_grows_and_u2_shrinks(self):
        """Test the initial march direction in the interior"""
        after = step(self.grid)
        inner = self.grid.interior(4)
        self.assertTrue(np.all(after.u[inner] > self.grid.u[inner]))
        self.assertTrue(np.all(after.u2[inner] < self.grid.u2[inner]))

    def test_euler_order(self):
        """Test halving dz shrinks the one-step vs two-half-steps gap about fourfold"""
        def gap(dz):
            full = step(self.grid, dz)
            halves = step(step(self.grid, dz / 2), dz / 2)
            return float(np.max(np.abs(full.rho1 - halves.rho1)))

        dz = self.grid.stable_dz()
        self.assertGreater(gap(dz) / gap(dz / 2), 3.0)

    def test_residual_refinement(self):
        """Test the interior residual falls roughly in proportion to the cell size"""
        coarse = init_grid(16, 16, X_RANGE, Y_RANGE)
        fine = init_grid(32, 32, X_RANGE, Y_RANGE)
        dz = 1e-4
        r_coarse = pde_residual(coarse, step(coarse, dz), margin=4)
        r_fine = pde_residual(fine, step(fine, dz), margin=8)
        self.assertGreaterEqual(r_coarse / r_fine, 1.8)


class TestEvolve(unittest.TestCase):

    def test_small_march(self):
        """Test a short march inside the domain completes without events"""
        grid, report = evolve(init_grid(12, 12, X_RANGE, Y_RANGE), 0.02)
        self.assertFalse(report.halted)
        self.assertEqual(report.events, [])
        self.assertAlmostEqual(report.z_reached, 0.02, places=12)
        self.assertAlmostEqual(grid.z, 0.02, places=12)
        self.assertTrue(np.allclose(grid.initial_u_x, 1.0, atol=1e-9))
        self.assertTrue(np.allclose(grid.initial_u_y, 0.0, atol=1e-9))

    def test_step_raises_on_negative_u2(self):
        """Test an oversize step near y = 0 leaves the domain"""
        grid = init_grid(10, 10, (0.2, 0.3), (0.0, 0.02))
        with self.assertRaises(SingularityError) as ctx:
            step(grid, 0.05)
        self.assertTrue(ctx.exception.events)
        self.assertIsInstance(ctx.exception.events[0], SingularityEvent)

    def test_halted_march_returns_partial_result(self):
        """Test evolve stops at the last admissible grid and reports events"""
        start = init_grid(10, 10, (0.2, 0.3), (0.0, 0.02))
        grid, report = evolve(start, 0.5)
        self.assertTrue(report.halted)
        self.assertTrue(report.events)
        self.assertLess(report.z_reached, 0.5)
        self.assertEqual(grid.z, report.z_reached)
        self.assertTrue(np.all(grid.u2 >= -1e-12))

    def test_z_end_must_advance(self):
        """Test z_end <= z is rejected"""
        with self.assertRaises(SurfaceDomainError):
            evolve(init_grid(8, 8, X_RANGE, Y_RANGE), 0.0)


if __name__ == '__main__':
    unittest.main()
