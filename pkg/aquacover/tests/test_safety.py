import math

import numpy as np

from .patches import TestCase
from ..assumptions import poolWeight
from ..geometry import Pose, VehicleState, step_dubins
from ..safety import (PoolShape, BodyProbePoints, pool_mu, pool_mu_gradient, probe_position, pool_barrier,
                      filter_omega)


class Test_PoolShape(TestCase):

    def test_axis_aligned_weight(self):
        pool = PoolShape.axis_aligned((0., 0.), (2.5, 0.9), 0.05)
        self.assertArrayAlmostEqual(np.diag([1. / 2.45 ** 4, 1. / 0.85 ** 4]), pool.weight)
        self.assertArrayAlmostEqual(poolWeight((2.5, 0.9), 0.05), pool.weight)

    def test_margin_too_large(self):
        with self.assertRaises(ValueError):
            PoolShape.axis_aligned((0., 0.), (1., 0.1), 0.2)

    def test_weight_must_be_positive_definite(self):
        with self.assertRaises(ValueError):
            PoolShape((0., 0.), [[1., 0.], [0., -1.]])

    def test_probes_ahead(self):
        with self.assertRaises(ValueError):
            BodyProbePoints((-0.1, -0.1), (0.2, 0.1))


class Test_pool_barrier(TestCase):

    def setUp(self):
        self.pool = PoolShape.axis_aligned((1., 0.), (2.5, 0.9), 0.05)

    def test_mu(self):
        self.assertAlmostEqual(pool_mu((1., 0.), self.pool), 0.)
        self.assertAlmostEqual(pool_mu((3.45, 0.), self.pool), 1.)
        self.assertAlmostEqual(pool_mu((1., -0.85), self.pool), 1.)

    def test_gradient_matches_difference(self):
        p = np.array([2.1, 0.4])
        h = 1e-6
        numeric = [(pool_mu(p + h * e, self.pool) - pool_mu(p - h * e, self.pool)) / (2 * h) for e in np.eye(2)]
        self.assertArrayAlmostEqual(numeric, pool_mu_gradient(p, self.pool), rtol=1e-6, atol=1e-9)

    def test_probe_position(self):
        self.assertArrayAlmostEqual([0.25, -0.15], probe_position(Pose((0., 0.), 0.), (0.25, -0.15)))
        self.assertArrayAlmostEqual([1.15, 0.25], probe_position(Pose((1., 0.), math.pi / 2), (0.25, -0.15)))

    def test_barrier_sign(self):
        self.assertTrue(pool_barrier(Pose((1., 0.), 0.), (0.25, -0.15), self.pool) > 0)
        self.assertTrue(pool_barrier(Pose((3.4, 0.), 0.), (0.25, -0.15), self.pool) < 0)


class Test_filter_omega(TestCase):

    def setUp(self):
        self.pool = PoolShape.axis_aligned((0., 0.), (2.5, 0.9), 0.05)

    def test_pass_through_in_the_middle(self):
        result = filter_omega(Pose((0., 0.), 0.), 0.26, 0.5, self.pool)
        self.assertAlmostEqual(result.omega_ref, 0.5)
        self.assertAlmostEqual(result.slack, 0.)
        self.assertFalse(result.fallback)
        self.assertTrue(result.b_right > 0 and result.b_left > 0)

    def test_turns_right_at_the_wall(self):
        result = filter_omega(Pose((2.1, 0.), 0.), 0.26, 0., self.pool)
        self.assertTrue(result.omega_ref < 0)

    def test_fallback_when_right_row_cannot_be_met(self):
        # a probe dead ahead on the pool axis has no leverage on heading
        pool = PoolShape.axis_aligned((0., 0.), (1., 1.), 0.)
        result = filter_omega(Pose((0.9, 0.), 0.), 0.26, 0.3, pool, BodyProbePoints((0.25, 0.), (0.25, 0.15)))
        self.assertTrue(result.fallback)
        self.assertEqual(result.omega_ref, 0.3)

    def test_right_probe_stays_inside(self):
        state = VehicleState(Pose((1.5, 0.), 0.3), 0.26)
        lowest, engaged = np.inf, False

        for _ in range(1000):
            result = filter_omega(state.pose, 0.26, 0., self.pool)
            lowest = min(lowest, result.b_right)
            engaged = engaged or abs(result.omega_ref) > 1e-6
            state = step_dubins(state, result.omega_ref, 0.01)

        self.assertTrue(engaged)
        self.assertTrue(lowest > -1e-2)
