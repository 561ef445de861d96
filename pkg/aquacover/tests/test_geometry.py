import math

import numpy as np
from hypothesis import given
from hypothesis.strategies import floats

from .patches import TestCase
from ..geometry import (wrap_angle, wrap_positive, rotation_matrix, rotate, heading_vector, Pose, VehicleState,
                        step_dubins, InvalidState)


class Test_wrap_angle(TestCase):

    def test_minus_pi_maps_to_pi(self):
        self.assertAlmostEqual(wrap_angle(-math.pi), math.pi)

    def test_inside_range_unchanged(self):
        self.assertAlmostEqual(wrap_angle(1.), 1.)
        self.assertAlmostEqual(wrap_angle(-1.), -1.)

    def test_full_turns_removed(self):
        self.assertAlmostEqual(wrap_angle(1. + 4 * math.pi), 1.)

    def test_array(self):
        self.assertArrayAlmostEqual([0.5, -0.5], wrap_angle(np.array([0.5 + 2 * math.pi, -0.5 - 2 * math.pi])))

    @given(floats(-100., 100.))
    def test_range(self, angle):
        wrapped = wrap_angle(angle)
        self.assertTrue(-math.pi - 1e-12 < wrapped <= math.pi + 1e-12)
        self.assertAlmostEqual(math.cos(wrapped), math.cos(angle))
        self.assertAlmostEqual(math.sin(wrapped), math.sin(angle))

    @given(floats(-100., 100.))
    def test_wrap_positive_range(self, angle):
        wrapped = wrap_positive(angle)
        self.assertTrue(0. <= wrapped <= 2 * math.pi)
        self.assertAlmostEqual(math.sin(wrapped), math.sin(angle))


class Test_rotate(TestCase):

    def test_quarter_turn(self):
        self.assertArrayAlmostEqual([0., 1.], rotate(math.pi / 2, [1., 0.]))

    def test_rows(self):
        rotated = rotate(math.pi, np.array([[1., 0.], [0., 2.]]))
        self.assertArrayAlmostEqual([[-1., 0.], [0., -2.]], rotated)

    def test_matches_matrix(self):
        v = np.array([0.3, -1.2])
        self.assertArrayAlmostEqual(rotation_matrix(0.7).dot(v), rotate(0.7, v))

    @given(floats(-10., 10.))
    def test_preserves_length(self, angle):
        self.assertAlmostEqual(np.linalg.norm(rotate(angle, [3., 4.])), 5.)

    def test_heading_vector(self):
        self.assertArrayAlmostEqual([0., -1.], heading_vector(-math.pi / 2))


class Test_Pose(TestCase):

    def test_heading_wrapped(self):
        pose = Pose((1., 2.), 3 * math.pi / 2)
        self.assertAlmostEqual(pose.heading, -math.pi / 2)
        self.assertEqual(pose.x, 1.)
        self.assertEqual(pose.y, 2.)

    def test_non_finite_position(self):
        with self.assertRaises(ValueError):
            Pose((np.nan, 0.), 0.)

    def test_equality(self):
        self.assertEqual(Pose((0., 1.), 0.5), Pose((0., 1.), 0.5))
        self.assertNotEqual(Pose((0., 1.), 0.5), Pose((0., 1.), 0.6))


class Test_VehicleState(TestCase):

    def test_speed_must_be_positive(self):
        with self.assertRaises(InvalidState):
            VehicleState(Pose((0., 0.), 0.), 0.)

    def test_z_dot(self):
        state = VehicleState(Pose((0., 0.), math.pi / 2), 2., 0.3)
        self.assertArrayAlmostEqual([0., 2., 0.3], state.z_dot)


class Test_step_dubins(TestCase):

    def test_quarter_arc(self):
        state = step_dubins(VehicleState(Pose((0., 0.), 0.), 1.), 1., math.pi / 2)
        self.assertArrayAlmostEqual([1., 1.], state.position)
        self.assertAlmostEqual(state.heading, math.pi / 2)
        self.assertEqual(state.angular_rate, 1.)

    def test_straight(self):
        state = step_dubins(VehicleState(Pose((0., 0.), 0.), 1.), 0., 2.)
        self.assertArrayAlmostEqual([2., 0.], state.position)
        self.assertEqual(state.heading, 0.)

    def test_dt_must_be_positive(self):
        with self.assertRaises(ValueError):
            step_dubins(VehicleState(Pose((0., 0.), 0.), 1.), 0., 0.)

    @given(floats(0.1, 3.), floats(0.05, 2.), floats(-math.pi, math.pi))
    def test_stays_on_turning_circle(self, omega, v, theta):
        start = VehicleState(Pose((0.5, -0.2), theta), v)
        center = start.position + v / omega * np.array([-math.sin(theta), math.cos(theta)])

        state = start
        for _ in range(10):
            state = step_dubins(state, omega, 0.1)

        self.assertAlmostEqual(np.linalg.norm(state.position - center), v / omega, 9)
        self.assertAlmostEqual(math.cos(state.heading), math.cos(theta + omega))
