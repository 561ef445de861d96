import math

import numpy as np
from hypothesis import given, assume
from hypothesis.strategies import floats, sampled_from

from .patches import TestCase
from ..geometry import Pose
from ..coverage import (Direction, DIRECTIONS, TWO_PI, circle_closest_point, circle_arc_angle, circle_components,
                        circle_point_score, circle_scores, shape_matrix, ellipse_agent_direction, sampson_distance,
                        ellipse_arc_angle, ellipse_point_score, ellipse_scores, Partition, compute_partition,
                        global_objective, DegeneratePoint, NonPdShape)


class Test_Direction(TestCase):

    def test_zeta(self):
        self.assertEqual(Direction.RIGHT.zeta, -1.)
        self.assertEqual(Direction.LEFT.zeta, 1.)

    def test_other(self):
        self.assertIs(Direction.RIGHT.other, Direction.LEFT)
        self.assertIs(Direction.LEFT.other, Direction.RIGHT)

    def test_parse(self):
        self.assertIs(Direction.parse('Right'), Direction.RIGHT)
        self.assertIs(Direction.parse('l'), Direction.LEFT)
        self.assertIs(Direction.parse(Direction.LEFT), Direction.LEFT)

    def test_parse_unknown(self):
        with self.assertRaises(ValueError):
            Direction.parse('up')


class Test_circle_closest_point(TestCase):

    def test_closest_point(self):
        self.assertArrayAlmostEqual([0.6, 0.8], circle_closest_point((0., 0.), 1., (3., 4.)))

    def test_inside_point(self):
        self.assertArrayAlmostEqual([2., 0.], circle_closest_point((1., 0.), 1., (1.5, 0.)))

    def test_centre_is_degenerate(self):
        with self.assertRaises(DegeneratePoint):
            circle_closest_point((1., 1.), 1., (1., 1.))


class Test_circle_arc_angle(TestCase):
    """ unit circle at the origin, a Right agent at (0, 1) heading +x and a Left agent at (0, -1) heading +x
    """

    def test_right_quarter(self):
        self.assertAlmostEqual(circle_arc_angle((0., 0.), 1., 0., (2., 0.), Direction.RIGHT), math.pi / 2)

    def test_right_half(self):
        self.assertAlmostEqual(circle_arc_angle((0., 0.), 1., 0., (0., -2.), Direction.RIGHT), math.pi)

    def test_right_three_quarters(self):
        self.assertAlmostEqual(circle_arc_angle((0., 0.), 1., 0., (-2., 0.), Direction.RIGHT), 3 * math.pi / 2)

    def test_right_own_ray_is_zero(self):
        self.assertAlmostEqual(circle_arc_angle((0., 0.), 1., 0., (0., 2.), Direction.RIGHT), 0.)

    def test_left_quarter(self):
        self.assertAlmostEqual(circle_arc_angle((0., 0.), 1., 0., (2., 0.), Direction.LEFT), math.pi / 2)

    def test_left_three_quarters(self):
        self.assertAlmostEqual(circle_arc_angle((0., 0.), 1., 0., (-2., 0.), Direction.LEFT), 3 * math.pi / 2)

    def test_vectorised(self):
        psi = circle_arc_angle((0., 0.), 1., 0., np.array([[2., 0.], [0., -2.]]), Direction.RIGHT)
        self.assertArrayAlmostEqual([math.pi / 2, math.pi], psi)

    def test_radius_must_be_positive(self):
        with self.assertRaises(ValueError):
            circle_arc_angle((0., 0.), 0., 0., (1., 0.), Direction.RIGHT)

    @given(floats(-3., 3.), floats(-3., 3.), floats(-math.pi, math.pi), sampled_from(DIRECTIONS))
    def test_range(self, x, y, theta, direction):
        assume(math.hypot(x, y) > 1e-3)
        psi = circle_arc_angle((0., 0.), 1., theta, (x, y), direction)
        self.assertTrue(0. <= psi < TWO_PI)


class Test_circle_scores(TestCase):

    def test_agent_position_scores_full_turn(self):
        score = circle_point_score((0., 0.), 1., Pose((0., 1.), 0.), (0., 1.), Direction.RIGHT, 0.3)
        self.assertAlmostEqual(score, TWO_PI)

    def test_matches_point_score(self):
        q = np.array([[2., 0.], [0.5, -0.5], [-1., 1.5]])
        scores = circle_scores((0., 0.), 1., 0., q, Direction.RIGHT, 0.4)
        for j in range(len(q)):
            self.assertAlmostEqual(scores[j], circle_point_score((0., 0.), 1., Pose((0., 1.), 0.), q[j],
                                                                 Direction.RIGHT, 0.4))

    def test_centre_tolerated(self):
        f, psi = circle_components((0., 0.), 0.5, 0., np.array([[0., 0.]]), Direction.LEFT, 0.5)
        self.assertAlmostEqual(f[0], math.exp(-0.5))

    def test_point_score_at_centre_raises(self):
        with self.assertRaises(DegeneratePoint):
            circle_point_score((0., 0.), 1., Pose((0., 1.), 0.), (0., 0.), Direction.RIGHT, 0.3)


class Test_shape_matrix(TestCase):

    def test_symmetric(self):
        self.assertArrayAlmostEqual([[2., 0.5], [0.5, 1.]], shape_matrix((2., 0.5, 1.)))

    def test_not_positive_definite(self):
        with self.assertRaises(NonPdShape):
            shape_matrix((1., 2., 1.))

    def test_negative_diagonal(self):
        with self.assertRaises(NonPdShape):
            shape_matrix((-1., 0., -1.))


class Test_ellipse(TestCase):

    def test_sampson_on_ellipse(self):
        self.assertAlmostEqual(sampson_distance((0., 0.), (2., 0., 2.), (0.5, 0.)), 0.)

    def test_sampson_outside(self):
        self.assertAlmostEqual(sampson_distance((0., 0.), (2., 0., 2.), (1., 0.)), 1.)

    def test_agent_direction_unit_shape(self):
        self.assertArrayAlmostEqual([0., 1.], ellipse_agent_direction((1., 0., 1.), 0., Direction.RIGHT), atol=1e-12)
        self.assertArrayAlmostEqual([0., -1.], ellipse_agent_direction((1., 0., 1.), 0., Direction.LEFT), atol=1e-12)

    @given(floats(-3., 3.), floats(-3., 3.), floats(-math.pi, math.pi), sampled_from(DIRECTIONS))
    def test_unit_shape_matches_unit_circle(self, x, y, theta, direction):
        assume(math.hypot(x, y) > 1e-2)
        circle = circle_arc_angle((0., 0.), 1., theta, (x, y), direction)
        assume(1e-6 < circle < TWO_PI - 1e-6)
        self.assertAlmostEqual(ellipse_arc_angle((0., 0.), (1., 0., 1.), theta, (x, y), direction), circle, 9)

    def test_agent_position_scores_full_turn(self):
        # Right agent on the ellipse x^2 / 4 + y^2 = 1 at (0, 1) heading +x
        score = ellipse_point_score((0., 0.), (0.5, 0., 1.), Pose((0., 1.), 0.), (0., 1.), Direction.RIGHT, 0.3)
        self.assertAlmostEqual(score, TWO_PI)

    def test_right_quarter_on_major_axis(self):
        psi = ellipse_arc_angle((0., 0.), (0.5, 0., 1.), 0., (2., 0.), Direction.RIGHT)
        self.assertAlmostEqual(psi, math.pi / 2)

    def test_vectorised_matches_point_score(self):
        q = np.array([[1.5, 0.2], [-0.3, -0.8]])
        scores = ellipse_scores((0., 0.), (0.5, 0.1, 1.), 0.3, q, Direction.LEFT, 0.4)
        for j in range(len(q)):
            self.assertAlmostEqual(scores[j], ellipse_point_score((0., 0.), (0.5, 0.1, 1.), Pose((0., 0.), 0.3), q[j],
                                                                  Direction.LEFT, 0.4))


class Test_partition(TestCase):

    def setUp(self):
        self.scores = np.array([[1., 2., 3.], [3., 2., 1.]])

    def test_argmax_ties_to_lowest_index(self):
        partition = compute_partition(self.scores, timestamp=1.5)
        self.assertArrayAlmostEqual([1, 0, 0], partition.owner)
        self.assertArrayAlmostEqual([1, 2], partition.members(0))
        self.assertArrayAlmostEqual([0], partition.members(1))
        self.assertEqual(partition.m, 3)
        self.assertEqual(partition.timestamp, 1.5)

    def test_sets_cover_every_point_once(self):
        partition = compute_partition(self.scores)
        self.assertItemsEqual([0, 1, 2], np.concatenate(partition.sets))

    def test_non_finite_scores(self):
        with self.assertRaises(ValueError):
            compute_partition(np.array([[1., np.nan]]))

    def test_objective(self):
        self.assertAlmostEqual(global_objective(self.scores, np.ones(3)), 8.)

    def test_objective_given_partition(self):
        self.assertAlmostEqual(global_objective(self.scores, np.ones(3), Partition([0, 0, 0], 2)), 6.)
        self.assertAlmostEqual(global_objective(self.scores, np.ones(3), compute_partition(self.scores)), 8.)

    def test_no_agents(self):
        self.assertEqual(global_objective(np.zeros((0, 5)), np.ones(5)), 0.)

    @given(floats(0., 10.), floats(0., 10.), floats(0., 10.), floats(0., 10.), floats(0., 1.), floats(0., 1.))
    def test_partitioned_objective_never_larger(self, a, b, c, d, phi_1, phi_2):
        scores = np.array([[a, b], [c, d]])
        phi = np.array([phi_1, phi_2])
        best = global_objective(scores, phi)
        for owner in ([0, 0], [0, 1], [1, 0], [1, 1]):
            self.assertTrue(global_objective(scores, phi, Partition(owner, 2)) <= best + 1e-9)
        self.assertAlmostEqual(global_objective(scores, phi, compute_partition(scores)), best)
