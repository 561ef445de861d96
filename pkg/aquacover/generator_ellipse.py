""" Per-agent elliptic path generator.

The path is the ellipse (q - c)' S^2 (q - c) = 1 through the agent, tangent to its heading, with S symmetric positive
definite and stored as s = (S11, S12, S22). Its semi-axes are the reciprocal eigenvalues of S and must stay within
[s_min, s_max], which the Schur complement turns into four scalar barriers b2..b5 kept hard in the QP while the
performance barrier b1 stays soft as for circles.
"""
import logging
import math

import numpy as np

from . import params
from .coverage import DIRECTIONS, TWO_PI, Direction, ellipse_components, shape_matrix
from .generator_circle import (GeneratorStep, _GenConfig, _PathGenerator, _band, _pose_derivatives,
                               _score_derivative, _select)
from .qp import QpInfeasibleError, QpProblem, solve

logger = logging.getLogger(__name__)


class EllipseGenConfig(_GenConfig):

    _alphaCount = 5

    def __init__(self, s_min, s_max, gamma, n, lam=0.1, alphas=None, epsilon=None, hysteresis_margin=0.):

        _GenConfig.__init__(self, gamma, n, lam, alphas, epsilon, hysteresis_margin)

        self.s_min = float(s_min)
        self.s_max = float(s_max)

        if not self.s_max > self.s_min > 0:
            raise ValueError('semi-axis bounds must satisfy s_max > s_min > 0, got ({0}, {1})'.format(s_min, s_max))

    def __repr__(self):
        return 'EllipseGenConfig(s=[{0}, {1}], gamma={2}, n={3})'.format(self.s_min, self.s_max, self.gamma, self.n)


class EllipsePathParams(object):

    def __init__(self, shape, direction, center=None):

        self.shape = np.array(shape, dtype=float).reshape(3)
        self.direction = Direction.parse(direction)
        self.center = None if center is None else np.asarray(center, dtype=float)

        shape_matrix(self.shape)

    @property
    def S(self):
        return shape_matrix(self.shape)

    def recentre(self, pose):
        self.center = center_for_ellipse(self.shape, pose, self.direction)
        return self.center

    def __repr__(self):
        return 'EllipsePathParams(s=({0:.6g}, {1:.6g}, {2:.6g}), {3}, c={4})'.format(
            self.shape[0], self.shape[1], self.shape[2], self.direction.name, self.center)


def center_for_ellipse(s, z, direction):
    """ Centre of the ellipse of shape s through the agent's position and tangent to its heading,
    c = p +- S^-2 w / sqrt(w' S^-2 w) with w = (sin theta, -cos theta), + for Right

    :raises NonPdShape: if S is not positive definite
    """

    S = shape_matrix(s)
    w = np.array([math.sin(z.heading), -math.cos(z.heading)])
    offset = np.linalg.solve(S.dot(S), w)
    offset /= math.sqrt(w.dot(offset))

    if direction is Direction.RIGHT:
        return z.position + offset
    return z.position - offset


def _components(s, z, direction, points, sigma):
    return ellipse_components(center_for_ellipse(s, z, direction), s, z.heading, points, direction, sigma)


def local_score_e(s, z, direction, points, phi, sigma):

    if len(points) == 0:
        return 0.

    f, psi = _components(s, z, direction, points, sigma)
    return float(np.dot(f * (TWO_PI - psi), phi))


def direction_scores_e(s, z, points, phi, sigma):
    return dict((direction, local_score_e(s, z, direction, points, phi, sigma)) for direction in DIRECTIONS)


def barrier_b1_e(s, z, points, phi, sigma, config):
    return max(direction_scores_e(s, z, points, phi, sigma).values()) - config.share


def epsilon_active_set_e(s, z, points, phi, sigma, epsilon):
    if not epsilon > 0:
        raise ValueError('epsilon must be positive')
    return _band(direction_scores_e(s, z, points, phi, sigma), epsilon)


def select_direction_e(s, z, points, phi, sigma, current, hysteresis_margin=0.):
    return _select(direction_scores_e(s, z, points, phi, sigma), current, hysteresis_margin)


def gradients_e(s, z, points, phi, sigma, direction, step=None):
    """ Derivatives of the local score in the shape s, the pose (x, y, theta) and the importance weights

    :return: (dI/ds 3-vector, dI/dz 3-vector, dI/dphi)
    """

    s = np.array(s, dtype=float)
    phi = np.asarray(phi, dtype=float)

    if len(points) == 0:
        return np.zeros(3), np.zeros(3), np.zeros(0)

    f0, psi0 = _components(s, z, direction, points, sigma)

    def along(k):
        def components(value):
            shifted = s.copy()
            shifted[k] = value
            return _components(shifted, z, direction, points, sigma)
        return components

    d_s = np.array([_score_derivative(along(k), s[k], phi, f0, psi0, step) for k in range(3)])
    d_z = _pose_derivatives(lambda pose: _components(s, pose, direction, points, sigma), z, phi, f0, psi0, step)

    return d_s, d_z, f0 * (TWO_PI - psi0)


def _schur_denominators(s, s_min, s_max):
    s1, s2, s3 = s
    return 1. / s_min - s1, s1 - 1. / s_max


def _schur_term(s2, denominator):
    if s2 == 0.:
        return 0.
    if denominator <= params.denomTol:
        raise DegenerateShape('Schur complement denominator {0:.3g} too small'.format(denominator))
    return s2 * s2 / denominator


def barrier_shape(s, s_min, s_max):
    """ Shape barriers whose joint nonnegativity keeps both eigenvalues of S in [1/s_max, 1/s_min],

        b2 = 1/s_min - s1,   b3 = 1/s_min - s3 - s2^2 / (1/s_min - s1)
        b4 = s1 - 1/s_max,   b5 = s3 - 1/s_max - s2^2 / (s1 - 1/s_max)

    :raises DegenerateShape: if a Schur denominator is at or below params.denomTol while s2 != 0
    """

    s1, s2, s3 = (float(value) for value in s)
    upper, lower = _schur_denominators((s1, s2, s3), s_min, s_max)

    b2 = upper
    b3 = 1. / s_min - s3 - _schur_term(s2, upper)
    b4 = lower
    b5 = s3 - 1. / s_max - _schur_term(s2, lower)

    return b2, b3, b4, b5


def shape_gradients(s, s_min, s_max):
    """ (4, 3) array, the gradients of b2..b5 in s
    """

    s1, s2, s3 = (float(value) for value in s)
    upper, lower = _schur_denominators((s1, s2, s3), s_min, s_max)

    if s2 == 0.:
        g3 = np.array([0., 0., -1.])
        g5 = np.array([0., 0., 1.])
    else:
        _schur_term(s2, upper)
        _schur_term(s2, lower)
        g3 = -np.array([s2 * s2 / upper ** 2, 2. * s2 / upper, 1.])
        g5 = np.array([s2 * s2 / lower ** 2, -2. * s2 / lower, 1.])

    return np.array([[-1., 0., 0.], g3, [1., 0., 0.], g5])


def assemble_and_solve_e(s, state, points, phi, phi_dot, z_dot, config, sigma):
    """ Builds and solves the elliptic generator QP in (rho1, rho2, rho3, w), one soft b1 row per epsilon-active
    direction and the four hard shape rows grad b_k . rho + alpha_k b_k >= 0

    :return: GeneratorStep with rho as a 3-vector
    """

    z = state.pose
    phi = np.asarray(phi, dtype=float)
    phi_dot = np.asarray(phi_dot, dtype=float)
    alpha1 = config.alphas[0]

    scores = direction_scores_e(s, z, points, phi, sigma)
    b1 = max(scores.values()) - config.share
    active = _band(scores, config.epsilon)
    barriers = barrier_shape(s, config.s_min, config.s_max)

    problem = QpProblem([1., 1., 1., config.lam])
    for direction in active:
        d_s, d_z, d_phi = gradients_e(s, z, points, phi, sigma, direction)
        drift = float(np.dot(d_z, z_dot)) + float(np.dot(d_phi, phi_dot))
        problem.add_constraint(np.append(d_s, -1.), -(drift + alpha1 * b1), ('b1', direction))

    for k, (row, value) in enumerate(zip(shape_gradients(s, config.s_min, config.s_max), barriers)):
        problem.add_constraint(np.append(row, 0.), -config.alphas[k + 1] * value, 'b{0}'.format(k + 2))

    solution = solve(problem)
    if not solution.optimal:
        raise QpInfeasibleError('elliptic generator QP infeasible at s={0}'.format(tuple(s)))

    return GeneratorStep(solution.x[:3].copy(), float(solution.x[3]), b1, barriers, active, scores, solution)


def ellipse_axes(s):
    """ Closed form eigen decomposition of S, largest eigenvalue first. Eigenvectors are the columns of the returned
    matrix, each with a nonnegative first component (a positive second one when the first is zero)

    :return: (eigenvalues, eigenvectors)
    """

    s1, s2, s3 = (float(value) for value in shape_matrix(s)[[0, 0, 1], [0, 1, 1]])
    mean = (s1 + s3) / 2.
    radius = math.hypot((s1 - s3) / 2., s2)
    high, low = mean + radius, mean - radius

    if radius <= 1e-15 * max(1., abs(mean)):
        v = np.array([1., 0.])
    else:
        a = np.array([high - s3, s2])
        b = np.array([s2, high - s1])
        v = a if a.dot(a) >= b.dot(b) else b
        v = v / np.linalg.norm(v)

    def oriented(u):
        if u[0] < 0 or (u[0] == 0 and u[1] < 0):
            return -u
        return u

    v1 = oriented(v)
    v2 = oriented(np.array([-v1[1], v1[0]]))

    return np.array([high, low]), np.column_stack((v1, v2))


def ellipse_curvature(p, c, s):
    """ Curvature of the ellipse of shape s centred at c at its point p, a b / (a^2 sin^2 t + b^2 cos^2 t)^(3/2)
    with semi-axes a, b the reciprocal eigenvalues and t the parametric angle of p in the eigen frame
    """

    eigenvalues, vectors = ellipse_axes(s)
    rho_x, rho_y = 1. / eigenvalues
    local = vectors.T.dot(np.asarray(p, dtype=float) - np.asarray(c, dtype=float))
    t = math.atan2(local[1] / rho_y, local[0] / rho_x)

    return rho_x * rho_y / (rho_x ** 2 * math.sin(t) ** 2 + rho_y ** 2 * math.cos(t) ** 2) ** 1.5


def omega_star_ellipse(p, c, s, direction, vbar):
    """ angular rate that keeps a vehicle at speed vbar on the ellipse at p
    """
    return direction.zeta * vbar * ellipse_curvature(p, c, s)


class EllipseGenerator(_PathGenerator):

    def __init__(self, config, path, sigma, vbar):

        _PathGenerator.__init__(self, config, path, sigma, vbar)

        if min(barrier_shape(path.shape, config.s_min, config.s_max)) < 0:
            logger.warning('initial shape %s violates the semi-axis bounds, relying on the barriers to recover',
                           tuple(path.shape))
            self.flags.addFlag('Infeasible Shape Start')

    def _solve(self, state, points, phi, phi_dot):
        return assemble_and_solve_e(self.path.shape, state, points, phi, phi_dot, state.z_dot, self.config,
                                    self.sigma)

    def _integrate(self, rho, dt):
        self.path.shape = self.path.shape + np.asarray(rho) * dt
        shape_matrix(self.path.shape)

    def _select(self, pose, points, phi):
        return select_direction_e(self.path.shape, pose, points, phi, self.sigma, self.path.direction,
                                  self.config.hysteresis_margin)

    def omega_star(self, state):
        return omega_star_ellipse(state.position, self.path.center, self.path.shape, self.path.direction, self.vbar)

    def scores(self, pose, points):
        center = center_for_ellipse(self.path.shape, pose, self.path.direction)
        f, psi = ellipse_components(center, self.path.shape, pose.heading, points, self.path.direction, self.sigma)
        return f * (TWO_PI - psi)

    def __repr__(self):
        return 'EllipseGenerator({0})'.format(self.path)


class DegenerateShape(params.AquaCoverError):
    pass
