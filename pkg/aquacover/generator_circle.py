""" Per-agent circular path generator.

Every agent keeps a circle through its own position, tangent to its heading, described by a radius and a turning
direction. Each control step the radius rate rho is the smallest one keeping the nonsmooth performance barrier

    b1 = max_X I^X(r) - gamma / n,     I^X = sum_(j in V_i) g_ij phi_j

nonnegative (softly, through the slack w) while the radius bounds b2 = r - r_min and b3 = r_max - r stay hard. The
barrier is a max over the two directions so one soft row is added for every direction within epsilon of the max.
"""
import logging
import math

import numpy as np

from . import params
from .assumptions import defaultEpsilon
from .coverage import DIRECTIONS, Direction, TWO_PI, circle_components
from .flags import Flags
from .geometry import Pose, wrap_angle
from .qp import QpInfeasibleError, QpProblem, solve

logger = logging.getLogger(__name__)


class _GenConfig(object):
    """ settings shared by the circular and elliptic generators
    """

    _alphaCount = 3

    def __init__(self, gamma, n, lam=0.1, alphas=None, epsilon=None, hysteresis_margin=0.):

        self.gamma = float(gamma)
        self.n = int(n)
        self.lam = float(lam)
        self.alphas = tuple(float(a) for a in (alphas if alphas is not None else (1.,) * self._alphaCount))
        self._epsilon = None if epsilon is None else float(epsilon)
        self.hysteresis_margin = float(hysteresis_margin)

        if self.gamma < 0:
            raise ValueError('gamma must not be negative')
        if self.n < 1:
            raise ValueError('fleet size must be at least 1')
        if self.lam <= 0:
            raise ValueError('slack weight lambda must be positive')
        if len(self.alphas) != self._alphaCount or min(self.alphas) <= 0:
            raise ValueError('expected {0} positive alpha slopes, got {1}'.format(self._alphaCount, self.alphas))
        if self._epsilon is not None and self._epsilon <= 0:
            raise ValueError('epsilon must be positive')
        if self.hysteresis_margin < 0:
            raise ValueError('hysteresis margin must not be negative')

    @property
    def epsilon(self):
        if self._epsilon is not None:
            return self._epsilon
        return defaultEpsilon(self.gamma, self.n)

    @property
    def share(self):
        """ gamma / n, the part of the performance level each agent certifies
        """
        return self.gamma / self.n


class CircleGenConfig(_GenConfig):

    def __init__(self, r_min, r_max, gamma, n, lam=0.1, alphas=None, epsilon=None, hysteresis_margin=0.):

        _GenConfig.__init__(self, gamma, n, lam, alphas, epsilon, hysteresis_margin)

        self.r_min = float(r_min)
        self.r_max = float(r_max)

        if not self.r_max > self.r_min > 0:
            raise ValueError('radius bounds must satisfy r_max > r_min > 0, got ({0}, {1})'.format(r_min, r_max))

    def __repr__(self):
        return 'CircleGenConfig(r=[{0}, {1}], gamma={2}, n={3})'.format(self.r_min, self.r_max, self.gamma, self.n)


class CirclePathParams(object):

    def __init__(self, radius, direction, center=None):

        self.radius = float(radius)
        self.direction = Direction.parse(direction)
        self.center = None if center is None else np.asarray(center, dtype=float)

    def recentre(self, pose):
        self.center = center_for(self.radius, pose, self.direction)
        return self.center

    def __repr__(self):
        return 'CirclePathParams(r={0:.6g}, {1}, c={2})'.format(self.radius, self.direction.name, self.center)


class GeneratorStep(object):
    """ what one generator update decided, kept for the run log
    """

    def __init__(self, rho, w, b1, barriers, active, scores, solution=None):

        self.rho = rho
        self.w = w
        self.b1 = b1
        self.barriers = barriers
        self.active = active
        self.scores = scores
        self.solution = solution
        self.omega_star = None

    def __repr__(self):
        return 'GeneratorStep(rho={0}, w={1:.6g}, b1={2:.6g})'.format(self.rho, self.w, self.b1)


def center_for(r, z, direction):
    """ Centre of the circle of radius r through the agent's position and tangent to its heading, to its right for
    Right and to its left for Left
    """

    normal = np.array([math.sin(z.heading), -math.cos(z.heading)])

    if direction is Direction.RIGHT:
        return z.position + r * normal
    return z.position - r * normal


def _components(r, z, direction, points, sigma):
    return circle_components(center_for(r, z, direction), r, z.heading, points, direction, sigma)


def local_score(r, z, direction, points, phi, sigma):
    """ I = sum_j g_ij phi_j over the agent's points for the circle (r, direction) through z
    """

    if len(points) == 0:
        return 0.

    f, psi = _components(r, z, direction, points, sigma)
    return float(np.dot(f * (TWO_PI - psi), phi))


def direction_scores(r, z, points, phi, sigma):
    return dict((direction, local_score(r, z, direction, points, phi, sigma)) for direction in DIRECTIONS)


def barrier_b1(r, z, points, phi, sigma, config):
    return max(direction_scores(r, z, points, phi, sigma).values()) - config.share


def barrier_b2_b3(r, config):
    return r - config.r_min, config.r_max - r


def _band(scores, epsilon):
    """ directions scoring within epsilon of the best, in the order of DIRECTIONS
    """

    best = max(scores.values())
    return [direction for direction in DIRECTIONS if scores[direction] >= best - epsilon]


def epsilon_active_set(r, z, points, phi, sigma, epsilon):
    if not epsilon > 0:
        raise ValueError('epsilon must be positive')
    return _band(direction_scores(r, z, points, phi, sigma), epsilon)


def _select(scores, current, hysteresis_margin):
    challenger = current.other
    if scores[challenger] > scores[current] + hysteresis_margin:
        return challenger
    return current


def select_direction(r, z, points, phi, sigma, current, hysteresis_margin=0.):
    """ the best scoring direction, the current one is kept unless the other beats it by more than the margin
    """
    return _select(direction_scores(r, z, points, phi, sigma), current, hysteresis_margin)


def _fd_step(value, step=None):
    if step is not None:
        return step
    return params.fdRelStep * max(1., abs(value))


def _score_derivative(components, value, phi, f0, psi0, step=None):
    """ Central difference of sum_j f_j (2 pi - psi_j) phi_j in a scalar. The arc angles are differenced modulo 2 pi
    so a point on the agent's own ray contributes the slope of its branch and not the jump between branches

    :param components: value -> (f, psi) per point
    """

    h = _fd_step(value, step)
    f_plus, psi_plus = components(value + h)
    f_minus, psi_minus = components(value - h)

    df = (f_plus - f_minus) / (2. * h)
    dpsi = wrap_angle(psi_plus - psi_minus) / (2. * h)

    return float(np.dot(df * (TWO_PI - psi0) - f0 * dpsi, phi))


def _pose_derivatives(components_at, z, phi, f0, psi0, step=None):
    """ derivatives of the score in x, y and theta of the pose, components_at(pose) -> (f, psi)
    """

    x, y = z.position
    theta = z.heading

    return np.array([
        _score_derivative(lambda v: components_at(Pose((v, y), theta)), x, phi, f0, psi0, step),
        _score_derivative(lambda v: components_at(Pose((x, v), theta)), y, phi, f0, psi0, step),
        _score_derivative(lambda v: components_at(Pose((x, y), v)), theta, phi, f0, psi0, step),
    ])


def gradients(r, z, points, phi, sigma, direction, step=None):
    """ Derivatives of the local score I^direction in the radius, the pose (x, y, theta) and the importance weights

    :param step: finite difference step, params.fdRelStep * max(1, |var|) when None
    :return: (dI/dr, dI/dz, dI/dphi)
    """

    phi = np.asarray(phi, dtype=float)

    if len(points) == 0:
        return 0., np.zeros(3), np.zeros(0)

    f0, psi0 = _components(r, z, direction, points, sigma)

    d_r = _score_derivative(lambda v: _components(v, z, direction, points, sigma), r, phi, f0, psi0, step)
    d_z = _pose_derivatives(lambda pose: _components(r, pose, direction, points, sigma), z, phi, f0, psi0, step)

    return d_r, d_z, f0 * (TWO_PI - psi0)


def assemble_and_solve(r, state, points, phi, phi_dot, z_dot, config, sigma):
    """ Builds and solves the generator QP in (rho, w),

        minimise |rho|^2 + lambda w^2
        s.t.     dI/dr rho + dI/dz z_dot + dI/dphi phi_dot + alpha1 b1 >= w    for every epsilon-active direction
                 rho + alpha2 b2 >= 0,  -rho + alpha3 b3 >= 0

    :param z_dot: (x', y', theta') of the agent under the last applied angular rate
    :param phi_dot: importance rates of the agent's points
    :return: GeneratorStep
    """

    z = state.pose
    phi = np.asarray(phi, dtype=float)
    phi_dot = np.asarray(phi_dot, dtype=float)
    alpha1, alpha2, alpha3 = config.alphas

    scores = direction_scores(r, z, points, phi, sigma)
    b1 = max(scores.values()) - config.share
    active = _band(scores, config.epsilon)
    b2, b3 = barrier_b2_b3(r, config)

    problem = QpProblem([1., config.lam])
    for direction in active:
        d_r, d_z, d_phi = gradients(r, z, points, phi, sigma, direction)
        drift = float(np.dot(d_z, z_dot)) + float(np.dot(d_phi, phi_dot))
        problem.add_constraint([d_r, -1.], -(drift + alpha1 * b1), ('b1', direction))

    problem.add_constraint([1., 0.], -alpha2 * b2, 'b2')
    problem.add_constraint([-1., 0.], -alpha3 * b3, 'b3')

    solution = solve(problem)
    if not solution.optimal:
        raise QpInfeasibleError('circular generator QP infeasible at r={0}'.format(r))

    rho, w = solution.x
    return GeneratorStep(float(rho), float(w), b1, (b2, b3), active, scores, solution)


def omega_star(r, direction, vbar):
    """ angular rate that keeps a vehicle at speed vbar on the circle
    """

    if not r > 0:
        raise ValueError('radius must be positive, got {0}'.format(r))
    return direction.zeta * vbar / r


class _PathGenerator(object):
    """ Holds one agent's path parameters between steps and runs the update sequence: solve the QP, integrate the path
    parameters, reselect the direction, recentre the path and compute the angular rate that follows it
    """

    def __init__(self, config, path, sigma, vbar):

        self.config = config
        self.path = path
        self.sigma = float(sigma)
        self.vbar = float(vbar)
        self.flags = Flags()

    def step(self, state, points, phi, phi_dot, dt):
        """
        :param state: VehicleState, its angular_rate is the last applied one
        :param points: (k, 2) observation points of the agent's partition set
        :param phi: importance weights of those points
        :param phi_dot: their rates
        :param dt: control step (s)
        :return: GeneratorStep with omega_star filled in
        """

        points = np.asarray(points, dtype=float).reshape(-1, 2)

        if len(points) == 0:
            self.flags.addFlag('Empty Partition')

        result = self._solve(state, points, phi, phi_dot)

        if result.w < -params.feasTol:
            self.flags.addFlag('Slack Active')

        self._integrate(result.rho, dt)

        direction = self._select(state.pose, points, phi)
        if direction is not self.path.direction:
            logger.debug('direction switched to %s', direction.name)
            self.flags.addFlag('Direction Switched')
            self.path.direction = direction

        self.path.recentre(state.pose)
        result.omega_star = self.omega_star(state)

        return result

    def _solve(self, state, points, phi, phi_dot):
        raise NotImplementedError

    def _integrate(self, rho, dt):
        raise NotImplementedError

    def _select(self, pose, points, phi):
        raise NotImplementedError

    def omega_star(self, state):
        raise NotImplementedError


class CircleGenerator(_PathGenerator):

    def _solve(self, state, points, phi, phi_dot):
        return assemble_and_solve(self.path.radius, state, points, phi, phi_dot, state.z_dot, self.config,
                                  self.sigma)

    def _integrate(self, rho, dt):
        self.path.radius += rho * dt

    def _select(self, pose, points, phi):
        return select_direction(self.path.radius, pose, points, phi, self.sigma, self.path.direction,
                                self.config.hysteresis_margin)

    def omega_star(self, state):
        return omega_star(self.path.radius, self.path.direction, self.vbar)

    def scores(self, pose, points):
        """ g of every point for the current circle, used for the central partition
        """
        center = center_for(self.path.radius, pose, self.path.direction)
        f, psi = circle_components(center, self.path.radius, pose.heading, points, self.path.direction, self.sigma)
        return f * (TWO_PI - psi)

    def __repr__(self):
        return 'CircleGenerator({0})'.format(self.path)
