""" Wall avoidance filter. The pool is the 4-norm ball

    mu(p) = ((p - o) * (p - o))' P ((p - o) * (p - o)) <= 1

and two probe points ahead of the vehicle, one on each side, are kept inside it by control barrier functions
b = 1 - mu(probe). The filter changes the generator's angular rate as little as possible; the row of the right probe
is hard and the row of the left probe is softened with a slack, so the vehicle escapes a corner by turning right.
"""
import logging
import math

import numpy as np

from .assumptions import poolWeight, vehicleAssumptions
from .geometry import heading_vector, rotate
from .qp import QpProblem, solve

logger = logging.getLogger(__name__)


class PoolShape(object):

    def __init__(self, center, weight):

        self.center = np.array(center, dtype=float).reshape(2)
        self.weight = np.array(weight, dtype=float).reshape(2, 2)

        if not np.allclose(self.weight, self.weight.T) or np.linalg.eigvalsh(self.weight).min() <= 0:
            raise ValueError('pool weight must be symmetric positive definite')

    @classmethod
    def axis_aligned(cls, center, half_extents, margin=None):
        """ pool of the given half extents whose barrier boundary sits margin inside the walls
        """
        return cls(center, poolWeight(half_extents, margin))

    def __repr__(self):
        return 'PoolShape(center={0}, weight={1})'.format(self.center.tolist(), self.weight.tolist())


class BodyProbePoints(object):
    """ probe points in the body frame, x forward and y to port
    """

    def __init__(self, right=None, left=None):

        self.right = np.array(vehicleAssumptions['probeRight'] if right is None else right, dtype=float)
        self.left = np.array(vehicleAssumptions['probeLeft'] if left is None else left, dtype=float)

        if self.right[0] <= 0 or self.left[0] <= 0:
            raise ValueError('probe points must lie ahead of the vehicle')

    def __repr__(self):
        return 'BodyProbePoints(right={0}, left={1})'.format(self.right.tolist(), self.left.tolist())


class FilterResult(object):

    def __init__(self, omega_ref, slack, b_right, b_left, fallback=False):

        self.omega_ref = omega_ref
        self.slack = slack
        self.b_right = b_right
        self.b_left = b_left
        self.fallback = fallback

    def __repr__(self):
        return 'FilterResult(omega_ref={0:.6g}, slack={1:.6g}, b=({2:.6g}, {3:.6g}))'.format(
            self.omega_ref, self.slack, self.b_right, self.b_left)


def pool_mu(p, pool):
    d = np.asarray(p, dtype=float) - pool.center
    squared = d * d
    return float(squared.dot(pool.weight).dot(squared))


def pool_mu_gradient(p, pool):
    """ 4 diag(p - o) P ((p - o) * (p - o))
    """
    d = np.asarray(p, dtype=float) - pool.center
    return 4. * d * pool.weight.dot(d * d)


def probe_position(z, probe):
    return z.position + rotate(z.heading, probe)


def pool_barrier(z, probe, pool):
    return 1. - pool_mu(probe_position(z, probe), pool)


def _barrier_row(z, probe, vbar, alpha, pool):
    """ (a, xi) such that the barrier condition of a probe reads a omega + xi >= 0
    """

    gradient = pool_mu_gradient(probe_position(z, probe), pool)
    coefficient = -float(gradient.dot(rotate(z.heading + math.pi / 2, probe)))
    xi = -float(gradient.dot(vbar * heading_vector(z.heading))) + alpha * pool_barrier(z, probe, pool)

    return coefficient, xi


def filter_omega(z, vbar, omega_star, pool, probes=None, alphas=None, lambda_ca=None):
    """ Closest angular rate to omega_star keeping the probe barriers' derivative above -alpha b,

        minimise  (omega - omega_star)^2 / 2 + lambda_ca w^2 / 2
        s.t.      a_right omega + xi_right >= 0,   a_left omega + xi_left >= w

    Falls back to omega_star when the hard row cannot be met (a_right = 0 with xi_right < 0)

    :param z: Pose of the vehicle
    :param alphas: (alpha_right, alpha_left)
    :return: FilterResult
    """

    probes = probes or BodyProbePoints()
    if alphas is None:
        alphas = (vehicleAssumptions['wallAlphaRight'], vehicleAssumptions['wallAlphaLeft'])
    if lambda_ca is None:
        lambda_ca = vehicleAssumptions['wallSlackWeight']

    a_right, xi_right = _barrier_row(z, probes.right, vbar, alphas[0], pool)
    a_left, xi_left = _barrier_row(z, probes.left, vbar, alphas[1], pool)

    b_right = pool_barrier(z, probes.right, pool)
    b_left = pool_barrier(z, probes.left, pool)

    problem = QpProblem([0.5, 0.5 * lambda_ca], [-omega_star, 0.])
    problem.add_constraint([a_right, 0.], -xi_right, 'right')
    problem.add_constraint([a_left, -1.], -xi_left, 'left')

    solution = solve(problem)
    if not solution.optimal:
        logger.warning('wall filter infeasible at %s, passing omega* through', z)
        return FilterResult(omega_star, 0., b_right, b_left, fallback=True)

    omega_ref, slack = solution.x
    return FilterResult(float(omega_ref), float(slack), b_right, b_left)
