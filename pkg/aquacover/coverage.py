""" Path quality metrics of circular and elliptic paths and the central Voronoi-like partition.

An agent following a closed path scores an observation point q by how well it will sense it at the closest point of
the path, weighted by how soon it gets there,

    g = f(p*, q) * (2 pi - psi)

where psi is the arc angle still to travel before reaching p*. Circles use the Euclidean closest point, ellipses use
a Sampson-like algebraic distance in place of f's distance. All metrics accept a single point or an (m, 2) array.
"""
import enum
import math

import numpy as np

from . import params
from .geometry import rotate, wrap_positive

TWO_PI = 2 * math.pi


class Direction(enum.Enum):
    """ Turning direction of a path, clockwise (Right) or counter clockwise (Left)
    """
    RIGHT = 'r'
    LEFT = 'l'

    @property
    def zeta(self):
        return -1. if self is Direction.RIGHT else 1.

    @property
    def other(self):
        return Direction.LEFT if self is Direction.RIGHT else Direction.RIGHT

    @classmethod
    def parse(cls, value):
        """ accepts a Direction, 'r'/'l' or 'right'/'left' in any case
        """
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        if text in ('r', 'right'):
            return cls.RIGHT
        if text in ('l', 'left'):
            return cls.LEFT
        raise ValueError('unknown direction {0!r}'.format(value))


DIRECTIONS = (Direction.RIGHT, Direction.LEFT)


def _snap(psi):
    """ arc angles a rounding error short of a full turn are the agent's own position
    """
    psi = wrap_positive(psi)
    return np.where(TWO_PI - psi <= params.angleTol, 0., psi)


def _scalar(value):
    value = np.asarray(value)
    return float(value) if value.ndim == 0 else value


# circles

def circle_closest_point(c, r, q):
    """ Closest point of the circle (c, r) to q, c + r (q - c) / |q - c|

    :raises DegeneratePoint: if q is within params.distTol of the centre
    """

    d = np.asarray(q, dtype=float) - np.asarray(c, dtype=float)
    dist = np.linalg.norm(d, axis=-1)

    if np.any(dist <= params.distTol):
        raise DegeneratePoint('point at the circle centre has no unique closest point')

    return np.asarray(c, dtype=float) + r * d / np.expand_dims(dist, -1)


def circle_arc_angle(c, r, theta_i, q, direction):
    """ Arc angle in [0, 2 pi) an agent at heading theta_i on the circle (c, r) travels before reaching the closest
    point to q, clockwise for Right and counter clockwise for Left
    """

    if not r > 0:
        raise ValueError('radius must be positive, got {0}'.format(r))

    d = np.asarray(q, dtype=float) - np.asarray(c, dtype=float)

    if direction is Direction.RIGHT:
        u = rotate(math.pi / 2 - theta_i, d)
        psi = math.pi - np.arctan2(u[..., 1], u[..., 0])
    else:
        u = rotate(-math.pi / 2 - theta_i, d)
        psi = math.pi + np.arctan2(u[..., 1], u[..., 0])

    return _scalar(_snap(psi))


def circle_components(c, r, theta_i, q, direction, sigma):
    """ Sensing performance at the closest point and arc angle of every point. A point at the centre is scored from
    any point of the circle (all are at distance r), so it never raises
    """

    d = np.asarray(q, dtype=float) - np.asarray(c, dtype=float)
    dist = np.linalg.norm(d, axis=-1)
    f = np.exp(-(dist - r) ** 2 / (2. * sigma ** 2))

    return f, circle_arc_angle(c, r, theta_i, q, direction)


def circle_point_score(c, r, z, q, direction, sigma):
    """ f(p*, q) (2 pi - psi) of a point q for an agent with pose z on the circle (c, r)

    :raises DegeneratePoint: if q is at the centre of the circle
    """

    p_star = circle_closest_point(c, r, q)
    d = p_star - np.asarray(q, dtype=float)
    f = np.exp(-np.sum(d * d, axis=-1) / (2. * sigma ** 2))

    return _scalar(f * (TWO_PI - circle_arc_angle(c, r, z.heading, q, direction)))


def circle_scores(c, r, theta_i, q, direction, sigma):
    """ vectorised circle_point_score that tolerates points at the centre
    """
    f, psi = circle_components(c, r, theta_i, q, direction, sigma)
    return f * (TWO_PI - psi)


# ellipses

def shape_matrix(s):
    """ Symmetric S from its entries (S11, S12, S22)

    :raises NonPdShape: if S is not positive definite
    """

    s1, s2, s3 = (float(value) for value in s)

    if not (s1 > 0 and s1 * s3 - s2 * s2 > 0):
        raise NonPdShape('shape {0} is not positive definite'.format((s1, s2, s3)))

    return np.array([[s1, s2], [s2, s3]])


def ellipse_agent_direction(s, theta_i, direction):
    """ Unit vector from the centre to the agent in the coordinates normalised by S, where the ellipse is the unit
    circle
    """

    S = shape_matrix(s)
    w = np.array([math.sin(theta_i), -math.cos(theta_i)])
    u = np.linalg.solve(S, w)
    u /= np.linalg.norm(u)

    return -u if direction is Direction.RIGHT else u


def sampson_distance(c, s, q):
    """ |sqrt((q - c)' S^2 (q - c)) - 1|, zero on the ellipse
    """

    S = shape_matrix(s)
    u = (np.asarray(q, dtype=float) - np.asarray(c, dtype=float)).dot(S)

    return _scalar(np.abs(np.linalg.norm(u, axis=-1) - 1.))


def ellipse_arc_angle(c, s, theta_i, q, direction):
    """ Arc angle in [0, 2 pi) measured in the coordinates normalised by S, from the agent to the point where the ray
    from the centre through q meets the ellipse. With S = I this is circle_arc_angle on the unit circle
    """

    S = shape_matrix(s)
    u_q = (np.asarray(q, dtype=float) - np.asarray(c, dtype=float)).dot(S)
    u_p = ellipse_agent_direction(s, theta_i, direction)

    # q expressed in a frame whose x axis points at the agent
    u = rotate(-math.atan2(u_p[1], u_p[0]), u_q)
    travelled = np.arctan2(u[..., 1], u[..., 0])

    if direction is Direction.RIGHT:
        travelled = -travelled

    return _scalar(_snap(travelled))


def ellipse_components(c, s, theta_i, q, direction, sigma):
    d = sampson_distance(c, s, q)
    f = np.exp(-np.asarray(d) ** 2 / (2. * sigma ** 2))

    return f, ellipse_arc_angle(c, s, theta_i, q, direction)


def ellipse_point_score(c, s, z, q, direction, sigma):
    """ exp(-d_s^2 / 2 sigma^2) (2 pi - psi) of a point q for an agent with pose z on the ellipse (c, S)
    """

    f, psi = ellipse_components(c, s, z.heading, q, direction, sigma)
    return _scalar(f * (TWO_PI - psi))


def ellipse_scores(c, s, theta_i, q, direction, sigma):
    """ vectorised ellipse_point_score taking the heading instead of the pose
    """
    f, psi = ellipse_components(c, s, theta_i, q, direction, sigma)
    return f * (TWO_PI - psi)


# partition

class Partition(object):
    """ Assignment of every observation point to the agent scoring it highest
    """

    def __init__(self, owner, n, timestamp=None):
        """
        :param owner: agent index of every point
        :param n: number of agents
        :param timestamp: simulation time the partition was computed at
        """

        self.owner = np.asarray(owner, dtype=int)
        self.n = int(n)
        self.timestamp = timestamp
        self._members = [np.flatnonzero(self.owner == i) for i in range(self.n)]

    def members(self, i):
        """ indices V_i of the points assigned to agent i
        """
        return self._members[i]

    @property
    def sets(self):
        return list(self._members)

    @property
    def m(self):
        return len(self.owner)

    def __repr__(self):
        return 'Partition(n={0}, sizes={1}, t={2})'.format(self.n, [len(v) for v in self._members], self.timestamp)


def compute_partition(scores, timestamp=None):
    """ Assigns every point to the arg max over agents of its score, ties go to the lowest agent index

    :param scores: (n, m) array of g_ij
    """

    scores = np.atleast_2d(np.asarray(scores, dtype=float))

    if not np.all(np.isfinite(scores)):
        raise ValueError('scores must be finite')

    return Partition(np.argmax(scores, axis=0), scores.shape[0], timestamp)


def global_objective(scores, phi, partition=None):
    """ J = sum_j max_i g_ij phi_j. Given a partition the sum runs over it instead, sum_i sum_(j in V_i) g_ij phi_j,
    which is never larger and equal for the arg max partition

    :param scores: (n, m) array of g_ij
    :param phi: (m,) importance weights
    """

    scores = np.atleast_2d(np.asarray(scores, dtype=float))
    phi = np.asarray(phi, dtype=float)

    if scores.shape[0] == 0 or scores.shape[1] == 0:
        return 0.

    if partition is None:
        return float(np.sum(np.max(scores, axis=0) * phi))

    chosen = scores[partition.owner, np.arange(scores.shape[1])]
    return float(np.sum(chosen * phi))


class DegeneratePoint(params.AquaCoverError):
    pass


class NonPdShape(params.AquaCoverError):
    pass
