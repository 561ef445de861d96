""" Planar poses, rotations and the Dubins kinematic integrator the rest of the package is built on.

Angles are in radians and wrapped to (-pi, pi], positions are 2-vectors in metres.
"""
import math

import numpy as np

from . import params


def wrap_angle(angle):
    """ Wraps an angle (or array of angles) to (-pi, pi]
    """
    return math.pi - np.mod(math.pi - angle, 2 * math.pi)


def wrap_positive(angle):
    """ Wraps an angle (or array of angles) to [0, 2 pi)
    """
    return np.mod(angle, 2 * math.pi)


def rotation_matrix(vartheta):
    c, s = math.cos(vartheta), math.sin(vartheta)
    return np.array([[c, -s], [s, c]])


def rotate(vartheta, v):
    """ Rotates v by vartheta counter clockwise, R_vartheta v

    :param vartheta: rotation angle in rad
    :param v: a 2-vector or an (m, 2) array of row vectors
    :return: rotated vector(s) with the shape of v
    """

    return np.asarray(v, dtype=float).dot(rotation_matrix(vartheta).T)


def heading_vector(theta):
    return np.array([math.cos(theta), math.sin(theta)])


class Pose(object):
    """ Planar pose, the position of the vehicle and its heading. The heading is wrapped on creation
    """

    def __init__(self, position, heading):

        self.position = np.array(position, dtype=float).reshape(2)
        self.heading = float(wrap_angle(heading))

        if not np.all(np.isfinite(self.position)):
            raise ValueError('pose position must be finite, got {0}'.format(self.position))

    @property
    def x(self):
        return self.position[0]

    @property
    def y(self):
        return self.position[1]

    def __eq__(self, other):
        return (isinstance(other, Pose) and np.array_equal(self.position, other.position)
                and self.heading == other.heading)

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return 'Pose(position=({0:.6g}, {1:.6g}), heading={2:.6g})'.format(self.x, self.y, self.heading)


class VehicleState(object):
    """ State of a constant speed Dubins vehicle, its pose plus the last applied angular rate
    """

    def __init__(self, pose, forward_speed, angular_rate=0.):

        if not forward_speed > 0:
            raise InvalidState('forward speed must be positive, got {0}'.format(forward_speed))

        self.pose = pose
        self.forward_speed = float(forward_speed)
        self.angular_rate = float(angular_rate)

    @property
    def position(self):
        return self.pose.position

    @property
    def heading(self):
        return self.pose.heading

    @property
    def velocity(self):
        """ time derivative of the position
        """
        return self.forward_speed * heading_vector(self.pose.heading)

    @property
    def z_dot(self):
        """ time derivative of (x, y, theta) under the last applied angular rate
        """
        vx, vy = self.velocity
        return np.array([vx, vy, self.angular_rate])

    def __repr__(self):
        return 'VehicleState({0}, v={1:.6g}, omega={2:.6g})'.format(self.pose, self.forward_speed,
                                                                    self.angular_rate)


def step_dubins(state, omega, dt):
    """ Integrates the Dubins model x' = v cos(theta), y' = v sin(theta), theta' = omega over dt with constant omega.
    The solution is the exact circular arc, or a straight segment when |omega| <= params.omegaTol

    :param state: VehicleState at the start of the step
    :param omega: angular rate applied over the step in rad/s
    :param dt: step length in s
    :return: VehicleState at the end of the step with angular_rate = omega
    """

    if not dt > 0:
        raise ValueError('dt must be positive, got {0}'.format(dt))

    v = state.forward_speed
    x, y = state.position
    theta = state.heading

    if abs(omega) > params.omegaTol:
        theta_end = theta + omega * dt
        x += v / omega * (math.sin(theta_end) - math.sin(theta))
        y -= v / omega * (math.cos(theta_end) - math.cos(theta))
    else:
        theta_end = theta
        x += v * dt * math.cos(theta)
        y += v * dt * math.sin(theta)

    return VehicleState(Pose((x, y), theta_end), v, omega)


class InvalidState(params.AquaCoverError):
    pass
