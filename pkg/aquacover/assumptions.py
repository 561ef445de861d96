""" This module handles the values the rest of the package assumes about the vehicles and the testbed. They come from
the identified actuator model and the tuning used on the pool testbed rather than from the coverage formulation, so
they are kept in one place. Overwriting an assumption requires loading this module and changing the dict before a
run is built, ie ``assumptions.vehicleAssumptions['losLookahead'] = 0.8``
"""
import numpy as np

vehicleAssumptions = {

    # identified first order angular-rate model, sign * gain / (s + pole) * exp(-delay s)
    'actuatorGain': 14.19,
    'actuatorPole': 3.766,  # 1/s
    'actuatorDelay': 0.016,  # s
    'actuatorSign': -1.,

    # angular-rate PI, u = -(kp e + ki int e), tuned for a 4 rad/s crossover
    'ratePiGains': (0.28, 1.0),
    'commandSaturation': 2.0,

    # heading PI of the lawnmower baseline
    'headingPiGains': (1.3, 0.14),

    # line of sight guidance
    'losLookahead': 0.5,
    'waypointSwitchDistance': 0.3,  # m

    # lawnmower plan
    'stripeWidth': 0.4,  # m
    'waypointSpacing': 0.2,  # m
    'minTurnRadius': 0.2,  # m

    # wall avoidance filter, probe points are in the body frame (x forward, y to port)
    'probeRight': (0.25, -0.15),  # m
    'probeLeft': (0.25, 0.15),  # m
    'wallAlphaRight': 0.15,
    'wallAlphaLeft': 0.15,
    'wallSlackWeight': 200.,
    'poolMargin': 0.05,  # m

    # inner step of the rate loop in actuated runs
    'innerStep': 0.004,  # s
}


def defaultEpsilon(gamma, n):
    """ Width of the epsilon-active set of turning directions when none is configured, 1% of one agent's share of the
    performance level. A zero level still gets a band of 1e-9 so exact ties stay active
    """

    return max(0.01 * gamma / n, 1e-9)


def poolWeight(halfExtents, margin=None):
    """ Weight matrix of the 4-norm pool barrier for an axis aligned pool, diag(1/a^4, 1/b^4) where (a, b) are the half
    extents shrunk by the margin

    :param halfExtents: (a, b) of the pool in m
    :param margin: distance kept from the wall in m, vehicleAssumptions['poolMargin'] if None
    """

    if margin is None:
        margin = vehicleAssumptions['poolMargin']

    a, b = np.asarray(halfExtents, dtype=float) - margin

    if a <= 0 or b <= 0:
        raise ValueError('pool margin {0} leaves no room inside half extents {1}'.format(margin, halfExtents))

    return np.diag([1. / a ** 4, 1. / b ** 4])
