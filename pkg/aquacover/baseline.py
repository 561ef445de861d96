""" Lawnmower baseline: a closed boustrophedon loop per region, followed with line of sight guidance and a heading PI.

Stripes run along the long side of the region, one stripe width apart, joined at the ends by half circles of radius
stripe_width / 2. The loop is closed by a lane down the left edge of the region; with an odd number of stripes the
loop first turns back onto the second to last stripe so it reaches the left edge heading the right way.
"""
import logging
import math

import numpy as np
import pandas as pd

from . import params
from .assumptions import vehicleAssumptions
from .geometry import rotate, wrap_angle

logger = logging.getLogger(__name__)


class LawnmowerPlan(object):
    """ Closed loop of waypoints, the segment after the last waypoint leads back to the first
    """

    def __init__(self, waypoints, stripe_width, spacing, stripe_count, switch_distance=None, lookahead=None):

        self.waypoints = np.asarray(waypoints, dtype=float)
        self.stripe_width = stripe_width
        self.spacing = spacing
        self.stripe_count = stripe_count
        self.switch_distance = (vehicleAssumptions['waypointSwitchDistance'] if switch_distance is None
                                else switch_distance)
        self.lookahead = vehicleAssumptions['losLookahead'] if lookahead is None else lookahead

    def __len__(self):
        return len(self.waypoints)

    def segment(self, k):
        """ (start, end) of segment k
        """
        return self.waypoints[k % len(self)], self.waypoints[(k + 1) % len(self)]

    def nearest_segment(self, p):
        """ index of the segment closest to p
        """

        starts = self.waypoints
        ends = np.roll(self.waypoints, -1, axis=0)
        d = ends - starts
        t = np.clip(np.sum((np.asarray(p) - starts) * d, axis=1) / np.sum(d * d, axis=1), 0., 1.)
        closest = starts + t[:, np.newaxis] * d

        return int(np.argmin(np.linalg.norm(closest - p, axis=1)))

    def length(self):
        return float(np.sum(np.linalg.norm(np.roll(self.waypoints, -1, axis=0) - self.waypoints, axis=1)))

    def to_dataframe(self):
        return pd.DataFrame({'k': np.arange(len(self)), 'x': self.waypoints[:, 0], 'y': self.waypoints[:, 1]})

    def __repr__(self):
        return 'LawnmowerPlan({0} stripes, {1} waypoints, {2:.4g} m)'.format(self.stripe_count, len(self),
                                                                            self.length())


def _line(start, end):
    return 'line', np.asarray(start, dtype=float), np.asarray(end, dtype=float)


def _arc(center, radius, start_angle, sweep):
    return 'arc', np.asarray(center, dtype=float), radius, start_angle, sweep


def _primitive_length(primitive):
    if primitive[0] == 'line':
        return float(np.linalg.norm(primitive[2] - primitive[1]))
    return abs(primitive[2] * primitive[4])


def _sample(primitive, fraction):
    if primitive[0] == 'line':
        return primitive[1] + fraction * (primitive[2] - primitive[1])
    _, center, radius, start_angle, sweep = primitive
    angle = start_angle + fraction * sweep
    return center + radius * np.array([math.cos(angle), math.sin(angle)])


def _stripe_primitives(origin, extent, stripe_width):
    x0, y0 = origin
    width, height = extent
    turn = stripe_width / 2.

    count = int(math.floor(height / stripe_width + 1e-9)) + 1
    offset = (height - (count - 1) * stripe_width) / 2.
    ys = [y0 + offset + k * stripe_width for k in range(count)]
    x_left, x_right = x0 + turn, x0 + width - turn

    primitives = []
    for k, y in enumerate(ys):
        if k % 2 == 0:
            primitives.append(_line((x_left, y), (x_right, y)))
            if k < count - 1:
                primitives.append(_arc((x_right, y + turn), turn, -math.pi / 2, math.pi))
        else:
            primitives.append(_line((x_right, y), (x_left, y)))
            if k < count - 1:
                primitives.append(_arc((x_left, y + turn), turn, -math.pi / 2, -math.pi))

    # the return lane starts from a stripe heading -x
    lane_top = ys[-1]
    if count % 2 == 1:
        primitives.append(_arc((x_right, ys[-1] - turn), turn, math.pi / 2, -math.pi))
        primitives.append(_line((x_right, ys[-2]), (x_left, ys[-2])))
        lane_top = ys[-2]

    primitives.append(_arc((x_left, lane_top - turn), turn, math.pi / 2, math.pi / 2))
    primitives.append(_line((x_left - turn, lane_top - turn), (x_left - turn, ys[0] + turn)))
    primitives.append(_arc((x_left, ys[0] + turn), turn, math.pi, math.pi / 2))

    return primitives, count


def build_lawnmower(origin, extent, stripe_width=None, spacing=None, min_turn_radius=None):
    """ Closed boustrophedon loop over the rectangle origin + [0, width] x [0, height]

    :param origin: lower left corner (m)
    :param extent: (width, height), stripes run along the width (m)
    :param stripe_width: distance between stripes (m)
    :param spacing: largest distance between consecutive waypoints (m)
    :param min_turn_radius: smallest turning radius the vehicle can follow (m)
    :raises RegionTooSmall: when the region does not fit two stripes and their turns
    """

    stripe_width = vehicleAssumptions['stripeWidth'] if stripe_width is None else stripe_width
    spacing = vehicleAssumptions['waypointSpacing'] if spacing is None else spacing
    min_turn_radius = vehicleAssumptions['minTurnRadius'] if min_turn_radius is None else min_turn_radius

    width, height = extent
    if height < stripe_width - 1e-12 or width <= stripe_width:
        raise RegionTooSmall('region {0} x {1} m is too small for stripes {2} m apart'.format(width, height,
                                                                                          stripe_width))

    primitives, count = _stripe_primitives(origin, extent, stripe_width)

    waypoints = []
    for primitive in primitives:
        length = _primitive_length(primitive)
        if length <= params.distTol:
            continue
        pieces = int(math.ceil(length / spacing - 1e-9))
        for i in range(pieces):
            point = _sample(primitive, i / float(pieces))
            if not waypoints or np.linalg.norm(point - waypoints[-1]) > params.distTol:
                waypoints.append(point)

    if np.linalg.norm(waypoints[-1] - waypoints[0]) <= params.distTol:
        waypoints.pop()

    plan = LawnmowerPlan(np.array(waypoints), stripe_width, spacing, count)
    tightest = float(np.min(turn_radii(plan)))
    if tightest < min_turn_radius * (1. - 1e-9):
        raise ValueError('stripes {0} m apart need turns of {1:.4g} m, tighter than {2} m'.format(
            stripe_width, tightest, min_turn_radius))

    logger.debug('built %s', plan)

    return plan


def turn_radii(plan):
    """ radius of the circle through every three consecutive waypoints of the loop, inf on straight runs
    """

    a = plan.waypoints
    b = np.roll(a, -1, axis=0)
    c = np.roll(a, -2, axis=0)

    ab = np.linalg.norm(b - a, axis=1)
    bc = np.linalg.norm(c - b, axis=1)
    ca = np.linalg.norm(a - c, axis=1)
    cross = np.abs((b - a)[:, 0] * (c - a)[:, 1] - (b - a)[:, 1] * (c - a)[:, 0])

    with np.errstate(divide='ignore'):
        return np.where(cross > 1e-12, ab * bc * ca / (2. * cross), np.inf)


def los_heading(p, start, end, delta=None):
    """ Line of sight reference heading for the segment start -> end, theta_ref = angle - atan(e / delta) with e the
    cross track error of p to port of the segment
    """

    delta = vehicleAssumptions['losLookahead'] if delta is None else delta
    d = np.asarray(end, dtype=float) - np.asarray(start, dtype=float)

    if np.linalg.norm(d) <= params.distTol:
        raise ValueError('line of sight segment is degenerate')

    angle = math.atan2(d[1], d[0])
    cross_track = rotate(-angle, np.asarray(p, dtype=float) - np.asarray(start, dtype=float))[1]

    return float(wrap_angle(angle - math.atan(cross_track / delta)))


def advance_waypoint(p, plan, k):
    """ moves the target to the next segment once p is within the switch distance of the end of segment k
    """

    following = (k + 1) % len(plan)
    if np.linalg.norm(np.asarray(p, dtype=float) - plan.waypoints[following]) < plan.switch_distance:
        return following
    return k


class LawnmowerFollower(object):
    """ Guidance state of one vehicle on its plan, starting on the segment closest to it
    """

    def __init__(self, plan, position):

        self.plan = plan
        self.target = plan.nearest_segment(position)

    def reference(self, position):
        """ updates the target segment and returns the reference heading
        """
        self.target = advance_waypoint(position, self.plan, self.target)
        start, end = self.plan.segment(self.target)
        return los_heading(position, start, end, self.plan.lookahead)

    def __repr__(self):
        return 'LawnmowerFollower(target={0} of {1})'.format(self.target, len(self.plan))


def split_regions(origin, extent, count):
    """ splits a rectangle into count side by side regions along its width, [(origin, extent), ...]
    """

    width, height = extent
    share = width / float(count)
    return [((origin[0] + i * share, origin[1]), (share, height)) for i in range(count)]


class RegionTooSmall(params.AquaCoverError):
    pass
