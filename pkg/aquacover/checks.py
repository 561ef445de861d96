""" Oracle and invariant suites behind ``aquacover check``. Each suite is a list of checks run against independent
oracles (brute force sampling, exhaustive enumeration, finite differences, closed forms); a check returns a
CheckResult and never raises for a failed comparison.

The counts are the full ones; ``scale`` shrinks them for quick runs, the scenario suite is never scaled.
"""
import itertools
import logging
import math
import time
from collections import OrderedDict

import numpy as np

from . import example
from .coverage import DIRECTIONS, TWO_PI, circle_closest_point, sampson_distance
from .generator_circle import gradients
from .generator_ellipse import (DegenerateShape, barrier_shape, center_for_ellipse, ellipse_curvature, gradients_e,
                                shape_gradients)
from .geometry import Pose, heading_vector
from .qp import QpProblem, QpStatus, solve
from .safety import PoolShape, pool_mu, pool_mu_gradient
from .scenario import load_scenario
from .simulation import run, trailing_mean
from .vehicle import crossover_frequency, step_response

logger = logging.getLogger(__name__)


class CheckResult(object):

    def __init__(self, name, passed, detail='', seconds=0.):

        self.name = name
        self.passed = bool(passed)
        self.detail = detail
        self.seconds = seconds

    def __repr__(self):
        return 'CheckResult({0!r}, {1})'.format(self.name, 'pass' if self.passed else 'FAIL')


def _count(full, scale, least=10):
    return max(least, int(round(full * scale)))


def _random_shape(rng, low=0.5, high=2.5):
    """ s of a random S with eigenvalues in [low, high], with the rotation angle and eigenvalues it was built from
    """
    beta = rng.uniform(0., math.pi)
    eigenvalues = np.sort(rng.uniform(low, high, 2))[::-1]
    R = np.array([[math.cos(beta), -math.sin(beta)], [math.sin(beta), math.cos(beta)]])
    S = R.dot(np.diag(eigenvalues)).dot(R.T)
    return np.array([S[0, 0], 0.5 * (S[0, 1] + S[1, 0]), S[1, 1]]), beta, eigenvalues


# geometry

def check_circle_closest_point(rng, scale=1.):
    """ the closed form closest point is never beaten by a dense sampling of the circle
    """

    instances = _count(20, scale, 3)
    samples = _count(10 ** 6, scale, 10 ** 4)
    angles = np.linspace(0., TWO_PI, samples, endpoint=False)
    ring = np.column_stack((np.cos(angles), np.sin(angles)))

    worst = np.inf
    for _ in range(instances):
        c = rng.uniform(-5., 5., 2)
        r = rng.uniform(0.1, 3.)
        q = c + rng.uniform(-6., 6., 2)
        if np.linalg.norm(q - c) < 1e-3:
            continue
        best = np.linalg.norm(circle_closest_point(c, r, q) - q)
        sampled = np.min(np.linalg.norm(c + r * ring - q, axis=1))
        worst = min(worst, sampled - best)

    return CheckResult('geometry.circle_closest_point', worst >= -1e-9, 'worst margin {0:.3g}'.format(worst))


def check_ellipse_center(rng, scale=1.):
    """ the centre puts the agent on the ellipse with its heading tangent to it
    """

    instances = _count(10 ** 4, scale, 100)
    worst_on, worst_tangent = 0., 0.

    for _ in range(instances):
        s = _random_shape(rng)[0]
        z = Pose(rng.uniform(-5., 5., 2), rng.uniform(-math.pi, math.pi))
        for direction in DIRECTIONS:
            c = center_for_ellipse(s, z, direction)
            worst_on = max(worst_on, sampson_distance(c, s, z.position))
            S = np.array([[s[0], s[1]], [s[1], s[2]]])
            normal = S.dot(S).dot(z.position - c)
            worst_tangent = max(worst_tangent, abs(normal.dot(heading_vector(z.heading))) / np.linalg.norm(normal))

    passed = worst_on < 1e-12 and worst_tangent < 1e-12
    return CheckResult('geometry.ellipse_center', passed,
                       'on ellipse {0:.3g}, tangency {1:.3g}'.format(worst_on, worst_tangent))


def check_ellipse_curvature(rng, scale=1.):
    """ curvature against a b / (a^2 sin^2 t + b^2 cos^2 t)^(3/2) on ellipses built from their axes
    """

    instances = _count(10 ** 4, scale, 100)
    worst = 0.

    for _ in range(instances):
        s, beta, eigenvalues = _random_shape(rng)
        a, b = 1. / eigenvalues
        t = rng.uniform(-math.pi, math.pi)
        c = rng.uniform(-5., 5., 2)
        R = np.array([[math.cos(beta), -math.sin(beta)], [math.sin(beta), math.cos(beta)]])
        p = c + R.dot([a * math.cos(t), b * math.sin(t)])
        expected = a * b / (a ** 2 * math.sin(t) ** 2 + b ** 2 * math.cos(t) ** 2) ** 1.5
        worst = max(worst, abs(ellipse_curvature(p, c, s) - expected) / expected)

    return CheckResult('geometry.ellipse_curvature', worst < 1e-9, 'worst relative error {0:.3g}'.format(worst))


# gradients

def _richardson_error(derivative, value):
    """ relative distance of the default step derivative from the Richardson extrapolation of two coarse ones
    """

    h = 1e-3 * max(1., float(np.max(np.abs(value))))
    coarse = np.asarray(derivative(h), dtype=float)
    fine = np.asarray(derivative(h / 2.), dtype=float)
    extrapolated = (4. * fine - coarse) / 3.
    default = np.asarray(derivative(None), dtype=float)

    return float(np.max(np.abs(default - extrapolated)) / max(float(np.max(np.abs(extrapolated))), 1e-6))


def _scene(rng, m=60):
    points = rng.uniform(-2., 2., (m, 2))
    phi = rng.uniform(0.1, 1., m)
    z = Pose(rng.uniform(-1., 1., 2), rng.uniform(-math.pi, math.pi))
    return points, phi, z


def check_generator_gradients(rng, scale=1.):
    """ circular and elliptic score gradients pass Richardson two step consistency
    """

    instances = _count(50, scale, 5)
    worst = 0.

    for _ in range(instances):
        points, phi, z = _scene(rng)
        r = rng.uniform(0.3, 1.5)
        s = _random_shape(rng, 0.7, 2.)[0]
        sigma = rng.uniform(0.2, 0.8)
        for direction in DIRECTIONS:
            def circle(step):
                d_r, d_z, _ = gradients(r, z, points, phi, sigma, direction, step)
                return np.append(d_r, d_z)

            def ellipse(step):
                d_s, d_z, _ = gradients_e(s, z, points, phi, sigma, direction, step)
                return np.append(d_s, d_z)

            worst = max(worst, _richardson_error(circle, np.append(r, z.position)),
                        _richardson_error(ellipse, np.append(s, z.position)))

    return CheckResult('gradients.generator', worst < 1e-5, 'worst relative error {0:.3g}'.format(worst))


def check_shape_gradients(rng, scale=1.):
    """ analytic gradients of the shape barriers against central differences
    """

    instances = _count(1000, scale, 20)
    worst = 0.
    h = 1e-6

    for _ in range(instances):
        s = _random_shape(rng, 0.9, 1.9)[0]
        try:
            analytic = shape_gradients(s, 0.5, 1.2)
            numeric = np.empty((4, 3))
            for k in range(3):
                step = np.zeros(3)
                step[k] = h
                numeric[:, k] = (np.array(barrier_shape(s + step, 0.5, 1.2)) -
                                 np.array(barrier_shape(s - step, 0.5, 1.2))) / (2. * h)
        except DegenerateShape:
            continue
        worst = max(worst, float(np.max(np.abs(analytic - numeric)) / max(1., np.max(np.abs(analytic)))))

    return CheckResult('gradients.shape_barriers', worst < 1e-6, 'worst relative error {0:.3g}'.format(worst))


def check_pool_gradient(rng, scale=1.):
    """ the 4-norm pool gradient against central differences
    """

    instances = _count(1000, scale, 20)
    pool = PoolShape.axis_aligned((0.1, -0.2), (2.5, 0.9))
    worst = 0.
    h = 1e-6

    for _ in range(instances):
        p = rng.uniform((-2.4, -1.0), (2.4, 0.6))
        numeric = np.array([(pool_mu(p + e, pool) - pool_mu(p - e, pool)) / (2. * h) for e in np.eye(2) * h])
        analytic = pool_mu_gradient(p, pool)
        worst = max(worst, float(np.linalg.norm(analytic - numeric) / max(np.linalg.norm(analytic), 1e-3)))

    return CheckResult('gradients.pool', worst < 1e-6, 'worst relative error {0:.3g}'.format(worst))


# qp

def enumerate_qp(problem, tol=1e-9):
    """ Exhaustive active set oracle: solves the equality problem of every linearly independent subset of at most
    dim rows and keeps the best feasible minimiser

    :return: x, or None when no subset gives a feasible point
    """

    A, b = problem.A, problem.b
    H = np.diag(2. * problem.cost_diag)
    g = problem.cost_linear
    d = problem.dim

    best, best_value = None, np.inf
    for size in range(0, min(d, len(b)) + 1):
        for subset in itertools.combinations(range(len(b)), size):
            subset = list(subset)
            if size:
                A_w = A[subset]
                if np.linalg.matrix_rank(A_w) < size:
                    continue
                kkt = np.block([[H, -A_w.T], [A_w, np.zeros((size, size))]])
                x = np.linalg.solve(kkt, np.concatenate((-g, b[subset])))[:d]
            else:
                x = -g / np.diag(H)
            if len(b) and np.min(A.dot(x) - b) < -tol:
                continue
            value = problem.objective(x)
            if value < best_value:
                best, best_value = x, value

    return best


def random_qp(rng, dim=None, rows=None):
    """ a random strictly convex problem with up to 4 variables and 6 constraints
    """

    dim = rng.integers(1, 5) if dim is None else dim
    rows = rng.integers(0, 7) if rows is None else rows
    problem = QpProblem(rng.uniform(0.1, 2., dim), rng.uniform(-2., 2., dim))
    for _ in range(rows):
        problem.add_constraint(rng.uniform(-1., 1., dim), rng.uniform(-1., 1.))
    return problem


def check_qp_oracle(rng, scale=1.):
    """ the active set solver agrees with exhaustive enumeration on feasibility and on the minimiser
    """

    instances = _count(1000, scale, 50)
    worst, disagreements = 0., 0

    for _ in range(instances):
        problem = random_qp(rng)
        expected = enumerate_qp(problem)
        solution = solve(problem)
        if expected is None:
            disagreements += solution.status is not QpStatus.INFEASIBLE
            continue
        if not solution.optimal:
            disagreements += 1
            continue
        worst = max(worst, float(np.max(np.abs(solution.x - expected)) / (1. + np.max(np.abs(expected)))))

    return CheckResult('qp.enumeration_oracle', disagreements == 0 and worst < 1e-8,
                       '{0} status disagreements, worst error {1:.3g}'.format(disagreements, worst))


# shape

def check_shape_equivalence(rng, scale=1.):
    """ the shape barriers are all nonnegative exactly when both eigenvalues of S lie in [1/s_max, 1/s_min]
    """

    instances = _count(10 ** 4, scale, 200)
    s_min, s_max = 0.5, 1.2
    band = 1e-10
    mismatches, compared = 0, 0

    for _ in range(instances):
        s = np.array([rng.uniform(0.3, 2.5), rng.uniform(-1., 1.), rng.uniform(0.3, 2.5)])
        if s[0] * s[2] - s[1] ** 2 <= 0:
            continue
        eigenvalues = np.linalg.eigvalsh(np.array([[s[0], s[1]], [s[1], s[2]]]))
        distance = np.min(np.abs(np.concatenate((eigenvalues - 1. / s_max, eigenvalues - 1. / s_min))))
        try:
            barriers = barrier_shape(s, s_min, s_max)
        except DegenerateShape:
            continue
        if distance < band or min(abs(value) for value in barriers) < band:
            continue
        inside = bool(np.all(eigenvalues >= 1. / s_max) and np.all(eigenvalues <= 1. / s_min))
        compared += 1
        mismatches += inside != (min(barriers) >= 0)

    return CheckResult('shape.schur_equivalence', mismatches == 0,
                       '{0} mismatches in {1} shapes'.format(mismatches, compared))


# theorem

def _random_fleet(rng, config, spread=0.6):
    for agent in config.fleet.agents:
        agent.x, agent.y = (float(v) for v in rng.uniform(-spread, spread, 2))
        agent.heading = float(rng.uniform(-math.pi, math.pi))
    return config


def check_performance_guarantee(rng, scale=1.):
    """ runs the generators from random fleet poses; once every agent's b1 is nonnegative it stays so, and on every
    such step the logged objective is at least the configured gamma
    """

    scenes = _count(12, scale, 3)
    duration = max(2., 10. * scale)
    certified, b1_worst, gap_worst = 0, np.inf, np.inf

    for scene in range(scenes):
        kind = 'circle' if scene % 2 == 0 else 'ellipse'
        n = int(rng.integers(1, 4))
        config = _random_fleet(rng, example.genExampleConfig(kind, n, duration))
        gamma = config.generator.gamma
        tol = 0.05 * gamma / n

        log = run(config)
        b1 = log.barriers.pivot(index='t', columns='agent', values='b1').sort_index()
        objective = log.phi_sum.set_index('t')['objective'].reindex(b1.index).values
        held = (b1.values >= 0.).all(axis=1)

        if not held.any():
            logger.debug('scene %d (%s, %d agents) never reached b1 >= 0', scene, kind, n)
            continue

        first = int(np.argmax(held))
        certified += int(held.sum())
        b1_worst = min(b1_worst, float(np.min(b1.values[first:])) + tol)
        gap_worst = min(gap_worst, float(np.min(objective[held] - gamma)) + tol)

    passed = certified > 0 and b1_worst >= 0. and gap_worst >= 0.
    return CheckResult('theorem.performance_guarantee', passed,
                       '{0} certified steps, worst b1 margin {1:.3g}, worst J - gamma margin {2:.3g}'.format(
                           certified, b1_worst, gap_worst))


# actuator

def check_rate_loop(rng=None, scale=1.):
    """ the rate loop settles a 0.5 rad/s step within 5% by 3 s and crosses over near 4 rad/s
    """

    crossover = crossover_frequency()
    errors = []
    for method in ('zoh', 'impulse'):
        _, omegas = step_response(0.5, 3., method=method)
        errors.append(abs(omegas[-1] - 0.5) / 0.5)

    passed = max(errors) <= 0.05 and abs(crossover - 4.) <= 0.2
    return CheckResult('actuator.rate_loop', passed,
                       'crossover {0:.4g} rad/s, step error at 3 s {1}'.format(
                           crossover, ', '.join('{0:.3g}'.format(e) for e in errors)))


# scenarios

def violation_episodes(times, values, tol=0.):
    """ (start, end) of every run of values below -tol, end is None when the run lasts to the last sample
    """

    episodes = []
    start = None
    for t, value in zip(times, values):
        if value < -tol and start is None:
            start = t
        elif value >= -tol and start is not None:
            episodes.append((start, t))
            start = None
    if start is not None:
        episodes.append((start, None))
    return episodes


def check_ideal_ellipse(rng=None, scale=1.):
    """ two elliptic agents keep b1 >= 0 on 99% of the steps after 10 s and recover from every violation in 10 s
    """

    log = run(load_scenario('ideal_ellipse'))
    details, passed = [], True

    for agent, rows in log.barriers.groupby('agent'):
        late = rows[rows['t'] >= 10.]
        share = float(np.mean(late['b1'].values >= 0.))
        episodes = violation_episodes(late['t'].values, late['b1'].values)
        slow = [e for e in episodes if e[1] is None or e[1] - e[0] > 10.]
        passed &= share >= 0.99 and not slow
        details.append('agent {0}: {1:.2%} nonnegative, {2} episodes, {3} slow'.format(agent, share, len(episodes),
                                                                                       len(slow)))

    return CheckResult('scenarios.ideal_ellipse', passed, '; '.join(details))


def _pool_runs():
    return run(load_scenario('pool_circle')), run(load_scenario('pool_baseline'))


def check_pool_persistence(rng=None, scale=1., runs=None):
    """ the pool run holds the 60 s trailing mean of sum phi under 0.70 m phi_max with the right wall barrier kept,
    and averages below the lawnmower over [60, 300] s
    """

    circle, lawnmower = runs if runs is not None else _pool_runs()
    env = load_scenario('pool_circle').environment
    capacity = env.grid().m * env.phi_max

    times, totals = circle.phi_sum['t'].values, circle.phi_sum['phi_sum'].values
    settled = trailing_mean(times, totals, 60.)[-1]
    wall = float(np.nanmin(circle.barriers['b_right'].values))

    window = (times >= 60.) & (times <= 300.)
    ours = float(np.mean(totals[window]))
    baselineTimes = lawnmower.phi_sum['t'].values
    theirs = float(np.mean(lawnmower.phi_sum['phi_sum'].values[(baselineTimes >= 60.) & (baselineTimes <= 300.)]))

    passed = totals[-1] < totals[0] and settled < 0.70 * capacity and wall >= -1e-3 and ours < theirs
    return CheckResult('scenarios.pool_persistence', passed,
                       'trailing mean {0:.4g} of {1:.4g}, min b_right {2:.3g}, mean sum phi {3:.4g} vs lawnmower '
                       '{4:.4g}'.format(settled, capacity, wall, ours, theirs))


def check_determinism(rng=None, scale=1.):
    """ two runs of the same configuration give identical logs
    """

    config = load_scenario('pool_circle').replace(duration=5.)
    first, second = run(config), run(config)
    same = all(getattr(first, name).equals(getattr(second, name)) for name in ('agents', 'barriers', 'phi_sum'))

    return CheckResult('scenarios.determinism', same, 'identical' if same else 'logs differ')


suites = OrderedDict([
    ('geometry', [check_circle_closest_point, check_ellipse_center, check_ellipse_curvature]),
    ('gradients', [check_generator_gradients, check_shape_gradients, check_pool_gradient]),
    ('qp', [check_qp_oracle]),
    ('shape', [check_shape_equivalence]),
    ('theorem', [check_performance_guarantee]),
    ('actuator', [check_rate_loop]),
    ('scenarios', [check_determinism, check_ideal_ellipse, check_pool_persistence]),
])


def run_suite(name, seed=0, scale=1.):
    """ runs one suite, or every suite but the scenarios for 'all'

    :return: list of CheckResult
    """

    if name == 'all':
        names = [suite for suite in suites if suite != 'scenarios']
    elif name in suites:
        names = [name]
    else:
        raise KeyError('unknown suite {0!r}, choose from {1}'.format(name, ['all'] + list(suites)))

    results = []
    for suite in names:
        for check in suites[suite]:
            rng = np.random.default_rng(seed)
            start = time.time()
            result = check(rng, 1. if suite == 'scenarios' else scale)
            result.seconds = time.time() - start
            logger.info('%s %s in %.1f s: %s', result.name, 'passed' if result.passed else 'FAILED', result.seconds,
                        result.detail)
            results.append(result)

    return results


def format_report(results):
    lines = ['{0:4} {1:36} {2:7.1f} s  {3}'.format('ok' if r.passed else 'FAIL', r.name, r.seconds, r.detail)
             for r in results]
    lines.append('{0} of {1} checks passed'.format(sum(r.passed for r in results), len(results)))
    return '\n'.join(lines)
