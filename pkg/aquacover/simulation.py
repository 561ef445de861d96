""" Fixed step simulation of a fleet running the coverage path generators (or the lawnmower baseline) over a persistent
coverage field, with run logs that export to CSV and load back bit for bit.

Each control step at t_k:

1. the central computer takes the field and the fleet at t_k, scores every point with every active agent's current
   path, partitions the points and works out the importance rates
2. each agent runs its generator on its own points, giving the angular rate omega* that follows the updated path
3. the wall filter, when enabled, turns omega* into omega_ref
4. the vehicle tracks omega_ref, exactly in ideal runs or through the rate PI and actuator in actuated ones
5. the field is advanced with the agent positions at t_k and everything decided at t_k is logged
"""
import concurrent.futures
import glob
import logging
import os
from collections import OrderedDict

import numpy as np
import pandas as pd

from . import params
from .baseline import LawnmowerFollower, build_lawnmower, split_regions
from .coverage import compute_partition, global_objective
from .field import ImportanceField, best_coverage, importance_rate, step_field, total_importance
from .flags import Flags
from .generator_circle import CircleGenerator, CirclePathParams
from .generator_ellipse import EllipseGenerator, EllipsePathParams
from .geometry import VehicleState, step_dubins
from .safety import filter_omega
from .scenario import validate
from .vehicle import CommandTracker, PiState, RateTracker, pi_heading_control

logger = logging.getLogger(__name__)

agentColumns = ['t', 'agent', 'x', 'y', 'theta', 'omega', 'direction', 'r', 's1', 's2', 's3', 'cx', 'cy',
                'omega_star', 'omega_ref', 'target']
barrierColumns = ['t', 'agent', 'b1', 'b2', 'b3', 'b4', 'b5', 'w', 'b_right', 'b_left', 'w_ca']
phiSumColumns = ['t', 'phi_sum', 'objective']
flagColumns = ['agent', 'flag', 'count']

_nan = float('nan')


class _FleetMember(object):
    """ One agent of a run: its configuration, vehicle state, path generator or lawnmower guidance and flags
    """

    def __init__(self, index, agent, config, n_active, flags, plan=None):

        self.index = index
        self.agent = agent
        self.flags = flags
        self.state = VehicleState(agent.pose, config.fleet.speed)

        env, gen = config.environment, config.generator
        self.generator = None
        self.follower = None

        if config.mode == 'circle':
            path = CirclePathParams(agent.radius, agent.turn)
            self.generator = CircleGenerator(gen.circle_config(n_active), path, env.sigma, config.fleet.speed)
        elif config.mode == 'ellipse':
            path = EllipsePathParams(agent.shape, agent.turn)
            self.generator = EllipseGenerator(gen.ellipse_config(n_active), path, env.sigma, config.fleet.speed)
        else:
            self.follower = LawnmowerFollower(plan, self.state.position)
            self.heading_pi = PiState.heading_loop()

        if self.generator is not None:
            for flag in self.generator.flags:
                flags.addFlag(flag)
            self.generator.flags = flags
            self.generator.path.recentre(self.state.pose)
            if config.fidelity == 'actuated':
                self.tracker = RateTracker(config.vehicle.inner_dt, config.vehicle.discretisation)
        else:
            self.tracker = CommandTracker(config.vehicle.inner_dt, config.vehicle.discretisation,
                                          ideal=config.fidelity == 'ideal')

    def __repr__(self):
        return '_FleetMember({0}, {1})'.format(self.index, self.state)


class SimLog(object):
    """ Everything a run recorded, as pandas frames with fixed columns

    :ivar agents: one row per active agent per step, see agentColumns
    :ivar barriers: one row per active agent per step, see barrierColumns
    :ivar phi_sum: one row per step, the total importance and the objective J
    :ivar snapshots: snapshot index -> field frame (j, qx, qy, phi)
    :ivar snapshot_times: snapshot index -> time of the snapshot
    :ivar plans: agent -> lawnmower waypoint frame (baseline runs)
    :ivar flags: agent -> Flags
    """

    def __init__(self, agents, barriers, phi_sum, snapshots=None, snapshot_times=None, plans=None, flags=None,
                 grid=None, name=None):

        self.agents = agents
        self.barriers = barriers
        self.phi_sum = phi_sum
        self.snapshots = snapshots if snapshots is not None else OrderedDict()
        self.snapshot_times = snapshot_times if snapshot_times is not None else OrderedDict()
        self.plans = plans if plans is not None else OrderedDict()
        self.flags = flags if flags is not None else OrderedDict()
        self.grid = grid
        self.name = name

    @property
    def times(self):
        return self.phi_sum['t'].values

    def agent(self, i):
        """ rows of the agents frame belonging to agent i
        """
        return self.agents[self.agents['agent'] == i].reset_index(drop=True)

    def flag_frame(self):
        rows = [(agent, flag, flags.count(flag)) for agent, flags in self.flags.items() for flag in flags]
        return pd.DataFrame(rows, columns=flagColumns)

    def __repr__(self):
        return 'SimLog({0!r}, {1} steps, {2} agents, {3} snapshots)'.format(
            self.name, len(self.phi_sum), self.agents['agent'].nunique(), len(self.snapshots))


def _frame(rows, columns):
    return _typed(pd.DataFrame(rows, columns=columns), columns)


def _weights(config, grid):
    if config.objective_weighting == 'cell_area':
        return grid.cell_area
    return 1.


def _agent_phase(member, points, phi, phi_dot, config, pool, probes):
    """ what one agent decides at t_k, (step result, omega*, filter result)
    """

    result = member.generator.step(member.state, points, phi, phi_dot, config.dt)
    omega_star = result.omega_star

    screened = None
    if pool is not None:
        safety = config.safety
        screened = filter_omega(member.state.pose, config.fleet.speed, omega_star, pool, probes,
                                (safety.alpha_right, safety.alpha_left), safety.lambda_ca)
        if screened.fallback:
            member.flags.addFlag('QP Fallback')
        elif abs(screened.omega_ref - omega_star) > params.omegaTol:
            member.flags.addFlag('Safety Override')

    return result, omega_star, screened


def _path_row(member):
    path = member.generator.path
    r = s1 = s2 = s3 = _nan
    if hasattr(path, 'radius'):
        r = path.radius
    else:
        s1, s2, s3 = (float(v) for v in path.shape)
    return path.direction.value, r, s1, s2, s3, float(path.center[0]), float(path.center[1])


def run(config):
    """ Runs a scenario to the end

    :param config: SimConfig
    :return: SimLog
    :raises ScenarioError: when the config does not validate
    """

    validate(config).raise_for_errors()

    env = config.environment
    grid = env.grid()
    field = ImportanceField(grid, env.phi0, env.phi_min, env.phi_max, env.gain_up, env.gain_down)
    weight = _weights(config, grid)
    rng = np.random.default_rng(config.seed)

    pool = probes = None
    if config.safety.enabled and config.mode != 'baseline':
        pool, probes = config.safety.pool(), config.safety.probes()

    plans = OrderedDict()
    regionPlans = []
    if config.mode == 'baseline':
        regions = split_regions(env.origin, env.extent, config.baseline.regions or config.fleet.n)
        for origin, extent in regions:
            plan = build_lawnmower(origin, extent, config.baseline.stripe_width, config.baseline.spacing,
                                   config.baseline.min_turn_radius)
            plan.switch_distance = config.baseline.switch_distance
            plan.lookahead = config.baseline.lookahead
            regionPlans.append(plan)

    members = OrderedDict()
    flags = OrderedDict((i, Flags()) for i in range(config.fleet.n))

    agentRows, barrierRows, phiRows = [], [], []
    snapshots, snapshotTimes = OrderedDict(), OrderedDict()
    snapshotEvery = max(1, int(round(config.snapshot_interval / config.dt)))

    executor = None
    if config.parallel_agents:
        executor = concurrent.futures.ThreadPoolExecutor()

    logger.info('running %r: %s mode, %s, %d agents, %d steps', config.name, config.mode, config.fidelity,
                config.fleet.n, config.steps)

    try:
        for k in range(config.steps):
            t = k * config.dt

            active = [i for i, agent in enumerate(config.fleet.agents) if agent.active(t)]
            _update_fleet(members, active, config, regionPlans, plans, flags, k)

            if k % snapshotEvery == 0:
                index = k // snapshotEvery
                snapshots[index] = field.to_dataframe()
                snapshotTimes[index] = t

            positions = np.array([members[i].state.position for i in active]).reshape(-1, 2)
            phi_dot = field.rate(best_coverage(field.points, positions, env.sigma))
            phi_w = field.phi * weight
            phi_dot_w = phi_dot * weight

            if config.mode == 'baseline':
                objective = _nan
                for i in active:
                    agentRows.append(_baseline_step(members[i], t, config, rng))
                    barrierRows.append((t, i) + (_nan,) * 9)
            else:
                scores = np.array([members[i].generator.scores(members[i].state.pose, field.points)
                                   for i in active]).reshape(len(active), grid.m)
                partition = compute_partition(scores, t) if active else None
                objective = global_objective(scores, phi_w) if active else 0.

                for i in active:
                    members[i].generator.config.n = len(active)

                def agent_inputs(slot):
                    i = active[slot]
                    mine = partition.members(slot)
                    if config.phi_rate_source == 'local':
                        best = best_coverage(field.points[mine], positions, env.sigma)
                        rates = importance_rate(field.phi[mine], best, env.gain_up, env.gain_down, env.phi_min,
                                                env.phi_max) * weight
                    else:
                        rates = phi_dot_w[mine]
                    return members[i], field.points[mine], phi_w[mine], rates, config, pool, probes

                if executor is not None:
                    futures = [executor.submit(_agent_phase, *agent_inputs(slot)) for slot in range(len(active))]
                    decisions = [future.result() for future in futures]
                else:
                    decisions = [_agent_phase(*agent_inputs(slot)) for slot in range(len(active))]

                for i, (result, omega_star, screened) in zip(active, decisions):
                    agentRow, barrierRow = _advance_member(members[i], t, result, omega_star, screened, config, rng)
                    agentRows.append(agentRow)
                    barrierRows.append(barrierRow)

            phiRows.append((t, total_importance(field), objective))
            field = step_field(field, positions, env.sigma, config.dt)

            if k and k % 1000 == 0:
                logger.debug('t=%.2f s, sum phi=%.6g', t, total_importance(field))
    finally:
        if executor is not None:
            executor.shutdown()

    log = SimLog(_frame(agentRows, agentColumns), _frame(barrierRows, barrierColumns), _frame(phiRows, phiSumColumns),
                 snapshots, snapshotTimes, plans, flags, grid, config.name)
    logger.info('finished %r, final sum phi %.6g', config.name, log.phi_sum['phi_sum'].iloc[-1])

    return log


def _update_fleet(members, active, config, regionPlans, plans, flags, k):
    """ adds agents that became active and drops those that left, flagging the change after the first step
    """

    leaving = [i for i in members if i not in active]
    for i in leaving:
        logger.info('agent %d left the fleet', i)
        del members[i]
        flags[i].addFlag('Fleet Change')

    for i in active:
        if i in members:
            continue
        plan = None
        if config.mode == 'baseline':
            plan = regionPlans[i % len(regionPlans)]
            plans[i] = plan.to_dataframe()
        members[i] = _FleetMember(i, config.fleet.agents[i], config, len(active), flags[i], plan)
        if k:
            logger.info('agent %d joined the fleet', i)
            flags[i].addFlag('Fleet Change')


def _disturbance(config, rng):
    if config.disturbance_std > 0:
        return float(rng.normal(0., config.disturbance_std))
    return 0.


def _advance_member(member, t, result, omega_star, screened, config, rng):
    """ logs agent and barrier rows at t and moves the vehicle over one step
    """

    state = member.state
    omega_ref = screened.omega_ref if screened is not None else omega_star
    direction, r, s1, s2, s3, cx, cy = _path_row(member)

    agentRow = (t, member.index, state.position[0], state.position[1], state.heading, state.angular_rate,
                direction, r, s1, s2, s3, cx, cy, omega_star, omega_ref, _nan)

    barriers = list(result.barriers) + [_nan] * (4 - len(result.barriers))
    if screened is not None:
        wall = (screened.b_right, screened.b_left, screened.slack)
    else:
        wall = (_nan, _nan, _nan)
    barrierRow = (t, member.index, result.b1) + tuple(barriers) + (result.w,) + wall

    reference = omega_ref + _disturbance(config, rng)
    if config.fidelity == 'actuated':
        member.state = member.tracker.advance(state, reference, config.dt)
    else:
        member.state = step_dubins(state, reference, config.dt)

    return agentRow, barrierRow


def _baseline_step(member, t, config, rng):
    """ lawnmower guidance and heading loop for one step, returns the agent row at t
    """

    state = member.state
    theta_ref = member.follower.reference(state.position)
    u = pi_heading_control(member.heading_pi, theta_ref, state.heading, config.dt)

    agentRow = (t, member.index, state.position[0], state.position[1], state.heading, state.angular_rate,
                _nan, _nan, _nan, _nan, _nan, _nan, _nan, _nan, _nan, float(member.follower.target))

    noise = _disturbance(config, rng)
    if noise:
        u += noise / member.tracker.actuator.dc_gain

    member.state = member.tracker.advance(state, u, config.dt)

    return agentRow


def trailing_mean(times, values, window):
    """ mean of the values over the trailing window (s) ending at every time, (t - window, t]
    """
    index = pd.to_timedelta(np.asarray(times, dtype=float), unit='s')
    series = pd.Series(np.asarray(values, dtype=float), index=index)
    return series.rolling(pd.Timedelta(seconds=window)).mean().values


def export(log, directory):
    """ Writes a run to directory: agents.csv, barriers.csv, phi_sum.csv, flags.csv, snapshots.csv with the
    field_XXXX.csv / field_XXXX.npy snapshots, and plan_<i>.csv for baseline runs

    :return: list of the paths written
    """

    if not os.path.isdir(directory):
        os.makedirs(directory)

    written = []

    def write(frame, name):
        path = os.path.join(directory, name)
        frame.to_csv(path, index=False, float_format='%.17g')
        written.append(path)

    write(log.agents, 'agents.csv')
    write(log.barriers, 'barriers.csv')
    write(log.phi_sum, 'phi_sum.csv')
    write(log.flag_frame(), 'flags.csv')
    write(pd.DataFrame({'index': list(log.snapshot_times.keys()), 't': list(log.snapshot_times.values())},
                       columns=['index', 't']), 'snapshots.csv')

    for index, frame in log.snapshots.items():
        write(frame, 'field_{0:04d}.csv'.format(index))
        if log.grid is not None:
            path = os.path.join(directory, 'field_{0:04d}.npy'.format(index))
            np.save(path, log.grid.as_image(frame['phi'].values))
            written.append(path)

    for agent, plan in log.plans.items():
        write(plan, 'plan_{0}.csv'.format(agent))

    logger.info('wrote %d files to %s', len(written), directory)

    return written


def _read(path, **kwargs):
    try:
        return pd.read_csv(path, float_precision='round_trip', **kwargs)
    except (IOError, OSError) as e:
        raise LoadLogError('could not read {0}: {1}'.format(path, e))
    except pd.errors.ParserError as e:
        raise LoadLogError('{0} is not a run log table: {1}'.format(path, e))


def load_log(directory):
    """ Reads a run written by export back into a SimLog. Frames compare equal to the exported ones

    :raises LoadLogError: when a required file is missing or has the wrong columns
    """

    if not os.path.isdir(directory):
        raise LoadLogError('no run directory at {0}'.format(directory))

    tables = {}
    for name, columns in (('agents', agentColumns), ('barriers', barrierColumns), ('phi_sum', phiSumColumns)):
        frame = _read(os.path.join(directory, name + '.csv'), dtype={'direction': object} if name == 'agents'
                      else None)
        if list(frame.columns) != columns:
            raise LoadLogError('{0}.csv has columns {1}, expected {2}'.format(name, list(frame.columns), columns))
        tables[name] = _typed(frame, columns)

    snapshotTimes = OrderedDict()
    snapshotsPath = os.path.join(directory, 'snapshots.csv')
    if os.path.exists(snapshotsPath):
        for index, t in _read(snapshotsPath).itertuples(index=False):
            snapshotTimes[int(index)] = float(t)

    snapshots = OrderedDict()
    for path in sorted(glob.glob(os.path.join(directory, 'field_*.csv'))):
        index = int(os.path.basename(path)[len('field_'):-len('.csv')])
        frame = _read(path)
        frame['j'] = frame['j'].astype(np.int64)
        snapshots[index] = frame

    plans = OrderedDict()
    for path in sorted(glob.glob(os.path.join(directory, 'plan_*.csv')),
                       key=lambda p: int(os.path.basename(p)[len('plan_'):-len('.csv')])):
        plan = _read(path)
        plan['k'] = plan['k'].astype(np.int64)
        plans[int(os.path.basename(path)[len('plan_'):-len('.csv')])] = plan

    flags = OrderedDict()
    flagsPath = os.path.join(directory, 'flags.csv')
    if os.path.exists(flagsPath):
        for agent, flag, count in _read(flagsPath).itertuples(index=False):
            agentFlags = flags.setdefault(int(agent), Flags())
            for _ in range(int(count)):
                agentFlags.addFlag(flag)

    return SimLog(tables['agents'], tables['barriers'], tables['phi_sum'], snapshots, snapshotTimes, plans, flags,
                  name=os.path.basename(os.path.normpath(directory)))


def _typed(frame, columns):
    frame = frame.copy()
    for column in columns:
        if column == 'agent':
            frame[column] = frame[column].astype(np.int64)
        elif column == 'direction':
            frame[column] = frame[column].astype(object)
        else:
            frame[column] = frame[column].astype(np.float64)
    return frame


class LoadLogError(IOError):
    pass
