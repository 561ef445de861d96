""" Scenario configuration: the SimConfig sections, the XML scenario loader and validation.

A scenario file looks like::

    <scenario name="pool circle">
        <mode>circle</mode>
        <dt_s>0.05</dt_s>
        <environment>
            <sigma_m>0.15</sigma_m>
            ...
        </environment>
        <fleet>
            <speed_m_s>0.26</speed_m_s>
            <agent><x_m>-1.0</x_m><y_m>0.4</y_m><heading_deg>0</heading_deg></agent>
        </fleet>
    </scenario>

Dimensional values carry their unit as a suffix of the tag and are converted to SI on load, dimensionless ones carry
no suffix.
"""
import copy
import glob
import logging
import os
import xml.etree.ElementTree as ET

import numpy as np

from . import marinequantities as mq
from . import params
from .assumptions import vehicleAssumptions
from .coverage import Direction, shape_matrix
from .field import ObservationGrid
from .generator_circle import CircleGenConfig
from .generator_ellipse import EllipseGenConfig, barrier_shape
from .geometry import Pose
from .safety import BodyProbePoints, PoolShape, pool_barrier

logger = logging.getLogger(__name__)

_rootdir = os.path.dirname(__file__)
scenarioDir = os.path.join(_rootdir, 'data', 'scenarios')

modes = ('circle', 'ellipse', 'baseline')
fidelities = ('ideal', 'actuated')
weightings = ('cell_area', 'unit')
phiRateSources = ('received', 'local')
discretisations = ('zoh', 'impulse')

_text = 'text'
_bool = 'bool'
_int = 'int'


class _ConfigSection(object):
    """ A group of settings with defaults, unknown settings are rejected
    """

    _defaults = {}

    def __init__(self, **kwargs):

        for key, value in self._defaults.items():
            setattr(self, key, copy.copy(value))

        for key, value in kwargs.items():
            if key not in self._defaults:
                raise ScenarioError('{0} has no setting {1!r}'.format(type(self).__name__, key))
            setattr(self, key, value)

    def as_dict(self):
        return dict((key, getattr(self, key)) for key in sorted(self._defaults))

    def __repr__(self):
        return '{0}({1})'.format(type(self).__name__, ', '.join('{0}={1!r}'.format(key, value)
                                                              for key, value in self.as_dict().items()))


class EnvironmentConfig(_ConfigSection):

    _defaults = {
        'origin_x': -4., 'origin_y': -3., 'width': 8., 'height': 6., 'cell_size': 0.1,
        'sigma': 0.5, 'gain_up': 0.02, 'gain_down': 0.5, 'phi_min': 0., 'phi_max': 1., 'phi0': 1.,
    }

    @property
    def origin(self):
        return np.array([self.origin_x, self.origin_y])

    @property
    def extent(self):
        return np.array([self.width, self.height])

    def grid(self):
        return ObservationGrid(self.origin, self.extent, self.cell_size)


class AgentConfig(_ConfigSection):

    _defaults = {
        'x': 0., 'y': 0., 'heading': 0., 'direction': 'right', 'radius': 0.3,
        's1': 1.0, 's2': 0., 's3': 1.0, 'active_from': 0., 'active_until': float('inf'),
    }

    @property
    def pose(self):
        return Pose((self.x, self.y), self.heading)

    @property
    def shape(self):
        return np.array([self.s1, self.s2, self.s3])

    @property
    def turn(self):
        return Direction.parse(self.direction)

    def active(self, t):
        return self.active_from <= t < self.active_until


class FleetConfig(_ConfigSection):

    _defaults = {'speed': 0.26, 'agents': []}

    @property
    def n(self):
        return len(self.agents)


class GeneratorSettings(_ConfigSection):

    _defaults = {
        'gamma': 10., 'r_min': 0.2, 'r_max': 0.7, 's_min': 0.5, 's_max': 1.2, 'lam': 0.1,
        'alpha_1': 1., 'alpha_2': 1., 'alpha_3': 1., 'alpha_4': 1., 'alpha_5': 1.,
        'epsilon': None, 'hysteresis_margin': 0.,
    }

    def circle_config(self, n):
        return CircleGenConfig(self.r_min, self.r_max, self.gamma, n, self.lam,
                               (self.alpha_1, self.alpha_2, self.alpha_3), self.epsilon, self.hysteresis_margin)

    def ellipse_config(self, n):
        return EllipseGenConfig(self.s_min, self.s_max, self.gamma, n, self.lam,
                                (self.alpha_1, self.alpha_2, self.alpha_3, self.alpha_4, self.alpha_5),
                                self.epsilon, self.hysteresis_margin)


class SafetyConfig(_ConfigSection):

    _defaults = {
        'enabled': False, 'pool_x': 0., 'pool_y': 0., 'pool_width': 5., 'pool_height': 1.8,
        'margin': vehicleAssumptions['poolMargin'],
        'alpha_right': vehicleAssumptions['wallAlphaRight'], 'alpha_left': vehicleAssumptions['wallAlphaLeft'],
        'lambda_ca': vehicleAssumptions['wallSlackWeight'],
        'probe_forward': vehicleAssumptions['probeRight'][0], 'probe_side': vehicleAssumptions['probeLeft'][1],
    }

    def pool(self):
        return PoolShape.axis_aligned((self.pool_x, self.pool_y), (self.pool_width / 2., self.pool_height / 2.),
                                      self.margin)

    def probes(self):
        return BodyProbePoints((self.probe_forward, -self.probe_side), (self.probe_forward, self.probe_side))


class VehicleConfig(_ConfigSection):

    _defaults = {'inner_dt': vehicleAssumptions['innerStep'], 'discretisation': 'zoh'}


class BaselineConfig(_ConfigSection):

    _defaults = {
        'stripe_width': vehicleAssumptions['stripeWidth'], 'spacing': vehicleAssumptions['waypointSpacing'],
        'min_turn_radius': vehicleAssumptions['minTurnRadius'],
        'switch_distance': vehicleAssumptions['waypointSwitchDistance'],
        'lookahead': vehicleAssumptions['losLookahead'], 'regions': None,
    }


class SimConfig(object):
    """ Everything a run needs. Sections are EnvironmentConfig, FleetConfig, GeneratorSettings, SafetyConfig,
    VehicleConfig and BaselineConfig
    """

    _defaults = {
        'name': 'unnamed', 'mode': 'circle', 'fidelity': 'ideal', 'dt': 0.05, 'duration': 240., 'seed': 0,
        'output': None, 'snapshot_interval': 10., 'objective_weighting': 'cell_area',
        'phi_rate_source': 'received', 'parallel_agents': False, 'disturbance_std': 0.,
    }

    def __init__(self, environment=None, fleet=None, generator=None, safety=None, vehicle=None, baseline=None,
                 **kwargs):

        for key, value in self._defaults.items():
            setattr(self, key, value)
        for key, value in kwargs.items():
            if key not in self._defaults:
                raise ScenarioError('SimConfig has no setting {0!r}'.format(key))
            setattr(self, key, value)

        self.environment = environment or EnvironmentConfig()
        self.fleet = fleet or FleetConfig()
        self.generator = generator or GeneratorSettings()
        self.safety = safety or SafetyConfig()
        self.vehicle = vehicle or VehicleConfig()
        self.baseline = baseline or BaselineConfig()

    def replace(self, **kwargs):
        """ copy with top level settings replaced, None values are ignored
        """
        other = copy.deepcopy(self)
        for key, value in kwargs.items():
            if value is None:
                continue
            if key not in self._defaults:
                raise ScenarioError('SimConfig has no setting {0!r}'.format(key))
            setattr(other, key, value)
        return other

    @property
    def steps(self):
        return int(round(self.duration / self.dt))

    def __repr__(self):
        return 'SimConfig({0!r}, {1}, {2}, {3} agents, {4} s)'.format(self.name, self.mode, self.fidelity,
                                                                      self.fleet.n, self.duration)


class ScenarioParameters(object):
    """ Collects the values of one xml section, converting each to the unit its setting is kept in
    """

    def __init__(self):

        self.params = {}

        self._defaultUnits = {}
        self.rejectTags = ()

    def addParam(self, key, value, attrib=None):
        """ Parses one xml value. Dimensional settings must name their unit as a tag suffix, ie sigma_m or
        duration_min, and are stored in SI units

        :raises ScenarioError: for unknown settings, missing or incompatible units and unparsable values
        """

        if key in self.rejectTags:
            return False

        if key in self._defaultUnits:
            name, unit = key, None
        else:
            name, unit = mq.splitUnitKey(key)

        try:
            target = self._defaultUnits[name]
        except KeyError:
            raise ScenarioError('unknown setting {0!r}'.format(key))

        if name in self.params:
            raise ScenarioError('duplicate setting {0!r}'.format(key))

        text = (value or '').strip()

        if target == _text:
            self.params[name] = text
        elif target == _bool:
            if text.lower() not in ('true', 'false', '1', '0', 'yes', 'no'):
                raise ScenarioError('{0} must be true or false, got {1!r}'.format(key, text))
            self.params[name] = text.lower() in ('true', '1', 'yes')
        elif target == _int:
            try:
                self.params[name] = int(text)
            except ValueError:
                raise ScenarioError('{0} must be a whole number, got {1!r}'.format(key, text))
        else:
            try:
                number = float(text)
            except ValueError:
                raise ScenarioError('{0} must be a number, got {1!r}'.format(key, text))

            if target == 1:
                if unit is not None:
                    raise ScenarioError('{0} is dimensionless and takes no unit'.format(name))
                self.params[name] = number
            else:
                if unit is None:
                    raise ScenarioError('{0} needs a unit suffix, ie {0}_{1}'.format(name, target.dimensionality))
                try:
                    self.params[name] = mq.toSI(number, unit, target)
                except ValueError:
                    raise ScenarioError('{0} cannot be given in {1}'.format(key, unit.dimensionality))

        return True


class TopParameters(ScenarioParameters):

    def __init__(self):

        ScenarioParameters.__init__(self)

        self._defaultUnits.update({
            'name': _text, 'mode': _text, 'fidelity': _text, 'seed': _int, 'output': _text,
            'objective_weighting': _text, 'phi_rate_source': _text, 'parallel_agents': _bool,
            'dt': mq.s, 'duration': mq.s, 'snapshot_interval': mq.s, 'disturbance_std': mq.rad_s,
        })
        self.rejectTags = ('environment', 'fleet', 'generator', 'safety', 'vehicle', 'baseline')


class EnvironmentParameters(ScenarioParameters):

    def __init__(self):

        ScenarioParameters.__init__(self)

        self._defaultUnits.update({
            'origin_x': mq.m, 'origin_y': mq.m, 'width': mq.m, 'height': mq.m, 'cell_size': mq.m,
            'sigma': mq.m, 'gain_up': mq.per_s, 'gain_down': mq.per_s,
            'phi_min': 1, 'phi_max': 1, 'phi0': 1,
        })


class FleetParameters(ScenarioParameters):

    def __init__(self):

        ScenarioParameters.__init__(self)

        self._defaultUnits.update({'speed': mq.m_s})
        self.rejectTags = ('agent',)


class AgentParameters(ScenarioParameters):

    def __init__(self):

        ScenarioParameters.__init__(self)

        self._defaultUnits.update({
            'x': mq.m, 'y': mq.m, 'heading': mq.rad, 'direction': _text, 'radius': mq.m,
            's1': mq.per_m, 's2': mq.per_m, 's3': mq.per_m, 'active_from': mq.s, 'active_until': mq.s,
        })


class GeneratorParameters(ScenarioParameters):

    def __init__(self):

        ScenarioParameters.__init__(self)

        self._defaultUnits.update({
            'gamma': 1, 'r_min': mq.m, 'r_max': mq.m, 's_min': mq.m, 's_max': mq.m, 'lambda': 1,
            'alpha_1': 1, 'alpha_2': 1, 'alpha_3': 1, 'alpha_4': 1, 'alpha_5': 1, 'epsilon': 1,
            'hysteresis_margin': 1,
        })


class SafetyParameters(ScenarioParameters):

    def __init__(self):

        ScenarioParameters.__init__(self)

        self._defaultUnits.update({
            'enabled': _bool, 'pool_x': mq.m, 'pool_y': mq.m, 'pool_width': mq.m, 'pool_height': mq.m,
            'margin': mq.m, 'alpha_right': 1, 'alpha_left': 1, 'lambda_ca': 1, 'probe_forward': mq.m,
            'probe_side': mq.m,
        })


class VehicleParameters(ScenarioParameters):

    def __init__(self):

        ScenarioParameters.__init__(self)

        self._defaultUnits.update({'inner_dt': mq.s, 'discretisation': _text})


class BaselineParameters(ScenarioParameters):

    def __init__(self):

        ScenarioParameters.__init__(self)

        self._defaultUnits.update({
            'stripe_width': mq.m, 'spacing': mq.m, 'min_turn_radius': mq.m, 'switch_distance': mq.m,
            'lookahead': 1, 'regions': _int,
        })


def _readSection(parentXML, parameters):
    for valueXML in parentXML:
        parameters.addParam(valueXML.tag, valueXML.text, valueXML.attrib)
    return parameters.params


def load_scenario(location):
    """ Loads a scenario file into a SimConfig

    :param location: path of the xml file, or the name of a bundled scenario (ie 'pool_circle')
    :raises ScenarioError: if the file cannot be read or holds an invalid setting
    """

    path = location
    if not os.path.exists(path):
        path = os.path.join(scenarioDir, location if location.endswith('.xml') else location + '.xml')
    if not os.path.exists(path):
        raise ScenarioError('could not find scenario {0!r}, bundled ones are {1}'.format(location,
                                                                                       bundled_scenarios()))

    try:
        with open(path, 'r') as f:
            tree = ET.parse(f)
    except ET.ParseError as e:
        raise ScenarioError('{0}: {1}'.format(path, e))

    root = tree.getroot()
    if not root.tag == 'scenario':
        raise ScenarioError('file {0} does not contain a scenario'.format(path))

    top = _readSection(root, TopParameters())
    top.setdefault('name', root.attrib.get('name', os.path.splitext(os.path.basename(path))[0]))

    sections = {}

    environmentXML = root.find('environment')
    if environmentXML is not None:
        sections['environment'] = EnvironmentConfig(**_readSection(environmentXML, EnvironmentParameters()))

    fleetXML = root.find('fleet')
    if fleetXML is not None:
        agents = [AgentConfig(**_readSection(agentXML, AgentParameters())) for agentXML in fleetXML.findall('agent')]
        sections['fleet'] = FleetConfig(agents=agents, **_readSection(fleetXML, FleetParameters()))

    generatorXML = root.find('generator')
    if generatorXML is not None:
        settings = _readSection(generatorXML, GeneratorParameters())
        if 'lambda' in settings:
            settings['lam'] = settings.pop('lambda')
        sections['generator'] = GeneratorSettings(**settings)

    for tag, parameters, section in (('safety', SafetyParameters, SafetyConfig),
                                     ('vehicle', VehicleParameters, VehicleConfig),
                                     ('baseline', BaselineParameters, BaselineConfig)):
        sectionXML = root.find(tag)
        if sectionXML is not None:
            settings = _readSection(sectionXML, parameters())
            if tag == 'safety' and 'enabled' in sectionXML.attrib:
                settings.setdefault('enabled', sectionXML.attrib['enabled'].lower() in ('true', '1', 'yes'))
            sections[tag] = section(**settings)

    config = SimConfig(**dict(top, **sections))
    logger.info('loaded scenario %r from %s', config.name, path)

    return config


def bundled_scenarios():
    return sorted(os.path.splitext(os.path.basename(path))[0]
                  for path in glob.glob(os.path.join(scenarioDir, '*.xml')))


class ValidationReport(object):

    def __init__(self):
        self.errors = []
        self.warnings = []

    def error(self, message):
        self.errors.append(message)

    def warn(self, message):
        self.warnings.append(message)

    @property
    def ok(self):
        return not self.errors

    def raise_for_errors(self):
        if self.errors:
            raise ScenarioError('invalid scenario: ' + '; '.join(self.errors))

    def __repr__(self):
        return 'ValidationReport({0} errors, {1} warnings)'.format(len(self.errors), len(self.warnings))


def validate(config):
    """ Checks a SimConfig for settings the run cannot work with

    :return: ValidationReport
    """

    report = ValidationReport()
    env, fleet, gen = config.environment, config.fleet, config.generator

    if config.mode not in modes:
        report.error('mode must be one of {0}, got {1!r}'.format(modes, config.mode))
    if config.fidelity not in fidelities:
        report.error('fidelity must be one of {0}, got {1!r}'.format(fidelities, config.fidelity))
    if config.objective_weighting not in weightings:
        report.error('objective_weighting must be one of {0}'.format(weightings))
    if config.phi_rate_source not in phiRateSources:
        report.error('phi_rate_source must be one of {0}'.format(phiRateSources))
    if config.vehicle.discretisation not in discretisations:
        report.error('discretisation must be one of {0}'.format(discretisations))

    if not config.dt > 0:
        report.error('dt must be positive')
    if not config.duration > 0:
        report.error('duration must be positive')
    if not config.snapshot_interval > 0:
        report.error('snapshot interval must be positive')
    if config.disturbance_std < 0:
        report.error('disturbance standard deviation must not be negative')
    if config.dt > 0 and not 0 < config.vehicle.inner_dt <= config.dt:
        report.error('inner step must be in (0, dt]')

    if not (env.width > 0 and env.height > 0 and env.cell_size > 0):
        report.error('environment extent and cell size must be positive')
    if not env.sigma > 0:
        report.error('sigma must be positive')
    if not (env.gain_up > 0 and env.gain_down > 0):
        report.error('importance gains must be positive')
    if not env.phi_min < env.phi_max:
        report.error('phi_min must be below phi_max')
    elif not env.phi_min <= env.phi0 <= env.phi_max:
        report.error('phi0 must lie in [phi_min, phi_max]')

    if fleet.n < 1:
        report.error('the fleet needs at least one agent')
    if not fleet.speed > 0:
        report.error('speed must be positive')

    if gen.gamma < 0:
        report.error('gamma must not be negative')
    if not gen.lam > 0:
        report.error('lambda must be positive')
    if gen.epsilon is not None and not gen.epsilon > 0:
        report.error('epsilon must be positive')

    if config.mode == 'circle' and not gen.r_max > gen.r_min > 0:
        report.error('radius bounds must satisfy r_max > r_min > 0')
    if config.mode == 'ellipse' and not gen.s_max > gen.s_min > 0:
        report.error('semi-axis bounds must satisfy s_max > s_min > 0')

    for i, agent in enumerate(fleet.agents):
        try:
            agent.turn
        except ValueError as e:
            report.error('agent {0}: {1}'.format(i, e))
        if not agent.active_from < agent.active_until:
            report.error('agent {0} is never active'.format(i))
        if config.mode == 'circle':
            if not agent.radius > 0:
                report.error('agent {0}: radius must be positive'.format(i))
            elif not gen.r_min <= agent.radius <= gen.r_max:
                report.warn('agent {0}: initial radius outside [r_min, r_max]'.format(i))
        if config.mode == 'ellipse':
            try:
                shape_matrix(agent.shape)
                if gen.s_max > gen.s_min > 0 and min(barrier_shape(agent.shape, gen.s_min, gen.s_max)) < 0:
                    report.warn('agent {0}: initial shape violates the semi-axis bounds'.format(i))
            except params.AquaCoverError as e:
                report.error('agent {0}: {1}'.format(i, e))

    if config.safety.enabled and config.mode != 'baseline':
        try:
            pool, probes = config.safety.pool(), config.safety.probes()
        except ValueError as e:
            report.error('safety: {0}'.format(e))
        else:
            for i, agent in enumerate(fleet.agents):
                if min(pool_barrier(agent.pose, probes.right, pool), pool_barrier(agent.pose, probes.left, pool)) <= 0:
                    report.error('agent {0} starts with a probe outside the pool'.format(i))
    elif config.safety.enabled:
        report.warn('the wall filter is not applied to the lawnmower baseline')

    if config.mode == 'baseline':
        regions = config.baseline.regions or fleet.n
        if regions < 1:
            report.error('baseline needs at least one region')
        elif env.width / regions <= config.baseline.stripe_width or env.height < config.baseline.stripe_width:
            report.error('baseline regions are too small for stripes {0} m apart'.format(
                config.baseline.stripe_width))

    return report


class ScenarioError(params.AquaCoverError):
    pass
