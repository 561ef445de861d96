""" Small example scenarios, fields and runs, mainly for tests. Every agent of a generated run is flagged 'Fake'
"""

from .field import ImportanceField, ObservationGrid
from .geometry import Pose, VehicleState
from .scenario import (AgentConfig, AgentParameters, EnvironmentConfig, EnvironmentParameters, FleetConfig,
                       GeneratorParameters, GeneratorSettings, SafetyConfig, SafetyParameters, SimConfig)
from .simulation import run


def genExampleEnvironment():
    """ 2 x 2 m field of 0.1 m cells centred on the origin, 400 points
    """

    environmentPar = EnvironmentParameters()
    environmentPar.addParam('origin_x_m', '-1.0')
    environmentPar.addParam('origin_y_m', '-1.0')
    environmentPar.addParam('width_m', '2.0')
    environmentPar.addParam('height_m', '2.0')
    environmentPar.addParam('cell_size_cm', '10')
    environmentPar.addParam('sigma_m', '0.3')
    environmentPar.addParam('gain_up_per_s', '0.02')
    environmentPar.addParam('gain_down_per_s', '0.5')
    environmentPar.addParam('phi0', '1.0')

    return EnvironmentConfig(**environmentPar.params)


def genExampleAgent(x=-0.4, y=0., heading_deg=90., direction='right'):
    agentPar = AgentParameters()
    agentPar.addParam('x_m', str(x))
    agentPar.addParam('y_m', str(y))
    agentPar.addParam('heading_deg', str(heading_deg))
    agentPar.addParam('direction', direction)
    agentPar.addParam('radius_m', '0.3')
    agentPar.addParam('s1_per_m', '2.5')
    agentPar.addParam('s2_per_m', '0.0')
    agentPar.addParam('s3_per_m', '2.0')

    return AgentConfig(**agentPar.params)


def genExampleConfig(mode='circle', n=2, duration=2., fidelity='ideal', safety=False):
    """ a short run on the example environment, agents spread along y = 0 heading north
    """

    generatorPar = GeneratorParameters()
    generatorPar.addParam('gamma', '0.5')
    generatorPar.addParam('r_min_m', '0.2')
    generatorPar.addParam('r_max_m', '0.7')
    generatorPar.addParam('s_min_m', '0.3')
    generatorPar.addParam('s_max_m', '0.8')
    generatorPar.addParam('lambda', '0.1')

    if n > 1:
        agents = [genExampleAgent(x=-0.5 + i / float(n - 1)) for i in range(n)]
    else:
        agents = [genExampleAgent()]

    settings = generatorPar.params
    settings['lam'] = settings.pop('lambda')

    safetyPar = SafetyParameters()
    safetyPar.addParam('enabled', 'true' if safety else 'false')
    safetyPar.addParam('pool_width_m', '3.0')
    safetyPar.addParam('pool_height_m', '3.0')

    return SimConfig(genExampleEnvironment(), FleetConfig(speed=0.26, agents=agents), GeneratorSettings(**settings),
                     SafetyConfig(**safetyPar.params), name='example {0}'.format(mode), mode=mode,
                     fidelity=fidelity, dt=0.05, duration=duration, snapshot_interval=1.)


def genExampleField(phi=1.):
    environment = genExampleEnvironment()
    return ImportanceField(environment.grid(), phi, environment.phi_min, environment.phi_max, environment.gain_up,
                           environment.gain_down)


def genExampleGrid():
    return ObservationGrid((-1., -1.), (2., 2.), 0.1)


def genExampleState(x=-0.4, y=0., heading=0., speed=0.26):
    return VehicleState(Pose((x, y), heading), speed)


def genExampleLog(mode='circle', n=2, duration=2.):
    """ runs genExampleConfig and flags every agent of the log as 'Fake'
    """

    log = run(genExampleConfig(mode, n, duration))
    for flags in log.flags.values():
        flags.addFlag('Fake')

    return log
