""" Tracking layer between the path generator and the Dubins model: the identified first order angular-rate response
of the vehicles

    omega(s) / u(s) = sign * gain / (s + pole) * exp(-delay s)

and the PI loops closed around it. The model is discretised once for a fixed step, exactly under a zero order hold or
by impulse invariance, with the input delay rounded to whole steps.
"""
import logging
import math

import numpy as np

from .assumptions import vehicleAssumptions
from .geometry import step_dubins, wrap_angle
from . import params

logger = logging.getLogger(__name__)


class ActuatorModel(object):
    """ Discretised first order lag with input delay. Holds the lag state and the delay buffer
    """

    def __init__(self, dt, gain=None, pole=None, delay=None, sign=None, method='zoh'):

        self.dt = float(dt)
        self.gain = vehicleAssumptions['actuatorGain'] if gain is None else float(gain)
        self.pole = vehicleAssumptions['actuatorPole'] if pole is None else float(pole)
        self.delay = vehicleAssumptions['actuatorDelay'] if delay is None else float(delay)
        self.sign = vehicleAssumptions['actuatorSign'] if sign is None else float(sign)
        self.method = method

        if self.dt <= 0 or self.pole <= 0 or self.delay < 0:
            raise ActuatorError('actuator needs dt > 0, pole > 0 and delay >= 0')

        self.decay = math.exp(-self.pole * self.dt)

        if method == 'zoh':
            self.input_gain = self.sign * self.gain / self.pole * (1. - self.decay)
        elif method == 'impulse':
            self.input_gain = self.sign * self.gain * self.dt
        else:
            raise ActuatorError('unknown discretisation {0!r}, use zoh or impulse'.format(method))

        self.delay_steps = int(round(self.delay / self.dt))
        self.reset()

    def reset(self, omega=0.):
        self.omega = float(omega)
        self.buffer = [0.] * self.delay_steps

    @property
    def dc_gain(self):
        """ steady state omega per unit command
        """
        return self.sign * self.gain / self.pole

    def __repr__(self):
        return 'ActuatorModel({0:+g} * {1} / (s + {2}), delay {3} steps of {4} s, {5})'.format(
            self.sign, self.gain, self.pole, self.delay_steps, self.dt, self.method)


def step_actuator(model, u, dt):
    """ Advances the actuator one step under the command u held over the step

    :return: angular rate at the end of the step (rad/s)
    """

    if abs(dt - model.dt) > 1e-12:
        raise ActuatorError('actuator was discretised for dt={0}, stepped with {1}'.format(model.dt, dt))

    if model.delay_steps:
        model.buffer.append(float(u))
        applied = model.buffer.pop(0)
    else:
        applied = float(u)

    model.omega = model.decay * model.omega + model.input_gain * applied
    return model.omega


class PiState(object):
    """ PI controller u = -(kp e + ki int e) with the integrator clamped so |ki int e| <= saturation, and the output
    saturated at the same level
    """

    def __init__(self, kp, ki, saturation=None):

        self.kp = float(kp)
        self.ki = float(ki)
        self.saturation = vehicleAssumptions['commandSaturation'] if saturation is None else float(saturation)
        self.integral = 0.

    @classmethod
    def rate_loop(cls):
        return cls(*vehicleAssumptions['ratePiGains'])

    @classmethod
    def heading_loop(cls):
        return cls(*vehicleAssumptions['headingPiGains'])

    def control(self, error, dt):

        self.integral += error * dt

        if self.ki > 0:
            limit = self.saturation / self.ki
            self.integral = min(max(self.integral, -limit), limit)

        u = -(self.kp * error + self.ki * self.integral)
        return min(max(u, -self.saturation), self.saturation)

    def reset(self):
        self.integral = 0.

    def __repr__(self):
        return 'PiState(kp={0}, ki={1}, integral={2:.6g})'.format(self.kp, self.ki, self.integral)


def pi_rate_control(pi, omega_ref, omega, dt):
    """ command for the rate loop, e = omega_ref - omega
    """
    return pi.control(omega_ref - omega, dt)


def pi_heading_control(pi, theta_ref, theta, dt):
    """ command for the heading loop of the lawnmower baseline, the error is wrapped to (-pi, pi]
    """
    return pi.control(float(wrap_angle(theta_ref - theta)), dt)


class RateTracker(object):
    """ Rate PI and actuator run at an inner step inside one control step, integrating the Dubins model as they go
    """

    def __init__(self, inner_dt=None, method='zoh'):

        self.inner_dt = vehicleAssumptions['innerStep'] if inner_dt is None else float(inner_dt)
        self.actuator = ActuatorModel(self.inner_dt, method=method)
        self.pi = PiState.rate_loop()

    def advance(self, state, omega_ref, dt):
        """ tracks omega_ref for dt

        :return: VehicleState at the end of the step
        """

        steps = max(1, int(round(dt / self.inner_dt)))

        for _ in range(steps):
            u = pi_rate_control(self.pi, omega_ref, self.actuator.omega, self.inner_dt)
            omega = step_actuator(self.actuator, u, self.inner_dt)
            state = step_dubins(state, omega, self.inner_dt)

        return state


class CommandTracker(object):
    """ Applies a raw command u to the actuator (the heading loop of the baseline drives it directly). Without an
    actuator the command is mapped through its DC gain
    """

    def __init__(self, inner_dt=None, method='zoh', ideal=False):

        self.inner_dt = vehicleAssumptions['innerStep'] if inner_dt is None else float(inner_dt)
        self.actuator = ActuatorModel(self.inner_dt, method=method)
        self.ideal = ideal

    def advance(self, state, u, dt):

        if self.ideal:
            return step_dubins(state, self.actuator.dc_gain * u, dt)

        for _ in range(max(1, int(round(dt / self.inner_dt)))):
            omega = step_actuator(self.actuator, u, self.inner_dt)
            state = step_dubins(state, omega, self.inner_dt)

        return state


def loop_gain(frequency, kp=None, ki=None, gain=None, pole=None):
    """ |C(j w) G(j w)| of the rate loop, the delay has unit magnitude
    """

    if kp is None or ki is None:
        kp, ki = vehicleAssumptions['ratePiGains']
    gain = vehicleAssumptions['actuatorGain'] if gain is None else gain
    pole = vehicleAssumptions['actuatorPole'] if pole is None else pole

    s = 1j * np.asarray(frequency, dtype=float)
    return np.abs((kp + ki / s) * gain / (s + pole))


def crossover_frequency(low=0.1, high=100., points=200001, **kwargs):
    """ frequency where the rate loop gain crosses 1, by a logarithmic sweep refined linearly
    """

    frequencies = np.logspace(math.log10(low), math.log10(high), points)
    magnitude = loop_gain(frequencies, **kwargs)
    above = np.flatnonzero(magnitude >= 1.)

    if not len(above) or above[-1] == len(frequencies) - 1:
        raise ActuatorError('no gain crossover between {0} and {1} rad/s'.format(low, high))

    k = above[-1]
    w0, w1 = frequencies[k], frequencies[k + 1]
    m0, m1 = magnitude[k], magnitude[k + 1]

    return w0 + (m0 - 1.) * (w1 - w0) / (m0 - m1)


def step_response(omega_ref, duration, inner_dt=None, method='zoh'):
    """ closed loop rate response to a step of omega_ref from rest, (times, omega)
    """

    inner_dt = vehicleAssumptions['innerStep'] if inner_dt is None else inner_dt
    actuator = ActuatorModel(inner_dt, method=method)
    pi = PiState.rate_loop()

    steps = int(round(duration / inner_dt))
    omegas = np.empty(steps + 1)
    omegas[0] = actuator.omega

    for k in range(steps):
        u = pi_rate_control(pi, omega_ref, actuator.omega, inner_dt)
        omegas[k + 1] = step_actuator(actuator, u, inner_dt)

    return np.arange(steps + 1) * inner_dt, omegas


class ActuatorError(params.AquaCoverError):
    pass
