import math

import numpy as np

from .patches import TestCase
from ..geometry import Pose, VehicleState
from ..vehicle import (ActuatorModel, step_actuator, PiState, pi_rate_control, pi_heading_control, RateTracker,
                       CommandTracker, loop_gain, crossover_frequency, step_response, ActuatorError)


class Test_ActuatorModel(TestCase):

    def test_delay_steps(self):
        self.assertEqual(ActuatorModel(0.004).delay_steps, 4)
        self.assertEqual(ActuatorModel(0.004, delay=0.).delay_steps, 0)

    def test_dc_gain(self):
        self.assertAlmostEqual(ActuatorModel(0.004).dc_gain, -14.19 / 3.766)

    def test_unknown_method(self):
        with self.assertRaises(ActuatorError):
            ActuatorModel(0.004, method='tustin')

    def test_bad_pole(self):
        with self.assertRaises(ActuatorError):
            ActuatorModel(0.004, pole=0.)

    def test_step_length_checked(self):
        with self.assertRaises(ActuatorError):
            step_actuator(ActuatorModel(0.004), 1., 0.01)

    def test_input_delay(self):
        model = ActuatorModel(0.004)
        outputs = [step_actuator(model, 1., 0.004) for _ in range(5)]
        self.assertEqual(outputs[:4], [0., 0., 0., 0.])
        self.assertTrue(outputs[4] < 0)

    def test_zoh_steady_state(self):
        for method in ('zoh', 'impulse'):
            model = ActuatorModel(0.004, method=method)
            for _ in range(3000):
                omega = step_actuator(model, 0.1, 0.004)
            expected = 0.1 * model.dc_gain if method == 'zoh' else 0.1 * model.input_gain / (1. - model.decay)
            self.assertAlmostEqual(omega, expected, 6)

    def test_reset(self):
        model = ActuatorModel(0.004)
        step_actuator(model, 1., 0.004)
        model.reset(0.2)
        self.assertEqual(model.omega, 0.2)
        self.assertEqual(model.buffer, [0.] * 4)


class Test_PiState(TestCase):

    def test_proportional(self):
        self.assertAlmostEqual(PiState(0.5, 0.).control(1., 0.1), -0.5)

    def test_output_saturated(self):
        self.assertEqual(PiState(1., 1., saturation=2.).control(10., 0.1), -2.)

    def test_integrator_clamped(self):
        pi = PiState(0., 1., saturation=2.)
        for _ in range(100):
            pi.control(1., 1.)
        self.assertEqual(pi.integral, 2.)

    def test_rate_error_sign(self):
        self.assertAlmostEqual(pi_rate_control(PiState(1., 0.), 0.5, 0., 0.1), -0.5)

    def test_heading_error_wrapped(self):
        u = pi_heading_control(PiState(1., 0.), -3., 3., 0.1)
        self.assertAlmostEqual(u, -(2 * math.pi - 6.))

    def test_gains_from_assumptions(self):
        pi = PiState.rate_loop()
        self.assertEqual((pi.kp, pi.ki), (0.28, 1.0))


class Test_rate_loop(TestCase):

    def test_crossover(self):
        crossover = crossover_frequency()
        self.assertTrue(3.8 < crossover < 4.2)
        self.assertAlmostEqual(float(loop_gain(crossover)), 1., 3)

    def test_step_response_settles(self):
        for method in ('zoh', 'impulse'):
            times, omega = step_response(0.5, 3., method=method)
            self.assertAlmostEqual(times[-1], 3.)
            self.assertTrue(abs(omega[-1] - 0.5) < 0.025)

    def test_rate_tracker(self):
        tracker = RateTracker(0.004)
        state = VehicleState(Pose((0., 0.), 0.), 0.26)
        for _ in range(100):
            state = tracker.advance(state, 0.5, 0.05)
        self.assertAlmostEqual(state.angular_rate, 0.5, 2)

    def test_command_tracker_ideal(self):
        tracker = CommandTracker(0.004, ideal=True)
        state = tracker.advance(VehicleState(Pose((0., 0.), 0.), 0.26), 0.1, 0.05)
        self.assertAlmostEqual(state.angular_rate, 0.1 * tracker.actuator.dc_gain)

    def test_command_tracker_actuated(self):
        tracker = CommandTracker(0.004)
        state = VehicleState(Pose((0., 0.), 0.), 0.26)
        for _ in range(200):
            state = tracker.advance(state, 0.1, 0.05)
        self.assertAlmostEqual(state.angular_rate, 0.1 * tracker.actuator.dc_gain, 4)
        self.assertTrue(np.all(np.isfinite(state.position)))
