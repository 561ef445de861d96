import os
import shutil
import tempfile

import numpy as np
import pandas as pd

from .patches import TestCase
from .. import example
from ..geometry import Pose, VehicleState, step_dubins
from ..scenario import ScenarioError
from ..simulation import (agentColumns, barrierColumns, phiSumColumns, run, export, load_log, trailing_mean,
                          LoadLogError)


class Test_run_circle(TestCase):

    @classmethod
    def setUpClass(cls):
        cls.log = example.genExampleLog('circle', 2, 2.)

    def test_frames(self):
        self.assertEqual(list(self.log.agents.columns), agentColumns)
        self.assertEqual(list(self.log.barriers.columns), barrierColumns)
        self.assertEqual(list(self.log.phi_sum.columns), phiSumColumns)
        self.assertEqual(len(self.log.phi_sum), 40)
        self.assertEqual(len(self.log.agents), 80)
        self.assertEqual(len(self.log.barriers), 80)

    def test_times(self):
        self.assertAlmostEqual(self.log.times[0], 0.)
        self.assertAlmostEqual(self.log.times[-1], 1.95)

    def test_snapshots(self):
        self.assertEqual(list(self.log.snapshots), [0, 1])
        self.assertAlmostEqual(self.log.snapshot_times[1], 1.)
        self.assertEqual(len(self.log.snapshots[0]), 400)
        self.assertTrue(np.all(self.log.snapshots[0]['phi'] == 1.))

    def test_importance_drops(self):
        totals = self.log.phi_sum['phi_sum'].values
        self.assertAlmostEqual(totals[0], 400.)
        self.assertTrue(totals[-1] < totals[0])

    def test_objective(self):
        objective = self.log.phi_sum['objective'].values
        self.assertTrue(np.all(np.isfinite(objective)))
        self.assertTrue(np.all(objective > 0))

    def test_performance_kept(self):
        gamma = example.genExampleConfig().generator.gamma
        b1 = self.log.barriers.pivot(index='t', columns='agent', values='b1')
        self.assertTrue(np.all(b1.values[0] >= 0.))
        self.assertTrue(np.all(b1.values >= -1e-9))
        self.assertTrue(np.all(self.log.phi_sum['objective'].values >= gamma - 1e-9))

    def test_radius_within_bounds(self):
        r = self.log.agents['r'].values
        self.assertTrue(np.all(r >= 0.2 - 1e-6) and np.all(r <= 0.7 + 1e-6))
        self.assertTrue(self.log.agents['s1'].isnull().all())
        self.assertTrue(self.log.barriers['b4'].isnull().all())
        self.assertTrue(self.log.barriers['b_right'].isnull().all())

    def test_ideal_vehicle_follows_reference(self):
        rows = self.log.agent(0)
        for k in range(len(rows) - 1):
            state = VehicleState(Pose((rows['x'][k], rows['y'][k]), rows['theta'][k]), 0.26)
            moved = step_dubins(state, rows['omega_ref'][k], 0.05)
            self.assertAlmostEqual(moved.position[0], rows['x'][k + 1])
            self.assertAlmostEqual(moved.position[1], rows['y'][k + 1])
        self.assertTrue(np.allclose(rows['omega_ref'], rows['omega_star']))

    def test_path_through_agent(self):
        rows = self.log.agents
        distance = np.hypot(rows['x'] - rows['cx'], rows['y'] - rows['cy'])
        self.assertArrayAlmostEqual(rows['r'], distance, rtol=1e-9, atol=1e-9)

    def test_flags(self):
        self.assertEqual(list(self.log.flags), [0, 1])
        for flags in self.log.flags.values():
            self.assertIn('Fake', flags)
        frame = self.log.flag_frame()
        self.assertEqual(list(frame.columns), ['agent', 'flag', 'count'])


class Test_run_modes(TestCase):

    def test_ellipse(self):
        log = run(example.genExampleConfig('ellipse', 1, 1.))
        self.assertTrue(log.agents['s1'].notnull().all())
        self.assertTrue(log.agents['r'].isnull().all())
        self.assertTrue(log.barriers['b5'].notnull().all())

    def test_ellipse_performance_kept(self):
        config = example.genExampleConfig('ellipse', 2, 1.)
        log = run(config)
        self.assertTrue(np.all(log.barriers['b1'].values >= -1e-9))
        self.assertTrue(np.all(log.phi_sum['objective'].values >= config.generator.gamma - 1e-9))

    def test_actuated(self):
        log = run(example.genExampleConfig('circle', 1, 1., fidelity='actuated'))
        self.assertTrue(np.all(np.isfinite(log.agents['omega'])))
        self.assertEqual(log.agents['omega'].values[0], 0.)

    def test_safety(self):
        log = run(example.genExampleConfig('circle', 2, 1., safety=True))
        self.assertTrue(log.barriers['b_right'].notnull().all())
        self.assertTrue(np.all(log.barriers['b_right'] > 0))

    def test_baseline(self):
        log = run(example.genExampleConfig('baseline', 2, 1.))
        self.assertTrue(log.phi_sum['objective'].isnull().all())
        self.assertTrue(log.barriers[['b1', 'w', 'b_right']].isnull().all().all())
        self.assertEqual(list(log.plans), [0, 1])
        self.assertTrue(log.agents['target'].notnull().all())
        self.assertTrue(log.agents['direction'].isnull().all())

    def test_invalid_config(self):
        with self.assertRaises(ScenarioError):
            run(example.genExampleConfig().replace(dt=-1.))

    def test_parallel_agents_match(self):
        config = example.genExampleConfig('circle', 2, 0.5)
        sequential = run(config)
        parallel = run(config.replace(parallel_agents=True))
        pd.testing.assert_frame_equal(sequential.agents, parallel.agents)
        pd.testing.assert_frame_equal(sequential.barriers, parallel.barriers)

    def test_disturbance_seeded(self):
        config = example.genExampleConfig('circle', 1, 0.5).replace(disturbance_std=0.2, seed=3)
        first, second = run(config), run(config)
        pd.testing.assert_frame_equal(first.agents, second.agents)
        other = run(config.replace(seed=4))
        self.assertFalse(np.allclose(first.agents['x'].values, other.agents['x'].values))

    def test_unit_weighting(self):
        config = example.genExampleConfig('circle', 2, 0.1)
        area = run(config).phi_sum['objective'].values[0]
        unit = run(config.replace(objective_weighting='unit')).phi_sum['objective'].values[0]
        self.assertAlmostEqual(unit, area / 0.01, delta=1e-9 * unit)

    def test_fleet_changes(self):
        config = example.genExampleConfig('circle', 3, 2.)
        config.fleet.agents[0].active_until = 1.
        config.fleet.agents[2].active_from = 0.5
        log = run(config)

        counts = log.agents.groupby('agent').size()
        self.assertTrue(19 <= counts[0] <= 21)
        self.assertEqual(counts[1], 40)
        self.assertTrue(29 <= counts[2] <= 31)
        self.assertIn('Fleet Change', log.flags[0])
        self.assertNotIn('Fleet Change', log.flags[1])
        self.assertIn('Fleet Change', log.flags[2])


class Test_export(TestCase):

    def setUp(self):
        self.tempDir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tempDir)

    def test_round_trip(self):
        log = example.genExampleLog('circle', 2, 1.)
        written = export(log, self.tempDir)

        for name in ('agents.csv', 'barriers.csv', 'phi_sum.csv', 'flags.csv', 'snapshots.csv', 'field_0000.csv',
                     'field_0000.npy'):
            self.assertIn(os.path.join(self.tempDir, name), written)

        loaded = load_log(self.tempDir)
        pd.testing.assert_frame_equal(log.agents, loaded.agents)
        pd.testing.assert_frame_equal(log.barriers, loaded.barriers)
        pd.testing.assert_frame_equal(log.phi_sum, loaded.phi_sum)
        pd.testing.assert_frame_equal(log.snapshots[0], loaded.snapshots[0])
        self.assertEqual(dict(log.snapshot_times), dict(loaded.snapshot_times))
        self.assertEqual(loaded.flags[1].count('Fake'), 1)

    def test_field_image(self):
        log = example.genExampleLog('circle', 1, 0.5)
        export(log, self.tempDir)
        image = np.load(os.path.join(self.tempDir, 'field_0000.npy'))
        self.assertEqual(image.shape, (20, 20))

    def test_baseline_plans(self):
        log = run(example.genExampleConfig('baseline', 2, 0.5))
        export(log, self.tempDir)
        loaded = load_log(self.tempDir)
        pd.testing.assert_frame_equal(log.plans[1], loaded.plans[1])
        pd.testing.assert_frame_equal(log.agents, loaded.agents)

    def test_missing_directory(self):
        with self.assertRaises(LoadLogError):
            load_log(os.path.join(self.tempDir, 'nothing'))

    def test_missing_table(self):
        with self.assertRaises(LoadLogError):
            load_log(self.tempDir)

    def test_wrong_columns(self):
        log = example.genExampleLog('circle', 1, 0.5)
        export(log, self.tempDir)
        pd.DataFrame({'t': [0.], 'sum': [1.]}).to_csv(os.path.join(self.tempDir, 'phi_sum.csv'), index=False)
        with self.assertRaises(LoadLogError):
            load_log(self.tempDir)


class Test_trailing_mean(TestCase):

    def test_window(self):
        self.assertArrayAlmostEqual([1., 1.5, 2.5, 3.5], trailing_mean([0., 1., 2., 3.], [1., 2., 3., 4.], 2.))

    def test_window_longer_than_run(self):
        self.assertArrayAlmostEqual([2., 3., 4.], trailing_mean([0., 0.5, 1.], [2., 4., 6.], 60.))
