from .patches import TestCase
from .. import example
from ..scenario import validate


class Test_example(TestCase):

    def test_config_validates(self):
        for mode in ('circle', 'ellipse', 'baseline'):
            report = validate(example.genExampleConfig(mode))
            self.assertTrue(report.ok, report)

    def test_agents_spread(self):
        config = example.genExampleConfig('circle', 3)
        self.assertItemsAlmostEqual([-0.5, 0., 0.5], [agent.x for agent in config.fleet.agents])

    def test_single_agent(self):
        config = example.genExampleConfig('circle', 1)
        self.assertEqual(config.fleet.n, 1)
        self.assertAlmostEqual(config.fleet.agents[0].x, -0.4)

    def test_field(self):
        field = example.genExampleField(0.5)
        self.assertEqual(field.grid.m, 400)
        self.assertAlmostEqual(field.phi[0], 0.5)

    def test_log_is_fake(self):
        log = example.genExampleLog('circle', 1, 0.2)
        self.assertIn('Fake', log.flags[0])
