from .patches import TestCase
from ..assumptions import defaultEpsilon, poolWeight, vehicleAssumptions


class Test_defaultEpsilon(TestCase):

    def test_share(self):
        self.assertAlmostEqual(defaultEpsilon(10., 2), 0.05)

    def test_zero_level(self):
        self.assertEqual(defaultEpsilon(0., 3), 1e-9)


class Test_poolWeight(TestCase):

    def test_margin(self):
        weight = poolWeight((2.5, 0.9), 0.05)
        self.assertAlmostEqual(weight[0, 0], 1. / 2.45 ** 4)
        self.assertAlmostEqual(weight[1, 1], 1. / 0.85 ** 4)
        self.assertEqual(weight[0, 1], 0.)

    def test_default_margin(self):
        weight = poolWeight((1., 1.))
        self.assertAlmostEqual(weight[0, 0], 1. / (1. - vehicleAssumptions['poolMargin']) ** 4)

    def test_no_room(self):
        with self.assertRaises(ValueError):
            poolWeight((0.5, 0.04), 0.05)
