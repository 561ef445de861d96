from .patches import TestCase
from .. import marinequantities as mq


class Test_splitUnitKey(TestCase):

    def test_speed(self):
        self.assertEqual(mq.splitUnitKey('speed_m_s'), ('speed', mq.m_s))

    def test_milliseconds(self):
        self.assertEqual(mq.splitUnitKey('inner_dt_ms'), ('inner_dt', mq.ms))

    def test_metres(self):
        self.assertEqual(mq.splitUnitKey('sigma_m'), ('sigma', mq.m))

    def test_no_suffix(self):
        self.assertEqual(mq.splitUnitKey('phi0'), ('phi0', None))
        self.assertEqual(mq.splitUnitKey('m'), ('m', None))

    def test_degrees(self):
        self.assertEqual(mq.splitUnitKey('heading_deg'), ('heading', mq.degree))
        self.assertEqual(mq.splitUnitKey('turn_deg_s'), ('turn_deg', mq.s))


class Test_toSI(TestCase):

    def test_conversions(self):
        self.assertAlmostEqual(mq.toSI(10., mq.cm, mq.m), 0.1)
        self.assertAlmostEqual(mq.toSI(2., mq.minute, mq.s), 120.)
        self.assertAlmostEqual(mq.toSI(180., mq.degree, mq.radian), 3.141592653589793)

    def test_incompatible(self):
        with self.assertRaises(ValueError):
            mq.toSI(1., mq.m, mq.s)
