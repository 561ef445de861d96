"""
Online coverage path generation for fleets of Dubins surface vehicles.
"""

__version__ = '0.3.0'


def test():
    import unittest

    from .tests import testsuite as _testsuite
    unittest.TextTestRunner(verbosity=2).run(_testsuite)

# Import package modules
from . import assumptions, coverage, example, field, flags, geometry, marinequantities, params, qp, safety, vehicle
from .scenario import SimConfig, bundled_scenarios, load_scenario, validate
from .simulation import SimLog, export, load_log, run
