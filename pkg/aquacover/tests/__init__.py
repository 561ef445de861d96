import os
import unittest

testsuite = unittest.TestLoader().discover(os.path.dirname(__file__))
