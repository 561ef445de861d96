""" Global parameters for the aquacover package are stored here. Overwrite them after import to change the numerical
behaviour of every module, ie ``aquacover.params.feasTol = 1e-10``
"""

# switch between arc and straight integration of the Dubins model (rad/s)
omegaTol = 1e-9

# a point closer than this to a circle center has no unique closest point (m)
distTol = 1e-9

# arc angles within this of 2 pi are snapped to 0
angleTol = 1e-9

# smallest Schur complement denominator accepted by the elliptic shape barriers
denomTol = 1e-9

# quadratic program tolerances
feasTol = 1e-8
kktTol = 1e-8
qpMaxIter = 100

# relative step of the central finite differences, step = fdRelStep * max(1, |var|)
fdRelStep = 1e-6


# here be dragons
class AquaCoverError(Exception):
    pass
