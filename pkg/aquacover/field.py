""" The observation grid and the persistent coverage importance dynamics run by the central computer.

Each observation point q_j carries an importance index phi_j which regrows at gain_up when nobody looks at it and
decays with the best sensing performance of the fleet,

    phi_j' = gain_up - gain_down * max_i f(p_i, q_j) * phi_j

kept inside [phi_min, phi_max] by zeroing the rate whenever it pushes past a saturated bound.
"""
import logging

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)


class ObservationGrid(object):
    """ Cell centres of a rectangular area split into square cells, stored row major (rows along y, columns along x)
    """

    def __init__(self, origin, extent, cell_size):
        """
        :param origin: lower left corner of the area (m)
        :param extent: (width, height) of the area (m)
        :param cell_size: side of a cell (m)
        """

        self.origin = np.array(origin, dtype=float).reshape(2)
        self.extent = np.array(extent, dtype=float).reshape(2)
        self.cell_size = float(cell_size)

        if self.cell_size <= 0 or np.any(self.extent <= 0):
            raise ValueError('grid extent and cell size must be positive')

        self.cols = int(round(self.extent[0] / self.cell_size))
        self.rows = int(round(self.extent[1] / self.cell_size))

        if self.cols < 1 or self.rows < 1:
            raise ValueError('cell size {0} is larger than the grid extent {1}'.format(cell_size, extent))

        xs = self.origin[0] + (np.arange(self.cols) + 0.5) * self.cell_size
        ys = self.origin[1] + (np.arange(self.rows) + 0.5) * self.cell_size
        gx, gy = np.meshgrid(xs, ys)

        self.points = np.column_stack((gx.ravel(), gy.ravel()))

    @classmethod
    def centred(cls, center, extent, cell_size):
        """ grid of the given extent centred on center
        """
        extent = np.array(extent, dtype=float)
        return cls(np.asarray(center, dtype=float) - extent / 2., extent, cell_size)

    @property
    def m(self):
        return self.rows * self.cols

    @property
    def cell_area(self):
        return self.cell_size ** 2

    def as_image(self, values):
        """ reshapes a per-point vector into the (rows, cols) grid, row 0 at the lowest y
        """
        return np.asarray(values).reshape(self.rows, self.cols)

    def __len__(self):
        return self.m

    def __repr__(self):
        return 'ObservationGrid({0}x{1} cells of {2} m at ({3:.6g}, {4:.6g}))'.format(
            self.cols, self.rows, self.cell_size, self.origin[0], self.origin[1])


def sensing_performance(p, q, sigma):
    """ Gaussian sensing performance exp(-|p - q|^2 / 2 sigma^2)

    :param p: sensor position, a 2-vector
    :param q: observation point(s), a 2-vector or an (m, 2) array
    :param sigma: width of the kernel (m)
    """

    d = np.asarray(q, dtype=float) - np.asarray(p, dtype=float)
    return np.exp(-np.sum(d * d, axis=-1) / (2. * sigma ** 2))


def best_coverage(points, agent_positions, sigma):
    """ max_i f(p_i, q_j) for every point, 0 when there are no agents
    """

    points = np.asarray(points, dtype=float)
    best = np.zeros(len(points))

    for position in agent_positions:
        best = np.maximum(best, sensing_performance(position, points, sigma))

    return best


def importance_rate(phi, best_f, gain_up, gain_down, phi_min, phi_max):
    """ Rate of the importance indices, zeroed where it would push an index past a saturated bound. Works on scalars
    and arrays alike
    """

    phi = np.asarray(phi, dtype=float)
    rate = gain_up - gain_down * np.asarray(best_f, dtype=float) * phi
    blocked = ((rate > 0) & (phi >= phi_max)) | ((rate < 0) & (phi <= phi_min))
    rate = np.where(blocked, 0., rate)

    if rate.ndim == 0:
        return float(rate)
    return rate


class ImportanceField(object):
    """ Importance indices of every observation point with their bounds and gains
    """

    def __init__(self, grid, phi, phi_min=0., phi_max=1., gain_up=0.02, gain_down=0.5):

        self.grid = grid
        self.phi = np.array(phi, dtype=float)
        self.phi_min = float(phi_min)
        self.phi_max = float(phi_max)
        self.gain_up = float(gain_up)
        self.gain_down = float(gain_down)

        if self.phi.shape == ():
            self.phi = np.full(grid.m, float(phi))

        if self.phi.shape != (grid.m,):
            raise ValueError('expected {0} importance values, got {1}'.format(grid.m, self.phi.shape))
        if not self.phi_min < self.phi_max:
            raise ValueError('phi_min must be below phi_max')
        if self.gain_up <= 0 or self.gain_down <= 0:
            raise ValueError('importance gains must be positive')
        if np.any(self.phi < self.phi_min) or np.any(self.phi > self.phi_max):
            raise ValueError('initial importance outside [{0}, {1}]'.format(self.phi_min, self.phi_max))

    @property
    def points(self):
        return self.grid.points

    def rate(self, best_f):
        """ importance rate of every point given max_i f(p_i, q_j)
        """
        return importance_rate(self.phi, best_f, self.gain_up, self.gain_down, self.phi_min, self.phi_max)

    def copy(self, phi=None):
        return ImportanceField(self.grid, self.phi.copy() if phi is None else phi, self.phi_min, self.phi_max,
                               self.gain_up, self.gain_down)

    def to_dataframe(self):
        return pd.DataFrame({'j': np.arange(self.grid.m), 'qx': self.points[:, 0], 'qy': self.points[:, 1],
                             'phi': self.phi})

    def __repr__(self):
        return 'ImportanceField(m={0}, sum={1:.6g}, range=[{2}, {3}])'.format(self.grid.m, total_importance(self),
                                                                             self.phi_min, self.phi_max)


def step_field(field, agent_positions, sigma, dt):
    """ Forward Euler step of the importance dynamics followed by a clamp to [phi_min, phi_max]

    :return: a new ImportanceField, the input is left untouched
    """

    if not dt > 0:
        raise ValueError('dt must be positive, got {0}'.format(dt))

    best_f = best_coverage(field.points, agent_positions, sigma)
    phi = np.clip(field.phi + dt * field.rate(best_f), field.phi_min, field.phi_max)

    return field.copy(phi)


def total_importance(field):
    return float(np.sum(field.phi))
