""" This module contains the plot types of a run and the plot-ready tables written by ``aquacover export-plots``
"""
import logging
import os

import numpy as np
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
from matplotlib import rcParams

from . import marinequantities as mq
from .simulation import load_log, trailing_mean

logger = logging.getLogger(__name__)

rcParams.update({'figure.autolayout': True})


# size preset -> (figsize in inches, font size)
figurePresets = {
    'small': ((5, 4), 10),
    'large': ((10, 7.5), 20),
}


class _GlobalFigure(object):
    """ Base of the run figures, a single axes sized from figurePresets: 'small' for reports, 'large' for slides
    """

    def __init__(self, size='small'):

        try:
            figsize, self._fontsize = figurePresets[size]
        except KeyError:
            raise ValueError('size must be one of {0}, got {1!r}'.format(sorted(figurePresets), size))

        self.fig, self.ax = plt.subplots(figsize=figsize)

    def apply_font_size(self, fontsize=None):
        fontsize = self._fontsize if fontsize is None else fontsize
        labels = [self.ax.title, self.ax.xaxis.label, self.ax.yaxis.label]
        for text in labels + self.ax.get_xticklabels() + self.ax.get_yticklabels():
            text.set_fontsize(fontsize)

    def save(self, path):
        self.fig.savefig(path)
        plt.close(self.fig)
        logger.info('saved figure %s', path)
        return path


# column -> (label, unit) of the run log columns that get plotted
_logPars = {
    't': ('Time', mq.s),
    'x': ('x', mq.m),
    'y': ('y', mq.m),
    'omega': ('Angular rate', mq.rad_s),
    'omega_star': ('Path angular rate', mq.rad_s),
    'omega_ref': ('Filtered angular rate', mq.rad_s),
    'r': ('Radius', mq.m),
    'phi_sum': ('Total importance', None),
    'objective': ('Coverage objective', None),
    'b1': ('Performance barrier', None),
    'b_right': ('Right wall barrier', None),
    'b_left': ('Left wall barrier', None),
}


def _get_unit_symbol(unit):
    """ Every quantities object has a symbol, some units here also carry a `latex_symbol`. This first checks for a
    latex symbol and then falls back to the symbol
    """
    try:
        return '${0}$'.format(unit.latex_symbol)
    except AttributeError:
        return unit.symbol


def _gen_label(column):
    label, unit = _logPars[column]
    if unit is None:
        return label
    return '{0} ({1})'.format(label, _get_unit_symbol(unit))


class TimeSeriesFigure(_GlobalFigure):
    """ one column of a run log against time, a line per agent when the frame has an agent column
    """

    def __init__(self, frame, column, size='small'):
        _GlobalFigure.__init__(self, size)
        self.frame = frame
        self.column = column

    def plot(self, zero_line=False):

        if 'agent' in self.frame:
            for agent, rows in self.frame.groupby('agent'):
                self.ax.plot(rows['t'], rows[self.column], label='agent {0}'.format(agent))
            self.ax.legend(loc='best', fontsize=self._fontsize)
        else:
            self.ax.plot(self.frame['t'], self.frame[self.column], c='#3ea0e4')

        if zero_line:
            self.ax.axhline(0., c='k', lw=0.8, ls='--')

        self.ax.set_xlabel(_gen_label('t'))
        self.ax.set_ylabel(_gen_label(self.column))
        self.apply_font_size()

        return self


class FieldFigure(_GlobalFigure):
    """ importance map of a field snapshot with the agent tracks up to the snapshot time on top
    """

    def __init__(self, snapshot, tracks=None, size='small'):
        """
        :param snapshot: field frame (j, qx, qy, phi)
        :param tracks: agents frame (t, agent, x, y, ...) to draw, or None
        """
        _GlobalFigure.__init__(self, size)
        self.snapshot = snapshot
        self.tracks = tracks

    def image(self):
        """ (phi as a rows x cols array, extent for imshow)
        """

        xs = np.unique(self.snapshot['qx'].values)
        ys = np.unique(self.snapshot['qy'].values)
        image = self.snapshot['phi'].values.reshape(len(ys), len(xs))

        half = (xs[1] - xs[0]) / 2. if len(xs) > 1 else (ys[1] - ys[0]) / 2. if len(ys) > 1 else 0.5
        return image, (xs[0] - half, xs[-1] + half, ys[0] - half, ys[-1] + half)

    def plot(self, cmap_name='viridis'):

        image, extent = self.image()
        mappable = self.ax.imshow(image, origin='lower', extent=extent, cmap=cmap_name, vmin=0.,
                                  vmax=max(1., np.max(image)))
        self.fig.colorbar(mappable, ax=self.ax, label='Importance')

        if self.tracks is not None:
            for agent, rows in self.tracks.groupby('agent'):
                self.ax.plot(rows['x'], rows['y'], lw=0.8, c='w')
                self.ax.plot(rows['x'].values[-1], rows['y'].values[-1], 'o', c='r', ms=4)

        self.ax.set_xlabel(_gen_label('x'))
        self.ax.set_ylabel(_gen_label('y'))
        self.ax.set_aspect('equal')

        return self


def _per_agent(frame, columns):
    """ pivots agent rows into one row per time with <column>_<agent> columns
    """

    wide = frame.pivot(index='t', columns='agent', values=columns)
    wide.columns = ['{0}_{1}'.format(column, agent) for column, agent in wide.columns]
    return wide.reset_index()


def export_plot_tables(directory, out=None, window=60., figures=False):
    """ Turns a run directory into plot-ready tables: phi_sum_plot.csv (with the trailing mean over window seconds),
    barriers_plot.csv and tracks_plot.csv with a column per agent, and with figures the matching PNGs

    :param out: directory for the tables, the run directory if None
    :return: list of the paths written
    """

    log = load_log(directory)

    out = directory if out is None else out
    if not os.path.isdir(out):
        os.makedirs(out)

    written = []

    def write(frame, name):
        path = os.path.join(out, name)
        frame.to_csv(path, index=False, float_format='%.17g')
        written.append(path)

    phi = log.phi_sum.copy()
    phi['phi_sum_trailing'] = trailing_mean(phi['t'].values, phi['phi_sum'].values, window)
    write(phi, 'phi_sum_plot.csv')
    write(_per_agent(log.barriers, ['b1', 'w', 'b_right', 'b_left']), 'barriers_plot.csv')
    write(_per_agent(log.agents, ['x', 'y', 'theta', 'omega']), 'tracks_plot.csv')

    if figures:
        written.append(TimeSeriesFigure(phi, 'phi_sum').plot().save(os.path.join(out, 'phi_sum.png')))
        if log.barriers['b1'].notnull().any():
            written.append(TimeSeriesFigure(log.barriers, 'b1').plot(zero_line=True).save(
                os.path.join(out, 'barriers.png')))
        if log.barriers['b_right'].notnull().any():
            written.append(TimeSeriesFigure(log.barriers, 'b_right').plot(zero_line=True).save(
                os.path.join(out, 'walls.png')))
        if log.snapshots:
            last = list(log.snapshots)[-1]
            upto = log.snapshot_times.get(last, np.inf)
            tracks = log.agents[log.agents['t'] <= upto]
            written.append(FieldFigure(log.snapshots[last], tracks).plot().save(
                os.path.join(out, 'field_{0:04d}.png'.format(last))))

    logger.info('wrote %d plot files to %s', len(written), out)

    return written
