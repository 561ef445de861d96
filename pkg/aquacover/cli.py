""" Command line interface, ``aquacover <command>``

    aquacover sim --scenario ideal_ellipse --out runs/ellipse
    aquacover baseline --scenario pool_baseline --duration 60
    aquacover check --suite qp
    aquacover export-plots runs/ellipse --figures
"""
import argparse
import logging
import os
import sys

from . import __version__
from .params import AquaCoverError

logger = logging.getLogger(__name__)


def _add_run_arguments(parser, default_scenario):
    parser.add_argument('--scenario', default=default_scenario,
                        help='scenario file or bundled scenario name (default %(default)s)')
    parser.add_argument('--duration', type=float, help='simulated time in s')
    parser.add_argument('--dt', type=float, help='control step in s')
    parser.add_argument('--out', help='output directory (default ./runs/<scenario name>)')
    parser.add_argument('--fidelity', choices=('ideal', 'actuated'))
    parser.add_argument('--seed', type=int, help='seed of the disturbance noise')


def build_parser():

    parser = argparse.ArgumentParser(prog='aquacover',
                                     description='Coverage path generation for fleets of Dubins surface vehicles')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v for info, -vv for debug logging')

    commands = parser.add_subparsers(dest='command')
    commands.required = True

    sim = commands.add_parser('sim', help='run a scenario with the coverage path generators')
    _add_run_arguments(sim, 'ideal_ellipse')
    sim.add_argument('--mode', choices=('circle', 'ellipse', 'baseline'))

    baseline = commands.add_parser('baseline', help='run a scenario with the lawnmower baseline')
    _add_run_arguments(baseline, 'pool_baseline')

    check = commands.add_parser('check', help='run the oracle and invariant suites')
    check.add_argument('--suite', default='all',
                       choices=('all', 'geometry', 'gradients', 'qp', 'shape', 'theorem', 'actuator', 'scenarios'))
    check.add_argument('--seed', type=int, default=0)
    check.add_argument('--quick', action='store_true', help='run every check on a twentieth of its instances')

    plots = commands.add_parser('export-plots', help='turn a run directory into plot-ready tables')
    plots.add_argument('run', help='run directory written by sim or baseline')
    plots.add_argument('--out', help='directory for the tables (default the run directory)')
    plots.add_argument('--window', type=float, default=60., help='trailing mean window in s (default %(default)s)')
    plots.add_argument('--figures', action='store_true', help='also save PNG figures')

    return parser


def _configure_logging(verbosity):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(level=level, format='%(asctime)s %(name)s %(levelname)s: %(message)s')


def _run(args, mode=None):

    from .scenario import load_scenario
    from .simulation import export, run

    config = load_scenario(args.scenario).replace(duration=args.duration, dt=args.dt, fidelity=args.fidelity,
                                                 seed=args.seed, mode=mode or getattr(args, 'mode', None))
    out = args.out or config.output or os.path.join('runs', config.name.replace(' ', '_'))

    log = run(config)
    export(log, out)

    totals = log.phi_sum['phi_sum'].values
    print('{0}: {1} steps, sum phi {2:.6g} -> {3:.6g}, written to {4}'.format(config.name, len(totals), totals[0],
                                                                            totals[-1], out))
    for agent, flags in log.flags.items():
        if list(flags):
            print('  agent {0}: {1}'.format(agent, ', '.join('{0} x{1}'.format(f, flags.count(f)) for f in flags)))

    return 0


def _check(args):

    from .checks import format_report, run_suite

    results = run_suite(args.suite, args.seed, 0.05 if args.quick else 1.)
    print(format_report(results))

    return 0 if all(result.passed for result in results) else 1


def _export_plots(args):

    from .plots import export_plot_tables

    written = export_plot_tables(args.run, args.out, args.window, args.figures)
    print('wrote {0} files'.format(len(written)))

    return 0


def main(argv=None):
    """ entry point of the aquacover console script, returns the exit code
    """

    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)

    try:
        if args.command == 'sim':
            return _run(args)
        if args.command == 'baseline':
            return _run(args, 'baseline')
        if args.command == 'check':
            return _check(args)
        return _export_plots(args)
    except (AquaCoverError, IOError) as e:
        logger.debug('command failed', exc_info=True)
        print('aquacover {0}: {1}'.format(args.command, e), file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())
