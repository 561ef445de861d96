""" Small dense strictly convex quadratic programs,

    minimise    sum_k cost_diag[k] x_k^2 + cost_linear . x
    subject to  row_i . x >= rhs_i

solved by a primal active-set iteration. The problems built by the path generators and the wall filter have at most
a handful of variables and a dozen rows, so every iteration solves the full KKT system densely. A feasible starting
point comes from a linear program (scipy's HiGHS) when the unconstrained minimum is not feasible.
"""
import enum
import logging

import numpy as np
from scipy.optimize import linprog

from . import params

logger = logging.getLogger(__name__)

_zeroRow = 1e-14


class QpStatus(enum.Enum):
    OPTIMAL = 'optimal'
    INFEASIBLE = 'infeasible'


class QpProblem(object):
    """ A quadratic program with a diagonal positive definite cost and >= constraints
    """

    def __init__(self, cost_diag, cost_linear=None):

        self.cost_diag = np.array(cost_diag, dtype=float).reshape(-1)
        self.dim = len(self.cost_diag)
        self.cost_linear = np.zeros(self.dim) if cost_linear is None else np.array(cost_linear, dtype=float)

        if np.any(self.cost_diag <= 0):
            raise ValueError('cost_diag must be positive, got {0}'.format(self.cost_diag))
        if self.cost_linear.shape != (self.dim,):
            raise ValueError('cost_linear must have {0} entries'.format(self.dim))

        self.rows = []
        self.rhs = []
        self.labels = []

    def add_constraint(self, row, rhs, label=None):
        """ adds row . x >= rhs, returns its index
        """

        row = np.array(row, dtype=float).reshape(-1)

        if row.shape != (self.dim,) or not np.all(np.isfinite(row)) or not np.isfinite(rhs):
            raise ValueError('constraint {0!r} must be a finite row of {1} entries'.format(label, self.dim))

        self.rows.append(row)
        self.rhs.append(float(rhs))
        self.labels.append(label)

        return len(self.rows) - 1

    @property
    def A(self):
        return np.array(self.rows, dtype=float).reshape(len(self.rows), self.dim)

    @property
    def b(self):
        return np.array(self.rhs, dtype=float)

    def objective(self, x):
        x = np.asarray(x, dtype=float)
        return float(np.sum(self.cost_diag * x * x) + self.cost_linear.dot(x))

    def unconstrained_minimum(self):
        return -self.cost_linear / (2. * self.cost_diag)

    def __len__(self):
        return len(self.rows)

    def __repr__(self):
        return 'QpProblem(dim={0}, constraints={1})'.format(self.dim, len(self.rows))


class QpSolution(object):

    def __init__(self, x, status, active_set=(), multipliers=None, iterations=0):

        self.x = np.asarray(x, dtype=float)
        self.status = status
        self.active_set = tuple(active_set)
        self.multipliers = multipliers
        self.iterations = iterations

    @property
    def optimal(self):
        return self.status is QpStatus.OPTIMAL

    def __repr__(self):
        return 'QpSolution({0}, x={1}, active={2})'.format(self.status.value, np.array2string(self.x, precision=6),
                                                           list(self.active_set))


def kkt_residuals(problem, solution):
    """ (worst constraint violation, stationarity residual, complementarity residual, most negative multiplier)
    """

    A, b = problem.A, problem.b
    x = solution.x
    lam = np.zeros(len(b)) if solution.multipliers is None else solution.multipliers

    gradient = 2. * problem.cost_diag * x + problem.cost_linear
    slack = A.dot(x) - b if len(b) else np.zeros(0)

    violation = float(max(0., -slack.min())) if len(b) else 0.
    stationarity = float(np.max(np.abs(gradient - A.T.dot(lam)))) if len(b) else float(np.max(np.abs(gradient)))
    complementarity = float(np.max(np.abs(lam * slack))) if len(b) else 0.
    dual = float(min(0., lam.min())) if len(b) else 0.

    return violation, stationarity, complementarity, dual


def _feasible_start(A, b):
    """ a point with A x >= b from a zero-cost linear program, or None when there is none
    """

    result = linprog(np.zeros(A.shape[1]), A_ub=-A, b_ub=-b, bounds=[(None, None)] * A.shape[1], method='highs',
                     options={'primal_feasibility_tolerance': 1e-10})

    if result.status != 0:
        return None
    return np.asarray(result.x, dtype=float)


def _independent(rows, candidate):
    stacked = np.vstack(rows + [candidate])
    return np.linalg.matrix_rank(stacked, tol=1e-10) == len(stacked)


def _solve_eqp(H, g, A_w, b_w):
    """ minimiser of x' H x / 2 + g' x on A_w x = b_w and the multipliers of the rows
    """

    d = len(g)
    k = len(b_w)

    if k == 0:
        return -g / np.diag(H), np.zeros(0)

    kkt = np.zeros((d + k, d + k))
    kkt[:d, :d] = H
    kkt[:d, d:] = -A_w.T
    kkt[d:, :d] = A_w
    rhs = np.concatenate((-g, b_w))

    try:
        sol = np.linalg.solve(kkt, rhs)
    except np.linalg.LinAlgError:
        sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]

    return sol[:d], sol[d:]


def solve(problem):
    """ Global minimiser of a QpProblem by a primal active-set iteration. Deterministic for a given problem; never
    raises for infeasibility, the returned solution has status INFEASIBLE instead

    :param problem: QpProblem
    :return: QpSolution, multipliers are indexed like the problem's constraints
    """

    A_all, b_all = problem.A, problem.b
    H = np.diag(2. * problem.cost_diag)
    g = problem.cost_linear
    k_all = len(b_all)

    # rows without coefficients are either always satisfied or never
    keep = []
    for i in range(k_all):
        if np.max(np.abs(A_all[i])) > _zeroRow:
            keep.append(i)
        elif b_all[i] > params.feasTol:
            logger.debug('qp row %d has no coefficients and rhs %g, infeasible', i, b_all[i])
            return QpSolution(problem.unconstrained_minimum(), QpStatus.INFEASIBLE)

    A, b = A_all[keep], b_all[keep]

    x = problem.unconstrained_minimum()
    if len(b) == 0 or np.all(A.dot(x) - b >= -params.feasTol):
        return QpSolution(x, QpStatus.OPTIMAL, (), np.zeros(k_all))

    x = _feasible_start(A, b)
    if x is None:
        logger.debug('qp has no feasible point')
        return QpSolution(problem.unconstrained_minimum(), QpStatus.INFEASIBLE)

    working = []
    for i in range(len(b)):
        if abs(A[i].dot(x) - b[i]) <= params.feasTol and len(working) < problem.dim:
            if not working or _independent([A[j] for j in working], A[i]):
                working.append(i)

    lam = np.zeros(0)
    for iteration in range(1, params.qpMaxIter + 1):
        x_eq, lam = _solve_eqp(H, g, A[working], b[working])
        p = x_eq - x

        if np.max(np.abs(p)) <= 1e-12 * (1. + np.max(np.abs(x))):
            if not working or lam.min() >= -params.kktTol:
                x = x_eq
                break
            working.pop(int(np.argmin(lam)))
            continue

        alpha, blocking = 1., None
        for i in range(len(b)):
            if i in working:
                continue
            ap = A[i].dot(p)
            if ap < -_zeroRow:
                step = (b[i] - A[i].dot(x)) / ap
                if step < alpha:
                    alpha, blocking = max(step, 0.), i

        x = x + alpha * p
        if blocking is not None:
            working.append(blocking)
    else:
        logger.debug('qp active set did not settle in %d iterations', params.qpMaxIter)
        return QpSolution(x, QpStatus.INFEASIBLE, iterations=params.qpMaxIter)

    multipliers = np.zeros(k_all)
    for position, i in enumerate(working):
        multipliers[keep[i]] = max(lam[position], 0.)

    active = sorted(keep[i] for i in working)
    logger.debug('qp solved in %d iterations, active %s', iteration, active)

    return QpSolution(x, QpStatus.OPTIMAL, active, multipliers, iteration)


class QpInfeasibleError(params.AquaCoverError):
    pass
