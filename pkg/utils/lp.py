"""Dense two-phase tableau simplex; Dantzig pricing with a lexicographic ratio test"""

import logging
from dataclasses import dataclass, field

import numpy as np

import config
from utils.errors import LinearProgramError

logger = logging.getLogger(__name__)

OPTIMAL = 'optimal'
INFEASIBLE = 'infeasible'
UNBOUNDED = 'unbounded'

RELATIONS = ('<=', '=', '>=')


@dataclass
class Constraint:
    row: np.ndarray
    relation: str
    rhs: float


@dataclass
class LinearProgram:
    """Optimise objective . x subject to constraints and lower <= x <= upper.

    Bounds default to x >= 0; pass -inf / inf for free variables.
    """

    objective: np.ndarray
    sense: str = 'min'
    constraints: list = field(default_factory=list)
    lower: np.ndarray = None
    upper: np.ndarray = None

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float)
        nvar = self.objective.shape[0]
        self.lower = np.zeros(nvar) if self.lower is None else np.asarray(self.lower, dtype=float)
        self.upper = np.full(nvar, np.inf) if self.upper is None else np.asarray(self.upper, dtype=float)

    @property
    def nvar(self):
        return self.objective.shape[0]

    def add(self, row, relation, rhs):
        self.constraints.append(Constraint(np.asarray(row, dtype=float), relation, float(rhs)))
        return self

    def validate(self):
        if self.sense not in ('min', 'max'):
            raise LinearProgramError('lp_dimension', reason=f'unknown sense {self.sense!r}')
        if self.lower.shape != (self.nvar,) or self.upper.shape != (self.nvar,):
            raise LinearProgramError('lp_dimension', reason='bounds do not match the objective length')
        if np.any(self.lower > self.upper):
            raise LinearProgramError('lp_dimension', reason='lower bound above upper bound')
        if not np.all(np.isfinite(self.objective)):
            raise LinearProgramError('lp_dimension', reason='objective has non-finite coefficients')
        for i, con in enumerate(self.constraints):
            if con.row.shape != (self.nvar,):
                raise LinearProgramError(
                    'lp_dimension', reason=f'constraint {i} has {con.row.shape[0]} coefficients, expected {self.nvar}')
            if con.relation not in RELATIONS:
                raise LinearProgramError('lp_dimension', reason=f'constraint {i} has relation {con.relation!r}')
            if not (np.all(np.isfinite(con.row)) and np.isfinite(con.rhs)):
                raise LinearProgramError('lp_dimension', reason=f'constraint {i} has non-finite coefficients')


@dataclass
class LpSolution:
    """duals[i] is d(value)/d(rhs_i) for the i-th user constraint"""

    status: str
    value: float = float('nan')
    point: np.ndarray = None
    duals: np.ndarray = None
    dual_value: float = float('nan')
    pivots: int = 0

    @property
    def optimal(self):
        return self.status == OPTIMAL


class _Standard:
    """min c.y s.t. A y (rel) b, y >= 0, with b >= 0 and x = shift + sum_t sign_t y_t e_{var_t}"""

    def __init__(self, lp):
        nvar = lp.nvar
        var, col_sign, shift, bound_rows = [], [], np.zeros(nvar), []
        for j in range(nvar):
            lo, hi = lp.lower[j], lp.upper[j]
            if np.isfinite(lo):
                shift[j] = lo
                var.append(j)
                col_sign.append(1.0)
                if np.isfinite(hi):
                    bound_rows.append((len(var) - 1, hi - lo))
            elif np.isfinite(hi):
                shift[j] = hi
                var.append(j)
                col_sign.append(-1.0)
            else:
                var.extend((j, j))
                col_sign.extend((1.0, -1.0))
        self.var = np.array(var, dtype=np.int64)
        self.col_sign = np.array(col_sign, dtype=float)
        self.nvar = nvar
        self.shift = shift
        ny = self.var.shape[0]

        sign = -1.0 if lp.sense == 'max' else 1.0
        self.cost = sign * self.columns(lp.objective)
        self.offset = sign * float(lp.objective @ shift)
        self.sense_sign = sign

        rows, rels, rhs, origin = [], [], [], []
        for i, con in enumerate(lp.constraints):
            a = self.columns(con.row)
            b = con.rhs - float(con.row @ shift)
            parts = [('<=', a, b), ('>=', a, b)] if con.relation == '=' else [(con.relation, a, b)]
            for rel, a_part, b_part in parts:
                rows.append(a_part)
                rels.append(rel)
                rhs.append(b_part)
                origin.append(i)
        for col, bound in bound_rows:
            a = np.zeros(ny)
            a[col] = 1.0
            rows.append(a)
            rels.append('<=')
            rhs.append(bound)
            origin.append(-1)

        self.a = np.array(rows).reshape(len(rows), ny)
        self.b = np.array(rhs, dtype=float)
        self.rels = rels
        self.origin = origin
        self.flip = np.where(self.b < 0, -1.0, 1.0)
        self.a = self.a * self.flip[:, None]
        self.b = self.b * self.flip
        self.rels = [_flip(rel) if f < 0 else rel for rel, f in zip(rels, self.flip)]

    def columns(self, row):
        """Coefficients of a user row on the standard-form columns"""
        return row[self.var] * self.col_sign

    def point(self, y):
        return self.shift + np.bincount(self.var, weights=self.col_sign * y, minlength=self.nvar)


def _flip(rel):
    return '>=' if rel == '<=' else '<='


class _Tableau:
    def __init__(self, matrix, rhs, basis, allowed):
        m, ncol = matrix.shape
        self.t = np.zeros((m + 1, ncol + 1))
        self.t[:m, :ncol] = matrix
        self.t[:m, ncol] = rhs
        self.basis = list(basis)
        self.inverse_cols = np.array(basis, dtype=np.int64)   # identity at the start, basis inverse after
        self.allowed = allowed
        self.pivots = 0

    @property
    def m(self):
        return self.t.shape[0] - 1

    def set_cost(self, cost):
        ncol = self.t.shape[1] - 1
        self.t[-1, :ncol] = cost
        self.t[-1, ncol] = 0.0
        for i, j in enumerate(self.basis):
            if self.t[-1, j] != 0.0:
                self.t[-1] -= self.t[-1, j] * self.t[i]

    def objective(self):
        return -self.t[-1, -1]

    def pivot(self, row, col):
        self.t[row] /= self.t[row, col]
        factors = self.t[:, col].copy()
        factors[row] = 0.0
        self.t -= np.outer(factors, self.t[row])
        self.t[:, col] = 0.0
        self.t[row, col] = 1.0
        rhs = self.t[:-1, -1]
        rhs[(rhs < 0.0) & (rhs > -config.LP_PIVOT_TOL)] = 0.0
        self.basis[row] = col
        self.pivots += 1

    def run(self):
        """Minimise the current cost row; returns OPTIMAL or UNBOUNDED.

        Entering columns follow the most negative reduced cost. Ratio-test ties
        are broken lexicographically on the rows of the current basis inverse,
        which keeps every row lexicographically positive, so no basis repeats.
        """
        while True:
            if self.pivots > config.LP_MAX_PIVOTS:
                raise LinearProgramError('lp_pivots', limit=config.LP_MAX_PIVOTS)
            reduced = self.t[-1, :-1]
            candidates = np.nonzero((reduced < -config.LP_OPT_TOL) & self.allowed)[0]
            if candidates.size == 0:
                return OPTIMAL
            col = int(candidates[np.argmin(reduced[candidates])])
            column = self.t[:-1, col]
            rows = np.nonzero(column > config.LP_PIVOT_TOL)[0]
            if rows.size == 0:
                return UNBOUNDED
            ratios = self.t[rows, -1] / column[rows]
            best = ratios.min()
            ties = rows[ratios <= best + config.LP_PIVOT_TOL * (1.0 + abs(best))]
            if ties.size > 1:
                keys = self.t[np.ix_(ties, self.inverse_cols)] / column[ties, None]
                ties = ties[np.lexsort(keys.T[::-1])]
            self.pivot(int(ties[0]), col)


def solve(lp):
    """Solve a LinearProgram; duals are shadow prices of the user constraints"""
    lp.validate()
    std = _Standard(lp)
    m, ny = std.a.shape
    n_slack = sum(1 for rel in std.rels if rel == '<=')
    n_surplus = m - n_slack
    ncol = ny + n_slack + 2 * n_surplus

    matrix = np.zeros((m, ncol))
    matrix[:, :ny] = std.a
    basis, artificial = [], np.zeros(ncol, dtype=bool)
    next_slack, next_art = ny, ny + n_slack + n_surplus
    next_surplus = ny + n_slack
    for i, rel in enumerate(std.rels):
        if rel == '<=':
            matrix[i, next_slack] = 1.0
            basis.append(next_slack)
            next_slack += 1
        else:
            matrix[i, next_surplus] = -1.0
            matrix[i, next_art] = 1.0
            artificial[next_art] = True
            basis.append(next_art)
            next_surplus += 1
            next_art += 1

    tab = _Tableau(matrix, std.b, basis, allowed=np.ones(ncol, dtype=bool))
    if artificial.any():
        tab.set_cost(artificial.astype(float))
        tab.run()
        infeasibility = tab.objective()
        logger.debug('simplex phase 1 finished: infeasibility %.3g after %d pivots', infeasibility, tab.pivots)
        if infeasibility > config.LP_FEAS_TOL * (1.0 + np.abs(std.b).max(initial=0.0)):
            return LpSolution(status=INFEASIBLE, pivots=tab.pivots)
        _drive_out_artificials(tab, artificial)
        tab.allowed = ~artificial

    cost = np.zeros(ncol)
    cost[:ny] = std.cost
    tab.set_cost(cost)
    status = tab.run()
    logger.debug('simplex phase 2 finished: %s after %d pivots', status, tab.pivots)
    if status == UNBOUNDED:
        return LpSolution(status=UNBOUNDED, pivots=tab.pivots)

    full = np.zeros(ncol)
    full[tab.basis] = tab.t[:-1, -1]
    y = full[:ny]
    x = std.point(y)
    value = lp.objective @ x

    duals, dual_value = _duals(lp, std, matrix, cost, tab)
    return LpSolution(status=OPTIMAL, value=float(value), point=x, duals=duals,
                      dual_value=dual_value, pivots=tab.pivots)


def _drive_out_artificials(tab, artificial):
    """Pivot zero-level artificials out of the basis; drop redundant rows"""
    keep = []
    for i in range(tab.m):
        j = tab.basis[i]
        if not artificial[j]:
            keep.append(i)
            continue
        row = tab.t[i, :-1]
        options = np.nonzero((np.abs(row) > config.LP_PIVOT_TOL) & ~artificial)[0]
        if options.size:
            tab.pivot(i, int(options[0]))
            keep.append(i)
    if len(keep) < tab.m:
        tab.t = tab.t[keep + [tab.m]]
        tab.basis = [tab.basis[i] for i in keep]
    tab.kept_rows = keep


def _duals(lp, std, matrix, cost, tab):
    rows = getattr(tab, 'kept_rows', list(range(matrix.shape[0])))
    basis_matrix = matrix[np.ix_(rows, tab.basis)]
    try:
        pi_kept = np.linalg.solve(basis_matrix.T, cost[tab.basis])
    except np.linalg.LinAlgError:
        pi_kept = np.linalg.lstsq(basis_matrix.T, cost[tab.basis], rcond=None)[0]
    pi = np.zeros(matrix.shape[0])
    pi[rows] = pi_kept

    # pi is for the flipped, minimised standard form; undo both
    pi_raw = pi * std.flip * std.sense_sign
    duals = np.zeros(len(lp.constraints))
    for k, i in enumerate(std.origin):
        if i >= 0:
            duals[i] += pi_raw[k]
    dual_value = std.sense_sign * (float(pi @ std.b) + std.offset)
    return duals, dual_value


def complementary_slackness(lp, solution):
    """max over constraints of |dual_i * (row_i . x - rhs_i)|"""
    worst = 0.0
    for con, dual in zip(lp.constraints, solution.duals):
        worst = max(worst, abs(dual * (con.row @ solution.point - con.rhs)))
    return worst


def max_violation(lp, point):
    """Largest constraint or bound violation of a point"""
    worst = 0.0
    for con in lp.constraints:
        lhs = con.row @ point
        if con.relation == '<=':
            worst = max(worst, lhs - con.rhs)
        elif con.relation == '>=':
            worst = max(worst, con.rhs - lhs)
        else:
            worst = max(worst, abs(lhs - con.rhs))
    worst = max(worst, float(np.max(lp.lower - point, initial=0.0)), float(np.max(point - lp.upper, initial=0.0)))
    return worst
