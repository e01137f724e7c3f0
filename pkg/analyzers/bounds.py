"""Closed forms, LP reductions and certificates for eta, eta-dual, gamma, gamma-dual"""

import logging
from dataclasses import dataclass, field

import numpy as np

import config
from analyzers.coherent import project
from analyzers.schemes import scheme_from_drg
from utils.errors import GraphError, SchemeError
from utils.graphs import Graph, laplacian, signless_laplacian
from utils.linalg import inner, is_psd
from utils.lp import LinearProgram, solve
from utils.scoring import classify_gap, fcc_sandwich, qp_sandwich, safe_ratio

logger = logging.getLogger(__name__)


# ============================================================================
# Helpers
# ============================================================================

def _classes(s, classes, allow_empty=False):
    """Normalise an int or an iterable of class indices and validate them"""
    if classes is None:
        classes = ()
    if isinstance(classes, (int, np.integer)):
        classes = (int(classes),)
    classes = tuple(sorted(int(i) for i in classes))
    if not classes and not allow_empty:
        raise SchemeError('class_index', index='(none)', classes=s.d + 1)
    for i in classes:
        if not 1 <= i <= s.d:
            raise SchemeError('class_index', index=i, classes=s.d + 1)
        if s.configuration.transpose[i] != i:
            raise SchemeError('class_not_symmetric', index=i)
    return classes


def class_graph(s, classes):
    """Graph whose adjacency is the union of the given classes"""
    classes = _classes(s, classes, allow_empty=True)
    adj = np.isin(s.color, classes).astype(np.int64) if classes else np.zeros((s.n, s.n), dtype=np.int64)
    return Graph(s.n, adj)


def class_degree(s, classes):
    return int(sum(s.k[i] for i in _classes(s, classes, allow_empty=True)))


def _unit(size, i):
    e = np.zeros(size)
    e[i] = 1.0
    return e


def _free_lp(objective, sense):
    size = len(objective)
    return LinearProgram(objective=objective, sense=sense,
                         lower=np.full(size, -np.inf), upper=np.full(size, np.inf))


def _agree(a, b):
    return abs(a - b) <= config.CLOSED_FORM_TOL * (1.0 + abs(a))


# ============================================================================
# eta and eta-dual
# ============================================================================

@dataclass(eq=False)
class EtaCertificates:
    """Primal M, dual (x, rho), gauge-dual (N, mu) for one scheme class"""

    value: float
    M: np.ndarray
    x: np.ndarray
    rho: float
    N: np.ndarray
    mu: float
    lambda_min: float
    eigenspace: int
    edges: int


def eta_scheme(s, i):
    i = _classes(s, i)[0]
    column = s.P[:, i]
    j = int(np.argmin(column))
    lam = float(column[j])
    k = float(s.k[i])
    n = s.n
    value = n / 4.0 * (k - lam)
    M = n / s.m[j] * s.idempotent(j)
    x = np.full(n, (k - lam) / 4.0)
    edges = n * int(s.k[i]) // 2
    mu = edges / value if value > 0 else 0.0
    logger.debug('eta closed form: n=%d k=%g lambda_min=%g eta=%g', n, k, lam, value)
    return EtaCertificates(value=value, M=M, x=x, rho=value, N=mu * M, mu=mu,
                           lambda_min=lam, eigenspace=j, edges=edges)


def verify_eta_certificates(cert, g, tol=config.CERTIFICATE_TOL):
    """Feasibility predicates for every certificate, without trusting the formulas"""
    L = laplacian(g)
    edges = np.array(g.edges, dtype=np.int64).reshape(-1, 2)
    N = cert.N
    l_star = N[edges[:, 0], edges[:, 0]] + N[edges[:, 1], edges[:, 1]] - 2.0 * N[edges[:, 0], edges[:, 1]]
    checks = {
        'primal_diag': bool(np.abs(np.diag(cert.M) - 1.0).max() <= tol),
        'primal_psd': is_psd(cert.M),
        'dual_psd': is_psd(np.diag(cert.x) - L / 4.0),
        'dual_rho': bool(cert.rho >= cert.x.sum() - tol),
        'gauge_diag': bool(np.abs(np.diag(N) - cert.mu).max() <= tol),
        'gauge_psd': is_psd(N),
        'gauge_edges': bool(l_star.size == 0 or (l_star / 4.0).min() >= 1.0 - tol),
        'primal_value': _agree(inner(L, cert.M) / 4.0, cert.value),
        'dual_value': _agree(float(cert.x.sum()), cert.value),
    }
    checks['passed'] = all(checks.values())
    return checks


def eta_lp(s, classes):
    """eta over the scheme algebra: max (n/4)(k - sum_S x_i k_i), x_0 = 1, Px >= 0"""
    classes = _classes(s, classes)
    size = s.d + 1
    objective = np.zeros(size)
    for i in classes:
        objective[i] = -float(s.k[i])
    lp = _free_lp(objective, 'max')
    lp.add(_unit(size, 0), '=', 1.0)
    for row in s.P:
        lp.add(row, '>=', 0.0)
    solution = solve(lp)
    value = s.n / 4.0 * (class_degree(s, classes) + solution.value) if solution.optimal else float('nan')
    return value, solution


@dataclass(eq=False)
class EtaDualResult:
    value: float
    lp_value: float
    lp_agrees: bool
    y: np.ndarray
    a: float
    b: float
    solution: object = None


def eta_dual_lp(s, classes):
    """min x_0 s.t. Px >= 0, x_0 >= 0, x_0 - x_i >= 2 for each class i in the graph"""
    classes = _classes(s, classes)
    size = s.d + 1
    e0 = _unit(size, 0)
    lp = _free_lp(e0, 'min')
    for row in s.P:
        lp.add(row, '>=', 0.0)
    lp.add(e0, '>=', 0.0)
    for i in classes:
        lp.add(e0 - _unit(size, i), '>=', 2.0)
    solution = solve(lp)
    return (solution.value if solution.optimal else float('nan')), solution


def eta_dual_scheme(s, i):
    """2k / (k - lambda_min), the LP value, and the explicit dual witness"""
    i = _classes(s, i)[0]
    k = float(s.k[i])
    lam = float(s.P[:, i].min())
    value = 2.0 * k / (k - lam)
    a, b = 0.0, k / (k - lam)
    y = (b * s.P[:, i] / k + 1.0 - a - b) * s.m / s.n
    lp_value, solution = eta_dual_lp(s, i)
    agrees = _agree(value, lp_value)
    if not agrees:
        logger.warning('eta-dual closed form %.12g disagrees with LP %.12g', value, lp_value)
    return EtaDualResult(value=value, lp_value=lp_value, lp_agrees=agrees, y=y, a=a, b=b, solution=solution)


def verify_eta_dual_witness(s, i, y, a, b, tol=config.CERTIFICATE_TOL):
    """P^T y = (1 - a - b) e_0 + b e_i with y, a, b >= 0; returns (feasible, objective 2b)"""
    size = s.d + 1
    target = (1.0 - a - b) * _unit(size, 0) + b * _unit(size, i)
    feasible = bool(np.abs(s.P.T @ y - target).max() <= tol and np.min(y) >= -tol and a >= -tol and b >= -tol)
    return feasible, 2.0 * b


def eta_product_check(s, i):
    eta = eta_scheme(s, i).value
    eta_dual = eta_dual_scheme(s, i).value
    edges = s.n * int(s.k[_classes(s, i)[0]]) // 2
    product = eta * eta_dual
    return {
        'eta': eta,
        'eta_dual': eta_dual,
        'product': product,
        'edges': edges,
        'equality': bool(abs(product - edges) <= config.GAUGE_REL_TOL * edges),
    }


def scaling_equivalence_check(s, i, M, mu):
    """Evaluate both sides of: mu*M feasible for the gauge dual iff M feasible with <L,M>/4 >= |E|/mu"""
    M = np.asarray(M, dtype=float)
    residue = float(np.abs(M - project(s.configuration, M)).max())
    if residue > config.PROJECTION_TOL:
        raise SchemeError('not_in_span', residue=residue)
    g = class_graph(s, i)
    edges = np.array(g.edges, dtype=np.int64).reshape(-1, 2)
    unit_diag = bool(np.abs(np.diag(M) - 1.0).max() <= config.CERTIFICATE_TOL)
    psd = is_psd(M)

    N = mu * M
    l_star = N[edges[:, 0], edges[:, 0]] + N[edges[:, 1], edges[:, 1]] - 2.0 * N[edges[:, 0], edges[:, 1]]
    gauge_feasible = bool(mu >= 0 and psd and unit_diag and (l_star.size == 0 or (l_star / 4.0).min() >= 1.0 - config.CERTIFICATE_TOL))
    objective = inner(laplacian(g), M) / 4.0
    primal_feasible = bool(unit_diag and psd and objective >= g.edge_count / mu - config.CERTIFICATE_TOL)
    return {
        'gauge_side': gauge_feasible,
        'primal_side': primal_feasible,
        'objective': objective,
        'agrees': gauge_feasible == primal_feasible,
    }


# ============================================================================
# gamma and gamma-dual
# ============================================================================

@dataclass(eq=False)
class GammaResult:
    value: float
    lp_value: float
    lp_agrees: bool
    alpha: float = float('nan')
    y: np.ndarray = None
    witness_feasible: bool = None
    reduced_to_eta: bool = False
    eigenspace: int = None


def _permuted(s, i1, i2):
    """P and k with classes i1, i2 moved to columns 1 and 2"""
    order = [0, i1, i2] + [c for c in range(1, s.d + 1) if c not in (i1, i2)]
    return s.P[:, order], s.k[order].astype(float)


def gamma_lp(s, classes1, classes2):
    """(n/2)(k_1 + k_2 + min{1^T y : R^T y = sum_S1 k_i e_i - sum_S2 k_i e_i, y >= 0})"""
    classes1 = _classes(s, classes1)
    classes2 = _classes(s, classes2, allow_empty=True)
    if set(classes1) & set(classes2):
        raise SchemeError('class_index', index=sorted(set(classes1) & set(classes2)), classes=s.d + 1)
    size = s.d + 1
    lp = LinearProgram(objective=np.ones(size), sense='min')
    for j in range(1, size):
        target = float(s.k[j]) if j in classes1 else (-float(s.k[j]) if j in classes2 else 0.0)
        lp.add(s.P[:, j], '=', target)
    solution = solve(lp)
    k_total = class_degree(s, classes1) + class_degree(s, classes2)
    value = s.n / 2.0 * (k_total + solution.value) if solution.optimal else float('nan')
    return value, solution


def gamma_scheme(s, i1, i2):
    """gamma = (n/2)((k_1 + k_2) + max_l (P_l2 - P_l1)) with LP cross-check and witness y"""
    if i2 is None:
        eta = eta_scheme(s, i1).value
        lp_eta, _ = eta_lp(s, i1)
        return GammaResult(value=2.0 * eta, lp_value=2.0 * lp_eta, lp_agrees=_agree(eta, lp_eta),
                           reduced_to_eta=True)
    i1 = _classes(s, i1)[0]
    i2 = _classes(s, i2)[0]
    if i1 == i2:
        raise SchemeError('class_index', index=i2, classes=s.d + 1)
    P, k = _permuted(s, i1, i2)
    gaps = P[:, 2] - P[:, 1]
    alpha = float(gaps.max())
    value = s.n / 2.0 * (k[1] + k[2] + alpha)

    y = s.m * (P[:, 1] - P[:, 2] + alpha) / s.n
    target = np.zeros(s.d)
    target[0], target[1] = k[1], -k[2]
    residual = np.abs(P[:, 1:].T @ y - target).max()
    witness_ok = bool(residual <= config.CERTIFICATE_TOL * (1.0 + k.max()) and y.min() >= -config.CERTIFICATE_TOL
                      and abs(y.sum() - alpha) <= config.CERTIFICATE_TOL * (1.0 + abs(alpha)))

    lp_value, _ = gamma_lp(s, i1, i2)
    agrees = _agree(value, lp_value)
    if not agrees:
        logger.warning('gamma closed form %.12g disagrees with LP %.12g', value, lp_value)
    return GammaResult(value=value, lp_value=lp_value, lp_agrees=agrees, alpha=alpha, y=y,
                       witness_feasible=witness_ok, eigenspace=int(np.argmax(gaps)))


def gamma_primal(s, i1, i2):
    """Optimal primal matrix (n/m_j) E_j, j maximising P_j2 - P_j1; unit diagonal"""
    P, _ = _permuted(s, _classes(s, i1)[0], _classes(s, i2)[0])
    j = int(np.argmax(P[:, 2] - P[:, 1]))
    return s.n / s.m[j] * s.idempotent(j)


@dataclass(eq=False)
class GammaDualResult:
    value: float
    min_value: float = float('nan')
    max_value: float = float('nan')
    forms_agree: bool = None
    y: np.ndarray = None
    a: float = float('nan')
    b: dict = field(default_factory=dict)
    c: dict = field(default_factory=dict)
    closed_form: bool = False
    sign_term: float = float('nan')

    @property
    def witness(self):
        """(y, a, b, c) flattened"""
        return np.concatenate([self.y, [self.a], list(self.b.values()), list(self.c.values())])


def gamma_dual_lp(s, classes1, classes2):
    """Min form and max form of the gamma-dual LP; both solved and compared"""
    classes1 = _classes(s, classes1)
    classes2 = _classes(s, classes2)
    size = s.d + 1
    e0 = _unit(size, 0)

    low = _free_lp(e0, 'min')
    for row in s.P:
        low.add(row, '>=', 0.0)
    low.add(e0, '>=', 0.0)
    for i in classes1:
        low.add(e0 - _unit(size, i), '>=', 1.0)
    for i in classes2:
        low.add(e0 + _unit(size, i), '>=', 1.0)
    low_solution = solve(low)

    # variables: y_0..y_d, a, b_i (i in S1), c_i (i in S2), all nonnegative
    nb, nc = len(classes1), len(classes2)
    nvar = size + 1 + nb + nc
    objective = np.zeros(nvar)
    objective[size + 1:] = 1.0
    high = LinearProgram(objective=objective, sense='max')
    for j in range(size):
        row = np.zeros(nvar)
        row[:size] = s.P[:, j]
        row[size] = 1.0 if j == 0 else 0.0
        for t, i in enumerate(classes1):
            row[size + 1 + t] = (1.0 if j == 0 else 0.0) - (1.0 if j == i else 0.0)
        for t, i in enumerate(classes2):
            row[size + 1 + nb + t] = (1.0 if j == 0 else 0.0) + (1.0 if j == i else 0.0)
        high.add(row, '=', 1.0 if j == 0 else 0.0)
    high_solution = solve(high)

    min_value = low_solution.value if low_solution.optimal else float('nan')
    max_value = high_solution.value if high_solution.optimal else float('nan')
    point = high_solution.point if high_solution.optimal else np.full(nvar, np.nan)
    result = GammaDualResult(
        value=min_value, min_value=min_value, max_value=max_value, forms_agree=_agree(min_value, max_value),
        y=point[:size], a=float(point[size]),
        b={i: float(point[size + 1 + t]) for t, i in enumerate(classes1)},
        c={i: float(point[size + 1 + nb + t]) for t, i in enumerate(classes2)})
    logger.debug('gamma-dual LP: min %.12g max %.12g', min_value, max_value)
    return result


def verify_gamma_dual_witness(s, i1, i2, y, a, b, c, tol=config.CERTIFICATE_TOL):
    """P^T y = b e_1 - c e_2 + (1 - a - b - c) e_0 with y, a, b, c >= 0; returns (feasible, b + c)"""
    size = s.d + 1
    y = np.asarray(y, dtype=float)
    target = b * _unit(size, i1) - c * _unit(size, i2) + (1.0 - a - b - c) * _unit(size, 0)
    feasible = bool(y.shape == (size,) and np.abs(s.P.T @ y - target).max() <= tol
                    and y.min() >= -tol and min(a, b, c) >= -tol)
    return feasible, float(b + c)


def gamma_dual_curve(s, c, i1=1, i2=2):
    """gamma-dual_l(c) for l = 1..d (index l-1 in the returned array)"""
    P, k = _permuted(s, i1, i2)
    k1, k2 = k[1], k[2]
    p1, p2 = P[1:, 1], P[1:, 2]
    return k1 / (k1 - p1) - c * (k1 * p2 + k2 * p1) / ((k1 - p1) * k2)


def argmin_is_last(s, c, i1=1, i2=2):
    curve = gamma_dual_curve(s, c, i1, i2)
    return bool(curve[-1] <= curve.min() + config.CLOSED_FORM_TOL * (1.0 + abs(curve.min())))


def gamma_dual_drg(g1, scheme=None):
    """Closed form for a distance-regular G_1 paired with its distance-2 graph"""
    s = scheme if scheme is not None else scheme_from_drg(g1)
    if s.intersection_array is None:
        raise GraphError('not_drg', u='-', v='-', dist='-', param='intersection array')
    if s.d < 2:
        raise GraphError('diameter', diameter=s.d)
    P, k = s.P, s.k.astype(float)
    k1, k2 = k[1], k[2]
    pd1, pd2 = P[-1, 1], P[-1, 2]
    sign_term = k2 * pd1 + k1 * pd2
    value = k1 / (k1 - pd1)
    if sign_term <= 0:
        value -= sign_term / (2.0 * k2 * (k1 - pd1))
    lp = gamma_dual_lp(s, 1, 2)
    if not _agree(value, lp.value):
        logger.warning('gamma-dual closed form %.12g disagrees with LP %.12g', value, lp.value)
    lp.closed_form = True
    lp.sign_term = float(sign_term)
    lp.min_value, lp.value = lp.value, value
    return lp


def gauge_classification(s, classes1, classes2):
    """gamma * gamma-dual against |E_1| + |E_2|"""
    classes1 = _classes(s, classes1)
    classes2 = _classes(s, classes2)
    if len(classes1) == 1 and len(classes2) == 1:
        gamma = gamma_scheme(s, classes1[0], classes2[0]).value
    else:
        gamma, _ = gamma_lp(s, classes1, classes2)
    gamma_dual = gamma_dual_lp(s, classes1, classes2).value
    target = s.n * (class_degree(s, classes1) + class_degree(s, classes2)) // 2
    product = gamma * gamma_dual
    status, gap = classify_gap(product, target)
    return {'gamma': gamma, 'gamma_dual': gamma_dual, 'product': product, 'target': target,
            'gap': gap, 'status': status}


# ============================================================================
# Reports
# ============================================================================

@dataclass
class BoundsReport:
    graphs: dict
    eta: float = None
    eta_dual: float = None
    gamma: float = None
    gamma_dual: float = None
    edges: int = None
    edges_pair: int = None
    eta_product: float = None
    gamma_product: float = None
    eta_status: str = None
    gamma_status: str = None
    oracle: dict = field(default_factory=dict)
    ratios: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    def weak_duality_holds(self):
        ok = True
        if self.eta_product is not None:
            ok &= self.eta_product >= self.edges - config.GAUGE_REL_TOL
        if self.gamma_product is not None:
            ok &= self.gamma_product >= self.edges_pair - config.GAUGE_REL_TOL
        return bool(ok)

    def attach_oracle(self, mc=None, fcc=None, qp=None):
        """Record oracle values and their ratios to the bounds they sit under or over"""
        if mc is not None:
            self.oracle['mc'] = mc
            ratio = safe_ratio(mc, self.eta)
            self.ratios['mc_over_eta'] = {
                'ratio': ratio,
                'within': None if ratio is None else bool(config.ALPHA_GW - 1e-9 <= ratio <= 1.0 + 1e-9),
            }
            if fcc is not None and self.edges is not None:
                self.ratios['combinatorial'] = classify_gap(mc * fcc, self.edges)[0]
        if fcc is not None:
            self.oracle['fcc'] = fcc
            self.ratios['fcc_over_eta_dual'] = fcc_sandwich(fcc, self.eta_dual)
        if qp is not None:
            self.oracle['qp'] = qp
            self.ratios['qp_over_gamma'] = qp_sandwich(qp, self.gamma)
        return self


def bounds_report(s, classes1, classes2=None):
    """eta and eta-dual for a union of classes, plus gamma and gamma-dual when a second union is given"""
    classes1 = _classes(s, classes1)
    report = BoundsReport(graphs={'classes_1': list(classes1)})
    report.edges = s.n * class_degree(s, classes1) // 2
    if len(classes1) == 1:
        report.eta = eta_scheme(s, classes1[0]).value
        report.eta_dual = eta_dual_scheme(s, classes1[0]).value
    else:
        report.eta, report.eta_dual = eta_pair_lp_values(s, classes1)
    report.eta_product = report.eta * report.eta_dual
    report.eta_status, _ = classify_gap(report.eta_product, report.edges)
    report.checks['eta_lp'] = _agree(report.eta, eta_lp(s, classes1)[0])

    if classes2:
        classes2 = _classes(s, classes2)
        report.graphs['classes_2'] = list(classes2)
        gauge = gauge_classification(s, classes1, classes2)
        report.gamma, report.gamma_dual = gauge['gamma'], gauge['gamma_dual']
        report.gamma_product = gauge['product']
        report.edges_pair = gauge['target']
        report.gamma_status = gauge['status']
    return report


def eta_pair_lp_values(s, classes):
    """(eta, eta-dual) by LP for a graph that is any union of symmetric classes"""
    eta, _ = eta_lp(s, classes)
    eta_dual, _ = eta_dual_lp(s, classes)
    return eta, eta_dual


def qp_objective_matrix(g1, g2):
    """(L_1 + K_2) / 2, the matrix of the quadratic program"""
    return (laplacian(g1) + signless_laplacian(g2)) / 2.0
