"""DIMACS parsing, the +/-1 quadratic encoding of MAX 2-SAT, and its bound pipeline"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

import config
from analyzers.bounds import class_degree, gamma_dual_drg, gamma_dual_lp, gamma_lp, gamma_scheme
from analyzers.coherent import class_support, coherent_closure
from analyzers.oracles import max2sat_bruteforce, max_weighted_cut, qp_bruteforce
from analyzers.schemes import scheme_from_configuration, scheme_from_drg
from utils.errors import GraphError, OracleSizeError, ParseError, SchemeError
from utils.graphs import Graph, distance_graphs
from utils.scoring import classify_gap, qp_sandwich

logger = logging.getLogger(__name__)


@dataclass
class Max2SatInstance:
    n_vars: int
    clauses: list           # tuples of nonzero ints, sign = polarity

    @property
    def m(self):
        return len(self.clauses)

    def satisfied(self, assignment):
        """Number of clauses satisfied by a tuple of booleans (z_1..z_n)"""
        return sum(any(assignment[abs(l) - 1] == (l > 0) for l in c) for c in self.clauses)


def check_width(inst):
    for clause in inst.clauses:
        if not 1 <= len(clause) <= 2:
            raise ParseError('clause_width', clause=list(clause))


def parse_dimacs(text):
    """Parse DIMACS CNF restricted to clauses of at most two literals"""
    n_vars = declared = None
    clauses, current, current_line = [], [], None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('c'):
            continue
        if line.startswith('%'):
            break
        if line.startswith('p'):
            parts = line.split()
            if n_vars is not None:
                raise ParseError('dimacs_header', line=lineno, reason='duplicate problem line')
            if len(parts) != 4 or parts[1] != 'cnf':
                reason = 'weighted or non-CNF formats are not supported' if len(parts) > 1 and parts[1] != 'cnf' \
                    else "expected 'p cnf <vars> <clauses>'"
                raise ParseError('dimacs_header', line=lineno, reason=reason)
            try:
                n_vars, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError('dimacs_header', line=lineno, reason='counts must be integers')
            if n_vars < 0 or declared < 0:
                raise ParseError('dimacs_header', line=lineno, reason='counts must be nonnegative')
            continue
        if n_vars is None:
            raise ParseError('dimacs_header', line=lineno, reason='clause before the problem line')
        for token in line.split():
            try:
                lit = int(token)
            except ValueError:
                raise ParseError('dimacs_token', line=lineno, token=token)
            if current_line is None:
                current_line = lineno
            if lit == 0:
                if not current:
                    raise ParseError('dimacs_empty', line=lineno)
                clauses.append(tuple(current))
                current, current_line = [], None
                continue
            if abs(lit) > n_vars:
                raise ParseError('dimacs_range', line=lineno, var=abs(lit), n=n_vars)
            current.append(lit)
            if len(current) > 2:
                raise ParseError('dimacs_clause', line=current_line)
    if n_vars is None:
        raise ParseError('dimacs_header', line=0, reason='missing problem line')
    if current:
        clauses.append(tuple(current))
    if len(clauses) != declared:
        raise ParseError('dimacs_count', declared=declared, found=len(clauses), line=0)
    return Max2SatInstance(n_vars=n_vars, clauses=clauses)


@dataclass
class QuadraticForm:
    """constant + sum alpha_ij (1 - x_i x_j) + sum beta_ij (1 + x_i x_j) over x_0..x_n"""

    n: int                                          # number of instance variables; x_0 is auxiliary
    alpha: dict = field(default_factory=dict)       # (i, j), i < j -> Fraction
    beta: dict = field(default_factory=dict)
    constant: Fraction = Fraction(0)

    def _add(self, table, i, j, weight):
        key = (min(i, j), max(i, j))
        table[key] = table.get(key, Fraction(0)) + weight

    def value(self, x):
        """Exact value at a +/-1 vector of length n + 1"""
        total = self.constant
        for (i, j), w in self.alpha.items():
            total += w * (1 - x[i] * x[j])
        for (i, j), w in self.beta.items():
            total += w * (1 + x[i] * x[j])
        return total

    @classmethod
    def from_graph_pair(cls, g1, g2, weight):
        """Uniform form weight * [sum_E1 (1 - x x) + sum_E2 (1 + x x)] on x_0..x_{n-1}"""
        if g1.n != g2.n:
            raise GraphError('vertex_mismatch', n1=g1.n, n2=g2.n)
        weight = Fraction(weight)
        return cls(n=g1.n - 1,
                   alpha={e: weight for e in g1.edges},
                   beta={e: weight for e in g2.edges})


def encode(inst):
    """Quadratic form whose value at every +/-1 vector is the satisfied-clause count.

    z_i is true iff x_i = x_0. A unit literal contributes (1 +/- x_0 x_i)/2; a
    two-literal clause with polarities s, t contributes
    ((1 + s x_0 x_i) + (1 + t x_0 x_j) + (1 - s t x_i x_j)) / 4.
    """
    form = QuadraticForm(n=inst.n_vars)
    half, quarter = Fraction(1, 2), Fraction(1, 4)
    for clause in inst.clauses:
        lits = list(dict.fromkeys(clause))
        if len(lits) == 2 and lits[0] == -lits[1]:
            form.constant += 1
            continue
        if len(lits) == 1:
            lit = lits[0]
            form._add(form.beta if lit > 0 else form.alpha, 0, abs(lit), half)
            continue
        (li, lj) = lits
        i, j, s, t = abs(li), abs(lj), 1 if li > 0 else -1, 1 if lj > 0 else -1
        form._add(form.beta if s > 0 else form.alpha, 0, i, quarter)
        form._add(form.beta if t > 0 else form.alpha, 0, j, quarter)
        form._add(form.alpha if s * t > 0 else form.beta, i, j, quarter)
    return form


def truth_table_check(inst):
    """True iff the encoding matches the clause count on every assignment"""
    form = encode(inst)
    for bits in product((False, True), repeat=inst.n_vars):
        x = [1] + [1 if b else -1 for b in bits]
        if form.value(x) != inst.satisfied(bits):
            return False
    return True


def form_maximum(form, force=False):
    """Exact maximum of a form with x_0 = +1, by weighted-cut enumeration"""
    n = form.n + 1
    if n - 1 > config.MAX2SAT_MAX_VARS and not force:
        raise OracleSizeError('oracle_size', oracle='quadratic form', limit=config.MAX2SAT_MAX_VARS, n=n - 1)
    weights = np.zeros((n, n), dtype=np.int64)
    for table, sign in ((form.alpha, 1), (form.beta, -1)):
        for (i, j), w in table.items():
            weights[i, j] += sign * int(4 * w)
            weights[j, i] += sign * int(4 * w)
    cut, sides = max_weighted_cut(weights)
    value = form.constant + 2 * sum(form.beta.values(), Fraction(0)) + Fraction(2 * cut, 4)
    return value, tuple(int(1 - 2 * s) for s in sides)


@dataclass
class GraphPair:
    g1: Graph
    g2: Graph
    uniform: bool
    weight: Fraction
    overlap: bool


def to_graph_pair(form):
    """G_1 = support(alpha), G_2 = support(beta) on x_0..x_n, with uniformity"""
    size = form.n + 1
    adj1 = np.zeros((size, size), dtype=np.int64)
    adj2 = np.zeros((size, size), dtype=np.int64)
    alpha = {e: w for e, w in form.alpha.items() if w != 0}
    beta = {e: w for e, w in form.beta.items() if w != 0}
    for (i, j) in alpha:
        adj1[i, j] = adj1[j, i] = 1
    for (i, j) in beta:
        adj2[i, j] = adj2[j, i] = 1
    weights = set(alpha.values()) | set(beta.values())
    uniform = len(weights) <= 1
    weight = next(iter(weights)) if len(weights) == 1 else (Fraction(0) if not weights else None)
    overlap = bool(set(alpha) & set(beta))
    return GraphPair(Graph(size, adj1), Graph(size, adj2), uniform, weight, overlap)


def scheme_for_pair(g1, g2):
    """Scheme containing both graphs as unions of classes, plus the class sets"""
    cfg = coherent_closure([g1.adj, g2.adj])
    scheme = scheme_from_configuration(cfg)
    s1 = class_support(cfg, g1.adj)
    s2 = class_support(cfg, g2.adj)
    if s1 is None or s2 is None:
        raise SchemeError('scheme_flags', flags='class support')
    return scheme, s1, s2


def gamma_bounds(g1, g2):
    """gamma and gamma-dual for a pair whose adjacencies lie in one scheme"""
    if g1.edge_count == 0:
        raise SchemeError('class_index', index='(none)', classes=0)
    scheme, s1, s2 = scheme_for_pair(g1, g2)
    result = {'classes_1': list(s1), 'classes_2': list(s2), 'scheme_classes': scheme.d + 1}
    if len(s1) == 1 and len(s2) == 1:
        gamma = gamma_scheme(scheme, s1[0], s2[0])
        result.update(gamma=gamma.value, gamma_lp=gamma.lp_value, gamma_method='closed form',
                      gamma_lp_agrees=gamma.lp_agrees, gamma_witness_feasible=gamma.witness_feasible)
    elif s2:
        value, _ = gamma_lp(scheme, s1, s2)
        result.update(gamma=value, gamma_lp=value, gamma_method='lp')
    else:
        value, _ = gamma_lp(scheme, s1, ())
        result.update(gamma=value, gamma_lp=value, gamma_method='lp (empty second graph)')
        result.update(gamma_dual=None, gamma_dual_method='not applicable (empty second graph)')

    if s2:
        dual = _gamma_dual_for_pair(g1, g2, scheme, s1, s2)
        result.update(gamma_dual=dual.value, gamma_dual_lp=dual.min_value,
                      gamma_dual_method='closed form' if dual.closed_form else 'lp',
                      gamma_dual_forms_agree=dual.forms_agree)
        if dual.closed_form:
            result['sign_term'] = dual.sign_term
        target = scheme.n * (class_degree(scheme, s1) + class_degree(scheme, s2)) // 2
        product = result['gamma'] * dual.value
        status, gap = classify_gap(product, target)
        result.update(gamma_product=product, target=target, gamma_status=status, gap=gap)
    return result


def _gamma_dual_for_pair(g1, g2, scheme, s1, s2):
    """Closed form when G_1 is distance-regular of diameter >= 2 and G_2 is its distance-2 graph"""
    try:
        drg = scheme_from_drg(g1)
        if drg.d >= 2 and distance_graphs(g1)[1] == g2:
            return gamma_dual_drg(g1, drg)
    except GraphError:
        pass
    return gamma_dual_lp(scheme, s1, s2)


def bound_pipeline(source, force=False):
    """Bounds for an instance (or a form): gamma scaled by the uniform weight, plus oracles"""
    inst = source if isinstance(source, Max2SatInstance) else None
    form = encode(inst) if inst is not None else source
    pair = to_graph_pair(form)
    report = {
        'variables': form.n,
        'clauses': inst.m if inst is not None else None,
        'constant': float(form.constant),
        'uniform': pair.uniform,
        'weight': float(pair.weight) if pair.weight is not None else None,
        'overlap': pair.overlap,
        'edges_1': pair.g1.edge_count,
        'edges_2': pair.g2.edge_count,
    }

    bounds = None
    if not pair.uniform:
        report['bounds'] = {'status': 'unavailable', 'reason': 'edge weights are not uniform'}
    elif pair.overlap:
        report['bounds'] = {'status': 'unavailable', 'reason': 'alpha and beta supports overlap'}
    elif pair.g1.edge_count == 0 and pair.g2.edge_count == 0:
        report['bounds'] = {'status': 'trivial', 'upper_bound': float(form.constant)}
    elif pair.g1.edge_count == 0:
        report['bounds'] = {'status': 'unavailable', 'reason': 'first graph has no edges'}
    else:
        try:
            bounds = gamma_bounds(pair.g1, pair.g2)
        except (SchemeError, GraphError) as exc:
            report['bounds'] = {'status': 'unavailable', 'reason': str(exc)}
        else:
            w = float(pair.weight)
            bounds['gamma_scaled'] = w * bounds['gamma']
            bounds['upper_bound'] = float(form.constant) + w * bounds['gamma']
            bounds['status'] = 'available'
            report['bounds'] = bounds

    oracle = {}
    try:
        maximum, x = form_maximum(form, force)
        oracle['form_maximum'] = float(maximum)
        oracle['form_assignment'] = list(x)
    except OracleSizeError as exc:
        oracle['form_maximum'] = f'skipped (size): {exc}'
    if inst is not None:
        try:
            count, assignment = max2sat_bruteforce(inst, force)
            oracle['max2sat'] = count
            oracle['max2sat_assignment'] = [int(b) for b in assignment]
        except OracleSizeError as exc:
            oracle['max2sat'] = f'skipped (size): {exc}'
    if bounds is not None and pair.g1.n <= config.QP_MAX_N:
        qp, _ = qp_bruteforce(pair.g1, pair.g2, force)
        w = float(pair.weight)
        oracle['qp'] = qp
        oracle['sandwich'] = qp_sandwich(w * qp, bounds['gamma_scaled'])
    report['oracle'] = oracle
    logger.info('max2sat pipeline: %d variables, bounds %s', form.n, report['bounds'].get('status'))
    return report
