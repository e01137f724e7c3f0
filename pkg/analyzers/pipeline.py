"""Report assembly for the analyze, gamma, max2sat and batch commands"""

import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor

import config
from analyzers import coherent, schemes
from analyzers.bounds import (eta_dual_scheme, eta_lp, eta_pair_lp_values, eta_scheme, gamma_dual_drg,
                              gamma_primal, gamma_scheme, scaling_equivalence_check, verify_eta_certificates,
                              verify_eta_dual_witness)
from analyzers.max2sat import (bound_pipeline, encode, gamma_bounds, scheme_for_pair, to_graph_pair,
                               truth_table_check)
from analyzers.oracles import fcc_lp, maxcut_bruteforce, qp_bruteforce
from analyzers.rounding import round_qp, rounding_from_certificate
from utils.errors import GraphError, OracleSizeError, ParseError, SchemeError, SchemeGaugeError
from utils.graphs import complement, distance_graphs, is_named_spec, named_graph, parse_graph6, to_graph6
from utils.scoring import classify_gap, fcc_sandwich, qp_sandwich, tagged

logger = logging.getLogger(__name__)

SKIPPED = 'skipped (size)'
TRUTH_TABLE_MAX_VARS = 16


# ============================================================================
# Input resolution
# ============================================================================

def resolve_graph(text):
    """A file holding one graph6 line, a named spec like paley(9), or a graph6 string"""
    if os.path.isfile(text):
        with open(text, encoding='utf-8') as f:
            lines = [line for line in f.read().splitlines() if line.strip()]
        if not lines:
            raise ParseError('graph6_empty')
        return parse_graph6(lines[0])
    if is_named_spec(text):
        return named_graph(text)
    return parse_graph6(text)


def resolve_second(spec, g):
    """complement, dist2, or any graph source on the same vertex set"""
    if spec == 'complement':
        return complement(g)
    if spec == 'dist2':
        layers = distance_graphs(g)
        if len(layers) < 2:
            raise GraphError('diameter', diameter=len(layers))
        return layers[1]
    try:
        second = resolve_graph(spec)
    except ParseError as exc:
        raise GraphError('second_graph', spec=spec) from exc
    if second.n != g.n:
        raise GraphError('vertex_mismatch', n1=g.n, n2=second.n)
    return second


def _header(command):
    return {
        'schema_version': config.REPORT_SCHEMA_VERSION,
        'command': command,
        'tolerances': {
            'closed_form': config.CLOSED_FORM_TOL,
            'gauge': config.GAUGE_REL_TOL,
            'certificate': config.CERTIFICATE_TOL,
            'lp_feasibility': config.LP_FEAS_TOL,
            'psd': config.PSD_TOL,
        },
    }


def _graph_input(g, source):
    return {'source': source, 'graph6': to_graph6(g), 'n': g.n, 'edges': g.edge_count}


class _Timer:
    """Wall-clock stage timings, recorded only when enabled"""

    def __init__(self, enabled):
        self.enabled = enabled and config.FEATURES['timing']
        self.stages = {}
        self._last = time.perf_counter()

    def mark(self, stage):
        now = time.perf_counter()
        if self.enabled:
            self.stages[stage] = now - self._last
        self._last = now

    def attach(self, report):
        if self.enabled:
            report['timing'] = dict(self.stages)
        return report


# ============================================================================
# analyze
# ============================================================================

class EtaGaugeAnalyzer:
    """Closure, scheme, eta and eta-dual with certificates; oracles and rounding on request"""

    def __init__(self, graph, source=None, oracle=False, rounding_trials=0, seed=config.DEFAULT_SEED,
                 force=False, timing=False):
        self.graph = graph
        self.source = source
        self.oracle = oracle
        self.rounding_trials = rounding_trials
        self.seed = seed
        self.force = force
        self.timer = _Timer(timing)
        self.certificate = None
        self._reason = None

    def analyze(self):
        g = self.graph
        report = _header('analyze')
        report['input'] = _graph_input(g, self.source)

        cfg = coherent.coherent_closure([g.adj])
        report['configuration'] = coherent.summary(cfg)
        report['membership'] = coherent.membership(cfg, g.adj).to_dict()
        report['walk_regularity'] = schemes.walk_regularity(g).to_dict()
        self.timer.mark('closure')

        scheme = self._scheme(cfg, report)
        self.timer.mark('scheme')
        report['bounds'] = self._bounds(scheme)
        self.timer.mark('bounds')

        if self.oracle:
            report['oracle'] = self._oracles(report['bounds'])
            self.timer.mark('oracle')
        if self.rounding_trials:
            report['rounding'] = self._rounding(report['bounds'])
            self.timer.mark('rounding')
        logger.info('analyze: n=%d, bounds %s', g.n, report['bounds'].get('status'))
        return self.timer.attach(report)

    def _scheme(self, cfg, report):
        """Distance scheme when the graph is distance-regular, else the closure if it is a scheme"""
        try:
            scheme = schemes.scheme_from_drg(self.graph)
        except GraphError as exc:
            logger.info('not distance-regular (%s); using the coherent closure', exc)
            try:
                scheme = schemes.scheme_from_configuration(cfg)
            except SchemeError as inner:
                report['scheme'] = None
                self._reason = str(inner)
                return None
        summary = schemes.summary(scheme)
        summary['checks'] = {
            'orthogonality': tagged(schemes.check_orthogonality(scheme), config.CLOSED_FORM_TOL),
            'reconstruction': tagged(schemes.check_reconstruction(scheme), config.CLOSED_FORM_TOL),
        }
        if scheme.intersection_array is not None and scheme.d >= 2:
            summary['checks']['drg_eigenvalues'] = schemes.drg_eigenvalue_relation(scheme.intersection_array,
                                                                                   scheme.P)
        report['scheme'] = summary
        return scheme

    def _bounds(self, scheme):
        g = self.graph
        if g.edge_count == 0:
            return {'status': 'trivial', 'reason': 'graph has no edges', 'eta': 0.0, 'eta_dual': 0.0, 'edges': 0}
        if scheme is None:
            return {'status': 'unavailable', 'reason': self._reason}

        classes = coherent.class_support(scheme.configuration, g.adj)
        bounds = {'status': 'available', 'classes': list(classes), 'edges': g.edge_count}
        if len(classes) == 1:
            i = classes[0]
            cert = eta_scheme(scheme, i)
            dual = eta_dual_scheme(scheme, i)
            witness_ok, _ = verify_eta_dual_witness(scheme, i, dual.y, dual.a, dual.b)
            self.certificate = cert
            eta, eta_dual = cert.value, dual.value
            bounds.update(
                method='closed form',
                lambda_min=cert.lambda_min,
                eigenspace=cert.eigenspace,
                eta_dual_lp=tagged(dual.lp_value, config.CLOSED_FORM_TOL),
                eta_dual_witness={'y': dual.y, 'a': dual.a, 'b': dual.b},
                certificates={**verify_eta_certificates(cert, g), 'dual_witness': witness_ok},
                scaling_equivalence=scaling_equivalence_check(scheme, i, cert.M, cert.mu),
            )
            if config.FEATURES['lp_cross_check']:
                bounds['eta_lp'] = tagged(eta_lp(scheme, classes)[0], config.CLOSED_FORM_TOL)
        else:
            eta, eta_dual = eta_pair_lp_values(scheme, classes)
            bounds['method'] = 'lp'

        product = eta * eta_dual
        status, gap = classify_gap(product, g.edge_count)
        bounds.update(
            eta=tagged(eta, config.CLOSED_FORM_TOL),
            eta_dual=tagged(eta_dual, config.CLOSED_FORM_TOL),
            eta_product=tagged(product, config.GAUGE_REL_TOL),
            eta_status=status,
            gap=gap,
        )
        return bounds

    def _oracles(self, bounds):
        g = self.graph
        oracle = {}
        eta = bounds['eta']['value'] if isinstance(bounds.get('eta'), dict) else bounds.get('eta')
        eta_dual = bounds['eta_dual']['value'] if isinstance(bounds.get('eta_dual'), dict) else bounds.get('eta_dual')
        try:
            mc, cut = maxcut_bruteforce(g, self.force)
            oracle.update(mc=mc, cut=list(cut))
            if eta is not None:
                oracle['relaxation_holds'] = bool(mc <= eta + config.CLOSED_FORM_TOL * (1.0 + eta))
                oracle['mc_over_eta'] = mc / eta if eta else None
        except OracleSizeError as exc:
            logger.info('%s', exc)
            oracle['mc'] = SKIPPED
        try:
            fcc = fcc_lp(g, self.force).value
            oracle['fcc'] = fcc
            if eta_dual:
                oracle['fcc_sandwich'] = fcc_sandwich(fcc, eta_dual)
            if isinstance(oracle['mc'], int):
                status, gap = classify_gap(oracle['mc'] * fcc, g.edge_count)
                oracle.update(combinatorial_product=oracle['mc'] * fcc, combinatorial_status=status)
        except OracleSizeError as exc:
            logger.info('%s', exc)
            oracle['fcc'] = SKIPPED
        if oracle['mc'] == SKIPPED and oracle['fcc'] == SKIPPED:
            return SKIPPED
        return oracle

    def _rounding(self, bounds):
        if self.certificate is None:
            return {'status': 'unavailable', 'reason': 'no primal certificate for this graph'}
        result = rounding_from_certificate(self.certificate, self.graph, self.rounding_trials, self.seed).to_dict()
        result['expected_lower'] = config.ALPHA_GW * self.certificate.value
        return result


# ============================================================================
# gamma
# ============================================================================

_GAMMA_TOLERANCES = {
    'gamma': config.CLOSED_FORM_TOL,
    'gamma_lp': config.CLOSED_FORM_TOL,
    'gamma_dual': config.CLOSED_FORM_TOL,
    'gamma_dual_lp': config.CLOSED_FORM_TOL,
    'gamma_scaled': config.CLOSED_FORM_TOL,
    'upper_bound': config.CLOSED_FORM_TOL,
    'gamma_product': config.GAUGE_REL_TOL,
}


def _tag_gamma(bounds):
    """Attach tolerances to the numeric gamma fields that are present"""
    tagged_bounds = dict(bounds)
    for key, tol in _GAMMA_TOLERANCES.items():
        if tagged_bounds.get(key) is not None:
            tagged_bounds[key] = tagged(tagged_bounds[key], tol)
    return tagged_bounds


class GammaGaugeAnalyzer:
    """gamma and gamma-dual for a graph and a second graph on the same vertices"""

    def __init__(self, graph, second, source=None, second_source=None, oracle=False, rounding_trials=0,
                 seed=config.DEFAULT_SEED, force=False, timing=False):
        self.graph = graph
        self.second = second
        self.source = source
        self.second_source = second_source
        self.oracle = oracle
        self.rounding_trials = rounding_trials
        self.seed = seed
        self.force = force
        self.timer = _Timer(timing)

    def analyze(self):
        g1, g2 = self.graph, self.second
        report = _header('gamma')
        report['input'] = {
            **_graph_input(g1, self.source),
            'second': self.second_source,
            'second_graph6': to_graph6(g2),
            'second_edges': g2.edge_count,
        }

        shared = int((g1.adj * g2.adj).sum()) // 2
        if shared:
            report['bounds'] = {'status': 'unavailable', 'reason': f'the graphs share {shared} edges'}
        else:
            try:
                result = gamma_bounds(g1, g2)
            except (SchemeError, GraphError) as exc:
                report['bounds'] = {'status': 'unavailable', 'reason': str(exc)}
            else:
                report['bounds'] = _tag_gamma({**result, 'status': 'available'})
        self.timer.mark('bounds')

        available = report['bounds']['status'] == 'available'
        if self.oracle and available:
            try:
                qp, x = qp_bruteforce(g1, g2, self.force)
                report['oracle'] = {'qp': qp, 'x': list(x),
                                    'sandwich': qp_sandwich(qp, report['bounds']['gamma']['value'])}
            except OracleSizeError as exc:
                logger.info('%s', exc)
                report['oracle'] = SKIPPED
            self.timer.mark('oracle')
        if self.rounding_trials and available:
            report['rounding'] = self._rounding()
            self.timer.mark('rounding')
        return self.timer.attach(report)

    def _rounding(self):
        scheme, s1, s2 = scheme_for_pair(self.graph, self.second)
        if len(s1) != 1 or len(s2) > 1:
            return {'status': 'unavailable', 'reason': 'no primal certificate for unions of classes'}
        # an empty second graph leaves the max-cut program, whose optimum is the eta certificate
        M = gamma_primal(scheme, s1[0], s2[0]) if s2 else eta_scheme(scheme, s1[0]).M
        return round_qp(self.graph, self.second, M, self.rounding_trials, self.seed).to_dict()


# ============================================================================
# max2sat
# ============================================================================

class Max2SatAnalyzer:
    """Encoding, uniformity, bounds and oracles for a DIMACS 2-CNF instance"""

    def __init__(self, instance, source=None, rounding_trials=0, seed=config.DEFAULT_SEED, force=False,
                 timing=False):
        self.instance = instance
        self.source = source
        self.rounding_trials = rounding_trials
        self.seed = seed
        self.force = force
        self.timer = _Timer(timing)

    def analyze(self):
        inst = self.instance
        report = _header('max2sat')
        report['input'] = {
            'source': self.source,
            'variables': inst.n_vars,
            'clauses': inst.m,
            'unit_clauses': sum(1 for c in inst.clauses if len(set(c)) == 1),
            'tautologies': sum(1 for c in inst.clauses if len(c) == 2 and c[0] == -c[1]),
        }
        pipeline = bound_pipeline(inst, self.force)
        self.timer.mark('bounds')
        bounds = pipeline.pop('bounds')
        oracle = pipeline.pop('oracle')
        report['encoding'] = pipeline
        if inst.n_vars <= TRUTH_TABLE_MAX_VARS:
            report['encoding']['truth_table'] = truth_table_check(inst)
        report['bounds'] = _tag_gamma(bounds)
        report['oracle'] = oracle
        if self.rounding_trials and bounds.get('status') == 'available':
            report['rounding'] = self._rounding(bounds)
            self.timer.mark('rounding')
        return self.timer.attach(report)

    def _rounding(self, bounds):
        form = encode(self.instance)
        pair = to_graph_pair(form)
        scheme, s1, s2 = scheme_for_pair(pair.g1, pair.g2)
        if len(s1) != 1 or len(s2) != 1:
            return {'status': 'unavailable', 'reason': 'no primal certificate for unions of classes'}
        result = round_qp(pair.g1, pair.g2, gamma_primal(scheme, s1[0], s2[0]), self.rounding_trials, self.seed)
        x = result.best_assignment * result.best_assignment[0]
        assignment = tuple(bool(v == 1) for v in x[1:])
        doc = result.to_dict()
        doc['best_assignment'] = [int(v) for v in x]
        doc['satisfied'] = self.instance.satisfied(assignment)
        doc['form_value'] = float(form.constant) + float(pair.weight) * result.best_value
        return doc


# ============================================================================
# batch
# ============================================================================

def batch_row(line_no, text):
    """One flat row for a graph6 line: distance scheme, eta pair, gamma pair with its distance-2 graph"""
    row = {'line': line_no}
    try:
        g = parse_graph6(text)
        row.update(n=g.n, edges=g.edge_count)
        try:
            s = schemes.scheme_from_drg(g)
        except GraphError as exc:
            row.update(status='not DRG', error=str(exc))
            return row
        row.update(scheme=s.d + 1, drg=str(s.intersection_array), diameter=s.d)
        if s.d == 0:
            row['status'] = 'diameter < 2'
            return row

        eta = eta_scheme(s, 1).value
        eta_dual = eta_dual_scheme(s, 1).value
        eta_class, _ = classify_gap(eta * eta_dual, g.edge_count)
        row.update(eta=eta, eta_dual=eta_dual, eta_product=eta * eta_dual, eta_class=eta_class)
        if s.d < 2:
            row['status'] = 'diameter < 2'
            return row

        gamma = gamma_scheme(s, 1, 2).value
        gamma_dual = gamma_dual_drg(g, s).value
        target = g.n * int(s.k[1] + s.k[2]) // 2
        gamma_class, gap = classify_gap(gamma * gamma_dual, target)
        row.update(gamma=gamma, gamma_dual=gamma_dual, gamma_product=gamma * gamma_dual, gamma_target=target,
                   gamma_class=gamma_class, gamma_gap=gap, status='ok')
    except SchemeGaugeError as exc:
        logger.warning('line %d: %s', line_no, exc)
        row.update(status='error', error=str(exc))
    return row


def batch_summary(rows):
    counts = {'rows': len(rows), 'skipped': 0, 'errors': 0}
    counts.update({label: 0 for label in config.STATUS_LABELS.values()})
    for row in rows:
        if row.get('status') == 'ok':
            counts[row['gamma_class']] += 1
        elif row.get('status') == 'error':
            counts['errors'] += 1
        else:
            counts['skipped'] += 1
    return counts


def batch_rows(lines, threads=config.THREADS):
    """Rows in input order (blank lines skipped, numbering follows the file) and the summary counts"""
    work = [(number, line) for number, line in enumerate(lines, start=1) if line.strip()]
    if threads > 1 and len(work) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda item: batch_row(*item), work))
    else:
        rows = [batch_row(*item) for item in work]
    return rows, batch_summary(rows)
