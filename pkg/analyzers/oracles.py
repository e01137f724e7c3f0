"""Exhaustive and LP ground truth: mc, fcc, qp, MAX 2-SAT"""

import logging
from dataclasses import dataclass

import numpy as np

import config
from utils.errors import GraphError, OracleSizeError
from utils.graphs import cut_edges
from utils.lp import LinearProgram, solve
from utils.scoring import classify_gap

logger = logging.getLogger(__name__)


def _gate(oracle, n, limit, force):
    if n > limit:
        if not force:
            raise OracleSizeError('oracle_size', oracle=oracle, limit=limit, n=n)
        logger.warning('%s oracle forced beyond its size gate (n=%d > %d)', oracle, n, limit)


def _bit_rows(count):
    """All count-bit rows in lexicographic order, first column most significant"""
    codes = np.arange(2 ** count, dtype=np.int64)
    shifts = np.arange(count - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts[None, :]) & 1).astype(np.int64)


def max_weighted_cut(weights):
    """Max of sum_{u<v} W_uv [s_u != s_v] over s with s_0 = 0.

    Returns (value, sides) with sides the lexicographically smallest maximiser.
    High vertices are walked in Gray-code order with incremental updates; the
    low vertices form one vectorized block per step.
    """
    w = np.asarray(weights, dtype=np.int64)
    n = w.shape[0]
    if n <= 1:
        return 0, np.zeros(n, dtype=np.int64)
    free = n - 1
    low = min(free, config.ENUM_BLOCK_BITS)
    high = free - low
    hi_vertices = np.arange(1, 1 + high)
    lo_vertices = np.arange(1 + high, n)

    block = _bit_rows(low)
    w_lo = w[np.ix_(lo_vertices, lo_vertices)]
    cut_lo = ((block @ w_lo) * (1 - block)).sum(axis=1)       # cut inside the low block
    to_top = w[np.ix_(np.arange(0, 1 + high), lo_vertices)]  # rows: vertex 0 and high vertices
    d_top = to_top.sum(axis=0)

    sides_top = np.zeros(1 + high, dtype=np.int64)
    w_top = w[:1 + high, :1 + high]
    cut_top = 0
    w1 = np.zeros(low, dtype=np.int64)                        # weight from high vertices on side 1

    best_value, best_code = None, None
    for step in range(2 ** high):
        if step:
            bit = (step & -step).bit_length() - 1
            vertex = high - bit                               # index in the top block
            same = sides_top == sides_top[vertex]
            same[vertex] = False
            across = w_top[vertex] @ (1 - same.astype(np.int64)) - w_top[vertex, vertex]
            cut_top += int(w_top[vertex] @ same.astype(np.int64)) - int(across)
            direction = 1 if sides_top[vertex] == 0 else -1
            sides_top[vertex] ^= 1
            w1 += direction * to_top[vertex]
        values = cut_top + w1.sum() + block @ (d_top - 2 * w1) + cut_lo
        idx = int(np.argmax(values))
        value = int(values[idx])
        hi_code = int(sum(int(sides_top[1 + t]) << (high - 1 - t) for t in range(high)))
        code = (hi_code << low) | idx
        if best_value is None or value > best_value or (value == best_value and code < best_code):
            best_value, best_code = value, code

    sides = np.zeros(n, dtype=np.int64)
    for t in range(free):
        sides[1 + t] = (best_code >> (free - 1 - t)) & 1
    return best_value, sides


def maxcut_bruteforce(g, force=False):
    """(mc, S) with S the side not containing vertex 0"""
    _gate('maxcut', g.n, config.MAXCUT_MAX_N, force)
    value, sides = max_weighted_cut(g.adj)
    return int(value), tuple(int(v) for v in np.nonzero(sides)[0])


def cut_value(g, s):
    return len(cut_edges(g, s))


def qp_bruteforce(g1, g2, force=False):
    """max sum_E1 (1 - x_i x_j) + sum_E2 (1 + x_i x_j); x_0 = +1"""
    if g1.n != g2.n:
        raise GraphError('vertex_mismatch', n1=g1.n, n2=g2.n)
    _gate('qp', g1.n, config.QP_MAX_N, force)
    value, sides = max_weighted_cut(g1.adj - g2.adj)
    qp = 2 * g2.edge_count + 2 * value
    return int(qp), tuple(int(1 - 2 * s) for s in sides)


@dataclass(eq=False)
class CutCoverSolution:
    value: float
    weights: dict       # cut (tuple of vertices, 0 excluded) -> y_S > 0
    covered: np.ndarray # per-edge coverage, in g.edges order
    edge_duals: np.ndarray = None   # z_e >= 0 with z(delta(S)) <= 1 for every cut S


def fcc_lp(g, force=False):
    """min 1^T y s.t. sum_S y_S 1_delta(S) >= 1 over all 2^(n-1) - 1 nontrivial cuts"""
    _gate('fcc', g.n, config.FCC_MAX_N, force)
    edges = np.array(g.edges, dtype=np.int64).reshape(-1, 2)
    if edges.shape[0] == 0:
        return CutCoverSolution(value=0.0, weights={}, covered=np.zeros(0), edge_duals=np.zeros(0))
    free = g.n - 1
    sides = np.zeros((2 ** free - 1, g.n), dtype=np.int8)
    sides[:, 1:] = _bit_rows(free)[1:]
    cover = (sides[:, edges[:, 0]] != sides[:, edges[:, 1]]).T.astype(float)   # edges x cuts

    lp = LinearProgram(objective=np.ones(cover.shape[1]), sense='min')
    for row in cover:
        lp.add(row, '>=', 1.0)
    solution = solve(lp)
    logger.debug('fcc LP over %d cuts: %s after %d pivots', cover.shape[1], solution.status, solution.pivots)
    y = np.where(solution.point > config.LP_FEAS_TOL, solution.point, 0.0)
    weights = {tuple(int(v) for v in np.nonzero(sides[c])[0]): float(y[c]) for c in np.nonzero(y)[0]}
    return CutCoverSolution(value=float(solution.value), weights=weights, covered=cover @ solution.point,
                            edge_duals=np.maximum(solution.duals, 0.0))


def max2sat_bruteforce(inst, force=False):
    """(satisfied count, assignment) maximising over truth assignments; ties to the smallest"""
    from analyzers.max2sat import check_width

    check_width(inst)
    nv = inst.n_vars
    _gate('max2sat', nv, config.MAX2SAT_MAX_VARS, force)
    if not inst.clauses:
        return 0, tuple(False for _ in range(nv))
    if nv == 0:
        return 0, ()

    bits = min(nv, config.SAT_BLOCK_BITS)
    block = _bit_rows(bits).astype(bool)
    lits = [(np.array([abs(l) - 1 for l in c]), np.array([l > 0 for l in c])) for c in inst.clauses]
    best_value, best_code = -1, None
    for prefix in range(2 ** (nv - bits)):
        prefix_bits = np.array([(prefix >> (nv - bits - 1 - t)) & 1 for t in range(nv - bits)], dtype=bool)
        assignment = np.concatenate([np.broadcast_to(prefix_bits, (block.shape[0], nv - bits)), block], axis=1)
        satisfied = np.zeros(block.shape[0], dtype=np.int64)
        for variables, signs in lits:
            satisfied += (assignment[:, variables] == signs).any(axis=1)
        idx = int(np.argmax(satisfied))
        if satisfied[idx] > best_value:
            best_value, best_code = int(satisfied[idx]), (prefix << bits) | idx
    assignment = tuple(bool((best_code >> (nv - 1 - t)) & 1) for t in range(nv))
    return best_value, assignment


def combinatorial_gauge_check(g, force=False):
    """mc * fcc against |E|"""
    mc, cut = maxcut_bruteforce(g, force)
    fcc = fcc_lp(g, force).value
    product = mc * fcc
    status, gap = classify_gap(product, g.edge_count)
    return {'mc': mc, 'cut': list(cut), 'fcc': fcc, 'product': product, 'edges': g.edge_count,
            'gap': gap, 'status': status}
