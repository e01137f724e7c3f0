from itertools import product

import numpy as np
import pytest

from analyzers.oracles import (combinatorial_gauge_check, cut_value, fcc_lp, max_weighted_cut, maxcut_bruteforce,
                               qp_bruteforce)
from conftest import random_graph
from utils.errors import GraphError, OracleSizeError
from utils.graphs import complement, from_adjacency, named_graph


def _reference_cut(weights):
    n = weights.shape[0]
    best = 0
    for bits in product((0, 1), repeat=n - 1):
        side = np.array((0,) + bits)
        best = max(best, int(weights[side[:, None] != side[None, :]].sum()) // 2)
    return best


@pytest.mark.parametrize('spec, expected', [('petersen', 12), ('cycle(5)', 4), ('complete(4)', 4),
                                            ('complete_bipartite(3,3)', 9), ('hypercube(3)', 12)])
def test_maxcut_values(spec, expected):
    g = named_graph(spec)
    mc, cut = maxcut_bruteforce(g)
    assert mc == expected
    assert 0 not in cut
    assert cut_value(g, cut) == mc


def test_weighted_cut_matches_reference(rng):
    for n in range(2, 9):
        w = rng.integers(-3, 4, size=(n, n))
        w = np.triu(w, 1)
        w = w + w.T
        value, sides = max_weighted_cut(w)
        assert value == _reference_cut(w)
        assert sides[0] == 0
        assert int(w[sides[:, None] != sides[None, :]].sum()) // 2 == value


def test_weighted_cut_with_a_high_block(rng):
    n = 15
    adj = random_graph(rng, n, 0.4)
    value, sides = max_weighted_cut(adj)
    codes = np.arange(2 ** (n - 1))
    all_sides = np.zeros((codes.size, n), dtype=np.int64)
    all_sides[:, 1:] = (codes[:, None] >> np.arange(n - 2, -1, -1)[None, :]) & 1
    values = np.einsum('ti,ij,tj->t', all_sides, adj, 1 - all_sides)
    assert value == values.max()
    # lexicographically smallest maximiser
    assert np.array_equal(sides, all_sides[int(np.argmax(values))])


def test_tiny_graphs():
    assert maxcut_bruteforce(named_graph('complete(1)')) == (0, ())
    assert maxcut_bruteforce(named_graph('empty(3)'))[0] == 0


def test_qp_with_edgeless_second_graph_doubles_maxcut(rng):
    for _ in range(30):
        n = int(rng.integers(3, 13))
        g = from_adjacency(random_graph(rng, n))
        qp, x = qp_bruteforce(g, named_graph(f'empty({n})'))
        assert qp == 2 * maxcut_bruteforce(g)[0]
        assert x[0] == 1


def test_qp_with_complement(paley9):
    qp, x = qp_bruteforce(paley9, complement(paley9))
    assert qp <= 49.5
    value = sum(1 - x[u] * x[v] for u, v in paley9.edges) + sum(1 + x[u] * x[v] for u, v in complement(paley9).edges)
    assert value == qp
    with pytest.raises(GraphError):
        qp_bruteforce(paley9, named_graph('cycle(5)'))


@pytest.mark.parametrize('spec, expected', [('complete(3)', 1.5), ('cycle(5)', 1.25), ('petersen', 1.25),
                                            ('cycle(4)', 1.0), ('complete(9)', 1.8), ('complete(12)', 11 / 6),
                                            ('cycle(14)', 1.0), ('cycle(16)', 1.0), ('hypercube(4)', 1.0)])
def test_fractional_cut_cover(spec, expected):
    solution = fcc_lp(named_graph(spec))
    assert solution.value == pytest.approx(expected, abs=1e-9)
    assert solution.covered.min() >= 1.0 - 1e-9
    assert sum(solution.weights.values()) == pytest.approx(expected, abs=1e-9)


def test_fcc_of_edgeless_graph():
    assert fcc_lp(named_graph('empty(4)')).value == 0.0


def test_size_gates():
    with pytest.raises(OracleSizeError):
        maxcut_bruteforce(named_graph('cycle(27)'))
    with pytest.raises(OracleSizeError):
        fcc_lp(named_graph('cycle(17)'))
    with pytest.raises(OracleSizeError):
        qp_bruteforce(named_graph('cycle(27)'), named_graph('empty(27)'))


def test_combinatorial_gauge_check(petersen):
    check = combinatorial_gauge_check(petersen)
    assert check['mc'] == 12
    assert check['product'] == pytest.approx(15.0)
    assert check['status'] == 'equality'


@pytest.mark.parametrize('spec', ['petersen', 'cycle(7)', 'paley(9)'])
def test_cut_cover_edge_duals_certify_the_value(spec):
    g = named_graph(spec)
    solution = fcc_lp(g)
    z = solution.edge_duals
    assert z.min() >= 0.0
    assert z.sum() == pytest.approx(solution.value, abs=1e-7)
    for bits in product((0, 1), repeat=g.n - 1):
        side = (0,) + bits
        assert sum(z[t] for t, (u, v) in enumerate(g.edges) if side[u] != side[v]) <= 1.0 + 1e-7


def test_cut_cover_of_edge_transitive_graph_is_edges_over_maxcut():
    g = named_graph('paley(13)')
    mc, _ = maxcut_bruteforce(g)
    assert fcc_lp(g).value == pytest.approx(g.edge_count / mc, abs=1e-8)
