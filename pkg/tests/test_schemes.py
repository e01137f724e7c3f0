import numpy as np
import pytest

from analyzers.coherent import coherent_closure
from analyzers.schemes import (check_orthogonality, check_reconstruction, drg_eigenvalue_relation,
                               eigenmatrices_from_intersections, idempotents, intersection_array,
                               intersection_matrices, project_adjacency_algebra, project_scheme,
                               scheme_for_graph, scheme_from_configuration, scheme_from_drg, summary,
                               walk_regularity)
from conftest import random_unit_psd
from utils.errors import GraphError, SchemeError
from utils.graphs import named_graph

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def test_petersen_eigenmatrix(petersen_scheme):
    s = petersen_scheme
    assert np.allclose(s.P, [[1, 3, 6], [1, 1, -2], [1, -2, 1]], atol=1e-9)
    assert np.allclose(s.m, [1, 5, 4], atol=1e-9)
    assert s.k.tolist() == [1, 3, 6]
    assert s.intersection_array.b == (3, 2)
    assert s.intersection_array.c == (1, 1)
    assert str(s.intersection_array) == '{3,2; 1,1}'


def test_paley9_eigenmatrix(paley9_scheme):
    assert np.allclose(paley9_scheme.P, [[1, 4, 4], [1, 1, -2], [1, -2, 1]], atol=1e-9)
    assert np.allclose(paley9_scheme.m, [1, 4, 4], atol=1e-9)


def test_pentagon_eigenmatrix(c5_scheme):
    expected = [[1, 2, 2], [1, GOLDEN, -1 - GOLDEN], [1, -1 - GOLDEN, GOLDEN]]
    assert np.allclose(c5_scheme.P, expected, atol=1e-9)
    assert np.allclose(c5_scheme.m, [1, 2, 2], atol=1e-9)


@pytest.mark.parametrize('n', [9, 11, 17])
def test_odd_cycle_eigenmatrix(n):
    s = scheme_from_drg(named_graph(f'cycle({n})'))
    d = n // 2
    l, i = np.meshgrid(np.arange(d + 1), np.arange(d + 1), indexing='ij')
    expected = np.where(i == 0, 1.0, 2.0 * np.cos(2.0 * np.pi * l * i / n))
    assert s.intersection_array.b == (2,) + (1,) * (d - 1)
    assert s.intersection_array.c == (1,) * d
    assert np.allclose(s.P, expected, atol=1e-9)
    assert np.allclose(s.m, [1] + [2] * d, atol=1e-9)
    assert check_orthogonality(s) <= 1e-9


@pytest.mark.parametrize('spec', ['petersen', 'paley(9)', 'paley(13)', 'cycle(7)', 'hypercube(3)',
                                  'hamming(2,3)', 'complete(5)', 'hamming(3,2)'])
def test_orthogonality_and_reconstruction(spec):
    s = scheme_from_drg(named_graph(spec))
    assert check_orthogonality(s) <= 1e-9
    assert check_reconstruction(s) <= 1e-9
    assert np.allclose(s.P @ s.Q, s.n * np.eye(s.d + 1), atol=1e-9)


def test_idempotents_are_projections(petersen_scheme):
    for l, e in enumerate(idempotents(petersen_scheme)):
        assert np.allclose(e @ e, e, atol=1e-10)
        assert np.trace(e) == pytest.approx(petersen_scheme.m[l])


def test_closure_and_distance_scheme_agree(petersen):
    closure = scheme_from_configuration(coherent_closure([petersen.adj]))
    assert np.allclose(closure.P, scheme_from_drg(petersen).P, atol=1e-9)


def test_eigenmatrices_from_intersection_numbers(paley9_scheme):
    P, Q = eigenmatrices_from_intersections(paley9_scheme.p)
    assert np.allclose(P, paley9_scheme.P)
    for i, b in enumerate(intersection_matrices(paley9_scheme.p)):
        # rows of P are left eigenvectors of every intersection matrix
        assert np.allclose(P @ b, P[:, [i]] * P, atol=1e-9)


def test_non_scheme_is_rejected():
    cfg = coherent_closure([named_graph('path(3)').adj])
    with pytest.raises(SchemeError) as info:
        scheme_from_configuration(cfg)
    assert 'homogeneous' in str(info.value)


def test_regular_graph_that_is_not_distance_regular():
    g = named_graph('circulant(8,1,2)')
    with pytest.raises(GraphError) as info:
        scheme_from_drg(g)
    assert info.value.key == 'not_drg'
    s = scheme_for_graph(g)
    assert s.intersection_array is None
    assert check_orthogonality(s) <= 1e-9


def test_irregular_graph_is_not_distance_regular():
    with pytest.raises(GraphError) as info:
        scheme_from_drg(named_graph('path(3)'))
    assert info.value.key == 'not_regular'
    assert (info.value.fields['u'], info.value.fields['v']) == (0, 1)
    assert 'vertices 0 and 1 have degrees 1 and 2' in str(info.value)


def test_intersection_array_of_hypercube():
    ia = intersection_array(named_graph('hypercube(3)'))
    assert ia.b == (3, 2, 1)
    assert ia.c == (1, 2, 3)
    assert ia.diameter == 3


@pytest.mark.parametrize('spec', ['petersen', 'cycle(6)', 'hypercube(3)', 'paley(13)'])
def test_second_eigenmatrix_column_follows_from_the_first(spec):
    s = scheme_from_drg(named_graph(spec))
    assert drg_eigenvalue_relation(s.intersection_array, s.P)['passed']


def test_walk_regularity(petersen):
    report = walk_regularity(petersen)
    assert report.is_walk_regular and report.is_1_walk_regular
    assert report.degree == 3
    assert report.to_dict()['basis_size'] == 3
    assert not walk_regularity(named_graph('path(3)')).is_walk_regular


def test_walk_regular_projection_matches_scheme_projection(petersen, petersen_scheme, rng):
    report = walk_regularity(petersen)
    for _ in range(5):
        m = random_unit_psd(rng, 10)
        assert np.allclose(project_adjacency_algebra(report, m), project_scheme(petersen_scheme, m), atol=1e-8)


def test_summary_lists_scheme_data(petersen_scheme):
    doc = summary(petersen_scheme)
    assert doc['d'] == 2
    assert doc['intersection_array'] == {'b': [3, 2], 'c': [1, 1]}
    assert len(doc['color']) == 10
