import networkx as nx
import numpy as np
import pytest

from utils.errors import GraphError, ParseError
from utils.graphs import (Graph, complement, cut_edges, distance_graphs, distance_matrix, from_adjacency,
                          is_connected, is_regular, laplacian, named_graph, parse_graph6, signless_laplacian, to_graph6)

CORPUS_LINES = ['IheA@GUAo', 'H{S{aSf', 'Dhc', 'Cl', 'EhEG', 'Bw', 'C~', 'D~{', 'Gr`HOk', 'EFz_', 'C`', 'Bg']


def test_petersen_graph6_matches_named_graph():
    assert parse_graph6('IheA@GUAo') == named_graph('petersen')
    assert to_graph6(named_graph('petersen')) == 'IheA@GUAo'


def test_graph6_prefix_and_whitespace():
    assert parse_graph6('>>graph6<<Dhc\n') == named_graph('cycle(5)')


@pytest.mark.parametrize('line', CORPUS_LINES)
def test_corpus_lines_reencode(line):
    assert to_graph6(parse_graph6(line)) == line


def test_corpus_graphs_are_the_intended_ones():
    expected = ['petersen', 'paley(9)', 'cycle(5)', 'cycle(4)', 'cycle(6)', 'complete(3)', 'complete(4)',
                'complete(5)', 'hypercube(3)', 'complete_bipartite(3,3)', None, 'path(3)']
    for line, spec in zip(CORPUS_LINES, expected):
        if spec is None:
            continue
        assert nx.is_isomorphic(parse_graph6(line).to_networkx(), named_graph(spec).to_networkx()), spec
    assert parse_graph6('C`').edges == [(0, 1), (2, 3)]


def test_hypercube_ordering_is_lexicographic():
    assert to_graph6(named_graph('hypercube(3)')) == 'Gr`HOk'
    assert parse_graph6('EFz_').edge_count == 9


@pytest.mark.parametrize('text, key, offset', [
    ('', 'graph6_empty', None),
    (':Fa@x^', 'graph6_format', 0),
    ('&Dhc', 'graph6_format', 0),
    ('D c', 'graph6_byte', 1),
    ('Dh', 'graph6_truncated', 2),
    ('Dhcc', 'graph6_trailing', 3),
    ('~', 'graph6_header', 1),
    ('~}~~', 'graph6_too_large', 0),
])
def test_graph6_errors(text, key, offset):
    with pytest.raises(ParseError) as info:
        parse_graph6(text)
    assert info.value.key == key
    assert info.value.offset == offset


def test_graph6_non_ascii():
    with pytest.raises(ParseError) as info:
        parse_graph6('Dhé')
    assert info.value.offset == 2


def test_named_graph_parameters():
    assert named_graph('paley(9)').degrees.tolist() == [4] * 9
    assert is_regular(named_graph('paley(13)'))
    assert named_graph('paley(13)').degrees[0] == 6
    assert named_graph('hamming(2,3)').n == 9
    assert named_graph(' cycle( 7 ) ').edge_count == 7
    assert named_graph('circulant(8,1,2)').degrees.tolist() == [4] * 8
    assert named_graph('empty(4)').edge_count == 0


def test_paley9_is_the_rook_graph():
    assert nx.is_isomorphic(named_graph('paley(9)').to_networkx(), named_graph('hamming(2,3)').to_networkx())


def test_paley_vertices_follow_field_element_order():
    # squares of GF(9) with t^2 = -1: 1, 2, t, 2t
    g = named_graph('paley(9)')
    assert np.nonzero(g.adj[0])[0].tolist() == [1, 2, 3, 6]
    assert np.nonzero(named_graph('paley(13)').adj[0])[0].tolist() == [1, 3, 4, 9, 10, 12]


@pytest.mark.parametrize('spec', ['paley(7)', 'paley(15)', 'unknown(3)', 'cycle(x)', 'cycle(2)', 'cycle',
                                  'petersen(3)', 'hamming(0,2)', 'circulant(6,6)'])
def test_named_graph_errors(spec):
    with pytest.raises(GraphError):
        named_graph(spec)


def test_graph_validation():
    with pytest.raises(GraphError):
        from_adjacency([[0, 1], [0, 0]])
    with pytest.raises(GraphError):
        from_adjacency([[1, 0], [0, 0]])
    with pytest.raises(GraphError):
        from_adjacency([[0, 2], [2, 0]])
    g = from_adjacency([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        g.adj[0, 1] = 0


def test_complement_and_distance_graphs(petersen):
    comp = complement(petersen)
    assert comp.degrees.tolist() == [6] * 10
    assert distance_graphs(petersen)[1] == comp
    assert distance_matrix(petersen).max() == 2


def test_disconnected_graph_has_no_distances():
    g = parse_graph6('C`')
    assert not is_connected(g)
    with pytest.raises(GraphError) as info:
        distance_matrix(g)
    assert info.value.key == 'disconnected'


def test_laplacians(petersen):
    L = laplacian(petersen)
    K = signless_laplacian(petersen)
    assert np.allclose(L.sum(axis=1), 0.0)
    assert np.allclose(np.diag(K), 3.0)
    x = np.where(np.arange(10) < 5, 1.0, -1.0)
    cut = sum(1 for u, v in petersen.edges if x[u] != x[v])
    assert x @ L @ x == pytest.approx(4 * cut)


def test_graph_equality_and_hash():
    a = Graph(3, np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]]))
    b = named_graph('path(3)')
    assert a == b
    assert len({a, b}) == 1


def test_cut_edges(petersen):
    assert cut_edges(petersen, []) == []
    outer = cut_edges(petersen, range(5))
    assert len(outer) == 5
    assert all((u < 5) != (v < 5) for u, v in outer)
    star = cut_edges(petersen, [0])
    assert sorted(star) == sorted(e for e in petersen.edges if 0 in e)
