import numpy as np
import pytest

import config
from analyzers.coherent import (BELONGS, NEITHER, SPLITS, check_axioms, class_coefficients, class_support,
                                classify, coherent_closure, configuration_from_colors, intersection_numbers,
                                membership, project, summary)
from utils.errors import GraphError, NotCoherentError
from utils.graphs import distance_matrix, named_graph


def test_petersen_closure_is_its_distance_scheme(petersen):
    cfg = coherent_closure([petersen.adj])
    assert cfg.rank == 3
    assert cfg.flags == {'homogeneous': True, 'commutative': True, 'symmetric': True}
    (edge_class,) = class_support(cfg, petersen.adj)
    (far_class,) = class_support(cfg, 1 - petersen.adj - np.eye(10, dtype=int))
    p = cfg.p
    assert p[edge_class, edge_class, 0] == 3        # degree
    assert p[edge_class, edge_class, edge_class] == 0   # no triangles
    assert p[edge_class, edge_class, far_class] == 1    # one common neighbour


def test_axioms_hold(petersen, paley9):
    for g in (petersen, paley9, named_graph('path(4)')):
        assert all(check_axioms(coherent_closure([g.adj])).values())


def test_path_closure_is_not_homogeneous():
    cfg = coherent_closure([named_graph('path(3)').adj])
    assert not cfg.homogeneous
    assert len(cfg.fibers) == 2
    assert cfg.fiber_of(0) == cfg.fiber_of(2) != cfg.fiber_of(1)


def test_membership_kinds(petersen):
    cfg = coherent_closure([petersen.adj])
    assert membership(cfg, petersen.adj).kind == BELONGS
    single_edge = np.zeros((10, 10), dtype=int)
    single_edge[0, 1] = single_edge[1, 0] = 1
    assert membership(cfg, single_edge).kind == NEITHER
    assert class_support(cfg, single_edge) is None


def test_directed_seed_splits_the_triangle():
    shift = np.roll(np.eye(3, dtype=int), 1, axis=1)
    cfg = coherent_closure([shift])
    assert not cfg.symmetric
    assert cfg.commutative
    assert classify(cfg) == {'homogeneous': True, 'commutative': True, 'symmetric': False}
    (forward,) = class_support(cfg, shift)
    (backward,) = class_support(cfg, shift.T)
    assert cfg.transpose_index(forward) == backward != forward
    assert cfg.transpose_index(cfg.fiber_of(0)) == cfg.fiber_of(0)
    assert np.array_equal(cfg.class_matrix(backward), shift.T)
    result = membership(cfg, shift + shift.T)
    assert result.kind == SPLITS
    assert result.to_dict()['kind'] == 'splits'


def test_closure_of_two_seeds_refines_both(paley9):
    cfg = coherent_closure([paley9.adj, np.ones((9, 9), dtype=int)])
    assert class_support(cfg, paley9.adj) is not None
    assert cfg.rank == 3


def test_intersection_numbers_match_matrix_products(paley9):
    cfg = coherent_closure([paley9.adj])
    p = intersection_numbers(cfg)
    classes = np.stack(cfg.classes)
    for i in range(cfg.rank):
        for j in range(cfg.rank):
            assert np.array_equal(classes[i] @ classes[j], np.tensordot(p[i, j], classes, axes=1))


def test_non_coherent_coloring_is_rejected():
    with pytest.raises(NotCoherentError):
        configuration_from_colors(distance_matrix(named_graph('path(3)')))
    with pytest.raises(NotCoherentError):
        configuration_from_colors(np.array([[0, 2], [2, 0]]))


def test_projection_onto_the_algebra(petersen, rng):
    cfg = coherent_closure([petersen.adj])
    assert np.allclose(project(cfg, np.ones((10, 10))), 1.0)
    coefficients = class_coefficients(cfg, petersen.adj)
    assert np.allclose(coefficients, np.bincount([class_support(cfg, petersen.adj)[0]], minlength=3))
    m = rng.normal(size=(10, 10))
    once = project(cfg, m)
    assert np.allclose(project(cfg, once), once)


def test_summary_is_json_ready(petersen):
    doc = summary(coherent_closure([petersen.adj]))
    assert doc['classes'] == 3
    assert doc['sizes'] == [10, 30, 60]
    assert doc['symmetric'] is True


def test_closure_size_gate(petersen, monkeypatch):
    monkeypatch.setattr(config, 'CLOSURE_MAX_N', 9)
    with pytest.raises(GraphError) as info:
        coherent_closure([petersen.adj])
    assert info.value.key == 'closure_size'
    assert coherent_closure([named_graph('paley(9)').adj]).rank == 3
