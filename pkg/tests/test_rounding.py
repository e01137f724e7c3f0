import numpy as np
import pytest

from analyzers.bounds import eta_scheme, gamma_primal
from analyzers.rounding import gaussian_normals, round_hyperplane, round_qp, rounding_from_certificate
from utils.errors import NumericalError
from utils.graphs import complement, laplacian


def test_normals_are_reproducible():
    a = gaussian_normals(50, 7, seed=3)
    b = gaussian_normals(50, 7, seed=3)
    assert a.shape == (50, 7)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, gaussian_normals(50, 7, seed=4))


def test_normals_look_standard():
    z = gaussian_normals(20000, 4, seed=11).ravel()
    assert abs(z.mean()) < 0.03
    assert z.std() == pytest.approx(1.0, abs=0.03)


def test_rejects_bad_input(c5):
    with pytest.raises(NumericalError):
        round_hyperplane(2.0 * np.eye(5), laplacian(c5), trials=10)
    with pytest.raises(NumericalError):
        round_hyperplane(np.eye(5), laplacian(c5), trials=0)


def test_pentagon_rounding_always_cuts_four_edges(c5, c5_scheme):
    result = rounding_from_certificate(eta_scheme(c5_scheme, 1), c5, trials=500, seed=1)
    assert result.best_value == pytest.approx(4.0)
    assert result.mean == pytest.approx(4.0)
    assert result.standard_error == pytest.approx(0.0, abs=1e-12)


def test_petersen_rounding(petersen, petersen_scheme):
    cert = eta_scheme(petersen_scheme, 1)
    result = rounding_from_certificate(cert, petersen, trials=5000, seed=7)
    assert result.best_value <= 12
    # edge inner products are -2/3, so each edge is cut with probability arccos(-2/3) / pi
    expected = 15 * np.arccos(-2.0 / 3.0) / np.pi
    assert result.mean == pytest.approx(expected, abs=4 * result.standard_error + 1e-9)
    assert result.mean >= 0.878 * cert.value - 3 * result.standard_error

    # the star of one point of the 5-set against the rest cuts 12 edges and is an open hyperplane region
    best = max(rounding_from_certificate(cert, petersen, trials=2000, seed=s).best_value for s in range(3))
    assert best == 12


def test_rounding_is_deterministic_for_a_seed(petersen, petersen_scheme):
    cert = eta_scheme(petersen_scheme, 1)
    first = rounding_from_certificate(cert, petersen, trials=100, seed=5).to_dict()
    second = rounding_from_certificate(cert, petersen, trials=100, seed=5).to_dict()
    assert first == second


def test_gamma_rounding(paley9, paley9_scheme):
    g2 = complement(paley9)
    result = round_qp(paley9, g2, gamma_primal(paley9_scheme, 1, 2), trials=1000, seed=2)
    x = result.best_assignment
    value = sum(1 - x[u] * x[v] for u, v in paley9.edges) + sum(1 + x[u] * x[v] for u, v in g2.edges)
    assert value == pytest.approx(result.best_value)
    assert result.best_value <= 49.5
    assert result.mean >= 0.878 * 49.5 - 3 * result.standard_error
