"""Shared fixtures: named graphs and their schemes"""

import numpy as np
import pytest

from analyzers.schemes import scheme_from_drg
from utils.graphs import named_graph


@pytest.fixture(scope='session')
def petersen():
    return named_graph('petersen')


@pytest.fixture(scope='session')
def paley9():
    return named_graph('paley(9)')


@pytest.fixture(scope='session')
def c5():
    return named_graph('cycle(5)')


@pytest.fixture(scope='session')
def petersen_scheme(petersen):
    return scheme_from_drg(petersen)


@pytest.fixture(scope='session')
def paley9_scheme(paley9):
    return scheme_from_drg(paley9)


@pytest.fixture(scope='session')
def c5_scheme(c5):
    return scheme_from_drg(c5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_graph(rng, n, p=0.5):
    upper = np.triu((rng.random((n, n)) < p).astype(np.int64), 1)
    return upper + upper.T


def random_unit_psd(rng, n, rank=None):
    """Gram matrix of random unit vectors"""
    vectors = rng.normal(size=(n, rank or n))
    vectors /= np.linalg.norm(vectors, axis=1)[:, None]
    return vectors @ vectors.T
