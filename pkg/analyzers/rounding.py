"""Random-hyperplane rounding of Gram vectors"""

import logging
from dataclasses import dataclass

import numpy as np

import config
from utils.errors import NumericalError
from utils.graphs import laplacian, signless_laplacian
from utils.linalg import gram_factor

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class RoundingResult:
    trials: int
    best_value: float
    best_assignment: np.ndarray
    mean: float
    standard_error: float
    seed: int

    def to_dict(self):
        return {
            'trials': self.trials,
            'best_value': self.best_value,
            'best_assignment': [int(v) for v in self.best_assignment],
            'mean': self.mean,
            'standard_error': self.standard_error,
            'seed': self.seed,
        }


def gaussian_normals(trials, dim, seed):
    """Standard normals from Philox(key=seed) uniforms via Box-Muller"""
    rng = np.random.Generator(np.random.Philox(key=seed))
    pairs = (dim + 1) // 2
    uniforms = rng.random((trials, 2 * pairs))
    u1 = 1.0 - uniforms[:, :pairs]             # (0, 1]
    u2 = uniforms[:, pairs:]
    radius = np.sqrt(-2.0 * np.log(u1))
    normals = np.concatenate([radius * np.cos(2.0 * np.pi * u2), radius * np.sin(2.0 * np.pi * u2)], axis=1)
    return normals[:, :dim]


def round_hyperplane(vectors, L, K=None, trials=config.DEFAULT_ROUNDING_TRIALS, seed=config.DEFAULT_SEED):
    """Sign the vectors against random hyperplanes and score each trial.

    Scores 1/4 x^T L x, or 1/2 x^T (L + K) x when K is given.
    """
    vectors = np.asarray(vectors, dtype=float)
    if trials < 1:
        raise NumericalError('trials', trials=trials)
    norms = np.linalg.norm(vectors, axis=1)
    off = np.nonzero(np.abs(norms - 1.0) > config.UNIT_VECTOR_TOL)[0]
    if off.size:
        raise NumericalError('unit_vectors', index=int(off[0]), norm=float(norms[off[0]]))

    objective = np.asarray(L, dtype=float) / 4.0 if K is None else (np.asarray(L) + np.asarray(K)) / 2.0
    normals = gaussian_normals(trials, vectors.shape[1], seed)
    signs = np.where(vectors @ normals.T >= 0.0, 1, -1)       # n x trials
    values = np.einsum('it,it->t', signs, objective @ signs)

    best = int(np.argmax(values))
    spread = float(values.std(ddof=1)) / np.sqrt(trials) if trials > 1 else 0.0
    logger.debug('rounding: %d trials, best %.6g, mean %.6g', trials, values[best], values.mean())
    return RoundingResult(trials=trials, best_value=float(values[best]), best_assignment=signs[:, best].copy(),
                          mean=float(values.mean()), standard_error=spread, seed=seed)


def round_cut(g, M, trials=config.DEFAULT_ROUNDING_TRIALS, seed=config.DEFAULT_SEED):
    """Max-cut rounding from a feasible eta matrix M"""
    return round_hyperplane(gram_factor(M), laplacian(g), None, trials, seed)


def round_qp(g1, g2, M, trials=config.DEFAULT_ROUNDING_TRIALS, seed=config.DEFAULT_SEED):
    return round_hyperplane(gram_factor(M), laplacian(g1), signless_laplacian(g2), trials, seed)


def rounding_from_certificate(cert, g, trials=config.DEFAULT_ROUNDING_TRIALS, seed=config.DEFAULT_SEED):
    return round_cut(g, cert.M, trials, seed)
