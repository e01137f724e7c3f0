"""Symmetric eigendecomposition, PSD tests and Gram factors"""

import logging
from dataclasses import dataclass

import numpy as np

import config
from utils.errors import NotPSDError, NumericalError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Eigenvalues ascending; vectors[:, i] belongs to values[i]"""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def lambda_min(self):
        return float(self.values[0])


def as_sym_matrix(m, tol=config.SYMMETRY_TOL):
    """Return m as a square float array, raising if it is not symmetric"""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NumericalError('not_square', shape=m.shape)
    asym = float(np.abs(m - m.T).max()) if m.size else 0.0
    if asym > tol:
        raise NumericalError('not_symmetric', asym=asym, tol=tol)
    return m


def inner(a, b):
    """Trace inner product <a, b>"""
    return float(np.sum(np.asarray(a) * np.asarray(b)))


def _jacobi(m):
    a = m.copy()
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a)
    if n < 2 or scale == 0.0:
        return np.diag(a).copy(), v

    target = config.JACOBI_TOL * scale
    for sweep in range(config.JACOBI_MAX_SWEEPS):
        off = np.sqrt(2.0 * np.sum(np.triu(a, 1) ** 2))
        if off <= target:
            logger.debug('jacobi converged after %d sweeps (n=%d)', sweep, n)
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta != 0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c

                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
    raise NumericalError('jacobi_sweeps', sweeps=config.JACOBI_MAX_SWEEPS)


def eig_sym(m, method='jacobi'):
    """Full spectrum of a symmetric matrix by cyclic Jacobi (or LAPACK)"""
    m = as_sym_matrix(m)
    m = (m + m.T) / 2.0
    if method == 'lapack':
        values, vectors = np.linalg.eigh(m)
    else:
        values, vectors = _jacobi(m)
    order = np.argsort(values, kind='stable')
    return EigenDecomposition(values=values[order], vectors=vectors[:, order])


def lambda_min(m):
    return eig_sym(m).lambda_min


def is_psd(m, tol=config.PSD_TOL):
    return lambda_min(m) >= -tol


def distinct_eigenvalues(values, tol=None):
    """Group sorted eigenvalues; returns [(value, multiplicity), ...]"""
    values = np.sort(np.asarray(values, dtype=float))
    if tol is None:
        tol = config.EIG_GROUP_TOL * (1.0 + (np.abs(values).max() if values.size else 0.0))
    groups = []
    for value in values:
        if groups and value - groups[-1][-1] <= tol:
            groups[-1].append(value)
        else:
            groups.append([value])
    return [(float(np.mean(g)), len(g)) for g in groups]


def gram_factor(m, tol=config.PSD_TOL):
    """Unit vectors v_i (rows) with <v_i, v_j> = m_ij, dimension rank(m)"""
    dec = eig_sym(m)
    if dec.lambda_min < -tol:
        raise NotPSDError('not_psd', value=dec.lambda_min, tol=tol)
    values = np.where(dec.values < 0.0, 0.0, dec.values)
    keep = values > tol
    vectors = dec.vectors[:, keep] * np.sqrt(values[keep])
    norms = np.linalg.norm(vectors, axis=1)
    norms[norms == 0.0] = 1.0
    return vectors / norms[:, None]
