"""Coherent closure by 2-dimensional Weisfeiler-Leman refinement"""

import logging
from dataclasses import dataclass

import numpy as np

import config
from utils.errors import GraphError, NotCoherentError

logger = logging.getLogger(__name__)

BELONGS = 'belongs'
SPLITS = 'splits'
NEITHER = 'neither'


@dataclass(frozen=True, eq=False)
class CoherentConfiguration:
    """Stable coloring of V x V; class i is the set of cells with color i"""

    n: int
    color: np.ndarray
    transpose: np.ndarray       # transpose[i] = color of the transposed cells of class i
    fibers: tuple
    p: np.ndarray               # p[i, j, l] = intersection number p_ij^l
    homogeneous: bool
    commutative: bool
    symmetric: bool

    @property
    def rank(self):
        """Number of classes (d + 1)"""
        return int(self.p.shape[0])

    @property
    def sizes(self):
        return np.bincount(self.color.ravel(), minlength=self.rank)

    @property
    def flags(self):
        return {'homogeneous': self.homogeneous, 'commutative': self.commutative, 'symmetric': self.symmetric}

    def class_matrix(self, i):
        return (self.color == i).astype(np.int64)

    @property
    def classes(self):
        return [self.class_matrix(i) for i in range(self.rank)]

    def transpose_index(self, i):
        return int(self.transpose[i])

    def fiber_of(self, v):
        return int(self.color[v, v])


@dataclass(frozen=True)
class Membership:
    kind: str
    index: int = None

    def to_dict(self):
        return {'kind': self.kind, 'index': self.index}


def _renumber(codes):
    """Relabel integer rows by first occurrence in row-major order"""
    _, first, inverse = np.unique(codes, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    rank = np.empty(first.shape[0], dtype=np.int64)
    rank[np.argsort(first, kind='stable')] = np.arange(first.shape[0])
    return rank[inverse], first.shape[0]


def _initial_colors(seeds, n):
    diag = np.eye(n, dtype=np.int64)
    stack = [diag] + [np.asarray(s, dtype=np.int64) for s in seeds]
    codes = np.stack([s.ravel() for s in stack], axis=1)
    labels, count = _renumber(codes)
    return labels.reshape(n, n), count


def _refine(color, count):
    n = color.shape[0]
    walks = color[:, None, :] * count + color.T[None, :, :]
    walks.sort(axis=2)
    signature = np.concatenate(
        [color.reshape(n * n, 1), color.T.reshape(n * n, 1), walks.reshape(n * n, n)], axis=1)
    labels, new_count = _renumber(signature)
    return labels.reshape(n, n), new_count


def coherent_closure(seeds):
    """Smallest coherent configuration whose algebra contains every seed"""
    seeds = [np.asarray(s) for s in seeds]
    if not seeds:
        raise ValueError('coherent_closure needs at least one seed')
    n = seeds[0].shape[0]
    if any(s.shape != (n, n) for s in seeds):
        raise ValueError('all seeds must have the same dimension')
    if n > config.CLOSURE_MAX_N:
        raise GraphError('closure_size', limit=config.CLOSURE_MAX_N, n=n)

    color, count = _initial_colors(seeds, n)
    cap = max(n * n, 1)
    for rounds in range(1, cap + 2):
        color, new_count = _refine(color, count)
        if new_count == count:
            logger.debug('refinement stable after %d rounds with %d classes (n=%d)', rounds, count, n)
            return configuration_from_colors(color)
        count = new_count
    raise NotCoherentError('closure_cap', cap=cap, reason='iteration cap')


def configuration_from_colors(color):
    """Wrap a coloring (classes numbered 0..r-1) as a configuration, checking the axioms"""
    color = np.asarray(color, dtype=np.int64)
    n = color.shape[0]
    rank = int(color.max()) + 1
    counts = np.bincount(color.ravel(), minlength=rank)
    if (counts == 0).any():
        raise NotCoherentError('not_coherent', reason='empty class')

    transpose = np.full(rank, -1, dtype=np.int64)
    transpose[color.ravel()] = color.T.ravel()
    if not np.array_equal(transpose[color], color.T):
        raise NotCoherentError('not_coherent', reason='classes are not closed under transpose')

    diag_classes = set(np.diag(color).tolist())
    off = color[~np.eye(n, dtype=bool)]
    if diag_classes & set(off.tolist()):
        raise NotCoherentError('not_coherent', reason='a class mixes diagonal and off-diagonal cells')

    p = intersection_numbers_from_colors(color, rank)
    homogeneous = len(diag_classes) == 1
    commutative = bool(np.array_equal(p, p.transpose(1, 0, 2)))
    symmetric = bool(np.array_equal(transpose, np.arange(rank)))
    color.setflags(write=False)
    return CoherentConfiguration(
        n=n, color=color, transpose=transpose, fibers=tuple(sorted(diag_classes)), p=p,
        homogeneous=homogeneous, commutative=commutative, symmetric=symmetric)


def intersection_numbers_from_colors(color, rank):
    n = color.shape[0]
    walks = color[:, None, :] * rank + color.T[None, :, :]
    walks.sort(axis=2)
    flat = color.ravel()
    reps = np.array([np.argmax(flat == l) for l in range(rank)])
    rep_u, rep_v = reps // n, reps % n

    # every cell must see the same multiset of 2-walk colors as its class representative
    mismatch = np.any(walks != walks[rep_u[color], rep_v[color]], axis=2)
    if mismatch.any():
        u, v = np.argwhere(mismatch)[0]
        raise NotCoherentError(
            'not_coherent', reason=f'cell ({u}, {v}) has different products than class {color[u, v]}')

    p = np.zeros((rank, rank, rank), dtype=np.int64)
    for l in range(rank):
        codes = walks[rep_u[l], rep_v[l]]
        np.add.at(p, (codes // rank, codes % rank, l), 1)
    return p


def intersection_numbers(cfg):
    """p[i, j, l] with A_i A_j = sum_l p[i, j, l] A_l, rechecked exactly"""
    return intersection_numbers_from_colors(cfg.color, cfg.rank)


def classify(cfg):
    return cfg.flags


def check_axioms(cfg):
    """Each axiom of a coherent configuration as an explicit check"""
    color, rank, n = cfg.color, cfg.rank, cfg.n
    stack = np.stack(cfg.classes)
    results = {
        'partition': bool((stack.sum(axis=0) == 1).all() and (stack.reshape(rank, -1).sum(axis=1) > 0).all()),
        'transpose_closed': bool(all(
            any(np.array_equal(stack[i].T, stack[j]) for j in range(rank)) for i in range(rank))),
        'diagonal_classes': bool(all(
            (np.diag(stack[i]).sum() == 0) or np.array_equal(stack[i], np.diag(np.diag(stack[i])))
            for i in range(rank))),
    }
    try:
        p = intersection_numbers_from_colors(color, rank)
        results['products'] = bool(all(
            np.array_equal(stack[i] @ stack[j], np.tensordot(p[i, j], stack, axes=1))
            for i in range(rank) for j in range(rank)))
    except NotCoherentError:
        results['products'] = False
    results['identity_covered'] = bool(
        np.array_equal(sum(stack[f] for f in cfg.fibers), np.eye(n, dtype=np.int64)))
    return results


def class_support(cfg, a):
    """Sorted class indices whose union is the support of a, or None"""
    cells = np.asarray(a) != 0
    if cells.shape != cfg.color.shape:
        raise ValueError('matrix dimension does not match the configuration')
    inside = np.bincount(cfg.color[cells], minlength=cfg.rank)
    sizes = cfg.sizes
    if ((inside > 0) & (inside < sizes)).any():
        return None
    return tuple(int(i) for i in np.nonzero(inside)[0])


def membership(cfg, a):
    support = class_support(cfg, a)
    if support is None or not support:
        return Membership(NEITHER)
    if len(support) == 1:
        return Membership(BELONGS, support[0])
    if len(support) == 2:
        i, j = support
        if cfg.transpose[i] == j:
            return Membership(SPLITS, i)
    return Membership(NEITHER)


def project(cfg, m):
    """Orthogonal projection onto the span of the class matrices"""
    m = np.asarray(m, dtype=float)
    flat = cfg.color.ravel()
    sums = np.bincount(flat, weights=m.ravel(), minlength=cfg.rank)
    means = sums / cfg.sizes
    return means[cfg.color]


def class_coefficients(cfg, m):
    """Coefficients x_i of m = sum x_i A_i for m in the span"""
    m = np.asarray(m, dtype=float)
    return np.bincount(cfg.color.ravel(), weights=m.ravel(), minlength=cfg.rank) / cfg.sizes


def summary(cfg):
    return {
        'n': cfg.n,
        'classes': cfg.rank,
        'fibers': list(cfg.fibers),
        'transpose': cfg.transpose.tolist(),
        'sizes': cfg.sizes.tolist(),
        **cfg.flags,
    }
