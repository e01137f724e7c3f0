"""Association schemes: eigenmatrices, idempotents, distance-regular graphs"""

import logging
from dataclasses import dataclass, field

import numpy as np

import config
from analyzers.coherent import coherent_closure, configuration_from_colors, project
from utils.errors import GraphError, SchemeError
from utils.graphs import distance_matrix, is_regular
from utils.linalg import distinct_eigenvalues, eig_sym, inner

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntersectionArray:
    b: tuple    # b_0 .. b_{d-1}
    c: tuple    # c_1 .. c_d

    @property
    def diameter(self):
        return len(self.c)

    def __str__(self):
        return '{%s; %s}' % (','.join(map(str, self.b)), ','.join(map(str, self.c)))


@dataclass(frozen=True, eq=False)
class AssociationScheme:
    """Symmetric scheme; P[l, i] is the eigenvalue of A_i on the l-th eigenspace"""

    configuration: object
    P: np.ndarray
    Q: np.ndarray
    intersection_array: IntersectionArray = None

    @property
    def n(self):
        return self.configuration.n

    @property
    def d(self):
        return self.configuration.rank - 1

    @property
    def color(self):
        return self.configuration.color

    @property
    def p(self):
        return self.configuration.p

    @property
    def k(self):
        """Degrees k_i = p_ii^0"""
        p = self.configuration.p
        return np.array([p[i, i, 0] for i in range(self.d + 1)], dtype=np.int64)

    @property
    def m(self):
        """Multiplicities, the first row of Q"""
        return self.Q[0].copy()

    def class_matrix(self, i):
        return self.configuration.class_matrix(i)

    def idempotent(self, l):
        return self.Q[:, l][self.color] / self.n


def intersection_matrices(p):
    """B_i with (B_i)_{lj} = p_ij^l"""
    return [p[i].T.astype(float) for i in range(p.shape[0])]


def _common_eigenbasis(symmetrized, tol):
    """Orthonormal columns diagonalizing every matrix in the list"""
    size = symmetrized[0].shape[0]

    def split(basis, index):
        if basis.shape[1] == 1 or index == len(symmetrized):
            return [basis]
        restricted = basis.T @ symmetrized[index] @ basis
        dec = eig_sym((restricted + restricted.T) / 2.0)
        pieces, start = [], 0
        values = dec.values
        for i in range(1, len(values) + 1):
            if i == len(values) or values[i] - values[i - 1] > tol:
                pieces.extend(split(basis @ dec.vectors[:, start:i], index + 1))
                start = i
        return pieces

    return split(np.eye(size), 1 if len(symmetrized) > 1 else 0)


def eigenmatrices_from_intersections(p):
    """(P, Q) with canonically ordered rows, from the intersection numbers"""
    rank = p.shape[0]
    k = np.array([p[i, i, 0] for i in range(rank)], dtype=float)
    if rank == 1:
        return np.ones((1, 1)), np.ones((1, 1))
    root = np.sqrt(k)
    bs = intersection_matrices(p)
    symmetrized = [(root[:, None] * b) / root[None, :] for b in bs]
    tol = config.EIG_GROUP_TOL * (1.0 + max(np.abs(b).max() for b in bs))

    pieces = _common_eigenbasis(symmetrized, tol)
    if len(pieces) != rank or any(piece.shape[1] != 1 for piece in pieces):
        raise SchemeError('scheme_eigen')
    rows = []
    for piece in pieces:
        u = piece[:, 0]
        row = u * root
        rows.append(row / row[0])
    P = np.array(rows)
    P = _canonical_order(P, k)
    n = k.sum()
    m = n / np.sum(P ** 2 / k[None, :], axis=1)
    Q = (P * m[:, None]).T / k[:, None]
    return P, Q


def _canonical_order(P, k):
    """Row 0 trivial; then strictly decreasing P_l1, ties by decreasing full row"""
    trivial = int(np.argmin(np.abs(P - k[None, :]).sum(axis=1)))
    rest = [l for l in range(P.shape[0]) if l != trivial]
    rest.sort(key=lambda l: tuple(-np.round(P[l, 1:], 9)))
    P = P[[trivial] + rest].copy()
    P[0] = k
    return P


def scheme_from_configuration(cfg, intersection_array=None):
    failed = [name for name, ok in cfg.flags.items() if not ok]
    if failed:
        raise SchemeError('scheme_flags', flags=', '.join(failed))
    P, Q = eigenmatrices_from_intersections(cfg.p)
    return AssociationScheme(configuration=cfg, P=P, Q=Q, intersection_array=intersection_array)


def intersection_array(g, dist=None):
    """b_i, c_i by counting neighbours; raises naming the first violating pair"""
    dist = distance_matrix(g) if dist is None else dist
    diam = int(dist.max())
    adj = g.adj
    counts = [((dist == j).astype(np.int64) @ adj) for j in range(diam + 2)]
    counts.insert(0, np.zeros_like(adj))          # distance -1
    b, c = [], []
    for i in range(diam + 1):
        pairs = np.argwhere(dist == i)
        c_vals = counts[i][pairs[:, 0], pairs[:, 1]]           # neighbours of v at distance i-1 from u
        b_vals = counts[i + 2][pairs[:, 0], pairs[:, 1]]       # neighbours of v at distance i+1 from u
        for name, values in (('c', c_vals), ('b', b_vals)):
            bad = np.nonzero(values != values[0])[0]
            if bad.size:
                u, v = pairs[bad[0]]
                raise GraphError('not_drg', u=int(u), v=int(v), dist=i, param=f'{name}_{i}')
        if i < diam:
            b.append(int(b_vals[0]))
        if i > 0:
            c.append(int(c_vals[0]))
    return IntersectionArray(b=tuple(b), c=tuple(c))


def scheme_from_drg(g):
    """Distance scheme of a distance-regular graph, with its intersection array"""
    dist = distance_matrix(g)
    if not is_regular(g):
        deg = g.degrees
        v = int(np.nonzero(deg != deg[0])[0][0])
        raise GraphError('not_regular', u=0, v=v, deg_u=int(deg[0]), deg_v=int(deg[v]))
    ia = intersection_array(g, dist)
    cfg = configuration_from_colors(dist)
    scheme = scheme_from_configuration(cfg, intersection_array=ia)
    logger.info('distance-regular graph with intersection array %s', ia)
    return scheme


def scheme_for_graph(g):
    """DRG construction when it applies, otherwise the coherent closure"""
    try:
        return scheme_from_drg(g)
    except GraphError:
        return scheme_from_configuration(coherent_closure([g.adj]))


def eigenmatrices(scheme):
    return scheme.P, scheme.Q, scheme.m


def idempotents(scheme):
    return [scheme.idempotent(l) for l in range(scheme.d + 1)]


def check_orthogonality(scheme):
    """Largest deviation over PQ = nI and both orthogonality relations"""
    P, Q, k, m, n = scheme.P, scheme.Q, scheme.k, scheme.m, scheme.n
    first = P @ np.diag(1.0 / k) @ P.T - np.diag(n / m)
    second = P.T @ np.diag(m) @ P - np.diag(n * k)
    product = P @ Q - n * np.eye(scheme.d + 1)
    return float(max(np.abs(first).max(), np.abs(second).max(), np.abs(product).max()))


def check_reconstruction(scheme):
    """max over i of |sum_l P_li E_l - A_i|"""
    es = idempotents(scheme)
    worst = 0.0
    for i in range(scheme.d + 1):
        rebuilt = sum(scheme.P[l, i] * es[l] for l in range(scheme.d + 1))
        worst = max(worst, float(np.abs(rebuilt - scheme.class_matrix(i)).max()))
    return worst


def drg_eigenvalue_relation(ia, P):
    """Residuals of P_l2 = (k_2 / (b_1 k_1)) (P_l1^2 - (k_1 - b_1 - 1) P_l1 - k_1)"""
    if ia.diameter < 2:
        raise SchemeError('class_index', index=2, classes=ia.diameter + 1)
    k1, b1 = P[0, 1], ia.b[1]
    k2 = P[0, 2]
    predicted = (k2 / (b1 * k1)) * (P[:, 1] ** 2 - (k1 - b1 - 1) * P[:, 1] - k1)
    residuals = np.abs(P[:, 2] - predicted)
    return {
        'residuals': residuals.tolist(),
        'max_residual': float(residuals.max()),
        'passed': bool(residuals.max() <= config.CLOSED_FORM_TOL),
    }


def summary(scheme):
    doc = {
        'n': scheme.n,
        'd': scheme.d,
        'color': scheme.color.tolist(),
        'k': scheme.k.tolist(),
        'm': scheme.m.tolist(),
        'P': scheme.P.tolist(),
        'Q': scheme.Q.tolist(),
    }
    if scheme.intersection_array is not None:
        doc['intersection_array'] = {'b': list(scheme.intersection_array.b),
                                     'c': list(scheme.intersection_array.c)}
    return doc


# ============================================================================
# Walk regularity
# ============================================================================

@dataclass
class WalkRegularityReport:
    is_walk_regular: bool
    is_1_walk_regular: bool
    a: list = field(default_factory=list)
    b: list = field(default_factory=list)
    degree: int = 0                 # degree of the minimal polynomial
    basis: list = field(default_factory=list)

    def to_dict(self):
        return {
            'walk_regular': self.is_walk_regular,
            'one_walk_regular': self.is_1_walk_regular,
            'a': self.a,
            'b': self.b,
            'minimal_polynomial_degree': self.degree,
            'basis_size': len(self.basis),
        }


def _matrix_powers(adj, count):
    k = int(adj.sum(axis=1).max()) if adj.size else 0
    exact = k <= 1 or (count - 1) * np.log2(max(k, 2)) + np.log2(max(adj.shape[0], 2)) < 62
    base = adj.astype(np.int64) if exact else adj.astype(object)
    powers = [np.eye(adj.shape[0], dtype=np.int64).astype(base.dtype)]
    for _ in range(1, count):
        powers.append(powers[-1] @ base)
    return powers


def walk_regularity(g):
    """Constancy of A^l on the diagonal and on the edges, l below the minimal polynomial degree"""
    adj = g.adj
    degree = len(distinct_eigenvalues(eig_sym(adj).values))
    powers = _matrix_powers(adj, degree)
    edges = adj.astype(bool)
    diag = np.eye(g.n, dtype=bool)

    walk, one_walk, a_consts, b_consts = True, True, [], []
    for power in powers:
        d_vals = power[diag]
        a_consts.append(int(d_vals[0]))
        walk &= bool((d_vals == d_vals[0]).all())
        e_vals = power[edges]
        if e_vals.size:
            b_consts.append(int(e_vals[0]))
            one_walk &= bool((e_vals == e_vals[0]).all())
        else:
            b_consts.append(0)
    one_walk &= walk

    report = WalkRegularityReport(walk, one_walk, a_consts, b_consts, degree)
    if one_walk:
        report.basis = _adjacency_basis(adj, powers, a_consts, b_consts)
    return report


def _adjacency_basis(adj, powers, a_consts, b_consts):
    """Orthogonal basis {I, A, A_2, ...} with A_l zero on the diagonal and on the edges"""
    n = adj.shape[0]
    identity = np.eye(n)
    basis = [identity] + ([adj.astype(float)] if adj.any() else [])
    for l in range(2, len(powers)):
        candidate = powers[l].astype(float) - a_consts[l] * identity - b_consts[l] * adj
        for vec in basis[2:]:
            candidate = candidate - inner(candidate, vec) / inner(vec, vec) * vec
        if np.abs(candidate).max() > 1e-9 * (1.0 + np.abs(powers[l].astype(float)).max()):
            basis.append(candidate)
    return basis


def project_adjacency_algebra(report, m):
    """Orthogonal projection onto the adjacency algebra of a 1-walk-regular graph"""
    m = np.asarray(m, dtype=float)
    return sum(inner(m, vec) / inner(vec, vec) * vec for vec in report.basis)


def project_scheme(scheme, m):
    return project(scheme.configuration, m)
