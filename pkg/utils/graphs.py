"""Graph representation, graph6 codec, named graphs and Laplacians"""

import logging
import math
import re
from dataclasses import dataclass
from itertools import product

import networkx as nx
import numpy as np

import config
from utils.errors import GraphError, ParseError

logger = logging.getLogger(__name__)

GRAPH6_PREFIX = '>>graph6<<'
_SPEC_PATTERN = re.compile(r'^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\(\s*([^)]*)\)\s*)?$')


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected loopless graph on vertices 0..n-1"""

    n: int
    adj: np.ndarray

    def __post_init__(self):
        adj = np.array(self.adj, dtype=np.int64)
        if self.n < 1:
            raise GraphError('adjacency', reason=f'vertex count must be positive, got {self.n}')
        if adj.shape != (self.n, self.n):
            raise GraphError('adjacency', reason=f'shape {adj.shape} does not match n = {self.n}')
        if not np.isin(adj, (0, 1)).all():
            raise GraphError('adjacency', reason='entries must be 0 or 1')
        if not np.array_equal(adj, adj.T):
            raise GraphError('adjacency', reason='matrix is not symmetric')
        if np.trace(adj) != 0:
            raise GraphError('adjacency', reason='loops are not allowed')
        adj.setflags(write=False)
        object.__setattr__(self, 'adj', adj)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.adj, other.adj)

    def __hash__(self):
        return hash((self.n, self.adj.tobytes()))

    @property
    def edges(self):
        """Unordered pairs (u, v) with u < v, sorted"""
        us, vs = np.nonzero(np.triu(self.adj, 1))
        return [(int(u), int(v)) for u, v in zip(us, vs)]

    @property
    def edge_count(self):
        return int(self.adj.sum()) // 2

    @property
    def degrees(self):
        return self.adj.sum(axis=1)

    def to_networkx(self):
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g


def from_adjacency(matrix):
    matrix = np.asarray(matrix)
    return Graph(matrix.shape[0], matrix)


def from_networkx(g):
    nodes = sorted(g.nodes())
    n = len(nodes)
    adj = nx.to_numpy_array(g, nodelist=nodes, dtype=np.int64, weight=None)
    np.fill_diagonal(adj, 0)
    return Graph(n, np.minimum(adj, 1))


def is_regular(g):
    return bool((g.degrees == g.degrees[0]).all())


def complement(g):
    return Graph(g.n, 1 - g.adj - np.eye(g.n, dtype=np.int64))


# ============================================================================
# graph6
# ============================================================================

def _check_graph6(data):
    """Validate bytes and return (n, header length); raises ParseError"""
    if not data:
        raise ParseError('graph6_empty')
    if data[:1] == b':':
        raise ParseError('graph6_format', kind='sparse6', offset=0)
    if data[:1] == b'&':
        raise ParseError('graph6_format', kind='digraph6', offset=0)
    for offset, value in enumerate(data):
        if not 63 <= value <= 126:
            raise ParseError('graph6_byte', value=chr(value), offset=offset)

    if data[0] != 126:
        n, header = data[0] - 63, 1
    elif len(data) >= 4 and data[1] != 126:
        n, header = _sixbits(data[1:4]), 4
    elif len(data) >= 8 and data[1] == 126:
        n, header = _sixbits(data[2:8]), 8
    else:
        raise ParseError('graph6_header', offset=len(data))

    if n > config.GRAPH6_MAX_N:
        raise ParseError('graph6_too_large', n=n, limit=config.GRAPH6_MAX_N, offset=0)
    if n < 1:
        raise ParseError('graph6_header', offset=0)

    expected = math.ceil(n * (n - 1) // 2 / 6)
    got = len(data) - header
    if got < expected:
        raise ParseError('graph6_truncated', offset=len(data), expected=expected, got=got)
    if got > expected:
        raise ParseError('graph6_trailing', offset=header + expected)
    return n, header


def _sixbits(chunk):
    value = 0
    for byte in chunk:
        value = (value << 6) | (byte - 63)
    return value


def parse_graph6(text):
    """Decode one graph6 line (optional >>graph6<< prefix) into a Graph"""
    line = text.strip()
    if line.startswith(GRAPH6_PREFIX):
        line = line[len(GRAPH6_PREFIX):]
    try:
        data = line.encode('ascii')
    except UnicodeEncodeError:
        bad = next(i for i, ch in enumerate(line) if ord(ch) > 127)
        raise ParseError('graph6_byte', value=line[bad], offset=bad)
    n, _ = _check_graph6(data)
    g = from_networkx(nx.from_graph6_bytes(data))
    logger.debug('parsed graph6 with n=%d, %d edges', n, g.edge_count)
    return g


def to_graph6(g):
    """Encode a Graph as a graph6 line without prefix or newline"""
    data = nx.to_graph6_bytes(g.to_networkx(), nodes=list(range(g.n)), header=False)
    return data.decode('ascii').strip()


# ============================================================================
# Named graphs
# ============================================================================

def _cycle(n):
    if n < 3:
        raise GraphError('graph_param', name='cycle', reason='need n >= 3')
    return from_networkx(nx.cycle_graph(n))


def _path(n):
    if n < 1:
        raise GraphError('graph_param', name='path', reason='need n >= 1')
    return from_networkx(nx.path_graph(n))


def _complete(n):
    if n < 1:
        raise GraphError('graph_param', name='complete', reason='need n >= 1')
    return from_networkx(nx.complete_graph(n))


def _empty(n):
    if n < 1:
        raise GraphError('graph_param', name='empty', reason='need n >= 1')
    return Graph(n, np.zeros((n, n), dtype=np.int64))


def _complete_bipartite(a, b):
    if a < 0 or b < 0 or a + b < 1:
        raise GraphError('graph_param', name='complete_bipartite', reason='need a, b >= 0 and a + b >= 1')
    return from_networkx(nx.complete_bipartite_graph(a, b))


def _petersen():
    return from_networkx(nx.petersen_graph())


def _hamming(d, q):
    """Vertices are the words of range(q)^d in lexicographic order"""
    if d < 1 or q < 2:
        raise GraphError('graph_param', name='hamming', reason='need d >= 1 and q >= 2')
    words = np.array(list(product(range(q), repeat=d)), dtype=np.int64)
    distance = (words[:, None, :] != words[None, :, :]).sum(axis=2)
    return Graph(len(words), (distance == 1).astype(np.int64))


def _hypercube(d):
    if d < 1:
        raise GraphError('graph_param', name='hypercube', reason='need d >= 1')
    return _hamming(d, 2)


def _circulant(n, *jumps):
    if n < 2 or not jumps:
        raise GraphError('graph_param', name='circulant', reason='need n >= 2 and at least one jump')
    if any(j % n == 0 for j in jumps):
        raise GraphError('graph_param', name='circulant', reason='jumps must be nonzero modulo n')
    diff = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    steps = {j % n for j in jumps} | {(-j) % n for j in jumps}
    return Graph(n, np.isin(diff, sorted(steps)).astype(np.int64))


def _prime_power(q):
    """Return (p, k) with q = p**k, or None"""
    if q < 2:
        return None
    p = next(f for f in range(2, q + 1) if q % f == 0)
    k, rest = 0, q
    while rest % p == 0:
        rest //= p
        k += 1
    return (p, k) if rest == 1 else None


def _poly_mod(a, b, p):
    """Remainder of a modulo monic b over GF(p); coefficients low degree first"""
    a = list(a)
    while len(a) >= len(b):
        lead = a[-1] % p
        if lead:
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[shift + i] = (a[shift + i] - lead * c) % p
        a.pop()
    return [c % p for c in a]


def _monic_polys(degree, p):
    for index in range(p ** degree):
        coeffs = [(index // p ** i) % p for i in range(degree)]
        yield coeffs + [1]


def _irreducible(k, p):
    """First monic irreducible of degree k in index order of its low coefficients"""
    for f in _monic_polys(k, p):
        if all(any(_poly_mod(f, g, p)) for d in range(1, k // 2 + 1) for g in _monic_polys(d, p)):
            return f
    raise GraphError('graph_param', name='paley', reason=f'no irreducible polynomial of degree {k} over GF({p})')


def _paley(q):
    """Vertices are GF(q) elements a_0 + a_1 t + ... + a_{k-1} t^{k-1}, vertex sum a_i p^i.

    Vertices run in lexicographic order of (a_{k-1}, ..., a_0); t is a root of
    the first monic irreducible from _irreducible, e.g. t^2 = -1 for q = 9.
    """
    pk = _prime_power(q)
    if pk is None or q % 4 != 1:
        raise GraphError('graph_param', name='paley', reason='q must be a prime power with q = 1 (mod 4)')
    p, k = pk
    coeffs = np.array([[(x // p ** i) % p for i in range(k)] for x in range(q)], dtype=np.int64)
    weights = p ** np.arange(k)
    modulus = _irreducible(k, p) if k > 1 else [0, 1]

    squares = set()
    for x in range(1, q):
        a = [int(c) for c in coeffs[x]]
        full = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            for j, aj in enumerate(a):
                full[i + j] = (full[i + j] + ai * aj) % p
        reduced = _poly_mod(full, modulus, p) if k > 1 else [full[0] % p]
        reduced += [0] * (k - len(reduced))
        squares.add(int(np.dot(reduced, weights)))

    diff = (coeffs[:, None, :] - coeffs[None, :, :]) % p
    index = diff @ weights
    return Graph(q, np.isin(index, sorted(squares)).astype(np.int64))


NAMED_GRAPHS = {
    'cycle': _cycle,
    'path': _path,
    'complete': _complete,
    'empty': _empty,
    'complete_bipartite': _complete_bipartite,
    'petersen': _petersen,
    'paley': _paley,
    'hamming': _hamming,
    'hypercube': _hypercube,
    'circulant': _circulant,
}


def named_graph(spec):
    """Build a graph from "name" or "name(p1,p2,...)" """
    match = _SPEC_PATTERN.match(spec)
    if not match or match.group(1).lower() not in NAMED_GRAPHS:
        raise GraphError('graph_spec', spec=spec)
    name = match.group(1).lower()
    raw = match.group(2)
    try:
        params = [int(tok) for tok in raw.split(',')] if raw and raw.strip() else []
    except ValueError:
        raise GraphError('graph_param', name=name, reason=f'non-integer parameters {raw!r}')
    try:
        return NAMED_GRAPHS[name](*params)
    except TypeError:
        raise GraphError('graph_param', name=name, reason=f'wrong number of parameters ({len(params)})')


def is_named_spec(text):
    match = _SPEC_PATTERN.match(text)
    return bool(match) and match.group(1).lower() in NAMED_GRAPHS


# ============================================================================
# Operators
# ============================================================================

def laplacian(g):
    return np.diag(g.degrees).astype(float) - g.adj


def signless_laplacian(g):
    return np.diag(g.degrees).astype(float) + g.adj


def cut_edges(g, s):
    """Edges with exactly one endpoint in s"""
    side = np.zeros(g.n, dtype=bool)
    side[list(s)] = True
    return [(u, v) for u, v in g.edges if side[u] != side[v]]


def distance_matrix(g):
    """All-pairs BFS distances; raises GraphError on disconnected input"""
    dist = np.full((g.n, g.n), -1, dtype=np.int64)
    for u, lengths in nx.all_pairs_shortest_path_length(g.to_networkx()):
        for v, d in lengths.items():
            dist[u, v] = d
    if (dist < 0).any():
        u, v = np.argwhere(dist < 0)[0]
        raise GraphError('disconnected', u=int(u), v=int(v))
    return dist


def is_connected(g):
    return nx.is_connected(g.to_networkx())


def diameter(g):
    return int(distance_matrix(g).max())


def distance_graphs(g):
    """[G_1, ..., G_diam] where G_i joins the vertices at distance exactly i"""
    dist = distance_matrix(g)
    return [Graph(g.n, (dist == i).astype(np.int64)) for i in range(1, int(dist.max()) + 1)]
