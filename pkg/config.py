"""Configuration settings for Scheme Gauge"""

import os

# ============================================================================
# Runtime
# ============================================================================

# Worker count for batch mode (graphs are evaluated independently)
THREADS = max(1, int(os.getenv('SCHEME_GAUGE_THREADS', '1')))

# Root log level; --verbose on the command line lowers it to DEBUG
LOG_LEVEL = os.getenv('SCHEME_GAUGE_LOG_LEVEL', 'WARNING').upper()
LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

# ============================================================================
# Numerical Tolerances
# ============================================================================

PSD_TOL = 1e-8
EIG_GROUP_TOL = 1e-7          # scaled by (1 + max |entry|)
SYMMETRY_TOL = 1e-9
JACOBI_TOL = 1e-12            # off-diagonal Frobenius norm relative to ||m||_F
JACOBI_MAX_SWEEPS = 100

LP_FEAS_TOL = float(os.getenv('SCHEME_GAUGE_LP_FEAS_TOL', '1e-8'))
LP_OPT_TOL = float(os.getenv('SCHEME_GAUGE_LP_OPT_TOL', '1e-9'))
LP_PIVOT_TOL = 1e-11
LP_MAX_PIVOTS = 200000

CLOSED_FORM_TOL = 1e-7        # closed form vs. LP, relative to (1 + |value|)
GAUGE_REL_TOL = 1e-6          # equality classification, relative to edge count
CERTIFICATE_TOL = 1e-7
PROJECTION_TOL = 1e-8
UNIT_VECTOR_TOL = 1e-6

# ============================================================================
# Constants
# ============================================================================

# min over theta of (2/pi) * theta / (1 - cos theta)
ALPHA_GW = 0.87856

# ============================================================================
# Size Gates
# ============================================================================

GRAPH6_MAX_N = 10000
MAXCUT_MAX_N = 26
QP_MAX_N = 26
FCC_MAX_N = 16
CLOSURE_MAX_N = 200          # refinement holds an n x n x n signature
MAX2SAT_MAX_VARS = 26

# Low vertices handled as one vectorized block during enumeration
ENUM_BLOCK_BITS = 12
SAT_BLOCK_BITS = 16

# ============================================================================
# Rounding
# ============================================================================

DEFAULT_ROUNDING_TRIALS = 2000
DEFAULT_SEED = 0

# ============================================================================
# Output
# ============================================================================

REPORT_SCHEMA_VERSION = '1.0'
SIGNIFICANT_DIGITS = 12

# Batch row field order (CSV header and JSONL key order)
CSV_FIELDS = [
    'line', 'n', 'edges', 'status', 'scheme', 'drg', 'diameter',
    'eta', 'eta_dual', 'eta_product', 'eta_class',
    'gamma', 'gamma_dual', 'gamma_product', 'gamma_target', 'gamma_class', 'gamma_gap',
    'error',
]

# Status labels used in reports
STATUS_LABELS = {
    'equality': 'equality',
    'strict': 'strict',
    'violated': 'violated',
}

# ============================================================================
# Feature Flags
# ============================================================================

FEATURES = {
    'markdown_export': True,    # analyze/gamma/max2sat --format markdown
    'timing': True,             # --timing adds wall-clock sections
    'lp_cross_check': True,     # solve the LP next to every closed form
}

# ============================================================================
# Error Handling
# ============================================================================

ERROR_MESSAGES = {
    'graph6_empty': 'graph6: empty input',
    'graph6_format': 'graph6: {kind} is not supported (byte offset 0)',
    'graph6_byte': 'graph6: invalid byte {value!r} at byte offset {offset}',
    'graph6_header': 'graph6: malformed header at byte offset {offset}',
    'graph6_truncated': 'graph6: truncated bit stream at byte offset {offset} (expected {expected} body bytes, got {got})',
    'graph6_trailing': 'graph6: unexpected trailing bytes at byte offset {offset}',
    'graph6_too_large': 'graph6: n = {n} exceeds the limit of {limit} vertices',
    'graph_spec': 'Unknown graph specification: {spec!r}',
    'graph_param': 'Invalid parameters for {name}: {reason}',
    'adjacency': 'Invalid adjacency matrix: {reason}',
    'disconnected': 'Graph is disconnected (no path between vertices {u} and {v})',
    'not_regular': 'Graph is not regular: vertices {u} and {v} have degrees {deg_u} and {deg_v}',
    'not_drg': 'Graph is not distance regular (vertex pair ({u}, {v}) at distance {dist} violates {param})',
    'diameter': 'Graph has diameter {diameter}; a distance-2 graph needs diameter at least 2',
    'vertex_mismatch': 'Graphs have different vertex counts ({n1} and {n2})',
    'not_symmetric': 'Matrix is not symmetric (asymmetry {asym:.3g} exceeds {tol:.3g})',
    'not_square': 'Expected a square matrix, got shape {shape}',
    'not_psd': 'Matrix is not PSD (smallest eigenvalue {value:.6g} below -{tol:.3g})',
    'jacobi_sweeps': 'Jacobi iteration did not converge in {sweeps} sweeps',
    'lp_dimension': 'Linear program dimension mismatch: {reason}',
    'lp_pivots': 'Simplex exceeded {limit} pivots',
    'not_coherent': 'Coloring is not coherent: {reason}',
    'closure_cap': 'Refinement did not stabilise within {cap} rounds',
    'closure_size': 'Coherent closure limited to n <= {limit} (got {n})',
    'scheme_flags': 'Configuration is not an association scheme (failed: {flags})',
    'scheme_eigen': 'Could not resolve common eigenspaces of the intersection matrices',
    'class_index': 'Invalid class index {index} for a scheme with {classes} classes',
    'class_not_symmetric': 'Class {index} is not symmetric',
    'not_in_span': 'Matrix is not in the span of the scheme (projection residue {residue:.3g})',
    'oracle_size': '{oracle} oracle limited to n <= {limit} (got {n}); use --force to override',
    'dimacs_header': 'DIMACS line {line}: {reason}',
    'dimacs_clause': 'DIMACS line {line}: clause exceeds 2 literals',
    'dimacs_range': 'DIMACS line {line}: variable {var} out of range 1..{n}',
    'dimacs_empty': 'DIMACS line {line}: empty clause',
    'dimacs_token': 'DIMACS line {line}: invalid token {token!r}',
    'dimacs_count': 'DIMACS: header declares {declared} clauses, found {found}',
    'clause_width': 'Clause {clause} exceeds 2 literals',
    'unit_vectors': 'Rounding needs unit vectors (vector {index} has norm {norm:.9g})',
    'trials': 'Rounding needs at least one trial (got {trials})',
    'second_graph': 'Unknown second graph {spec!r}; expected complement, dist2 or a graph6 string',
    'io_error': 'Cannot read {path}: {reason}',
}
