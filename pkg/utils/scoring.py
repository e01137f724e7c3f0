"""Classification and rounding helpers for report values"""

import math

import numpy as np

import config


def classify_gap(product, target, rel_tol=config.GAUGE_REL_TOL):
    """Return (status, gap) for a gauge product against its edge-count target"""
    gap = float(product - target)
    if abs(gap) <= rel_tol * max(abs(target), 1.0):
        return config.STATUS_LABELS['equality'], gap
    if gap > 0:
        return config.STATUS_LABELS['strict'], gap
    return config.STATUS_LABELS['violated'], gap


def safe_ratio(num, den):
    if num is None or den is None or den == 0 or not math.isfinite(den):
        return None
    return num / den


def fcc_sandwich(fcc, eta_dual):
    """fcc / eta-dual lies in [1, 1/alpha_GW] for scheme graphs"""
    ratio = safe_ratio(fcc, eta_dual)
    if ratio is None:
        return {'ratio': None, 'within': None}
    within = 1.0 - 1e-6 <= ratio <= 1.0 / config.ALPHA_GW + 1e-6
    return {'ratio': ratio, 'within': bool(within)}


def qp_sandwich(qp, gamma):
    """alpha_GW <= qp / gamma <= 1"""
    ratio = safe_ratio(qp, gamma)
    if ratio is None:
        return {'ratio': None, 'within': None}
    within = config.ALPHA_GW - 1e-9 <= ratio <= 1.0 + 1e-9
    return {'ratio': ratio, 'within': bool(within)}


def round_sig(value, digits=config.SIGNIFICANT_DIGITS):
    """Round floats to significant digits; recurse through containers"""
    if isinstance(value, dict):
        return {k: round_sig(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_sig(v, digits) for v in value]
    if isinstance(value, np.ndarray):
        return round_sig(value.tolist(), digits)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return None
        rounded = float(f'{value:.{digits}g}')
        return 0.0 if rounded == 0 else rounded
    return value


def tagged(value, tol):
    """Numeric report field with the tolerance it was checked at"""
    return {'value': value, 'tolerance': tol}
