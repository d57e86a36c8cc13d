"""Grid scans and bracketed root refinement shared by the surface engines"""

import math
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from app.utils.errors import NumericError

MACHINE_EPS = float(np.finfo(float).eps)


def two_sided_grid(lo: float, hi: float, points: int, eps: float = 1e-12) -> np.ndarray:
    """
    Nodes on [lo, hi], log-uniform in the distance to either end

    Both ends of the K-SAT surface are singular, so resolution is
    concentrated there.
    """
    half = max(points // 2, 2)
    t = np.geomspace(eps, 0.5, half)
    t = np.concatenate([[0.0], t, 1.0 - t[::-1][1:], [1.0]])
    return lo + (hi - lo) * t


def merge_nodes(nodes: np.ndarray, extra: Iterable[float]) -> np.ndarray:
    """Insert breakpoints into a sorted node array"""
    extra = [e for e in extra if nodes[0] < e < nodes[-1]]
    if not extra:
        return nodes
    return np.unique(np.concatenate([nodes, np.asarray(extra, dtype=float)]))


def expand_bracket(
    func: Callable[[float], float],
    start: float,
    lo: float,
    hi: float,
    width: float,
    growth: float = 4.0,
    max_expand: int = 60,
) -> Optional[Tuple[float, float]]:
    """
    Widen [start, start] inside [lo, hi] until func goes from negative to positive

    Only the end that has not yet changed sign moves. Returns None when
    the bracket hits a domain end first or a value is not finite.
    """
    a = b = start
    fa = fb = func(start)
    for _ in range(max_expand):
        if not (math.isfinite(fa) and math.isfinite(fb)):
            return None
        if fa < 0.0 < fb:
            return a, b
        if fa >= 0.0:
            if a <= lo:
                return None
            a = max(lo, a - width)
            fa = func(a)
        else:
            if b >= hi:
                return None
            b = min(hi, b + width)
            fb = func(b)
        width *= growth
    return None


def refine_root(func: Callable[[float], float], a: float, b: float, maxiter: int = 500) -> float:
    """Brent refinement of a bracketed root to machine precision"""
    return float(brentq(func, a, b, xtol=1e-300, rtol=4 * MACHINE_EPS, maxiter=maxiter))


def sign_change_roots(
    func: Callable[[float], float],
    nodes: Sequence[float],
    values: Sequence[float],
    xtol: float = 1e-300,
    maxiter: int = 500,
) -> List[float]:
    """
    Refine every sign change of func between consecutive nodes with Brent's method

    Args:
        func: Scalar function
        nodes: Sorted abscissae
        values: func evaluated at nodes (non-finite entries are skipped)
        xtol: Absolute tolerance handed to brentq

    Returns:
        Sorted list of roots
    """
    roots: List[float] = []
    for a, b, fa, fb in zip(nodes[:-1], nodes[1:], values[:-1], values[1:]):
        if not (np.isfinite(fa) and np.isfinite(fb)):
            continue
        if fa == 0.0:
            roots.append(float(a))
            continue
        if fa * fb < 0.0:
            try:
                root = brentq(func, a, b, xtol=xtol, rtol=4 * MACHINE_EPS, maxiter=maxiter)
            except (RuntimeError, ValueError) as exc:
                raise NumericError(
                    "bracketed refinement did not converge",
                    bracket=[float(a), float(b)],
                    values=[float(fa), float(fb)],
                    reason=str(exc),
                )
            roots.append(float(root))
    if len(values) and values[-1] == 0.0:
        roots.append(float(nodes[-1]))
    return roots
