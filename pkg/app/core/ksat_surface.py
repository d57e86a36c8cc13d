"""
K-SAT frozen-literal surface

z(k, x, u) = 2(1 - u^k) / (k u^(k-1)) * ln((1 - u - x/2) / (1 - 2u))

gives the clause density z at which a fraction u of the 2N literals is
frozen when the first i = xN variables are fixed to true. This module
evaluates and inverts that surface and locates its folds, its cusp and
the spinodal alpha_d.
"""

import math
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.config import Config
from app.utils.errors import CuspNotFoundError, DivergenceError, NumericError, SurfaceDomainError
from app.utils.logger import setup_logger
from app.utils.root_finding import (
    MACHINE_EPS,
    expand_bracket,
    merge_nodes,
    refine_root,
    sign_change_roots,
    two_sided_grid,
)

logger = setup_logger(__name__)

# ulps of u a converged root may sit from the exact one on a steep branch
ROUNDING_ULPS = 8.0
TRACK_SAMPLES = 33


class Branch(str, Enum):
    UNIQUE = "unique"
    LOWER = "lower"
    MIDDLE = "middle"
    UPPER = "upper"


class SurfaceQuery(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int = Field(ge=2)
    x: float = Field(ge=0.0, lt=1.0)
    z: float = Field(ge=0.0)


class SurfacePoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    query: SurfaceQuery
    u: float = Field(ge=0.0, lt=0.5)
    branch: Branch

    @model_validator(mode="after")
    def _check_logs(self):
        if 1.0 - self.u - self.query.x / 2.0 <= 0.0:
            raise ValueError("1 - u - x/2 must be positive")
        return self


class SurfaceSolution(BaseModel):
    """All roots at a query, plus the flagged u = 0 continuation at x = 0"""

    model_config = ConfigDict(frozen=True)

    query: SurfaceQuery
    points: List[SurfacePoint]
    trivial_continuation: bool


class FoldPoints(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int
    x: float
    u_values: Tuple[float, ...]
    z_values: Tuple[float, ...]


class CuspPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int
    x0: float
    z0: float
    u0: float
    residual_u: float
    residual_uu: float


# ---------------------------------------------------------------------------
# Closed form and analytic derivatives
# ---------------------------------------------------------------------------

def _check_domain(k: int, x: float, u: float) -> None:
    if not isinstance(k, (int, np.integer)) or k < 2:
        raise SurfaceDomainError(f"clause width k={k} must be an integer >= 2", bound="k >= 2", k=k)
    if not 0.0 <= x < 1.0:
        raise SurfaceDomainError(f"x={x} outside [0, 1)", bound="0 <= x < 1", k=k, x=x)
    if not 0.0 < u < 0.5:
        raise SurfaceDomainError(f"u={u} outside (0, 1/2)", bound="0 < u < 1/2", k=k, x=x, u=u)
    if 1.0 - u - x / 2.0 <= 0.0:
        raise SurfaceDomainError(
            f"log argument non-positive at x={x}, u={u}", bound="1 - u - x/2 > 0", k=k, x=x, u=u
        )


def _terms(k: int, x: float, u):
    """Prefactor A(u) and log term L(u) with their first three u-derivatives"""
    p = 1.0 - u - x / 2.0
    q = 1.0 - 2.0 * u
    a0 = (2.0 / k) * (u ** (1 - k) - u)
    a1 = (2.0 / k) * ((1 - k) * u ** (-k) - 1.0)
    a2 = 2.0 * (k - 1) * u ** (-k - 1)
    a3 = -2.0 * (k - 1) * (k + 1) * u ** (-k - 2)
    l0 = np.log1p((u - x / 2.0) / q)
    l1 = -1.0 / p + 2.0 / q
    l2 = -1.0 / p ** 2 + 4.0 / q ** 2
    l3 = -2.0 / p ** 3 + 16.0 / q ** 3
    return (a0, a1, a2, a3), (l0, l1, l2, l3)


def _z(k, x, u):
    return (2.0 / k) * (u ** (1 - k) - u) * np.log1p((u - x / 2.0) / (1.0 - 2.0 * u))


def _z_u(k, x, u):
    (a0, a1, _, _), (l0, l1, _, _) = _terms(k, x, u)
    return a1 * l0 + a0 * l1


def _z_uu(k, x, u):
    (a0, a1, a2, _), (l0, l1, l2, _) = _terms(k, x, u)
    return a2 * l0 + 2.0 * a1 * l1 + a0 * l2


def eval_z(k: int, x: float, u: float) -> float:
    """
    Clause density on the K-SAT surface

    Args:
        k: Clause width
        x: Frozen-prefix density i/N
        u: Frozen-literal density

    Returns:
        z at (k, x, u)
    """
    _check_domain(k, x, u)
    return float(_z(k, x, u))


def eval_z_derivatives(k: int, x: float, u: float) -> Tuple[float, float, float, float]:
    """z and its first three u-derivatives at (k, x, u)"""
    _check_domain(k, x, u)
    (a0, a1, a2, a3), (l0, l1, l2, l3) = _terms(k, x, u)
    return (
        float(a0 * l0),
        float(a1 * l0 + a0 * l1),
        float(a2 * l0 + 2.0 * a1 * l1 + a0 * l2),
        float(a3 * l0 + 3.0 * a2 * l1 + 3.0 * a1 * l2 + a0 * l3),
    )


# ---------------------------------------------------------------------------
# Root and fold search
# ---------------------------------------------------------------------------

def _search_interval(x: float) -> Tuple[float, float]:
    eps = Config.ROOT_DOMAIN_EPS
    return max(eps, x / 2.0), 0.5 - eps


def _grid(x: float) -> np.ndarray:
    lo, hi = _search_interval(x)
    return two_sided_grid(lo, hi, Config.ROOT_GRID_POINTS, Config.ROOT_DOMAIN_EPS)


def _stationary_points(k: int, x: float) -> List[float]:
    """Zeros of dz/du, bracketed piecewise between the zeros of d2z/du2"""
    nodes = _grid(x)
    with np.errstate(all="ignore"):
        zuu = _z_uu(k, x, nodes)
    inflections = sign_change_roots(lambda u: float(_z_uu(k, x, u)), nodes, zuu)
    nodes = merge_nodes(nodes, inflections)
    with np.errstate(all="ignore"):
        zu = _z_u(k, x, nodes)
    return sign_change_roots(lambda u: float(_z_u(k, x, u)), nodes, zu)


def _residual_bound(k: int, x: float, z: float, u: float, tol: float) -> float:
    """
    Largest accepted |z(u) - z| at a refined root

    Next to u = x/2 the surface is so steep for large k that one ulp of u
    moves z by more than tol; there the bound is the rounding floor
    |dz/du| * u * eps instead.
    """
    with np.errstate(all="ignore"):
        steepness = abs(float(_z_u(k, x, u)))
    floor = ROUNDING_ULPS * MACHINE_EPS * u * steepness if math.isfinite(steepness) else 0.0
    return max(tol * max(1.0, z), floor)


def solve_surface(k: int, x: float, z: float, tol: Optional[float] = None) -> SurfaceSolution:
    """
    Solve z(k, x, u) = z for every u in (0, 1/2)

    Stationary points of z(u) are inserted into the scan grid, so each
    cell is monotone and holds at most one root.

    Returns:
        SurfaceSolution with the labelled roots and the trivial-continuation flag
    """
    tol = Config.ROOT_TOL if tol is None else tol
    if tol <= 0:
        raise SurfaceDomainError(f"tol={tol} must be positive", bound="tol > 0")
    try:
        query = SurfaceQuery(k=k, x=x, z=z)
    except ValueError as exc:
        raise SurfaceDomainError(str(exc), bound="valid SurfaceQuery", k=k, x=x, z=z)

    trivial = x == 0.0
    if z == 0.0:
        points = [] if trivial else [SurfacePoint(query=query, u=x / 2.0, branch=Branch.UNIQUE)]
        return SurfaceSolution(query=query, points=points, trivial_continuation=trivial)

    nodes = merge_nodes(_grid(x), _stationary_points(k, x))
    with np.errstate(all="ignore"):
        values = _z(k, x, nodes) - z
    roots = sign_change_roots(lambda u: float(_z(k, x, u)) - z, nodes, values)

    for u in roots:
        residual = abs(float(_z(k, x, u)) - z)
        bound = _residual_bound(k, x, z, u, tol)
        if residual > bound:
            raise NumericError(
                "root refinement missed the residual bound",
                k=k, x=x, z=z, u=u, residual=residual, bound=bound, scan_points=len(nodes),
            )

    labels = {
        0: [],
        1: [Branch.UNIQUE],
        2: [Branch.LOWER, Branch.UPPER],
        3: [Branch.LOWER, Branch.MIDDLE, Branch.UPPER],
    }.get(len(roots))
    if labels is None:
        labels = [Branch.LOWER] + [Branch.MIDDLE] * (len(roots) - 2) + [Branch.UPPER]

    points = [SurfacePoint(query=query, u=u, branch=b) for u, b in zip(roots, labels)]
    logger.debug(f"solve_u k={k} x={x} z={z}: {len(points)} roots")
    return SurfaceSolution(query=query, points=points, trivial_continuation=trivial)


def solve_u(k: int, x: float, z: float, tol: Optional[float] = None) -> List[SurfacePoint]:
    """All roots u of z(k, x, u) = z, labelled by ordering"""
    return solve_surface(k, x, z, tol).points


def track_root(k: int, x: float, z: float, u_prev: float, rising: bool,
               tol: Optional[float] = None) -> Optional[float]:
    """
    Continue one monotone branch of z(u; x) = z from a nearby root

    Args:
        k: Clause width
        x, z: The new query point
        u_prev: Root of the same branch at a neighbouring query
        rising: Sign of dz/du on the branch

    Returns:
        The root, or None when the bracket around u_prev leaves the branch
        (a fold was crossed) or the root misses the residual bound; callers
        then fall back to solve_surface.
    """
    tol = Config.ROOT_TOL if tol is None else tol
    lo, hi = _search_interval(x)
    sign = 1.0 if rising else -1.0

    def signed_gap(u: float) -> float:
        with np.errstate(all="ignore"):
            return sign * (float(_z(k, x, u)) - z)

    def on_branch(u: float) -> bool:
        with np.errstate(all="ignore"):
            return sign * float(_z_u(k, x, u)) > 0.0

    start = min(max(u_prev, lo), hi)
    bracket = expand_bracket(signed_gap, start, lo, hi, width=max(1e-4 * start, 1e-12))
    if bracket is None or not (on_branch(bracket[0]) and on_branch(bracket[1])):
        return None
    u = refine_root(signed_gap, *bracket)
    if not on_branch(u) or abs(signed_gap(u)) > _residual_bound(k, x, z, u, tol):
        return None
    # the bracket may have jumped a whole fold; the path back to u_prev must stay monotone
    path = np.linspace(min(start, u), max(start, u), TRACK_SAMPLES)
    with np.errstate(all="ignore"):
        if np.any(sign * _z_u(k, x, path) <= 0.0):
            return None
    return u


def surface_grid(k: int, xs, zs, tol: Optional[float] = None) -> List[SurfacePoint]:
    """Every root over the (x, z) grid, row-major in x"""
    points: List[SurfacePoint] = []
    for x in xs:
        for z in zs:
            points.extend(solve_u(k, float(x), float(z), tol))
    return points


def find_fold(k: int, x: float) -> Optional[FoldPoints]:
    """
    Stationary points of z(u; x): the edges of the upper and lower sheets

    Returns:
        FoldPoints sorted by u, or None where z(u; x) is monotone
    """
    if k < 2 or not 0.0 <= x < 1.0:
        raise SurfaceDomainError(f"invalid fold query k={k}, x={x}", bound="k >= 2, 0 <= x < 1")
    stationary = _stationary_points(k, x)
    if not stationary:
        return None
    return FoldPoints(
        k=k,
        x=x,
        u_values=tuple(stationary),
        z_values=tuple(float(_z(k, x, u)) for u in stationary),
    )


def alpha_d(k: int) -> float:
    """Spinodal: the minimum of z(u) at x = 0"""
    if k < 3:
        raise SurfaceDomainError(f"alpha_d needs k >= 3, got {k}", bound="k >= 3", k=k)
    fold = find_fold(k, 0.0)
    if fold is None:
        raise NumericError("no stationary point of z(u) at x = 0", k=k)
    return min(fold.z_values)


# ---------------------------------------------------------------------------
# Cusp
# ---------------------------------------------------------------------------

def _cusp_residual(k: int, u: float, x: float) -> np.ndarray:
    return np.array([_z_u(k, x, u), _z_uu(k, x, u)], dtype=float)


def _polish_cusp(k: int, u: float, x: float, max_iter: int = 50) -> Tuple[float, float]:
    """Damped Newton on (z_u, z_uu)(u, x) with a central-difference Jacobian"""
    r = _cusp_residual(k, u, x)
    for _ in range(max_iter):
        norm = float(np.max(np.abs(r)))
        if norm < 1e-14:
            break
        hu = 1e-6 * max(u, 1e-3)
        hx = 1e-6
        jac = np.column_stack([
            (_cusp_residual(k, u + hu, x) - _cusp_residual(k, u - hu, x)) / (2 * hu),
            (_cusp_residual(k, u, x + hx) - _cusp_residual(k, u, x - hx)) / (2 * hx),
        ])
        try:
            du, dx = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError:
            break
        damping = 1.0
        for _ in range(30):
            u_new, x_new = u + damping * du, x + damping * dx
            if 0.0 < u_new < 0.5 and 0.0 <= x_new < 1.0:
                r_new = _cusp_residual(k, u_new, x_new)
                if np.max(np.abs(r_new)) < norm:
                    u, x, r = u_new, x_new, r_new
                    break
            damping /= 2.0
        else:
            break
    return u, x


def find_cusp(k: int, scan_points: int = 200) -> CuspPoint:
    """
    Locate the cusp where the two folds of z(u; x) merge

    The largest x carrying two stationary points is bracketed on a coarse
    scan and bisected; the merge point then seeds a damped Newton solve of
    z_u = z_uu = 0.
    """
    if k < 3:
        raise SurfaceDomainError(f"cusp needs k >= 3, got {k}", bound="k >= 3", k=k)

    xs = np.linspace(0.0, 0.98, scan_points)[1:]
    counts = [len(_stationary_points(k, float(x))) for x in xs]
    bracket = None
    for i in range(len(xs) - 1):
        if counts[i] >= 2 and counts[i + 1] == 0:
            bracket = (float(xs[i]), float(xs[i + 1]))
    if bracket is None:
        raise CuspNotFoundError(
            "no fold merge found in scan range",
            k=k, scan=[[float(x), c] for x, c in zip(xs, counts)],
        )

    a, b = bracket
    for _ in range(80):
        mid = 0.5 * (a + b)
        if len(_stationary_points(k, mid)) >= 2:
            a = mid
        else:
            b = mid
        if b - a < 1e-15:
            break

    stationary = _stationary_points(k, a)
    u_seed = 0.5 * (stationary[0] + stationary[-1]) if stationary else 0.25
    u0, x0 = _polish_cusp(k, u_seed, a)
    if np.max(np.abs(_cusp_residual(k, u0, x0))) > np.max(np.abs(_cusp_residual(k, u_seed, a))):
        u0, x0 = u_seed, a

    res_u, res_uu = (float(v) for v in _cusp_residual(k, u0, x0))
    if max(abs(res_u), abs(res_uu)) > Config.CUSP_RESIDUAL_TOL:
        raise NumericError("cusp residuals above tolerance", k=k, u0=u0, x0=x0,
                           residual_u=res_u, residual_uu=res_uu)

    cusp = CuspPoint(k=k, x0=float(x0), z0=float(_z(k, x0, u0)), u0=float(u0),
                     residual_u=res_u, residual_uu=res_uu)
    logger.info(f"Cusp k={k}: x0={cusp.x0:.6f} z0={cusp.z0:.6f} u0={cusp.u0:.6f}")
    return cusp


# ---------------------------------------------------------------------------
# Large-k spinodal
# ---------------------------------------------------------------------------

def _fixed_point_d(k: int, damping: float, tol: float, max_iter: int) -> float:
    half_ln_k = 0.5 * math.log(k)
    d = 0.0
    for iteration in range(max_iter):
        arg = half_ln_k + 0.5 * d
        if arg <= 0.0:
            raise DivergenceError(
                "fixed-point iteration left the log domain",
                k=k, iteration=iteration, d=d, argument=arg,
            )
        d_new = (1.0 - damping) * d + damping * math.log(arg)
        if abs(d_new - d) < tol * 1e-2:
            d = d_new
            break
        d = d_new
    residual = abs(d - math.log(half_ln_k + 0.5 * d))
    if residual >= tol:
        raise DivergenceError("fixed-point iteration did not settle", k=k, d=d, residual=residual)
    return d


def alpha_d_asymptotic(k: int, damping: float = 0.5, tol: float = 1e-12,
                       max_iter: int = 10_000) -> Tuple[float, float]:
    """
    Large-k spinodal (2^k / k)(ln k + d*), where d* = ln(ln(k)/2 + d*/2)

    Small k has no fixed point; the iteration then leaves the log domain
    and DivergenceError is raised.
    """
    d_star = _fixed_point_d(k, damping, tol, max_iter)
    return d_star, (2.0 ** k / k) * (math.log(k) + d_star)


def alpha_d_asymptotic_glass(k: int) -> float:
    """Spin-glass comparison form (2^k / k)(ln k + d*) exp(e^(-d*) / 2)"""
    d_star, z_asym = alpha_d_asymptotic(k)
    return z_asym * math.exp(math.exp(-d_star) / 2.0)
