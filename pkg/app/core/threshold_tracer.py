"""
Threshold curve of K-SAT in the (x, z) plane

Along the curve the two sheets of the surface carry equal satisfiable
weight, which gives the slope quotient

    Q = [ln(1 - x/2 - u_u) - ln(1 - x/2 - u_l)] / [ln(1 - u_u^k) - ln(1 - u_l^k)]

The curve starts at the cusp and is integrated with RK4 down to x = 0,
where z is the threshold alpha_c.
"""

import math
from enum import Enum
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from app.config import Config
from app.core.ksat_surface import (
    CuspPoint,
    FoldPoints,
    eval_z_derivatives,
    find_cusp,
    find_fold,
    solve_surface,
    track_root,
)
from app.utils.errors import DegenerateBranchError, PhaseLabError, SurfaceDomainError, TraceFailure
from app.utils.logger import setup_logger
from app.utils.reference_data import CURVE_END_ANCHOR_K3, CUSP_ANCHOR_K3

logger = setup_logger(__name__)

DEGENERATE_GAP = 1e-9
MAX_STEP = 0.01
# steps after the cusp during which RK stages are held inside the fold wedge
CUSP_ZONE_STEPS = 10
WEDGE_MARGIN = 0.1


class BranchPolicy(str, Enum):
    TRIVIAL_LOWER = "trivial-lower"
    PAIRED_ROOTS = "paired-roots"


class Orientation(str, Enum):
    RISING = "rising"
    FALLING = "falling"

    @property
    def sign(self) -> float:
        return 1.0 if self is Orientation.RISING else -1.0


class CurvePoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    x: float
    z: float
    u_lower: float
    u_upper: float


class ThresholdCurve(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int
    policy: BranchPolicy
    orientation: Orientation
    dx_step: float
    points: List[CurvePoint]
    alpha_c: float
    # root evaluations that needed the full surface scan
    full_scans: int = 0


class ConfigurationResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    policy: BranchPolicy
    orientation: Orientation
    completed: bool
    alpha_c: Optional[float] = None
    start_error: Optional[float] = None
    end_error: Optional[float] = None
    passed: bool = False
    failure: Optional[str] = None


class CalibrationReport(BaseModel):
    """Outcome of the anchor-passing rule over all policy/orientation pairs"""

    model_config = ConfigDict(frozen=True)

    k: int
    cusp_anchor: Tuple[float, float]
    end_anchor: Tuple[float, float]
    tolerance: float
    configurations: List[ConfigurationResult]
    chosen_policy: Optional[BranchPolicy] = None
    chosen_orientation: Optional[Orientation] = None
    satisfied: bool


@lru_cache(maxsize=32)
def _cached_cusp(k: int) -> CuspPoint:
    return find_cusp(k)


def _cusp_limit(k: int, x: float, u: float) -> float:
    return (1.0 - u ** k) / (k * u ** (k - 1) * (1.0 - x / 2.0 - u))


def slope(k: int, x: float, z: float, roots: Sequence[float]) -> float:
    """
    Magnitude of the threshold slope at (x, z)

    Args:
        k: Clause width
        x: Frozen-prefix density
        z: Clause density
        roots: (u_l, u_u) with u_l < u_u; u_l may be the trivial 0 at x = 0

    Returns:
        The positive quotient Q; at the cusp its 0/0 limit
    """
    u_l, u_u = float(roots[0]), float(roots[1])
    p_l = 1.0 - x / 2.0 - u_l
    if p_l <= 0.0 or 1.0 - x / 2.0 - u_u <= 0.0:
        raise SurfaceDomainError(f"log argument non-positive at x={x}", bound="1 - x/2 - u > 0",
                                 k=k, x=x, roots=[u_l, u_u])

    if abs(u_u - u_l) <= DEGENERATE_GAP:
        cusp = _cached_cusp(k)
        if abs(x - cusp.x0) <= 1e-6 and abs(z - cusp.z0) <= 1e-6 * max(1.0, z):
            return _cusp_limit(k, x, 0.5 * (u_l + u_u))
        raise DegenerateBranchError("coincident branches away from the cusp", k=k, x=x, z=z, u=u_l)
    if u_l > u_u:
        raise DegenerateBranchError("branches out of order", k=k, x=x, z=z, roots=[u_l, u_u])

    numerator = math.log1p(-(u_u - u_l) / p_l)
    denominator = math.log1p(-u_u ** k) - math.log1p(-u_l ** k)
    return numerator / denominator


def log_weight_gap(k: int, x: float, dx: float, dz: float, u_l: float, u_u: float) -> float:
    """
    Log ratio of satisfiable weight, upper over lower branch, after a move (dx, dz)

    Each branch gains (1 - u^k)^dz from added clauses and
    ((1 - x) / (1 - x/2 - u))^(-dx) from the prefix.
    """
    clauses = math.log1p(-u_u ** k) - math.log1p(-u_l ** k)
    prefix = math.log(1.0 - x / 2.0 - u_u) - math.log(1.0 - x / 2.0 - u_l)
    return dz * clauses + dx * prefix


class _BranchTracker:
    """
    Picks (u_l, u_u) out of the surface roots at each evaluation

    Away from the cusp each branch is continued locally from its previous
    root; the full scan of solve_surface seeds the tracker and takes over
    whenever local continuation fails.
    """

    def __init__(self, k: int, policy: BranchPolicy):
        self.k = k
        self.policy = policy
        self.previous: Optional[Tuple[float, float]] = None
        self.rising: Optional[Tuple[bool, bool]] = None
        self.last_point: Optional[CurvePoint] = None
        self.local_hits = 0
        self.scans = 0

    def candidates(self, x: float, z: float) -> List[float]:
        self.scans += 1
        solution = solve_surface(self.k, x, z)
        roots = [p.u for p in solution.points]
        if self.policy is BranchPolicy.TRIVIAL_LOWER and solution.trivial_continuation:
            roots = [0.0] + roots
        required = 3 if self.policy is BranchPolicy.TRIVIAL_LOWER else 2
        if len(roots) < required:
            raise TraceFailure(
                f"{len(roots)} branches at x={x:.6g}, z={z:.6g}; policy {self.policy.value} needs {required}",
                last_point=self.last_point, k=self.k, x=x, z=z, roots=roots,
            )
        return roots

    def _continue(self, x: float, z: float) -> Optional[Tuple[float, float]]:
        if self.previous is None or self.rising is None or x <= 0.0:
            return None
        pair = []
        for u_prev, rising in zip(self.previous, self.rising):
            u = track_root(self.k, x, z, u_prev, rising)
            if u is None:
                return None
            pair.append(u)
        if pair[1] - pair[0] <= DEGENERATE_GAP:
            return None
        return pair[0], pair[1]

    def select(self, x: float, z: float, local: bool = False) -> Tuple[float, float]:
        if local:
            pair = self._continue(x, z)
            if pair is not None:
                self.local_hits += 1
                return pair
        roots = self.candidates(x, z)
        if self.previous is None:
            if self.policy is BranchPolicy.TRIVIAL_LOWER:
                return roots[0], roots[-1]
            return roots[-2], roots[-1]
        prev_l, prev_u = self.previous
        u_l = min(roots, key=lambda u: abs(u - prev_l))
        u_u = min(roots, key=lambda u: abs(u - prev_u))
        if u_l >= u_u:
            raise TraceFailure("branches merged during continuation", last_point=self.last_point,
                               k=self.k, x=x, z=z, roots=roots)
        return u_l, u_u

    def accept(self, point: CurvePoint) -> None:
        """Record a curve point as the reference for the next continuation"""
        self.previous = (point.u_lower, point.u_upper)
        self.last_point = point
        if point.x > 0.0 and point.u_lower > 0.0:
            self.rising = tuple(eval_z_derivatives(self.k, point.x, u)[1] > 0.0
                                for u in self.previous)
        else:
            self.rising = None

    def rate(self, x: float, z: float, sign: float, local: bool = False) -> Tuple[float, Tuple[float, float]]:
        """dz/ds with s = x0 - x, and the selected roots"""
        pair = self.select(x, z, local)
        return sign * slope(self.k, x, z, pair), pair


@lru_cache(maxsize=1024)
def _cached_fold(k: int, x: float) -> Optional[FoldPoints]:
    return find_fold(k, x)


def _clamp_to_wedge(k: int, x: float, z: float, margin: float, last_point=None) -> float:
    """Move z strictly between the two fold values at x"""
    fold = _cached_fold(k, x)
    if fold is None or len(fold.z_values) < 2:
        raise TraceFailure("no three-root wedge next to the cusp", last_point=last_point, k=k, x=x)
    z_hi, z_lo = fold.z_values[0], fold.z_values[-1]
    pad = margin * (z_hi - z_lo)
    return min(max(z, z_lo + pad), z_hi - pad)


def _starting_point(k: int, cusp: CuspPoint, dx_step: float, sign: float) -> Tuple[float, float]:
    x1 = max(cusp.x0 - dx_step, 0.0)
    z1 = cusp.z0 + dx_step * sign * _cusp_limit(k, cusp.x0, cusp.u0)
    return x1, _clamp_to_wedge(k, x1, z1, 1e-3)


def trace(k: int, dx_step: Optional[float] = None, branch_policy: Optional[str] = None,
          orientation: Optional[str] = None) -> ThresholdCurve:
    """
    Integrate the threshold curve from the cusp to x = 0

    Args:
        k: Clause width (>= 3)
        dx_step: Fixed step in x; the last step is shortened to land on x = 0
        branch_policy: "trivial-lower" or "paired-roots"
        orientation: "rising" (z grows toward x = 0) or "falling"

    Returns:
        ThresholdCurve with the cusp as point zero
    """
    dx_step = Config.CURVE_STEP if dx_step is None else dx_step
    if not 0.0 < dx_step <= MAX_STEP:
        raise SurfaceDomainError(f"dx_step={dx_step} outside (0, {MAX_STEP}]", bound="0 < dx_step <= 0.01")
    policy = BranchPolicy(branch_policy or Config.TRACE_BRANCH_POLICY)
    direction = Orientation(orientation or Config.TRACE_ORIENTATION)
    sign = direction.sign

    cusp = _cached_cusp(k)
    tracker = _BranchTracker(k, policy)
    points = [CurvePoint(x=cusp.x0, z=cusp.z0, u_lower=cusp.u0, u_upper=cusp.u0)]

    x, z = _starting_point(k, cusp, dx_step, sign)
    u_l, u_u = tracker.select(x, z)
    points.append(CurvePoint(x=x, z=z, u_lower=u_l, u_upper=u_u))
    tracker.accept(points[-1])

    zone_end = cusp.x0 - CUSP_ZONE_STEPS * dx_step

    def held(x_: float, z_: float) -> float:
        if x_ < zone_end:
            return z_
        return _clamp_to_wedge(k, x_, z_, WEDGE_MARGIN, tracker.last_point)

    def rate(x_: float, z_: float) -> float:
        return tracker.rate(x_, held(x_, z_), sign, local=x_ < zone_end)[0]

    while x > 0.0:
        h = x if x <= dx_step * (1.0 + 1e-9) else dx_step
        r1 = rate(x, z)
        r2 = rate(x - h / 2.0, z + h / 2.0 * r1)
        r3 = rate(x - h / 2.0, z + h / 2.0 * r2)
        x_next = 0.0 if h == x else x - h
        r4 = rate(x_next, z + h * r3)
        z = held(x_next, z + h / 6.0 * (r1 + 2.0 * r2 + 2.0 * r3 + r4))
        x = x_next

        u_l, u_u = tracker.select(x, z, local=x < zone_end)
        points.append(CurvePoint(x=x, z=z, u_lower=u_l, u_upper=u_u))
        tracker.accept(points[-1])

    curve = ThresholdCurve(k=k, policy=policy, orientation=direction, dx_step=dx_step,
                           points=points, alpha_c=points[-1].z, full_scans=tracker.scans)
    logger.info(f"Trace k={k} {policy.value}/{direction.value}: alpha_c={curve.alpha_c:.6f} "
                f"({len(points)} points, {tracker.local_hits} local solves, {tracker.scans} scans)")
    return curve


def calibrate(k: int = 3, dx_step: Optional[float] = None) -> CalibrationReport:
    """
    Try every branch policy and orientation against the printed k = 3 anchors

    A configuration passes when its cusp and its x = 0 end point both lie
    within Config.ANCHOR_TOLERANCE (relative) of the anchors.
    """
    tolerance = Config.ANCHOR_TOLERANCE
    cusp_x, cusp_z = CUSP_ANCHOR_K3
    end_z = CURVE_END_ANCHOR_K3[1]
    results: List[ConfigurationResult] = []

    for policy in BranchPolicy:
        for direction in Orientation:
            try:
                curve = trace(k, dx_step, policy.value, direction.value)
            except PhaseLabError as exc:
                logger.info(f"Calibration {policy.value}/{direction.value} failed: {exc.message}")
                results.append(ConfigurationResult(policy=policy, orientation=direction,
                                                   completed=False, failure=exc.message))
                continue
            start = curve.points[0]
            start_error = max(abs(start.x - cusp_x) / cusp_x, abs(start.z - cusp_z) / cusp_z)
            end_error = abs(curve.alpha_c - end_z) / end_z
            results.append(ConfigurationResult(
                policy=policy, orientation=direction, completed=True, alpha_c=curve.alpha_c,
                start_error=start_error, end_error=end_error,
                passed=start_error <= tolerance and end_error <= tolerance,
            ))

    passing = [r for r in results if r.passed]
    completed = [r for r in results if r.completed]
    pool = passing or completed
    best = min(pool, key=lambda r: r.end_error) if pool else None
    report = CalibrationReport(
        k=k,
        cusp_anchor=CUSP_ANCHOR_K3,
        end_anchor=CURVE_END_ANCHOR_K3,
        tolerance=tolerance,
        configurations=results,
        chosen_policy=best.policy if best else None,
        chosen_orientation=best.orientation if best else None,
        satisfied=bool(passing),
    )
    if not report.satisfied:
        logger.warning(f"No configuration meets the anchors within {tolerance:.0%}; "
                       f"closest end error {best.end_error if best else float('nan'):.4f}")
    return report


def alpha_c(k: int, dx_step: Optional[float] = None) -> float:
    """Threshold at x = 0 under the configured branch policy and orientation"""
    return trace(k, dx_step).alpha_c
