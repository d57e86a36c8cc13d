"""
K-COL (3-color) frozen densities as a conservation-law system

    d(rho1)/dz = df/dx,  d(rho2)/dz = df/dy

with rho1 = ln(1 - 2u - u2 - x - 2y), rho2 = ln(1 - 3u - 2u2 - y) and
f = ln(1 - 3u^2 - 6uy) / 3. The march variable z is the edge density.
"""

from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.config import Config
from app.utils.errors import InversionDomainError, SingularityError, SurfaceDomainError
from app.utils.logger import setup_logger

logger = setup_logger(__name__)

NEGATIVE_SLACK = 1e-12


class ColState(BaseModel):
    model_config = ConfigDict(frozen=True)

    u: float = Field(ge=-NEGATIVE_SLACK)
    u2: float = Field(ge=-NEGATIVE_SLACK)


class SingularityEvent(BaseModel):
    model_config = ConfigDict(frozen=True)

    x: float
    y: float
    z: float
    reason: str


class SingularityReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    events: List[SingularityEvent]
    halted: bool
    z_reached: float


# ---------------------------------------------------------------------------
# Pointwise maps
# ---------------------------------------------------------------------------

def _rho_args(u, u2, x, y):
    return 1.0 - 2.0 * u - u2 - x - 2.0 * y, 1.0 - 3.0 * u - 2.0 * u2 - y


def _flux_arg(u, y):
    return 1.0 - 3.0 * u ** 2 - 6.0 * u * y


def _invert(rho1, rho2, x, y):
    a = 1.0 - x - 2.0 * y - np.exp(rho1)
    b = 1.0 - y - np.exp(rho2)
    return 2.0 * a - b, 2.0 * b - 3.0 * a


def rho_fields(state: ColState, x: float, y: float) -> Tuple[float, float]:
    """(rho1, rho2) of a cell state at (x, y)"""
    arg1, arg2 = _rho_args(state.u, state.u2, x, y)
    if arg1 <= 0.0 or arg2 <= 0.0:
        raise SurfaceDomainError(
            f"log argument non-positive at x={x}, y={y}",
            bound="1 - 2u - u2 - x - 2y > 0 and 1 - 3u - 2u2 - y > 0",
            x=x, y=y, u=state.u, u2=state.u2,
        )
    return float(np.log(arg1)), float(np.log(arg2))


def invert_state(rho1: float, rho2: float, x: float, y: float) -> ColState:
    """
    Recover (u, u2) from (rho1, rho2)

    2u + u2 = a and 3u + 2u2 = b have determinant 1, so u = 2a - b and
    u2 = 2b - 3a.
    """
    u, u2 = _invert(rho1, rho2, x, y)
    if u < -NEGATIVE_SLACK or u2 < -NEGATIVE_SLACK:
        raise InversionDomainError(
            f"negative frozen density at x={x}, y={y}", bound="u >= 0 and u2 >= 0",
            x=x, y=y, u=float(u), u2=float(u2),
        )
    return ColState(u=float(u), u2=float(u2))


def flux_f(u: float, y: float) -> float:
    arg = _flux_arg(u, y)
    if arg <= 0.0:
        raise SurfaceDomainError(f"flux argument non-positive at u={u}, y={y}",
                                 bound="1 - 3u^2 - 6uy > 0", u=u, y=y)
    return float(np.log(arg) / 3.0)


def _flux_speed(u, y, rho1, rho2):
    """Bound on the characteristic speeds |df/drho|"""
    f_u = -2.0 * (u + y) / _flux_arg(u, y)
    return np.abs(f_u) * (2.0 * np.exp(rho1) + np.exp(rho2))


def _dissipation(rho: np.ndarray, speed: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Local Lax-Friedrichs term with copied ghost cells"""
    pad = [(0, 0), (0, 0)]
    pad[axis] = (1, 1)
    rho_p = np.pad(rho, pad, mode="edge")
    speed_p = np.pad(speed, pad, mode="edge")
    n = rho.shape[axis]
    centre = np.take(rho_p, range(1, n + 1), axis=axis)
    ahead = np.take(rho_p, range(2, n + 2), axis=axis)
    behind = np.take(rho_p, range(0, n), axis=axis)
    s_centre = np.take(speed_p, range(1, n + 1), axis=axis)
    s_ahead = np.maximum(s_centre, np.take(speed_p, range(2, n + 2), axis=axis))
    s_behind = np.maximum(s_centre, np.take(speed_p, range(0, n), axis=axis))
    return (s_ahead * (ahead - centre) - s_behind * (centre - behind)) / (2.0 * h)


# ---------------------------------------------------------------------------
# Grid
# ---------------------------------------------------------------------------

class ColGrid:
    """
    Cell-centred (x, y) grid carrying (rho1, rho2) at march value z

    Arrays are indexed [i, j] with i along x and j along y.
    """

    def __init__(self, x: np.ndarray, y: np.ndarray, rho1: np.ndarray, rho2: np.ndarray,
                 z: float = 0.0, dz: Optional[float] = None,
                 initial_slopes: Optional[Tuple[np.ndarray, np.ndarray]] = None):
        self.x = x
        self.y = y
        self.X, self.Y = np.meshgrid(x, y, indexing="ij")
        self.rho1 = rho1
        self.rho2 = rho2
        self.z = z
        self.dz = dz
        self.u, self.u2 = _invert(rho1, rho2, self.X, self.Y)
        # du/dx and du/dy recorded at z = 0, carried through every step
        self.initial_u_x, self.initial_u_y = initial_slopes or (None, None)

    @property
    def nx(self) -> int:
        return len(self.x)

    @property
    def ny(self) -> int:
        return len(self.y)

    @property
    def hx(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def hy(self) -> float:
        return float(self.y[1] - self.y[0])

    def stable_dz(self) -> float:
        """CFL-limited march step"""
        speed = float(np.max(_flux_speed(self.u, self.Y, self.rho1, self.rho2)))
        h = min(self.hx, self.hy)
        limit = Config.PDE_CFL * h / speed if speed > 0.0 else Config.PDE_CFL * h
        return min(self.dz, limit) if self.dz else limit

    def slopes(self) -> Tuple[np.ndarray, np.ndarray]:
        """Discrete du/dx and du/dy"""
        return np.gradient(self.u, self.hx, axis=0), np.gradient(self.u, self.hy, axis=1)

    def interior(self, margin: Optional[int] = None) -> Tuple[slice, slice]:
        m = Config.PDE_BOUNDARY_MARGIN if margin is None else margin
        return slice(m, self.nx - m), slice(m, self.ny - m)

    def records(self) -> List[Dict[str, float]]:
        """One (x, y, z, u, u2) row per cell"""
        return [
            {"x": float(self.X[i, j]), "y": float(self.Y[i, j]), "z": self.z,
             "u": float(self.u[i, j]), "u2": float(self.u2[i, j])}
            for i in range(self.nx) for j in range(self.ny)
        ]


def init_grid(nx: int, ny: int, x_range: Tuple[float, float], y_range: Tuple[float, float],
              dz: Optional[float] = None) -> ColGrid:
    """
    Grid at z = 0 with u = x and u2 = y in every cell

    Raises:
        SurfaceDomainError: if any cell centre is outside the admissible domain
    """
    if nx < 3 or ny < 3:
        raise SurfaceDomainError(f"grid {nx}x{ny} too small", bound="nx, ny >= 3", nx=nx, ny=ny)
    hx = (x_range[1] - x_range[0]) / nx
    hy = (y_range[1] - y_range[0]) / ny
    if hx <= 0.0 or hy <= 0.0:
        raise SurfaceDomainError("empty domain", bound="x_range and y_range increasing",
                                 x_range=list(x_range), y_range=list(y_range))
    x = x_range[0] + hx * (np.arange(nx) + 0.5)
    y = y_range[0] + hy * (np.arange(ny) + 0.5)
    X, Y = np.meshgrid(x, y, indexing="ij")

    arg1, arg2 = _rho_args(X, Y, X, Y)
    bad = (arg1 <= 0.0) | (arg2 <= 0.0) | (_flux_arg(X, Y) <= 0.0) | (X < 0.0) | (Y < 0.0)
    if np.any(bad):
        i, j = np.argwhere(bad)[0]
        raise SurfaceDomainError("initial cell outside the admissible domain",
                                 bound="1 - 3x - 3y > 0 and 1 - 3x^2 - 6xy > 0",
                                 x=float(X[i, j]), y=float(Y[i, j]))

    grid = ColGrid(x, y, np.log(arg1), np.log(arg2), z=0.0, dz=dz)
    # u = x exactly, not through exp(log(.))
    grid.u, grid.u2 = X.copy(), Y.copy()
    grid.initial_u_x, grid.initial_u_y = grid.slopes()
    logger.debug(f"K-COL grid {nx}x{ny} on x={x_range} y={y_range}, "
                 f"u_x in [{grid.initial_u_x.min():.12g}, {grid.initial_u_x.max():.12g}], "
                 f"max |u_y| = {np.abs(grid.initial_u_y).max():.3g}")
    return grid


def _singular_cells(grid: ColGrid, u, u2, rho1, rho2, z: float) -> List[SingularityEvent]:
    floor = Config.PDE_LOG_FLOOR
    checks = {
        "rho1 argument below floor": ~(np.exp(rho1) > floor),
        "rho2 argument below floor": ~(np.exp(rho2) > floor),
        "flux argument below floor": ~(_flux_arg(u, grid.Y) > floor),
        "negative u": u < -NEGATIVE_SLACK,
        "negative u2": u2 < -NEGATIVE_SLACK,
    }
    events = []
    for reason, mask in checks.items():
        for i, j in np.argwhere(mask):
            events.append(SingularityEvent(x=float(grid.X[i, j]), y=float(grid.Y[i, j]), z=z, reason=reason))
    return events


def step(grid: ColGrid, dz: Optional[float] = None) -> ColGrid:
    """
    Advance (rho1, rho2) by one forward-Euler step

    Raises:
        SingularityError: if any cell leaves the admissible domain
    """
    dz = grid.stable_dz() if dz is None else dz
    f = np.log(_flux_arg(grid.u, grid.Y)) / 3.0
    speed = _flux_speed(grid.u, grid.Y, grid.rho1, grid.rho2)

    rho1 = grid.rho1 + dz * (np.gradient(f, grid.hx, axis=0)
                             + _dissipation(grid.rho1, speed, grid.hx, axis=0))
    rho2 = grid.rho2 + dz * (np.gradient(f, grid.hy, axis=1)
                             + _dissipation(grid.rho2, speed, grid.hy, axis=1))
    z_next = grid.z + dz

    with np.errstate(all="ignore"):
        u, u2 = _invert(rho1, rho2, grid.X, grid.Y)
        events = _singular_cells(grid, u, u2, rho1, rho2, z_next)
    if events or not (np.all(np.isfinite(rho1)) and np.all(np.isfinite(rho2))):
        raise SingularityError(f"{len(events)} cells left the domain at z={z_next:.6g}", events=events)

    return ColGrid(grid.x, grid.y, rho1, rho2, z=z_next, dz=grid.dz,
                   initial_slopes=(grid.initial_u_x, grid.initial_u_y))


def pde_residual(before: ColGrid, after: ColGrid, margin: Optional[int] = None) -> float:
    """Max-norm of d(rho1)/dz - df/dx over the interior cells"""
    dz = after.z - before.z
    f = np.log(_flux_arg(before.u, before.Y)) / 3.0
    residual = (after.rho1 - before.rho1) / dz - np.gradient(f, before.hx, axis=0)
    return float(np.max(np.abs(residual[before.interior(margin)])))


def _near_singular(grid: ColGrid, seen: set) -> List[SingularityEvent]:
    """Cells close to the floor or under a gradient spike; each cell reported once"""
    floor = 10.0 * Config.PDE_LOG_FLOOR
    u_x, u_y = grid.slopes()
    spike = np.hypot(u_x, u_y) > Config.PDE_SPIKE_THRESHOLD
    masks = {
        "log argument near floor": (np.exp(grid.rho1) < floor) | (np.exp(grid.rho2) < floor)
                                   | (_flux_arg(grid.u, grid.Y) < floor),
        "gradient spike": spike,
    }
    events = []
    for reason, mask in masks.items():
        for i, j in np.argwhere(mask):
            if (i, j) in seen:
                continue
            seen.add((i, j))
            events.append(SingularityEvent(x=float(grid.X[i, j]), y=float(grid.Y[i, j]),
                                           z=grid.z, reason=reason))
    return events


def evolve(grid: ColGrid, z_end: float) -> Tuple[ColGrid, SingularityReport]:
    """
    Step until z_end or until a cell leaves the domain

    Returns:
        The last admissible grid and the report of candidate critical-line cells
    """
    if z_end <= grid.z:
        raise SurfaceDomainError(f"z_end={z_end} must exceed z={grid.z}", bound="z_end > z")
    events: List[SingularityEvent] = []
    seen: set = set()
    halted = False
    steps = 0
    while z_end - grid.z > 1e-14 * max(1.0, z_end):
        events.extend(_near_singular(grid, seen))
        dz = min(grid.stable_dz(), z_end - grid.z)
        try:
            grid = step(grid, dz)
        except SingularityError as exc:
            logger.warning(f"K-COL evolution halted at z={grid.z:.6g}: {exc.message}")
            events.extend(exc.events)
            halted = True
            break
        steps += 1

    logger.info(f"K-COL evolve: {steps} steps to z={grid.z:.6g}, {len(events)} events, halted={halted}")
    return grid, SingularityReport(events=events, halted=halted, z_reached=grid.z)
