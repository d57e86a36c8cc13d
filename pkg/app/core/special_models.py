"""
Closed-form models: the 2-SAT scaling law, its y50 table, (2+p)-SAT and 2-COL
"""

import math
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from typing import Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.stats import linregress

from app.config import Config
from app.utils.errors import DegenerateDesignError, OutOfRegimeError, SurfaceDomainError
from app.utils.logger import setup_logger
from app.utils.reference_data import Y50_SIMON, Y50_SIZES
from app.utils.root_finding import sign_change_roots, two_sided_grid

logger = setup_logger(__name__)

# 3 * (ln(2) / 4)^(1/3); printed as 1.67
Y50_COEFFICIENT = 3.0 * (0.25 * math.log(2.0)) ** (1.0 / 3.0)
TWO_P_SAT_PC = 0.5


class TableMode(str, Enum):
    EXACT = "exact"
    ROUNDED = "rounded"


class TwoSatQuery(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    y: float = Field(ge=0.0)


class TwoSatProbability(BaseModel):
    model_config = ConfigDict(frozen=True)

    query: TwoSatQuery
    pr: float = Field(ge=0.0, le=1.0)
    in_window: bool


class TwoPlusPQuery(BaseModel):
    model_config = ConfigDict(frozen=True)

    x: float = Field(ge=0.0, lt=1.0)
    y: float = Field(ge=0.0)
    z: float = Field(ge=0.0)

    @property
    def p(self) -> float:
        total = self.y + self.z
        return self.z / total if total > 0 else 0.0


class Regression(BaseModel):
    model_config = ConfigDict(frozen=True)

    intercept: float
    coefficient: float
    r_squared: float


class PcWitness(BaseModel):
    model_config = ConfigDict(frozen=True)

    p_c: float
    y: float
    z: float
    residual_at_witness: Dict[float, float]
    slope_errors: Dict[float, float]


class Y50Row(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    y50: float
    simon: Optional[float] = None


class Y50Table(BaseModel):
    model_config = ConfigDict(frozen=True)

    mode: TableMode
    rows: List[Y50Row]
    regression: Regression
    simon_regression: Optional[Regression] = None


# ---------------------------------------------------------------------------
# 2-SAT
# ---------------------------------------------------------------------------

def two_sat_prob(n: int, y: float) -> TwoSatProbability:
    """
    Satisfiability probability of random 2-SAT with n variables at density y

    Inside the excluded window |y - 1| < c_w n^(-1/2) the y > 1 branch is
    still evaluated (capped at 1) and the result is flagged.
    """
    query = TwoSatQuery(n=n, y=y)
    in_window = abs(y - 1.0) < Config.WINDOW_CONSTANT / math.sqrt(n)
    if y > 1.0:
        pr = math.exp(-n * (4.0 / 27.0) * (y - 1.0) ** 3)
    else:
        pr = 1.0
    if in_window:
        logger.debug(f"two_sat_prob n={n} y={y} inside the scaling window")
    return TwoSatProbability(query=query, pr=min(pr, 1.0), in_window=in_window)


def two_sat_y50(n: int) -> float:
    """Density at which two_sat_prob crosses one half"""
    if n < 1:
        raise SurfaceDomainError(f"n={n} must be positive", bound="n >= 1", n=n)
    return 1.0 + Y50_COEFFICIENT * n ** (-1.0 / 3.0)


def two_col_y50(n: int) -> float:
    """2-COL has the same transition law as 2-SAT"""
    return two_sat_y50(n)


def round_half_up(value: float, decimals: int = 2) -> float:
    quantum = Decimal(1).scaleb(-decimals)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def two_sat_y50_regression(n_list: Sequence[int], y_list: Optional[Sequence[float]] = None) -> Regression:
    """
    Least squares fit y50 = C + X n^(-1/3)

    Args:
        n_list: Variable counts, at least three
        y_list: Observed y50 values; the closed form is used when omitted
    """
    n_arr = np.asarray(n_list, dtype=float)
    if n_arr.size < 3:
        raise DegenerateDesignError("regression needs at least three sizes", sizes=list(n_list))
    if np.all(n_arr == n_arr[0]):
        raise DegenerateDesignError("all sizes are equal", sizes=list(n_list))
    if y_list is None:
        y_arr = np.array([two_sat_y50(int(n)) for n in n_arr])
    else:
        y_arr = np.asarray(y_list, dtype=float)
        if y_arr.shape != n_arr.shape:
            raise DegenerateDesignError("sizes and values differ in length",
                                        sizes=list(n_list), values=list(y_list))

    fit = linregress(n_arr ** (-1.0 / 3.0), y_arr)
    return Regression(intercept=float(fit.intercept), coefficient=float(fit.slope),
                      r_squared=float(fit.rvalue ** 2))


def two_sat_du_dx(u: float, y: float) -> float:
    """Small-u, small-x slope of the 2-SAT surface, 1 / (6u + 2(1 - y))"""
    denominator = 6.0 * u + 2.0 * (1.0 - y)
    if denominator == 0.0:
        raise SurfaceDomainError("slope undefined at 6u + 2(1 - y) = 0", bound="6u + 2(1-y) != 0",
                                 u=u, y=y)
    return 1.0 / denominator


def y50_table(n_list: Sequence[int] = Y50_SIZES, mode: str = TableMode.ROUNDED.value) -> Y50Table:
    """y50 row for the given sizes, with the Simon et al. row where published"""
    table_mode = TableMode(mode)
    rows = []
    for n in n_list:
        value = two_sat_y50(n)
        if table_mode is TableMode.ROUNDED:
            value = round_half_up(value, 2)
        rows.append(Y50Row(n=n, y50=value, simon=Y50_SIMON.get(n)))

    regression = two_sat_y50_regression([r.n for r in rows], [r.y50 for r in rows])
    simon_rows = [r for r in rows if r.simon is not None]
    simon_regression = None
    if len(simon_rows) >= 3:
        simon_regression = two_sat_y50_regression([r.n for r in simon_rows], [r.simon for r in simon_rows])
    logger.info(f"y50 table ({table_mode.value}): C={regression.intercept:.4f} "
                f"X={regression.coefficient:.4f} R2={regression.r_squared:.4f}")
    return Y50Table(mode=table_mode, rows=rows, regression=regression, simon_regression=simon_regression)


# ---------------------------------------------------------------------------
# (2+p)-SAT
# ---------------------------------------------------------------------------

def _two_p_sat_residual(x, y, z, u):
    return (z * 3.0 * u ** 2 / (2.0 * (1.0 - u ** 3))
            + y * u / (1.0 - u ** 2)
            - np.log1p((u - x / 2.0) / (1.0 - 2.0 * u)))


def two_p_sat_residual(x: float, y: float, z: float, u: float) -> float:
    """
    Left minus right side of the mixed-width frozen-literal relation

        z 3u^2 / (2(1 - u^3)) + y u / (1 - u^2) = ln((1 - u - x/2) / (1 - 2u))
    """
    TwoPlusPQuery(x=x, y=y, z=z)
    if not 0.0 < u < 0.5:
        raise SurfaceDomainError(f"u={u} outside (0, 1/2)", bound="0 < u < 1/2", x=x, u=u)
    if 1.0 - u - x / 2.0 <= 0.0:
        raise SurfaceDomainError(f"log argument non-positive at x={x}, u={u}",
                                 bound="1 - u - x/2 > 0", x=x, u=u)
    return float(_two_p_sat_residual(x, y, z, u))


def two_p_sat_roots(x: float, y: float, z: float) -> List[float]:
    """Positive roots u of two_p_sat_residual on (x/2, 1/2)"""
    TwoPlusPQuery(x=x, y=y, z=z)
    lo = max(Config.ROOT_DOMAIN_EPS, x / 2.0)
    hi = 0.5 - Config.ROOT_DOMAIN_EPS
    nodes = two_sided_grid(lo, hi, Config.ROOT_GRID_POINTS, Config.ROOT_DOMAIN_EPS)
    with np.errstate(all="ignore"):
        values = _two_p_sat_residual(x, y, z, nodes)
    return sign_change_roots(lambda u: float(_two_p_sat_residual(x, y, z, u)), nodes, values)


def two_p_sat_pc(samples: Sequence[float] = (1e-3, 1e-4)) -> PcWitness:
    """
    Critical 3-clause fraction of (2+p)-SAT, with its small-u witness

    At (y, z) = (1, 1) the residual vanishes to O(u^3); for z < 1 the
    small-u branch follows y = 1 + (1 - z) 3u/2.
    """
    witness_z = 0.5
    residuals = {u: two_p_sat_residual(0.0, 1.0, 1.0, u) for u in samples}
    slope_errors = {}
    for u in samples:
        y = 1.0 + 1.5 * (1.0 - witness_z) * u
        slope_errors[u] = abs(two_p_sat_residual(0.0, y, witness_z, u))
    return PcWitness(p_c=TWO_P_SAT_PC, y=1.0, z=1.0, residual_at_witness=residuals,
                     slope_errors=slope_errors)


def two_p_sat_y50(n: int, z: float, pr: float = 0.5) -> float:
    """2-clause density at which the mixture is satisfiable with probability pr"""
    if z >= 1.0:
        raise OutOfRegimeError(f"z={z} is in the 3-SAT-like regime", z=z)
    if not 0.0 < pr < 1.0:
        raise SurfaceDomainError(f"pr={pr} outside (0, 1)", bound="0 < pr < 1", pr=pr)
    return 1.0 + 3.0 * ((1.0 - z) ** 2 * 0.25 * math.log(1.0 / pr)) ** (1.0 / 3.0) * n ** (-1.0 / 3.0)


def two_p_sat_prob(n: int, y: float, z: float) -> float:
    """Satisfiability probability of the mixture; inverts two_p_sat_y50"""
    if z >= 1.0:
        raise OutOfRegimeError(f"z={z} is in the 3-SAT-like regime", z=z)
    if y <= 1.0:
        return 1.0
    return math.exp(-n * (4.0 / 27.0) * (y - 1.0) ** 3 / (1.0 - z) ** 2)
