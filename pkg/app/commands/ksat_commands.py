import numpy as np

from app.commands.schemas import CommandResult, RunConfig
from app.core.ksat_surface import (
    alpha_d,
    alpha_d_asymptotic,
    alpha_d_asymptotic_glass,
    find_cusp,
    solve_u,
    surface_grid,
)
from app.core.threshold_tracer import calibrate, trace
from app.utils.errors import DivergenceError
from app.utils.logger import setup_logger
from app.utils.reference_data import (
    ALPHA_C_LOWER_BOUND,
    ALPHA_C_SPIN_GLASS,
    ALPHA_C_TABLE,
    ALPHA_C_UPPER_BOUND,
    ALPHA_D_MERTENS,
    ALPHA_D_TABLE,
)

logger = setup_logger(__name__)

SURFACE_COLUMNS = ["k", "x", "z", "u", "branch"]
CURVE_COLUMNS = ["x", "z", "u_lower", "u_upper"]


def _point_record(point) -> dict:
    return {"k": point.query.k, "x": point.query.x, "z": point.query.z,
            "u": point.u, "branch": point.branch.value}


def run_surface(config: RunConfig) -> CommandResult:
    """Roots at one (x, z), or over a grid when either coordinate is omitted"""
    k = config.k or 3
    if config.x is not None and config.z is not None:
        points = solve_u(k, config.x, config.z, config.tol)
    else:
        size = config.grid or 21
        xs = [config.x] if config.x is not None else np.linspace(0.0, 0.3, size)
        zs = [config.z] if config.z is not None else np.linspace(0.5, 6.0, size)
        points = surface_grid(k, xs, zs, config.tol)
    return CommandResult(records=[_point_record(p) for p in points], columns=SURFACE_COLUMNS,
                         summary=[f"{len(points)} surface points for k={k}"])


def run_cusp(config: RunConfig) -> CommandResult:
    k = config.k or 3
    cusp = find_cusp(k)
    return CommandResult(
        records=[cusp.model_dump()],
        summary=[f"cusp(k={k}) = (x0={cusp.x0:.3f}, z0={cusp.z0:.3f}), u0={cusp.u0:.4f}"],
    )


def alpha_d_record(k: int) -> dict:
    record = {"k": k, "alpha_d": alpha_d(k), "published": ALPHA_D_TABLE.get(k),
              "mertens": ALPHA_D_MERTENS.get(k), "d_star": None, "asymptotic": None, "glass": None}
    try:
        record["d_star"], record["asymptotic"] = alpha_d_asymptotic(k)
        record["glass"] = alpha_d_asymptotic_glass(k)
    except DivergenceError:
        logger.info(f"Large-k form has no fixed point at k={k}")
    return record


def run_alpha_d(config: RunConfig) -> CommandResult:
    ks = [config.k] if config.k else sorted(ALPHA_D_TABLE)
    records = [alpha_d_record(k) for k in ks]
    summary = [f"alpha_d(k={r['k']}) = {r['alpha_d']:.3f}" for r in records]
    return CommandResult(records=records, summary=summary)


def alpha_c_record(k: int, step=None) -> dict:
    curve = trace(k, step)
    return {"k": k, "alpha_c": curve.alpha_c, "published": ALPHA_C_TABLE.get(k),
            "lower_bound": ALPHA_C_LOWER_BOUND.get(k), "upper_bound": ALPHA_C_UPPER_BOUND.get(k),
            "spin_glass": ALPHA_C_SPIN_GLASS.get(k), "policy": curve.policy.value,
            "orientation": curve.orientation.value}


def run_alpha_c(config: RunConfig) -> CommandResult:
    """Thresholds, or with --calibrate the anchor report for every configuration"""
    if config.calibrate:
        report = calibrate(config.k or 3, config.step)
        records = [r.model_dump(mode="json") for r in report.configurations]
        chosen = (f"{report.chosen_policy.value}/{report.chosen_orientation.value}"
                  if report.chosen_policy else "none")
        summary = [f"calibration satisfied={report.satisfied} chosen={chosen}"]
        return CommandResult(records=records, summary=summary)

    ks = [config.k] if config.k else sorted(ALPHA_C_TABLE)
    records = [alpha_c_record(k, config.step) for k in ks]
    summary = [f"alpha_c(k={r['k']}) = {r['alpha_c']:.3f}" for r in records]
    return CommandResult(records=records, summary=summary)


def run_curve(config: RunConfig) -> CommandResult:
    k = config.k or 3
    curve = trace(k, config.step, config.policy, config.orientation)
    records = [p.model_dump() for p in curve.points]
    return CommandResult(records=records, columns=CURVE_COLUMNS,
                         summary=[f"curve(k={k}): {len(records)} points, alpha_c = {curve.alpha_c:.3f}"])
