import json
import os

from app.commands.schemas import CommandResult, RunConfig
from app.config import Config
from app.core.kcol_pde import evolve, init_grid
from app.core.special_models import (
    TwoPlusPQuery,
    two_p_sat_pc,
    two_p_sat_prob,
    two_p_sat_roots,
    two_p_sat_y50,
    two_sat_prob,
    y50_table,
)
from app.utils.formats import resolve_output_path
from app.utils.reference_data import Y50_REGRESSION, Y50_SIMON_REGRESSION, Y50_SIZES

TABLE_COLUMNS = ["row", "n", "y50", "simon", "pr_at_y50", "C", "X", "r_squared"]


def twosat_table_records(mode: str = "rounded"):
    table = y50_table(Y50_SIZES, mode)
    records = [
        {"row": "y50", "n": r.n, "y50": r.y50, "simon": r.simon,
         "pr_at_y50": two_sat_prob(r.n, r.y50).pr}
        for r in table.rows
    ]
    fits = [("regression", table.regression, Y50_REGRESSION),
            ("simon-regression", table.simon_regression, Y50_SIMON_REGRESSION)]
    for name, fit, published in fits:
        if fit is None:
            continue
        records.append({"row": name, "C": fit.intercept, "X": fit.coefficient,
                        "r_squared": fit.r_squared})
        records.append({"row": f"{name}-published", "C": published["C"], "X": published["X"],
                        "r_squared": published["r_squared"]})
    return table, records


def run_twosat_table(config: RunConfig) -> CommandResult:
    table, records = twosat_table_records(config.mode)
    fit = table.regression
    summary = [f"y50 = {fit.intercept:.2f} + {fit.coefficient:.2f} N^(-1/3) (R^2 = {fit.r_squared:.3f})"]
    return CommandResult(records=records, columns=TABLE_COLUMNS, summary=summary)


def run_twopsat(config: RunConfig) -> CommandResult:
    """Frozen-literal roots of the mixture, its y50 and p_c with the small-u witness"""
    x = config.x or 0.0
    y = 1.0 if config.y is None else config.y
    z = 0.5 if config.z is None else config.z
    n = config.n or 100
    query = TwoPlusPQuery(x=x, y=y, z=z)
    roots = two_p_sat_roots(x, y, z)
    witness = two_p_sat_pc()
    record = {"x": x, "y": y, "z": z, "p": query.p, "roots": roots, "p_c": witness.p_c, "n": n}
    if z < 1.0:
        record["y50"] = two_p_sat_y50(n, z, 0.5)
        record["pr"] = two_p_sat_prob(n, y, z)
    summary = [f"(2+p)-SAT p_c = {witness.p_c}; {len(roots)} roots at (x={x}, y={y}, z={z})"]
    return CommandResult(records=[record], summary=summary)


def run_kcol(config: RunConfig) -> CommandResult:
    """Evolve the K-COL system; the singularity report goes next to the grid file"""
    size = config.grid or Config.PDE_GRID
    grid = init_grid(size, size, config.x_range, config.y_range)
    final, report = evolve(grid, config.z_end or 0.5)

    files = []
    if config.out:
        target = resolve_output_path(config.out)
        report_path = os.path.splitext(target)[0] + ".singularities.json"
        os.makedirs(os.path.dirname(report_path) or ".", exist_ok=True)
        with open(report_path, "w", encoding="utf-8") as f:
            json.dump({"config": config.echo(), "report": report.model_dump()}, f, indent=2)
        files.append(report_path)

    summary = [f"K-COL {size}x{size}: reached z={report.z_reached:.6g}, halted={report.halted}, "
               f"{len(report.events)} singular cells"]
    return CommandResult(records=final.records(), columns=["x", "y", "z", "u", "u2"],
                         summary=summary, files=files)
