from app.commands.ksat_commands import run_alpha_c, run_alpha_d, run_curve, run_cusp, run_surface
from app.commands.lab_commands import run_brw, run_mc, run_y50_search
from app.commands.model_commands import run_kcol, run_twopsat, run_twosat_table
from app.commands.table_commands import run_tables

COMMANDS = {
    "surface": run_surface,
    "cusp": run_cusp,
    "alpha-d": run_alpha_d,
    "alpha-c": run_alpha_c,
    "curve": run_curve,
    "twosat-table": run_twosat_table,
    "twopsat": run_twopsat,
    "kcol": run_kcol,
    "mc": run_mc,
    "y50-search": run_y50_search,
    "brw": run_brw,
    "tables": run_tables,
}
