import os

from app.commands.ksat_commands import alpha_c_record, alpha_d_record
from app.commands.model_commands import TABLE_COLUMNS, twosat_table_records
from app.commands.schemas import CommandResult, RunConfig
from app.config import Config
from app.core.ksat_surface import find_cusp
from app.core.threshold_tracer import calibrate
from app.utils.formats import emit
from app.utils.logger import setup_logger
from app.utils.reference_data import ALPHA_C_TABLE, ALPHA_D_TABLE, CUSP_ANCHOR_K3

logger = setup_logger(__name__)


def run_tables(config: RunConfig) -> CommandResult:
    """Regenerate every published table as a file under --out (a directory)"""
    directory = config.out or os.getenv("PHASE_LAB_OUTPUT_DIR", Config.OUTPUT_DIR)
    fmt = config.format.value
    echo = config.echo()
    written = []

    def write(name, records, columns=None):
        path = os.path.join(directory, f"{name}.{fmt}")
        emit(records, fmt, path, echo, columns)
        written.append(path)

    write("alpha_d", [alpha_d_record(k) for k in sorted(ALPHA_D_TABLE)])

    cusp = find_cusp(3)
    write("cusp", [{**cusp.model_dump(), "published_x0": CUSP_ANCHOR_K3[0],
                    "published_z0": CUSP_ANCHOR_K3[1]}])

    report = calibrate(3, config.step)
    write("calibration", [r.model_dump(mode="json") for r in report.configurations])
    if not report.satisfied:
        logger.warning("Threshold anchors not met; see the calibration table")

    write("alpha_c", [alpha_c_record(k, config.step) for k in sorted(ALPHA_C_TABLE)])

    _, y50_records = twosat_table_records(config.mode)
    write("twosat_table", y50_records, TABLE_COLUMNS)

    logger.info(f"Tables written to {directory}")
    return CommandResult(summary=[f"wrote {path}" for path in written], files=written)
