"""
Regenerate every published table into the output directory
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app.commands.schemas import RunConfig
from app.commands.table_commands import run_tables
from app.config import Config
from app.utils.logger import setup_logger

logger = setup_logger(__name__)

def build_tables(out_dir=None):
    """Write alpha_d, cusp, calibration, alpha_c and y50 tables"""

    logger.info("="*70)
    logger.info("Building reference tables")
    logger.info("="*70)

    out_dir = out_dir or os.getenv("PHASE_LAB_OUTPUT_DIR", Config.OUTPUT_DIR)
    result = run_tables(RunConfig(command="tables", out=out_dir))

    logger.info("="*70)
    logger.info(f"Tables complete: {len(result.files)} files in {out_dir}")
    logger.info("="*70)
    return result.files

if __name__ == "__main__":
    build_tables(sys.argv[1] if len(sys.argv) > 1 else None)
