import os
from dotenv import load_dotenv

# Load environment variables from .env
load_dotenv()


def _env_float(name: str, default: float) -> float:
    value = os.getenv(name)
    if value is None:
        return default
    try:
        return float(value)
    except ValueError:
        raise ValueError(f"{name} must be a number, got {value!r}")


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None:
        return default
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {value!r}")


class Config:
    """Configuration for the phase-transition lab"""

    # Root finding on the K-SAT surface
    # ========================
    ROOT_TOL = _env_float("ROOT_TOL", 1e-10)
    ROOT_GRID_POINTS = _env_int("ROOT_GRID_POINTS", 2048)
    ROOT_DOMAIN_EPS = _env_float("ROOT_DOMAIN_EPS", 1e-12)
    CUSP_RESIDUAL_TOL = _env_float("CUSP_RESIDUAL_TOL", 1e-8)


    # Threshold tracer
    # ========================
    CURVE_STEP = _env_float("CURVE_STEP", 1e-4)
    # Frozen by calibrate(): the configuration whose k=3 trace joins both printed anchors
    TRACE_BRANCH_POLICY = os.getenv("TRACE_BRANCH_POLICY", "trivial-lower")
    TRACE_ORIENTATION = os.getenv("TRACE_ORIENTATION", "rising")
    ANCHOR_TOLERANCE = _env_float("ANCHOR_TOLERANCE", 0.01)

    if TRACE_BRANCH_POLICY not in ("trivial-lower", "paired-roots"):
        raise ValueError(f"Unknown TRACE_BRANCH_POLICY: {TRACE_BRANCH_POLICY}")
    if TRACE_ORIENTATION not in ("rising", "falling"):
        raise ValueError(f"Unknown TRACE_ORIENTATION: {TRACE_ORIENTATION}")


    # 2-SAT / (2+p)-SAT
    # ========================
    WINDOW_CONSTANT = _env_float("WINDOW_CONSTANT", 1.0)


    # K-COL conservation system
    # ========================
    PDE_GRID = _env_int("PDE_GRID", 128)
    PDE_CFL = _env_float("PDE_CFL", 0.4)
    PDE_LOG_FLOOR = _env_float("PDE_LOG_FLOOR", 1e-6)
    PDE_SPIKE_THRESHOLD = _env_float("PDE_SPIKE_THRESHOLD", 50.0)
    PDE_BOUNDARY_MARGIN = _env_int("PDE_BOUNDARY_MARGIN", 4)


    # Monte Carlo and branching random walk
    # ========================
    MC_TRIALS = _env_int("MC_TRIALS", 2000)
    MC_WORKERS = _env_int("MC_WORKERS", 1)
    DEFAULT_SEED = _env_int("DEFAULT_SEED", 20240601)
    BRW_POPULATION_CAP = _env_int("BRW_POPULATION_CAP", 100_000)

    if MC_TRIALS < 1:
        raise ValueError("MC_TRIALS must be at least 1")
    if BRW_POPULATION_CAP < 1000:
        raise ValueError("BRW_POPULATION_CAP must be at least 1000")


    # Output
    # ========================
    OUTPUT_DIR = os.getenv("PHASE_LAB_OUTPUT_DIR", "data/output")
    OUTPUT_DIGITS = _env_int("OUTPUT_DIGITS", 12)


    # Logging Configuration
    # ========================
    LOGGER_NAME = os.getenv("LOGGER_NAME", "phase_lab")
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()
    CONSOLE_LOG_LEVEL = os.getenv("CONSOLE_LOG_LEVEL", "WARNING").upper()
    # empty disables the log file
    LOGS_PATH = os.getenv("LOGS_PATH", "data/logs")

    for _level in (LOG_LEVEL, CONSOLE_LOG_LEVEL):
        if _level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"Unknown log level: {_level}")
    del _level


# Export a config instance for imports
config = Config()
