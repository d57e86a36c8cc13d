from enum import Enum
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.config import Config

COMMAND_NAMES = (
    "surface", "cusp", "alpha-d", "alpha-c", "curve", "twosat-table", "twopsat",
    "kcol", "mc", "y50-search", "brw", "tables",
)


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


# Request/Result Models
class RunConfig(BaseModel):
    """Validated command-line request; echoed into every output file"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: str
    k: Optional[int] = Field(default=None, ge=2)
    n: Optional[int] = Field(default=None, ge=2)
    m: Optional[int] = Field(default=None, ge=0)
    p: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    seed: int = Field(default_factory=lambda: Config.DEFAULT_SEED, ge=0, lt=2 ** 64)
    trials: Optional[int] = Field(default=None, ge=1)
    step: Optional[float] = Field(default=None, gt=0.0)
    grid: Optional[int] = Field(default=None, ge=3)
    tol: Optional[float] = Field(default=None, gt=0.0)
    out: Optional[str] = None
    format: OutputFormat = OutputFormat.CSV

    # surface and tracer
    x: Optional[float] = Field(default=None, ge=0.0, lt=1.0)
    y: Optional[float] = Field(default=None, ge=0.0)
    z: Optional[float] = Field(default=None, ge=0.0)
    policy: Optional[Literal["trivial-lower", "paired-roots"]] = None
    orientation: Optional[Literal["rising", "falling"]] = None
    calibrate: bool = False
    mode: Literal["exact", "rounded"] = "rounded"

    # K-COL
    z_end: Optional[float] = Field(default=None, gt=0.0)
    x_range: Tuple[float, float] = (0.02, 0.1)
    y_range: Tuple[float, float] = (0.05, 0.1)

    # Monte Carlo
    model: Literal["ksat", "two-plus-p", "kcol"] = "ksat"
    solver: Literal["auto", "dpll", "two-sat", "col"] = "auto"
    density: Optional[float] = Field(default=None, ge=0.0)
    colors: int = Field(default=3, ge=1)
    frozen: int = Field(default=0, ge=0)
    workers: Optional[int] = Field(default=None, ge=1)
    input: Optional[str] = None

    # branching random walk
    offspring: float = Field(default=2.0, gt=0.0)
    decay: float = Field(default=0.0, ge=0.0)
    generations: int = Field(default=200, ge=1)
    replicates: int = Field(default=40, ge=1)
    lambdas: Optional[List[float]] = None
    step_law: Literal["two-point", "gaussian"] = "gaussian"
    step_scale: float = Field(default=4.0, gt=0.0)
    alpha: float = Field(default=0.5, gt=0.0, lt=1.0)

    @field_validator("command")
    @classmethod
    def _known_command(cls, value: str) -> str:
        if value not in COMMAND_NAMES:
            raise ValueError(f"unknown command {value!r}")
        return value

    @field_validator("x_range", "y_range")
    @classmethod
    def _increasing(cls, value: Tuple[float, float]) -> Tuple[float, float]:
        if not 0.0 <= value[0] < value[1]:
            raise ValueError(f"range {value} must be increasing and non-negative")
        return value

    def echo(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", exclude_none=True)


class CommandResult(BaseModel):
    records: List[Dict[str, Any]] = Field(default_factory=list)
    columns: Optional[List[str]] = None
    summary: List[str] = Field(default_factory=list)
    files: List[str] = Field(default_factory=list)
