"""
Branching random walk with a population cap

Each particle at u has floor(m(u)) + Bernoulli(frac(m(u))) children, each
displaced by an independent step. Above the cap the generation is
subsampled uniformly and the true population size is tracked in log form.

Concentration is measured on the alpha-quantile Q_n(alpha) of the final
generation: its deviation from n a is one sample per tree, and the
exceedance at lambda is the share of trees deviating by at least lambda.
"""

import math
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.stats import linregress

from app.config import Config
from app.utils.errors import DegenerateDesignError
from app.utils.logger import setup_logger

logger = setup_logger(__name__)

QUANTILE_GRID = (0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95)


class BranchingLaw(str, Enum):
    CONSTANT = "constant"
    SUPPRESSED = "suppressed"


class StepLaw(str, Enum):
    TWO_POINT = "two-point"
    GAUSSIAN = "gaussian"


class BrwSpec(BaseModel):
    """
    m(u) = mean_offspring, or max(0, mean_offspring - decay_rate |u - g a|)
    in generation g for the suppressed law
    """

    model_config = ConfigDict(frozen=True)

    branching: BranchingLaw = BranchingLaw.CONSTANT
    mean_offspring: float = Field(default=2.0, gt=0.0)
    decay_rate: float = Field(default=0.0, ge=0.0)
    step: StepLaw = StepLaw.TWO_POINT
    step_scale: float = Field(default=1.0, gt=0.0)
    generations: int = Field(default=200, ge=1)
    population_cap: int = Field(default_factory=lambda: Config.BRW_POPULATION_CAP, ge=1000)
    seed: int = Field(default_factory=lambda: Config.DEFAULT_SEED)
    keep_positions: bool = False

    @property
    def drift(self) -> float:
        # both step laws are symmetric
        return 0.0


class GenerationSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    generation: int
    population: int
    log_total: float
    mean: float
    quantiles: List[float]


class BrwRun:
    """Per-generation summaries plus the final generation's positions"""

    def __init__(self, spec: BrwSpec, summaries: List[GenerationSummary], positions: np.ndarray,
                 extinct: bool, history: Optional[List[np.ndarray]] = None):
        self.spec = spec
        self.summaries = summaries
        self.positions = positions
        self.extinct = extinct
        self.history = history

    @property
    def generations_run(self) -> int:
        return self.summaries[-1].generation if self.summaries else 0

    def quantile(self, alpha) -> np.ndarray:
        """Q_n(alpha) of the final generation"""
        if self.positions.size == 0:
            return np.full(np.shape(alpha), np.nan)
        return np.quantile(self.positions, alpha)


class ConcentrationReport(BaseModel):
    """mean_exceedance is over trees; particle_profile is the within-tree tail, for reference"""

    model_config = ConfigDict(frozen=True)

    alpha: float
    lambdas: List[float]
    mean_exceedance: List[float]
    std_error: List[float]
    particle_profile: List[float]
    deviations: List[float]
    replicates: int
    slope: float
    intercept: float
    r_squared: float


class TwinReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    constant: ConcentrationReport
    suppressed: ConcentrationReport
    excess_in_se: List[float]
    within_bound: bool


def _branching_means(spec: BrwSpec, positions: np.ndarray, generation: int) -> np.ndarray:
    if spec.branching is BranchingLaw.CONSTANT:
        return np.full(positions.shape, spec.mean_offspring)
    centre = generation * spec.drift
    return np.maximum(0.0, spec.mean_offspring - spec.decay_rate * np.abs(positions - centre))


def _steps(spec: BrwSpec, rng: np.random.Generator, size: int) -> np.ndarray:
    if spec.step is StepLaw.TWO_POINT:
        return np.where(rng.random(size) < 0.5, -1, 1).astype(np.int64)
    return np.rint(rng.normal(0.0, spec.step_scale, size)).astype(np.int64)


def brw_simulate(spec: BrwSpec, seed=None) -> BrwRun:
    """
    Run the walk for spec.generations generations from one particle at 0

    Args:
        spec: Walk parameters
        seed: Overrides spec.seed (int or SeedSequence)

    Returns:
        BrwRun; on extinction the record stops at the last generation reached
    """
    rng = np.random.default_rng(spec.seed if seed is None else seed)
    positions = np.zeros(1, dtype=np.int64)
    log_total = 0.0
    summaries: List[GenerationSummary] = []
    history = [positions.copy()] if spec.keep_positions else None
    extinct = False

    for generation in range(spec.generations):
        means = _branching_means(spec, positions, generation)
        whole = np.floor(means)
        counts = (whole + (rng.random(means.size) < means - whole)).astype(np.int64)
        children = np.repeat(positions, counts)
        if children.size == 0:
            extinct = True
            positions = children
            logger.info(f"BRW extinct after {generation} generations")
            break
        children = children + _steps(spec, rng, children.size)
        log_total += math.log(children.size) - math.log(positions.size)
        if children.size > spec.population_cap:
            children = rng.choice(children, size=spec.population_cap, replace=False)
        positions = children

        summaries.append(GenerationSummary(
            generation=generation + 1,
            population=int(positions.size),
            log_total=log_total,
            mean=float(positions.mean()),
            quantiles=[float(q) for q in np.quantile(positions, QUANTILE_GRID)],
        ))
        if history is not None:
            history.append(positions.copy())

    return BrwRun(spec, summaries, positions, extinct, history)


def quantile_deviation(run: BrwRun, alpha: float = 0.5) -> float:
    """|Q_n(alpha) - n a| for one tree; nan after extinction"""
    if run.positions.size == 0:
        return math.nan
    return float(abs(run.quantile(alpha) - run.generations_run * run.spec.drift))


def exceedance(deviations: Sequence[float], lambdas: Sequence[float]) -> np.ndarray:
    """
    Share of replicate trees with |Q_n(alpha) - n a| >= lambda

    Args:
        deviations: One quantile deviation per tree
        lambdas: Thresholds

    Returns:
        One empirical probability per lambda
    """
    deviations = np.asarray(deviations, dtype=float)
    if deviations.size == 0:
        return np.full(len(lambdas), np.nan)
    return np.array([np.mean(deviations >= lam) for lam in lambdas])


def particle_exceedance(run: BrwRun, lambdas: Sequence[float]) -> np.ndarray:
    """Fraction of one tree's final particles with |position - n a| >= lambda"""
    if run.positions.size == 0:
        return np.full(len(lambdas), np.nan)
    deviation = np.abs(run.positions - run.generations_run * run.spec.drift)
    return np.array([np.mean(deviation >= lam) for lam in lambdas])


def brw_concentration(spec: BrwSpec, lambdas: Sequence[float], replicates: int = 8,
                      alpha: float = 0.5) -> ConcentrationReport:
    """
    Exceedance of the alpha-quantile over independent trees, and the fit of
    its log on lambda^2

    Replicate r uses SeedSequence(spec.seed, spawn_key=(r,)); extinct
    replicates are dropped. Standard errors are binomial over the surviving
    trees.
    """
    if not 0.0 < alpha < 1.0:
        raise DegenerateDesignError(f"quantile level {alpha} outside (0, 1)", alpha=alpha)
    deviations, profiles = [], []
    for r in range(replicates):
        run = brw_simulate(spec, np.random.SeedSequence(spec.seed, spawn_key=(r,)))
        if run.extinct:
            logger.warning(f"BRW replicate {r} went extinct; dropped")
            continue
        deviations.append(quantile_deviation(run, alpha))
        profiles.append(particle_exceedance(run, lambdas))
    if not deviations:
        raise DegenerateDesignError("every replicate went extinct", replicates=replicates)

    trees = len(deviations)
    mean = exceedance(deviations, lambdas)
    std_error = np.sqrt(mean * (1.0 - mean) / trees)

    lam = np.asarray(lambdas, dtype=float)
    usable = mean > 0.0
    if np.count_nonzero(usable) < 3:
        raise DegenerateDesignError("fewer than three lambdas with positive exceedance",
                                    lambdas=list(lambdas), mean_exceedance=mean.tolist(),
                                    quantile_spread=float(np.std(deviations)))
    fit = linregress(lam[usable] ** 2, np.log(mean[usable]))
    logger.info(f"BRW concentration alpha={alpha}: slope={fit.slope:.3e} R2={fit.rvalue ** 2:.4f} "
                f"({trees} trees)")
    return ConcentrationReport(
        alpha=alpha,
        lambdas=[float(v) for v in lam],
        mean_exceedance=mean.tolist(),
        std_error=std_error.tolist(),
        particle_profile=np.vstack(profiles).mean(axis=0).tolist(),
        deviations=[float(d) for d in deviations],
        replicates=trees,
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(fit.rvalue ** 2),
    )


def brw_twin_comparison(spec: BrwSpec, decay_rate: float, lambdas: Sequence[float],
                        replicates: int = 8, alpha: float = 0.5) -> TwinReport:
    """Constant branching against branching suppressed away from the mean path"""
    constant = brw_concentration(spec.model_copy(update={"branching": BranchingLaw.CONSTANT}),
                                 lambdas, replicates, alpha)
    suppressed = brw_concentration(
        spec.model_copy(update={"branching": BranchingLaw.SUPPRESSED, "decay_rate": decay_rate}),
        lambdas, replicates, alpha,
    )
    excess = []
    for c, s, se_c, se_s in zip(constant.mean_exceedance, suppressed.mean_exceedance,
                                constant.std_error, suppressed.std_error):
        scale = math.hypot(se_c, se_s)
        diff = s - c
        excess.append(diff / scale if scale > 0 else (0.0 if diff <= 0 else math.inf))
    return TwinReport(constant=constant, suppressed=suppressed, excess_in_se=excess,
                      within_bound=all(e <= 2.0 for e in excess))
