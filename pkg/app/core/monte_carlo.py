"""
Seeded Monte Carlo estimates of satisfiability probabilities

Trial t of a run with master seed s draws its instance from
SeedSequence(s, spawn_key=(t,)), so results do not depend on the number
of workers or on the order trials finish in.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.stats import norm

from app.config import Config
from app.core.instances import gen_graph, gen_ksat, gen_two_plus_p
from app.core.solvers import col_solve, dpll_sat, two_sat_solve
from app.utils.errors import BracketError
from app.utils.logger import setup_logger

logger = setup_logger(__name__)


class Model(str, Enum):
    KSAT = "ksat"
    TWO_PLUS_P = "two-plus-p"
    KCOL = "kcol"


class Solver(str, Enum):
    AUTO = "auto"
    DPLL = "dpll"
    TWO_SAT = "two-sat"
    COL = "col"


class GeneratorConfig(BaseModel):
    """Random instance family; m = round(density * n)"""

    model_config = ConfigDict(frozen=True)

    model: Model = Model.KSAT
    n: int = Field(ge=2)
    density: float = Field(ge=0.0)
    k: int = Field(default=3, ge=1)
    p: float = Field(default=0.0, ge=0.0, le=1.0)
    colors: int = Field(default=3, ge=1)
    frozen_count: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check_prefix(self):
        if self.frozen_count > self.n:
            raise ValueError(f"frozen_count={self.frozen_count} exceeds n={self.n}")
        return self

    @property
    def m(self) -> int:
        return int(round(self.density * self.n))

    def with_density(self, density: float) -> "GeneratorConfig":
        return self.model_copy(update={"density": density})


class McEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    trials: int = Field(ge=1)
    successes: int = Field(ge=0)
    p_hat: float = Field(ge=0.0, le=1.0)
    ci: Tuple[float, float]
    seed: int

    @model_validator(mode="after")
    def _check_interval(self):
        lo, hi = self.ci
        if not lo <= self.p_hat <= hi:
            raise ValueError(f"interval {self.ci} does not contain p_hat={self.p_hat}")
        return self


class Y50Search(BaseModel):
    model_config = ConfigDict(frozen=True)

    y50: float
    bracket: Tuple[float, float]
    points: int
    last_estimate: McEstimate


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> Tuple[float, float]:
    """Wilson score interval for a binomial proportion"""
    if trials < 1:
        raise ValueError("trials must be positive")
    z = float(norm.ppf(0.5 + confidence / 2.0))
    p = successes / trials
    denominator = 1.0 + z * z / trials
    centre = (p + z * z / (2.0 * trials)) / denominator
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denominator
    return max(0.0, min(centre - half, p)), min(1.0, max(centre + half, p))


def trial_seed(seed: int, trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(trial,))


def resolve_solver(config: GeneratorConfig, solver: str = Solver.AUTO.value) -> Callable:
    choice = Solver(solver)
    if choice is Solver.AUTO:
        if config.model is Model.KCOL:
            choice = Solver.COL
        elif config.model is Model.KSAT and config.k <= 2:
            choice = Solver.TWO_SAT
        else:
            choice = Solver.DPLL
    if choice is Solver.COL:
        return lambda instance: col_solve(instance, config.colors)
    if choice is Solver.TWO_SAT:
        return lambda instance: two_sat_solve(instance, config.frozen_count)
    return lambda instance: dpll_sat(instance, config.frozen_count)


def generate(config: GeneratorConfig, seed):
    if config.model is Model.KCOL:
        return gen_graph(config.n, config.m, seed)
    if config.model is Model.TWO_PLUS_P:
        return gen_two_plus_p(config.n, config.m, config.p, seed)
    return gen_ksat(config.n, config.m, config.k, seed)


def _count_successes(config: GeneratorConfig, solver: str, seed: int, trials: range) -> int:
    decide = resolve_solver(config, solver)
    return sum(bool(decide(generate(config, trial_seed(seed, t)))) for t in trials)


def mc_prob(config: GeneratorConfig, solver: str = Solver.AUTO.value, trials: Optional[int] = None,
            seed: Optional[int] = None, workers: Optional[int] = None) -> McEstimate:
    """
    Estimate the satisfiability probability of a random instance family

    Args:
        config: Instance family
        solver: "auto", "dpll", "two-sat" or "col"
        trials: Number of independent instances
        seed: Master seed
        workers: Worker processes; results equal the serial run
    """
    trials = Config.MC_TRIALS if trials is None else trials
    seed = Config.DEFAULT_SEED if seed is None else seed
    workers = Config.MC_WORKERS if workers is None else workers
    if trials < 1:
        raise ValueError("trials must be positive")

    if workers <= 1:
        successes = _count_successes(config, solver, seed, range(trials))
    else:
        chunks = [range(i, trials, workers) for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_count_successes, config, solver, seed, c) for c in chunks]
            successes = sum(f.result() for f in futures)

    estimate = McEstimate(trials=trials, successes=successes, p_hat=successes / trials,
                          ci=wilson_interval(successes, trials), seed=seed)
    logger.debug(f"mc_prob {config.model.value} n={config.n} density={config.density}: "
                 f"{successes}/{trials}")
    return estimate


def find_y50(config: GeneratorConfig, trials_per_point: Optional[int] = None, tol: float = 0.01,
             seed: Optional[int] = None, bracket: Tuple[float, float] = (0.8, 2.0),
             solver: str = Solver.AUTO.value, workers: Optional[int] = None) -> Y50Search:
    """
    Stochastic bisection for the density where the satisfiable fraction is one half

    Stops when the Wilson interval at the midpoint contains 0.5 or the
    bracket is narrower than tol.

    Raises:
        BracketError: if the end points do not straddle 0.5
    """
    seed = Config.DEFAULT_SEED if seed is None else seed

    def estimate(point: int, density: float) -> McEstimate:
        point_seed = int(np.random.SeedSequence(seed, spawn_key=(point,)).generate_state(1)[0])
        return mc_prob(config.with_density(density), solver, trials_per_point, point_seed, workers)

    lo, hi = bracket
    at_lo, at_hi = estimate(0, lo), estimate(1, hi)
    if not (at_lo.p_hat > 0.5 > at_hi.p_hat):
        raise BracketError("initial densities do not straddle one half", bracket=[lo, hi],
                           p_lo=at_lo.p_hat, p_hi=at_hi.p_hat)

    point = 2
    current = at_hi
    while hi - lo >= tol:
        mid = 0.5 * (lo + hi)
        current = estimate(point, mid)
        point += 1
        logger.debug(f"y50 search: density={mid:.4f} p_hat={current.p_hat:.4f}")
        if current.ci[0] <= 0.5 <= current.ci[1]:
            lo = hi = mid
            break
        if current.p_hat > 0.5:
            lo = mid
        else:
            hi = mid

    y50 = 0.5 * (lo + hi)
    logger.info(f"y50 n={config.n}: {y50:.4f} after {point} points")
    return Y50Search(y50=y50, bracket=bracket, points=point, last_estimate=current)
