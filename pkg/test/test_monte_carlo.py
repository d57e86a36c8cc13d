"""
Unit tests for the Monte Carlo estimators
"""

import unittest

import numpy as np
import pytest
from pydantic import ValidationError

from app.core.instances import CnfFormula
from app.core.monte_carlo import (
    GeneratorConfig,
    McEstimate,
    Model,
    find_y50,
    generate,
    mc_prob,
    resolve_solver,
    trial_seed,
    wilson_interval,
)
from app.utils.errors import BracketError


class TestWilsonInterval(unittest.TestCase):

    def test_contains_estimate(self):
        """Test the interval contains p_hat and stays in [0, 1]"""
        for successes, trials in [(0, 10), (5, 10), (10, 10), (37, 200)]:
            lo, hi = wilson_interval(successes, trials)
            self.assertTrue(0.0 <= lo <= successes / trials <= hi <= 1.0)

    def test_symmetric_at_half(self):
        """Test symmetry about 1/2"""
        lo, hi = wilson_interval(50, 100)
        self.assertAlmostEqual(0.5 - lo, hi - 0.5, places=12)
        self.assertAlmostEqual(hi - lo, 0.19, delta=0.01)

    def test_rejects_invalid_estimate(self):
        """Test McEstimate refuses an interval that misses p_hat"""
        with self.assertRaises(ValidationError):
            McEstimate(trials=10, successes=5, p_hat=0.5, ci=(0.6, 0.8), seed=0)


class TestMcProb(unittest.TestCase):

    def setUp(self):
        """Set up test fixtures"""
        self.config = GeneratorConfig(model=Model.KSAT, n=40, density=1.2, k=2)

    def test_reproducible(self):
        """Test the same seed reproduces the estimate"""
        first = mc_prob(self.config, trials=60, seed=3)
        second = mc_prob(self.config, trials=60, seed=3)
        self.assertEqual(first, second)

    def test_workers_match_serial(self):
        """Test the parallel run equals the serial run"""
        serial = mc_prob(self.config, trials=40, seed=8, workers=1)
        parallel = mc_prob(self.config, trials=40, seed=8, workers=2)
        self.assertEqual(serial.successes, parallel.successes)

    def test_empty_family_always_satisfiable(self):
        """Test density 0 gives p_hat = 1"""
        estimate = mc_prob(self.config.with_density(0.0), trials=25, seed=1)
        self.assertEqual(estimate.p_hat, 1.0)
        self.assertEqual(estimate.ci[1], 1.0)

    def test_low_and_high_density(self):
        """Test 2-SAT is almost always SAT at y = 0.3 and UNSAT at y = 3"""
        self.assertGreater(mc_prob(self.config.with_density(0.3), trials=100, seed=2).p_hat, 0.9)
        self.assertLess(mc_prob(self.config.with_density(3.0), trials=100, seed=2).p_hat, 0.1)

    def test_coloring_family(self):
        """Test 3-COL of sparse graphs"""
        config = GeneratorConfig(model=Model.KCOL, n=30, density=0.5, colors=3)
        self.assertGreater(mc_prob(config, trials=30, seed=4).p_hat, 0.9)

    def test_solver_resolution(self):
        """Test auto honours the prefix through DPLL for 3-SAT"""
        config = GeneratorConfig(model=Model.KSAT, n=3, density=0.0, k=3, frozen_count=1)
        decide = resolve_solver(config)
        self.assertFalse(decide(CnfFormula(n=3, clauses=[(-1, -1, -1)])))
        self.assertTrue(decide(CnfFormula(n=3, clauses=[(-1, 2, 3)])))

    def test_prefix_exceeds_n(self):
        """Test frozen_count > n is rejected"""
        with self.assertRaises(ValidationError):
            GeneratorConfig(n=5, density=1.0, frozen_count=6)


class TestFindY50(unittest.TestCase):

    def test_non_bracketing_interval(self):
        """Test a bracket entirely above the transition is refused"""
        config = GeneratorConfig(model=Model.KSAT, n=50, density=1.0, k=2)
        with self.assertRaises(BracketError):
            find_y50(config, trials_per_point=100, seed=1, bracket=(2.5, 3.0))

    def test_deterministic(self):
        """Test the search is reproducible for a fixed seed"""
        config = GeneratorConfig(model=Model.KSAT, n=30, density=1.0, k=2)
        first = find_y50(config, trials_per_point=80, tol=0.05, seed=5)
        second = find_y50(config, trials_per_point=80, tol=0.05, seed=5)
        self.assertEqual(first, second)
        self.assertTrue(0.8 <= first.y50 <= 2.0)

    @pytest.mark.slow
    def test_two_sat_y50_at_n100(self):
        """Test the empirical y50 at n = 100 sits near the scaling law"""
        config = GeneratorConfig(model=Model.KSAT, n=100, density=1.0, k=2)
        search = find_y50(config, trials_per_point=2000, tol=0.01, seed=20240601)
        self.assertAlmostEqual(search.y50, 1.36, delta=0.08)


def relabel(formula, labels):
    """Rename variable v to labels[v - 1], keeping every sign"""
    clauses = [tuple(int(labels[abs(l) - 1]) * (1 if l > 0 else -1) for l in c) for c in formula.clauses]
    return CnfFormula(n=formula.n, clauses=clauses, mixed=formula.mixed)


class TestRelabeling(unittest.TestCase):

    def setUp(self):
        """Set up test fixtures"""
        self.rng = np.random.default_rng(11)
        self.seed = 5
        self.trials = 60

    def decisions(self, config, labels_for):
        decide = resolve_solver(config)
        original, renamed = [], []
        for t in range(self.trials):
            formula = generate(config, trial_seed(self.seed, t))
            original.append(decide(formula))
            renamed.append(decide(relabel(formula, labels_for())))
        return original, renamed

    def test_permuted_variables(self):
        """Test a random renaming at n = 20 keeps each trial's outcome and the estimate"""
        config = GeneratorConfig(model=Model.KSAT, n=20, density=4.26, k=3)
        original, renamed = self.decisions(config, lambda: self.rng.permutation(config.n) + 1)
        self.assertEqual(original, renamed)

        estimate = mc_prob(config, trials=self.trials, seed=self.seed)
        self.assertEqual(estimate.successes, sum(renamed))
        self.assertTrue(0 < estimate.successes < self.trials)

    def test_permuted_free_variables_under_prefix(self):
        """Test renaming only the variables outside a frozen prefix"""
        config = GeneratorConfig(model=Model.KSAT, n=20, density=3.0, k=3, frozen_count=5)
        prefix = np.arange(1, 6)
        original, renamed = self.decisions(
            config, lambda: np.concatenate([prefix, self.rng.permutation(15) + 6]))
        self.assertEqual(original, renamed)
        self.assertEqual(mc_prob(config, trials=self.trials, seed=self.seed).successes, sum(renamed))


if __name__ == '__main__':
    unittest.main()
