"""
Unit tests for the random instance generators
"""

import unittest
from collections import Counter

import numpy as np
from pydantic import ValidationError
from scipy.stats import chisquare

from app.core.instances import CnfFormula, GraphInstance, gen_graph, gen_ksat, gen_two_plus_p
from app.utils.errors import SurfaceDomainError


class TestGenKsat(unittest.TestCase):

    def test_deterministic_per_seed(self):
        """Test the same seed gives the same formula"""
        self.assertEqual(gen_ksat(30, 60, 3, 7), gen_ksat(30, 60, 3, 7))
        self.assertNotEqual(gen_ksat(30, 60, 3, 7), gen_ksat(30, 60, 3, 8))

    def test_shape(self):
        """Test clause count, width, range, and distinct variables"""
        formula = gen_ksat(12, 200, 3, 1)
        self.assertEqual(formula.m, 200)
        for clause in formula.clauses:
            self.assertEqual(len(clause), 3)
            variables = [abs(lit) for lit in clause]
            self.assertEqual(len(set(variables)), 3)
            self.assertTrue(all(1 <= v <= 12 for v in variables))

    def test_large_n_path(self):
        """Test the per-clause sampler above n = 512"""
        formula = gen_ksat(1000, 50, 4, 3)
        self.assertTrue(all(len({abs(lit) for lit in c}) == 4 for c in formula.clauses))

    def test_literal_frequencies_uniform(self):
        """Test literal counts pass a chi-square test over all 2n literals"""
        n = 20
        formula = gen_ksat(n, 30000, 3, 20240601)
        counts = Counter(lit for clause in formula.clauses for lit in clause)
        observed = [counts.get(v, 0) for v in range(-n, n + 1) if v != 0]
        self.assertGreater(chisquare(observed).pvalue, 1e-3)

    def test_empty_and_invalid(self):
        """Test m = 0 and n < k"""
        self.assertEqual(gen_ksat(5, 0, 3, 0).clauses, [])
        with self.assertRaises(SurfaceDomainError):
            gen_ksat(2, 5, 3, 0)


class TestGenTwoPlusP(unittest.TestCase):

    def test_width_mixture(self):
        """Test round(p m) clauses of width 3 and the rest width 2"""
        widths = Counter(len(c) for c in gen_two_plus_p(50, 100, 0.5, 4).clauses)
        self.assertEqual(widths, {2: 50, 3: 50})
        self.assertEqual(set(len(c) for c in gen_two_plus_p(50, 40, 0.0, 4).clauses), {2})
        self.assertEqual(set(len(c) for c in gen_two_plus_p(50, 40, 1.0, 4).clauses), {3})

    def test_invalid_fraction(self):
        """Test p outside [0, 1]"""
        with self.assertRaises(SurfaceDomainError):
            gen_two_plus_p(50, 10, 1.5, 0)


class TestGenGraph(unittest.TestCase):

    def test_edges(self):
        """Test edge count, endpoint range, and no self-loops"""
        graph = gen_graph(40, 300, 9)
        self.assertEqual(graph.m, 300)
        for a, b in graph.edges:
            self.assertNotEqual(a, b)
            self.assertTrue(1 <= a <= 40 and 1 <= b <= 40)
        self.assertEqual(graph, gen_graph(40, 300, 9))

    def test_degree_moments(self):
        """Test mean degree 2m/n and a Poisson-like variance"""
        n, m = 10_000, 20_000
        degrees = gen_graph(n, m, 11).degrees()
        self.assertAlmostEqual(float(np.mean(degrees)), 2 * m / n, places=12)
        self.assertAlmostEqual(float(np.var(degrees)), 4.0, delta=0.4)


class TestModels(unittest.TestCase):

    def test_rejects_bad_literal(self):
        """Test literals must name variables 1..n"""
        with self.assertRaises(ValidationError):
            CnfFormula(n=2, clauses=[(1, 3)])
        with self.assertRaises(ValidationError):
            CnfFormula(n=2, clauses=[(1, 0)])

    def test_rejects_mixed_widths(self):
        """Test widths are uniform unless mixed"""
        with self.assertRaises(ValidationError):
            CnfFormula(n=3, clauses=[(1, 2), (1, 2, 3)])
        self.assertEqual(CnfFormula(n=3, clauses=[(1, 2), (1, 2, 3)], mixed=True).max_width, 3)

    def test_rejects_self_loop(self):
        """Test graphs refuse self-loops"""
        with self.assertRaises(ValidationError):
            GraphInstance(n=3, edges=[(2, 2)])


if __name__ == '__main__':
    unittest.main()
