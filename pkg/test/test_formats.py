"""
Unit tests for DIMACS, edge-list and result-file formats
"""

import json
import os
import tempfile
import unittest
from unittest import mock

from hypothesis import given, settings
from hypothesis import strategies as st

from app.core.instances import CnfFormula, GraphInstance
from app.utils.errors import ParseError
from app.utils.formats import (
    emit,
    parse_dimacs,
    parse_edge_list,
    render,
    write_dimacs,
    write_edge_list,
)


@st.composite
def formulas(draw):
    n = draw(st.integers(min_value=3, max_value=12))
    literal = st.integers(min_value=1, max_value=n).flatmap(lambda v: st.sampled_from([v, -v]))
    clauses = draw(st.lists(st.tuples(literal, literal, literal), max_size=20))
    return CnfFormula(n=n, clauses=clauses)


class TestDimacs(unittest.TestCase):

    def test_parse_example(self):
        """Test a minimal formula"""
        formula = parse_dimacs("p cnf 2 1\n1 -2 0\n")
        self.assertEqual(formula.n, 2)
        self.assertEqual(formula.clauses, [(1, -2)])

    def test_comments_and_split_clauses(self):
        """Test comment lines, clauses across lines, and the '%' terminator"""
        text = "c header\np cnf 3 2\n1 -2\n3 0 -1\n2 0\n%\n0\n"
        self.assertEqual(parse_dimacs(text).clauses, [(1, -2, 3), (-1, 2)])

    def test_count_mismatch(self):
        """Test the header line is reported on a clause-count mismatch"""
        with self.assertRaises(ParseError) as ctx:
            parse_dimacs("p cnf 2 2\n1 -2 0\n")
        self.assertEqual(ctx.exception.line, 1)

    def test_bad_literal(self):
        """Test a non-integer literal reports its line"""
        with self.assertRaises(ParseError) as ctx:
            parse_dimacs("p cnf 2 1\n1 x 0\n")
        self.assertEqual(ctx.exception.line, 2)
        self.assertIn("line 2", str(ctx.exception))

    def test_structural_errors(self):
        """Test missing header, unterminated clause, and out-of-range literal"""
        for text in ["1 2 0\n", "p cnf 2 1\n1 2\n", "p cnf 2 1\n1 3 0\n", "p cnf x 1\n1 0\n",
                     "p cnf 2 1\np cnf 2 1\n1 0\n"]:
            with self.assertRaises(ParseError, msg=text):
                parse_dimacs(text)

    def test_mixed_widths(self):
        """Test 2/3 mixtures parse and other mixtures fail"""
        self.assertTrue(parse_dimacs("p cnf 3 2\n1 2 0\n1 2 3 0\n").mixed)
        with self.assertRaises(ParseError):
            parse_dimacs("p cnf 3 2\n1 0\n1 2 3 0\n")

    @settings(max_examples=50, deadline=None)
    @given(formulas())
    def test_round_trip(self, formula):
        """Test parse(write(F)) == F"""
        self.assertEqual(parse_dimacs(write_dimacs(formula)), formula)


class TestEdgeList(unittest.TestCase):

    def test_round_trip(self):
        """Test vertex count and edges survive a round trip"""
        graph = GraphInstance(n=5, edges=[(1, 2), (2, 3), (1, 2)])
        self.assertEqual(parse_edge_list(write_edge_list(graph)), graph)

    def test_inferred_vertex_count(self):
        """Test n defaults to the largest endpoint"""
        self.assertEqual(parse_edge_list("1 4\n2 3\n").n, 4)

    def test_errors(self):
        """Test self-loops and short lines"""
        with self.assertRaises(ParseError):
            parse_edge_list("2 2\n")
        with self.assertRaises(ParseError):
            parse_edge_list("1\n")


class TestResultFiles(unittest.TestCase):

    def test_csv_layout(self):
        """Test the config echo line, header, and float formatting"""
        text = render([{"a": 1, "b": 1 / 3}], "csv", {"command": "demo"})
        lines = text.splitlines()
        self.assertTrue(lines[0].startswith("# config: "))
        self.assertEqual(json.loads(lines[0][len("# config: "):]), {"command": "demo"})
        self.assertEqual(lines[1], "a,b")
        self.assertEqual(lines[2], "1,0.333333333333")

    def test_empty_csv_has_header(self):
        """Test an empty record set still carries the header row"""
        lines = render([], "csv", {}, ["x", "z"]).splitlines()
        self.assertEqual(lines[1:], ["x,z"])

    def test_json_layout(self):
        """Test the JSON object carries config and records"""
        payload = json.loads(render([{"v": 2.0}], "json", {"k": 3}))
        self.assertEqual(payload, {"config": {"k": 3}, "records": [{"v": 2.0}]})

    def test_unknown_format(self):
        """Test an unknown format is refused"""
        with self.assertRaises(ValueError):
            render([], "xml")

    def test_emit_to_output_dir(self):
        """Test bare names land under PHASE_LAB_OUTPUT_DIR"""
        with tempfile.TemporaryDirectory() as tmp:
            with mock.patch.dict(os.environ, {"PHASE_LAB_OUTPUT_DIR": tmp}):
                text = emit([{"a": 1}], "csv", "out.csv", {})
            with open(os.path.join(tmp, "out.csv"), encoding="utf-8") as f:
                self.assertEqual(f.read(), text)


if __name__ == '__main__':
    unittest.main()
