"""
File formats: DIMACS CNF, two-column edge lists, and CSV/JSON result files
"""

import csv
import io
import json
import os
from typing import Any, Dict, List, Optional, Sequence

from app.config import Config
from app.core.instances import CnfFormula, GraphInstance
from app.utils.errors import ParseError
from app.utils.logger import setup_logger

logger = setup_logger(__name__)


# ---------------------------------------------------------------------------
# DIMACS CNF
# ---------------------------------------------------------------------------

def parse_dimacs(text: str) -> CnfFormula:
    """
    Parse DIMACS CNF text

    Clauses are zero-terminated and may span lines. Comment lines start
    with 'c'; a '%' line ends the body.

    Raises:
        ParseError: malformed header or clause, or a header/body mismatch
    """
    n = m = None
    clauses: List[tuple] = []
    current: List[int] = []
    header_line = last_line = 0

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("%"):
            break
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if n is not None:
                raise ParseError("duplicate problem line", line_no)
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"invalid problem line: {line}", line_no)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"non-integer header field: {line}", line_no)
            if n < 0 or m < 0:
                raise ParseError(f"negative header field: {line}", line_no)
            header_line = line_no
            continue
        if n is None:
            raise ParseError("clause before the problem line", line_no)
        for token in line.split():
            try:
                literal = int(token)
            except ValueError:
                raise ParseError(f"invalid literal {token!r}", line_no)
            if literal == 0:
                clauses.append(tuple(current))
                current = []
            elif abs(literal) > n:
                raise ParseError(f"literal {literal} exceeds declared {n} variables", line_no)
            else:
                current.append(literal)
        last_line = line_no

    if n is None:
        raise ParseError("missing problem line", 1)
    if current:
        raise ParseError("last clause is not zero-terminated", last_line)
    if len(clauses) != m:
        raise ParseError(f"header declares {m} clauses, body has {len(clauses)}", header_line)

    widths = {len(c) for c in clauses}
    mixed = len(widths) > 1
    if mixed and not widths <= {2, 3}:
        raise ParseError(f"non-uniform clause widths {sorted(widths)}", header_line)
    return CnfFormula(n=n, clauses=clauses, mixed=mixed)


def write_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.n} {formula.m}"]
    lines.extend(" ".join(str(lit) for lit in clause) + " 0" for clause in formula.clauses)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Edge lists
# ---------------------------------------------------------------------------

def parse_edge_list(text: str) -> GraphInstance:
    """
    Two integers per line; '# vertices N' fixes the vertex count,
    otherwise it is the largest endpoint
    """
    n: Optional[int] = None
    edges = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "vertices":
                try:
                    n = int(parts[1])
                except ValueError:
                    raise ParseError(f"invalid vertex count: {line}", line_no)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected two endpoints, got {len(parts)} fields", line_no)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer endpoint: {line}", line_no)
        if a == b or a < 1 or b < 1 or (n is not None and max(a, b) > n):
            raise ParseError(f"invalid edge ({a}, {b})", line_no)
        edges.append((a, b))
    if n is None:
        n = max((max(e) for e in edges), default=1)
    return GraphInstance(n=n, edges=edges)


def write_edge_list(graph: GraphInstance) -> str:
    lines = [f"# vertices {graph.n}"]
    lines.extend(f"{a} {b}" for a, b in graph.edges)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Result files
# ---------------------------------------------------------------------------

def _format_value(value: Any) -> Any:
    if isinstance(value, float):
        return f"%.{Config.OUTPUT_DIGITS}g" % value
    return value


def _round_value(value: Any) -> Any:
    if isinstance(value, float):
        return float(f"%.{Config.OUTPUT_DIGITS}g" % value)
    if isinstance(value, dict):
        return {k: _round_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round_value(v) for v in value]
    return value


def resolve_output_path(path: str) -> str:
    """Bare file names go to the output directory"""
    if os.path.dirname(path):
        return path
    return os.path.join(os.getenv("PHASE_LAB_OUTPUT_DIR", Config.OUTPUT_DIR), path)


def render(records: Sequence[Dict[str, Any]], fmt: str = "csv",
           config: Optional[Dict[str, Any]] = None, columns: Optional[Sequence[str]] = None) -> str:
    """
    Serialize records

    CSV: '#' lines echoing the config as JSON, a header row, then one row
    per record. JSON: {"config": ..., "records": [...]}.
    """
    config = config or {}
    if fmt == "json":
        payload = {"config": _round_value(config), "records": [_round_value(r) for r in records]}
        return json.dumps(payload, indent=2, sort_keys=False) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown output format {fmt!r}")

    if columns is None:
        columns = list(records[0].keys()) if records else []
    buffer = io.StringIO()
    buffer.write(f"# config: {json.dumps(_round_value(config), sort_keys=True)}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for record in records:
        writer.writerow([_format_value(record.get(c, "")) for c in columns])
    return buffer.getvalue()


def emit(records: Sequence[Dict[str, Any]], fmt: str = "csv", path: Optional[str] = None,
         config: Optional[Dict[str, Any]] = None, columns: Optional[Sequence[str]] = None) -> str:
    """
    Render records and write them to path when given

    Returns:
        The rendered text
    """
    text = render(records, fmt, config, columns)
    if path:
        target = resolve_output_path(path)
        directory = os.path.dirname(target)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(target, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info(f"Wrote {len(records)} records to {target}")
    return text
