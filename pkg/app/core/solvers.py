"""
Complete decision procedures for the Monte Carlo experiments

All SAT entry points take a frozen prefix: variables 1..frozen_count are
fixed to true before the search starts.
"""

from typing import Dict, List, Optional, Set, Tuple

import networkx as nx
import numpy as np

from app.core.instances import CnfFormula, GraphInstance
from app.utils.errors import CapacityError, SurfaceDomainError

MAX_ENUMERATION_VARIABLES = 24
ENUMERATION_BLOCK = 1 << 16


def _check_prefix(formula: CnfFormula, frozen_count: int) -> None:
    if not 0 <= frozen_count <= formula.n:
        raise SurfaceDomainError(f"frozen_count={frozen_count} outside [0, {formula.n}]",
                                 bound="0 <= frozen_count <= n", frozen_count=frozen_count, n=formula.n)


# ---------------------------------------------------------------------------
# DPLL
# ---------------------------------------------------------------------------

class _Dpll:
    """Unit propagation plus chronological backtracking over a value trail"""

    def __init__(self, formula: CnfFormula):
        self.clauses = [list(c) for c in formula.clauses]
        self.values = [0] * (formula.n + 1)
        self.trail: List[int] = []

    def assign(self, literal: int) -> None:
        self.values[abs(literal)] = 1 if literal > 0 else -1
        self.trail.append(abs(literal))

    def undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            self.values[self.trail.pop()] = 0

    def propagate(self) -> bool:
        """False on conflict"""
        changed = True
        while changed:
            changed = False
            for clause in self.clauses:
                free = None
                free_count = 0
                satisfied = False
                for literal in clause:
                    value = self.values[abs(literal)]
                    if value == 0:
                        free = literal
                        free_count += 1
                    elif (value > 0) == (literal > 0):
                        satisfied = True
                        break
                if satisfied:
                    continue
                if free_count == 0:
                    return False
                if free_count == 1:
                    self.assign(free)
                    changed = True
        return True

    def branch_literal(self) -> Optional[int]:
        """First free literal of the shortest open clause"""
        best, best_len = None, None
        for clause in self.clauses:
            free = []
            for literal in clause:
                value = self.values[abs(literal)]
                if value == 0:
                    free.append(literal)
                elif (value > 0) == (literal > 0):
                    free = None
                    break
            if free and (best_len is None or len(free) < best_len):
                best, best_len = free[0], len(free)
        return best

    def search(self) -> bool:
        # one frame per decision: (trail mark, literal on the trail, second branch)
        decisions: List[Tuple[int, int, bool]] = []
        while True:
            if self.propagate():
                literal = self.branch_literal()
                if literal is None:
                    return True
                decisions.append((len(self.trail), literal, False))
                self.assign(literal)
                continue
            while decisions:
                mark, literal, flipped = decisions.pop()
                self.undo(mark)
                if not flipped:
                    decisions.append((mark, -literal, True))
                    self.assign(-literal)
                    break
            else:
                return False


def dpll_sat(formula: CnfFormula, frozen_count: int = 0) -> bool:
    """
    Satisfiability with x_1..x_i fixed to true

    Args:
        formula: CNF formula
        frozen_count: Prefix length i

    Returns:
        True iff a satisfying assignment extends the prefix
    """
    _check_prefix(formula, frozen_count)
    if any(len(c) == 0 for c in formula.clauses):
        return False
    solver = _Dpll(formula)
    for v in range(1, frozen_count + 1):
        solver.assign(v)
    return solver.search()


# ---------------------------------------------------------------------------
# 2-SAT
# ---------------------------------------------------------------------------

def implication_graph(formula: CnfFormula, frozen_count: int = 0) -> nx.DiGraph:
    """Literal graph with edges -a -> b and -b -> a for every clause (a or b)"""
    graph = nx.DiGraph()
    graph.add_nodes_from(v for i in range(1, formula.n + 1) for v in (i, -i))
    for clause in formula.clauses:
        if len(clause) > 2:
            raise SurfaceDomainError(f"clause of width {len(clause)} in a 2-SAT instance",
                                     bound="clause width <= 2", clause=list(clause))
        if len(clause) == 1:
            graph.add_edge(-clause[0], clause[0])
        elif len(clause) == 2:
            a, b = clause
            graph.add_edge(-a, b)
            graph.add_edge(-b, a)
    for v in range(1, frozen_count + 1):
        graph.add_edge(-v, v)
    return graph


def two_sat_solve(formula: CnfFormula, frozen_count: int = 0) -> bool:
    """Unsatisfiable iff some variable shares a strong component with its negation"""
    _check_prefix(formula, frozen_count)
    if any(len(c) == 0 for c in formula.clauses):
        return False
    graph = implication_graph(formula, frozen_count)
    for component in nx.strongly_connected_components(graph):
        if any(-literal in component for literal in component if literal > 0):
            return False
    return True


# ---------------------------------------------------------------------------
# Coloring
# ---------------------------------------------------------------------------

def col_solve(graph: GraphInstance, colors: int) -> bool:
    """Backtracking K-colorability, vertices in decreasing degree order"""
    if colors < 1:
        raise SurfaceDomainError(f"colors={colors} must be positive", bound="K >= 1", colors=colors)
    neighbours: Dict[int, Set[int]] = {v: set() for v in range(1, graph.n + 1)}
    for a, b in graph.edges:
        neighbours[a].add(b)
        neighbours[b].add(a)
    order = sorted(neighbours, key=lambda v: -len(neighbours[v]))
    coloring: Dict[int, int] = {}
    # next color to try at each depth, and colors in use above it
    next_color = [0] * (len(order) + 1)
    used = [0] * (len(order) + 1)

    index = 0
    while index < len(order):
        vertex = order[index]
        coloring.pop(vertex, None)
        taken = {coloring[w] for w in neighbours[vertex] if w in coloring}
        # a fresh color is interchangeable with any other fresh color
        limit = min(used[index] + 1, colors)
        color = next_color[index]
        while color < limit and color in taken:
            color += 1
        if color < limit:
            coloring[vertex] = color
            next_color[index] = color + 1
            used[index + 1] = max(used[index], color + 1)
            index += 1
            next_color[index] = 0
        elif index == 0:
            return False
        else:
            index -= 1
    return True


# ---------------------------------------------------------------------------
# Frozen variables
# ---------------------------------------------------------------------------

def measure_frozen(formula: CnfFormula, frozen_count: int = 0) -> Optional[float]:
    """
    Frozen-literal density over the 2n literals, by exhaustive enumeration

    A variable is frozen when it takes one value in every satisfying
    assignment that extends the prefix; prefix variables count as frozen.

    Returns:
        frozen / (2n), or None when no assignment extends the prefix
    """
    _check_prefix(formula, frozen_count)
    n = formula.n
    if n > MAX_ENUMERATION_VARIABLES:
        raise CapacityError(f"enumeration limited to {MAX_ENUMERATION_VARIABLES} variables, got {n}",
                            n=n, limit=MAX_ENUMERATION_VARIABLES)
    if n == 0:
        return None if formula.clauses else 0.0

    free = n - frozen_count
    total = 1 << free
    by_width: Dict[int, List] = {}
    for clause in formula.clauses:
        by_width.setdefault(len(clause), []).append(clause)
    if 0 in by_width:
        return None
    groups = [np.array(c, dtype=int) for c in by_width.values()]

    seen_true = np.zeros(n, dtype=bool)
    seen_false = np.zeros(n, dtype=bool)
    any_sat = False
    shifts = np.arange(free, dtype=np.int64)
    for start in range(0, total, ENUMERATION_BLOCK):
        index = np.arange(start, min(start + ENUMERATION_BLOCK, total), dtype=np.int64)
        bits = ((index[:, None] >> shifts) & 1).astype(bool)
        assignment = np.hstack([np.ones((len(index), frozen_count), dtype=bool), bits])

        sat = np.ones(len(index), dtype=bool)
        for group in groups:
            values = assignment[:, np.abs(group) - 1]
            literal_true = values == (group > 0)
            sat &= literal_true.any(axis=2).all(axis=1)
        if not sat.any():
            continue
        any_sat = True
        solutions = assignment[sat]
        seen_true |= solutions.any(axis=0)
        seen_false |= (~solutions).any(axis=0)

    if not any_sat:
        return None
    frozen = int(np.count_nonzero(seen_true ^ seen_false))
    return frozen / (2.0 * n)
