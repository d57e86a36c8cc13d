"""Random CNF formulas and random graphs"""

from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.utils.errors import SurfaceDomainError

Clause = Tuple[int, ...]


class CnfFormula(BaseModel):
    """
    CNF over variables 1..n; literal -v is the negation of v

    Widths are uniform except in (2+p) mixtures, which carry widths 2 and 3.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0)
    clauses: List[Clause]
    mixed: bool = False

    @model_validator(mode="after")
    def _check_literals(self):
        widths = set()
        for clause in self.clauses:
            for literal in clause:
                if literal == 0 or abs(literal) > self.n:
                    raise ValueError(f"literal {literal} outside variables 1..{self.n}")
            widths.add(len(clause))
        if self.mixed:
            if not widths <= {2, 3}:
                raise ValueError(f"mixed formula has widths {sorted(widths)}")
        elif len(widths) > 1:
            raise ValueError(f"non-uniform clause widths {sorted(widths)}")
        return self

    @property
    def m(self) -> int:
        return len(self.clauses)

    @property
    def max_width(self) -> int:
        return max((len(c) for c in self.clauses), default=0)


class GraphInstance(BaseModel):
    """Multigraph on vertices 1..n without self-loops"""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    edges: List[Tuple[int, int]]

    @model_validator(mode="after")
    def _check_edges(self):
        for a, b in self.edges:
            if not (1 <= a <= self.n and 1 <= b <= self.n):
                raise ValueError(f"edge ({a}, {b}) outside vertices 1..{self.n}")
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
        return self

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        counts = np.zeros(self.n + 1, dtype=int)
        for a, b in self.edges:
            counts[a] += 1
            counts[b] += 1
        return counts[1:]


def _random_clauses(rng: np.random.Generator, n: int, m: int, k: int) -> List[Clause]:
    if m == 0:
        return []
    if n <= 512:
        # argsort of uniform keys gives a random k-subset per row
        variables = np.argsort(rng.random((m, n)), axis=1)[:, :k] + 1
    else:
        variables = np.array([rng.choice(n, size=k, replace=False) + 1 for _ in range(m)])
    signs = np.where(rng.random((m, k)) < 0.5, -1, 1)
    return [tuple(int(v) for v in row) for row in variables * signs]


def gen_ksat(n: int, m: int, k: int, seed) -> CnfFormula:
    """
    Random k-SAT: m clauses of k distinct variables, each negated with probability 1/2

    Args:
        seed: int or numpy SeedSequence
    """
    if k < 1 or n < k:
        raise SurfaceDomainError(f"need n >= k >= 1, got n={n}, k={k}", bound="n >= k >= 1", n=n, k=k)
    if m < 0:
        raise SurfaceDomainError(f"m={m} must be non-negative", bound="m >= 0", m=m)
    rng = np.random.default_rng(seed)
    return CnfFormula(n=n, clauses=_random_clauses(rng, n, m, k))


def gen_two_plus_p(n: int, m: int, p: float, seed) -> CnfFormula:
    """round(p m) width-3 clauses and the rest width-2, in shuffled order"""
    if not 0.0 <= p <= 1.0:
        raise SurfaceDomainError(f"p={p} outside [0, 1]", bound="0 <= p <= 1", p=p)
    if n < 3:
        raise SurfaceDomainError(f"need n >= 3, got n={n}", bound="n >= 3", n=n)
    rng = np.random.default_rng(seed)
    m3 = int(round(p * m))
    clauses = _random_clauses(rng, n, m3, 3) + _random_clauses(rng, n, m - m3, 2)
    order = rng.permutation(len(clauses))
    return CnfFormula(n=n, clauses=[clauses[i] for i in order], mixed=True)


def gen_graph(n: int, m: int, seed) -> GraphInstance:
    """m edges with uniform distinct endpoints; repeated edges are kept"""
    if n < 2:
        raise SurfaceDomainError(f"need n >= 2, got n={n}", bound="n >= 2", n=n)
    rng = np.random.default_rng(seed)
    first = rng.integers(1, n + 1, size=m)
    # second endpoint uniform over the other n - 1 vertices
    offset = rng.integers(1, n, size=m)
    second = (first - 1 + offset) % n + 1
    return GraphInstance(n=n, edges=[(int(a), int(b)) for a, b in zip(first, second)])
