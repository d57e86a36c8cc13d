"""Phase-transition lab: K-SAT/K-COL frozen-variable numerics and Monte Carlo"""

__version__ = "1.0.0"
