"""
Algèbre linéaire exacte sur GF(q) : matrices, résolution, sous-espaces.
"""

from .matrix import (
    Matrix,
    SolveResult,
    SolveStatus,
    hstack,
    invert,
    nullspace,
    rank,
    rref,
    solve,
    vstack,
)
from .subspace import Subspace, intersect, intersection_dim, sum_dim, sum_spaces

__all__ = [
    'Matrix', 'SolveResult', 'SolveStatus', 'hstack', 'invert', 'nullspace', 'rank',
    'rref', 'solve', 'vstack', 'Subspace', 'intersect', 'intersection_dim', 'sum_dim',
    'sum_spaces',
]
