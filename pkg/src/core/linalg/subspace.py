# src/core/linalg/subspace.py
"""
Sous-espaces de GF(q)^B : somme, intersection (construction de Zassenhaus).
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.core.field import FieldSpec
from src.core.linalg.matrix import Matrix, _rref_array, rank, vstack
from src.utils.error_handler import DimensionMismatchError, ParameterError


@dataclass(frozen=True, eq=False)
class Subspace:
    """Sous-espace décrit par une base (lignes linéairement indépendantes)."""
    ambient_dim: int
    basis: Matrix

    def __post_init__(self):
        if self.basis.cols != self.ambient_dim:
            raise DimensionMismatchError(
                f"Base de largeur {self.basis.cols} pour un espace ambiant de dimension {self.ambient_dim}")
        if rank(self.basis) != self.basis.rows:
            raise ParameterError("Les vecteurs de base ne sont pas linéairement indépendants")

    @classmethod
    def span(cls, field: FieldSpec, ambient_dim: int, vectors: Sequence[Sequence[int]]) -> "Subspace":
        """
        Sous-espace engendré par une famille quelconque de vecteurs.

        Args:
            field: Corps de base
            ambient_dim: Dimension de l'espace ambiant
            vectors: Générateurs (éventuellement liés ou nuls)

        Returns:
            Subspace: Le sous-espace, avec une base échelonnée réduite
        """
        generators = Matrix.from_rows(field, vectors, cols=ambient_dim)
        if generators.cols != ambient_dim:
            raise DimensionMismatchError(f"Vecteurs de longueur {generators.cols}, attendu {ambient_dim}")
        reduced, pivots = _rref_array(field, generators.data)
        return cls(ambient_dim, Matrix(field, reduced[:len(pivots)]))

    @classmethod
    def zero(cls, field: FieldSpec, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, Matrix.zeros(field, 0, ambient_dim))

    @property
    def field(self) -> FieldSpec:
        return self.basis.field

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self):
        return [self.basis.row(i) for i in range(self.dim)]

    def contains(self, vector: Sequence[int]) -> bool:
        candidate = Matrix.from_rows(self.field, [vector])
        return rank(vstack([self.basis, candidate])) == self.dim

    def same_span(self, other: "Subspace") -> bool:
        _check_compatible([self, other])
        return self.dim == other.dim and sum_dim([self, other]) == self.dim

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.same_span(other)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambiant={self.ambient_dim}, {self.vectors()})"


def _check_compatible(spaces: Sequence[Subspace]) -> None:
    if not spaces:
        raise ParameterError("Liste de sous-espaces vide")
    first = spaces[0]
    for other in spaces[1:]:
        if other.ambient_dim != first.ambient_dim:
            raise DimensionMismatchError(
                f"Dimensions ambiantes différentes : {first.ambient_dim} et {other.ambient_dim}")
        if other.field != first.field:
            raise DimensionMismatchError(f"Corps différents : {first.field} et {other.field}")


def sum_dim(spaces: Sequence[Subspace]) -> int:
    """Dimension de la somme des sous-espaces (rang des bases empilées)."""
    _check_compatible(spaces)
    return rank(vstack([s.basis for s in spaces]))


def sum_spaces(spaces: Sequence[Subspace]) -> Subspace:
    """Somme des sous-espaces, avec une base réduite."""
    _check_compatible(spaces)
    stacked = vstack([s.basis for s in spaces])
    return Subspace.span(stacked.field, spaces[0].ambient_dim, stacked.to_rows())


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """
    Intersection de deux sous-espaces par la construction de Zassenhaus.

    On réduit la matrice par blocs [[A, A], [B, 0]] : les lignes dont la
    moitié gauche est nulle portent une base de l'intersection à droite.
    """
    _check_compatible([a, b])
    field, n = a.field, a.ambient_dim
    top = np.hstack([a.basis.data, a.basis.data])
    bottom = np.hstack([b.basis.data, np.zeros_like(b.basis.data)])
    reduced, _ = _rref_array(field, np.vstack([top, bottom]))
    rows = [row[n:] for row in reduced if not row[:n].any() and row[n:].any()]
    if not rows:
        return Subspace.zero(field, n)
    return Subspace(n, Matrix(field, np.array(rows, dtype=np.int64)))


def intersection_dim(a: Subspace, b: Subspace) -> int:
    """dim(A ∩ B) = dim A + dim B - dim(A + B), sans construire l'intersection."""
    return a.dim + b.dim - sum_dim([a, b])
