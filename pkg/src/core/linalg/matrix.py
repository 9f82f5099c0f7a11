# src/core/linalg/matrix.py
"""
Matrices denses sur GF(q) et réduction de Gauss-Jordan exacte.

Les produits passent par l'arithmétique en masse du `FieldSpec` ; la
réduction échelonnée, le noyau et l'inverse sont délégués à `galois`.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import galois
import numpy as np
from loguru import logger

from src.core.field import FieldSpec
from src.utils.error_handler import DimensionMismatchError, SingularMatrixError


@dataclass(frozen=True, eq=False)
class Matrix:
    """Matrice immuable rows x cols à coefficients dans GF(q)."""
    field: FieldSpec
    data: np.ndarray

    def __post_init__(self):
        array = self.field.check_symbols(self.data)
        if array.ndim != 2:
            raise DimensionMismatchError(f"Une matrice doit être 2-D (reçu {array.ndim}-D)")
        array = array.copy()
        array.setflags(write=False)
        object.__setattr__(self, "data", array)

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence[int]],
                  cols: Optional[int] = None) -> "Matrix":
        """
        Construit une matrice à partir d'une liste de lignes.

        Args:
            field: Corps des coefficients
            rows: Lignes (listes d'entiers dans [0, q))
            cols: Nombre de colonnes, requis si `rows` est vide

        Returns:
            Matrix: La matrice construite
        """
        if len(rows) == 0:
            if cols is None:
                raise DimensionMismatchError("Nombre de colonnes requis pour une matrice vide")
            return cls(field, np.zeros((0, cols), dtype=np.int64))
        widths = {len(row) for row in rows}
        if len(widths) != 1:
            raise DimensionMismatchError(f"Lignes de longueurs différentes : {sorted(widths)}")
        return cls(field, np.array([[int(x) for x in row] for row in rows], dtype=np.int64))

    @classmethod
    def identity(cls, field: FieldSpec, size: int) -> "Matrix":
        return cls(field, np.eye(size, dtype=np.int64))

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.data, other.data)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols} sur {self.field}, {self.to_rows()})"

    def entry(self, i: int, j: int) -> int:
        return int(self.data[i, j])

    def row(self, i: int) -> Tuple[int, ...]:
        return tuple(int(x) for x in self.data[i])

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(int(x) for x in self.data[:, j])

    def to_rows(self) -> List[List[int]]:
        return self.data.tolist()

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.data.T)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_field(other)
        if self.cols != other.rows:
            raise DimensionMismatchError(f"Produit impossible {self.shape} @ {other.shape}")
        return Matrix(self.field, self.field.matmul(self.data, other.data))

    def mul_vector(self, vector: Sequence[int]) -> Tuple[int, ...]:
        """Produit matrice-vecteur A x."""
        if len(vector) != self.cols:
            raise DimensionMismatchError(f"Vecteur de longueur {len(vector)}, attendu {self.cols}")
        column = np.asarray(vector, dtype=np.int64)[:, None]
        return tuple(int(x) for x in self.field.matmul(self.data, column)[:, 0])

    def select_rows(self, indices: Sequence[int]) -> "Matrix":
        return Matrix(self.field, self.data[list(indices), :].reshape(len(indices), self.cols))

    def select_columns(self, indices: Sequence[int]) -> "Matrix":
        return Matrix(self.field, self.data[:, list(indices)].reshape(self.rows, len(indices)))

    def _check_field(self, other: "Matrix") -> None:
        if other.field != self.field:
            raise DimensionMismatchError(f"Corps différents : {self.field} et {other.field}")


def vstack(matrices: Sequence[Matrix]) -> Matrix:
    """Empile verticalement des matrices de même largeur."""
    first = matrices[0]
    for other in matrices[1:]:
        first._check_field(other)
        if other.cols != first.cols:
            raise DimensionMismatchError(f"Largeurs différentes : {first.cols} et {other.cols}")
    return Matrix(first.field, np.vstack([m.data for m in matrices]))


def hstack(matrices: Sequence[Matrix]) -> Matrix:
    """Juxtapose horizontalement des matrices de même hauteur."""
    first = matrices[0]
    for other in matrices[1:]:
        first._check_field(other)
        if other.rows != first.rows:
            raise DimensionMismatchError(f"Hauteurs différentes : {first.rows} et {other.rows}")
    return Matrix(first.field, np.hstack([m.data for m in matrices]))


@lru_cache(maxsize=None)
def galois_field(field: FieldSpec):
    """
    Classe de tableaux `galois` équivalente à `field`.

    Même représentation entière des éléments et, pour GF(2^m), même
    polynôme de réduction que la table du projet.
    """
    if field.is_binary and field.degree > 1:
        gf = galois.GF(2 ** field.degree, irreducible_poly=field.reduction_polynomial)
    else:
        gf = galois.GF(field.order)
    logger.debug(f"Classe galois créée pour {field}")
    return gf


def _to_int_array(array) -> np.ndarray:
    return np.asarray(array.view(np.ndarray), dtype=np.int64)


def _rref_array(field: FieldSpec, array: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    work = np.array(array, dtype=np.int64)
    if work.size == 0:
        return work, []
    reduced = _to_int_array(galois_field(field)(work).row_reduce())
    pivots: List[int] = []
    for row in reduced:
        nonzero = np.flatnonzero(row)
        if nonzero.size == 0:
            break
        pivots.append(int(nonzero[0]))
    return reduced, pivots


def rref(matrix: Matrix) -> Tuple[Matrix, Tuple[int, ...]]:
    """
    Forme échelonnée réduite sur GF(q).

    Args:
        matrix: Matrice quelconque

    Returns:
        Tuple[Matrix, Tuple[int, ...]]: (forme réduite, colonnes pivots croissantes)
    """
    reduced, pivots = _rref_array(matrix.field, matrix.data)
    return Matrix(matrix.field, reduced), tuple(pivots)


def rank(matrix: Matrix) -> int:
    return len(_rref_array(matrix.field, matrix.data)[1])


class SolveStatus(str, Enum):
    """Issue d'une résolution de système linéaire."""
    UNIQUE = "unique"
    PARAMETRIC = "parametric"
    INCONSISTENT = "inconsistent"


@dataclass(frozen=True)
class SolveResult:
    """
    Résultat de `solve`.

    `particular` est la solution obtenue en fixant toutes les variables
    libres à 0 (None si le système est incohérent) ; `kernel` est une base
    du noyau de A.
    """
    status: SolveStatus
    particular: Optional[Tuple[int, ...]]
    kernel: "Subspace"

    @property
    def consistent(self) -> bool:
        return self.status != SolveStatus.INCONSISTENT


def _kernel_from_rref(field: FieldSpec, reduced: np.ndarray, pivots: Sequence[int],
                      cols: int) -> "Subspace":
    from src.core.linalg.subspace import Subspace

    pivot_set = set(pivots)
    free_columns = [c for c in range(cols) if c not in pivot_set]
    basis = []
    for free in free_columns:
        vector = [0] * cols
        vector[free] = 1
        for r, pivot in enumerate(pivots):
            vector[pivot] = field.neg(int(reduced[r, free]))
        basis.append(vector)
    return Subspace(cols, Matrix.from_rows(field, basis, cols=cols))


def solve(matrix: Matrix, rhs: Sequence[int]) -> SolveResult:
    """
    Résout A x = b de manière déterministe.

    Args:
        matrix: Matrice A (m x n)
        rhs: Second membre b de longueur m

    Returns:
        SolveResult: Statut, solution particulière (variables libres à 0) et noyau
    """
    if len(rhs) != matrix.rows:
        raise DimensionMismatchError(
            f"Second membre de longueur {len(rhs)} pour une matrice {matrix.shape}")
    field = matrix.field
    augmented = np.hstack([matrix.data, np.asarray(rhs, dtype=np.int64).reshape(-1, 1)])
    reduced, pivots = _rref_array(field, field.check_symbols(augmented))
    cols = matrix.cols

    # Le bloc gauche de la forme réduite est la forme réduite de A
    coefficient_pivots = [p for p in pivots if p < cols]
    kernel = _kernel_from_rref(field, reduced[:, :cols], coefficient_pivots, cols)

    if cols in pivots:
        logger.debug(f"Système {matrix.shape} incohérent")
        return SolveResult(SolveStatus.INCONSISTENT, None, kernel)

    solution = [0] * cols
    for r, pivot in enumerate(coefficient_pivots):
        solution[pivot] = int(reduced[r, cols])
    status = SolveStatus.UNIQUE if len(coefficient_pivots) == cols else SolveStatus.PARAMETRIC
    return SolveResult(status, tuple(solution), kernel)


def nullspace(matrix: Matrix) -> "Subspace":
    """Noyau {x : A x = 0} comme sous-espace de GF(q)^cols."""
    from src.core.linalg.subspace import Subspace

    field = matrix.field
    if matrix.rows == 0:
        return Subspace(matrix.cols, Matrix.identity(field, matrix.cols))
    if matrix.cols == 0:
        return Subspace.zero(field, 0)
    basis = _to_int_array(galois_field(field)(matrix.data).null_space())
    return Subspace.span(field, matrix.cols, basis.tolist())


def invert(matrix: Matrix) -> Matrix:
    """
    Inverse d'une matrice carrée de rang plein.

    Raises:
        DimensionMismatchError: Matrice non carrée
        SingularMatrixError: Matrice singulière
    """
    if matrix.rows != matrix.cols:
        raise DimensionMismatchError(f"Inversion d'une matrice non carrée {matrix.shape}")
    if matrix.rows == 0:
        return matrix
    try:
        inverse = np.linalg.inv(galois_field(matrix.field)(matrix.data))
    except np.linalg.LinAlgError as e:
        raise SingularMatrixError(f"Matrice {matrix.shape} singulière sur {matrix.field}") from e
    return Matrix(matrix.field, _to_int_array(inverse))
