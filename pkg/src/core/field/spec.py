# src/core/field/spec.py
"""
Descripteur de corps fini GF(q) et arithmétique par tables log/antilog.

Deux familles sont prises en charge :
    - les corps premiers GF(p), p premier, p <= 65521 ;
    - les extensions binaires GF(2^m), m = 1..16, avec le polynôme de
      réduction fixé par `REDUCTION_POLYNOMIALS`.

Les éléments sont de simples entiers dans [0, q). Les opérations scalaires
travaillent sur des `int`, les opérations « en masse » sur des tableaux
numpy int64 (un symbole par case).
"""

import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from typing import List, Tuple

import numpy as np
from loguru import logger

from src.core.field.tables import (
    MAX_DEGREE,
    MAX_ORDER,
    REDUCTION_POLYNOMIALS,
    gf2_multiply,
    is_irreducible_gf2,
    is_prime,
    prime_factors,
)
from src.utils.error_handler import (
    FieldTooSmallError,
    ParameterError,
    ZeroDivisionFieldError,
)

_SPEC_PATTERN = re.compile(r"^\s*(prime|gf2)\s*:\s*(\d+)\s*$")


class FieldKind(str, Enum):
    """Nature du corps."""
    PRIME = "prime"
    BINARY_EXTENSION = "gf2"


@dataclass(frozen=True)
class FieldSpec:
    """Descripteur immuable d'un corps fini GF(q)."""
    kind: FieldKind
    characteristic: int
    degree: int = 1
    reduction_polynomial: int = 0  # Masque binaire, extensions binaires uniquement

    def __post_init__(self):
        if self.kind == FieldKind.PRIME:
            if self.degree != 1:
                raise ParameterError("Un corps premier est de degré 1")
            if not is_prime(self.characteristic):
                raise ParameterError(f"{self.characteristic} n'est pas premier")
            if self.characteristic > MAX_ORDER:
                raise ParameterError(f"Ordre {self.characteristic} > {MAX_ORDER}")
        else:
            if self.characteristic != 2:
                raise ParameterError("Une extension binaire est de caractéristique 2")
            if not 1 <= self.degree <= MAX_DEGREE:
                raise ParameterError(f"Degré {self.degree} hors de 1..{MAX_DEGREE}")
            expected = REDUCTION_POLYNOMIALS[self.degree]
            if self.reduction_polynomial != expected:
                raise ParameterError(
                    f"Polynôme {self.reduction_polynomial:#x} différent de la table "
                    f"({expected:#x}) pour m={self.degree}")
            if not is_irreducible_gf2(self.reduction_polynomial):
                raise ParameterError(f"Polynôme {self.reduction_polynomial:#x} réductible")

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        """Retourne GF(p) (instance partagée, tables calculées une seule fois)."""
        return _cached_field(FieldKind.PRIME, p, 1, 0)

    @classmethod
    def binary(cls, m: int) -> "FieldSpec":
        """Retourne GF(2^m) avec le polynôme de réduction de la table."""
        if m not in REDUCTION_POLYNOMIALS:
            raise ParameterError(f"Degré {m} non pris en charge (1..{MAX_DEGREE})")
        return _cached_field(FieldKind.BINARY_EXTENSION, 2, m, REDUCTION_POLYNOMIALS[m])

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """
        Analyse la forme sérialisée du manifeste.

        Args:
            text: `prime:<p>` ou `gf2:<m>`

        Returns:
            FieldSpec: Le corps décrit
        """
        match = _SPEC_PATTERN.match(text or "")
        if not match:
            raise ParameterError(f"Spécification de corps invalide : '{text}'")
        kind, number = match.group(1), int(match.group(2))
        if kind == "prime":
            return cls.prime(number)
        return cls.binary(number)

    @classmethod
    def smallest_at_least(cls, min_order: int) -> "FieldSpec":
        """
        Plus petit corps pris en charge d'ordre >= min_order.

        Les puissances de deux sont préférées en cas d'égalité (q = 2).
        """
        for q in range(max(2, min_order), MAX_ORDER + 1):
            if q & (q - 1) == 0:
                return cls.binary(q.bit_length() - 1)
            if is_prime(q):
                return cls.prime(q)
        raise FieldTooSmallError(f"Aucun corps pris en charge d'ordre >= {min_order}")

    def __str__(self) -> str:
        if self.kind == FieldKind.PRIME:
            return f"prime:{self.characteristic}"
        return f"gf2:{self.degree}"

    # ------------------------------------------------------------------
    # Propriétés
    # ------------------------------------------------------------------

    @property
    def order(self) -> int:
        return self.characteristic ** self.degree

    @property
    def is_binary(self) -> bool:
        return self.kind == FieldKind.BINARY_EXTENSION

    def contains(self, value: int) -> bool:
        return 0 <= value < self.order

    def check_symbols(self, values: np.ndarray) -> np.ndarray:
        """Convertit en tableau int64 et vérifie que chaque valeur est dans [0, q)."""
        array = np.asarray(values, dtype=np.int64)
        if array.size and (array.min() < 0 or array.max() >= self.order):
            raise ParameterError(f"Symboles hors de [0, {self.order}) pour {self}")
        return array

    # ------------------------------------------------------------------
    # Tables log/antilog
    # ------------------------------------------------------------------

    def slow_mul(self, a: int, b: int) -> int:
        """Multiplication sans table (construction des tables et oracles de test)."""
        if self.kind == FieldKind.PRIME:
            return (a * b) % self.characteristic
        return gf2_multiply(a, b, self.reduction_polynomial, self.degree)

    def _slow_pow(self, a: int, exponent: int) -> int:
        result = 1
        while exponent:
            if exponent & 1:
                result = self.slow_mul(result, a)
            a = self.slow_mul(a, a)
            exponent >>= 1
        return result

    def _find_generator(self) -> int:
        group_order = self.order - 1
        factors = prime_factors(group_order)
        for candidate in range(2 if self.order > 2 else 1, self.order):
            if all(self._slow_pow(candidate, group_order // r) != 1 for r in factors):
                return candidate
        raise ParameterError(f"Aucun générateur multiplicatif pour {self}")

    @cached_property
    def _tables(self) -> Tuple[np.ndarray, np.ndarray]:
        generator = self._find_generator()
        size = self.order - 1
        exp_table = np.empty(size, dtype=np.int64)
        log_table = np.zeros(self.order, dtype=np.int64)  # log[0] inutilisé
        value = 1
        for i in range(size):
            exp_table[i] = value
            log_table[value] = i
            value = self.slow_mul(value, generator)
        logger.debug(f"Tables log/antilog construites pour {self} (générateur {generator})")
        return exp_table, log_table

    @cached_property
    def _scalar_tables(self) -> Tuple[List[int], List[int]]:
        exp_table, log_table = self._tables
        return exp_table.tolist(), log_table.tolist()

    @property
    def exp_table(self) -> np.ndarray:
        return self._tables[0]

    @property
    def log_table(self) -> np.ndarray:
        return self._tables[1]

    # ------------------------------------------------------------------
    # Arithmétique scalaire (entiers)
    # ------------------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.kind == FieldKind.PRIME:
            return (a + b) % self.characteristic
        return a ^ b

    def neg(self, a: int) -> int:
        if self.kind == FieldKind.PRIME:
            return (-a) % self.characteristic
        return a

    def sub(self, a: int, b: int) -> int:
        if self.kind == FieldKind.PRIME:
            return (a - b) % self.characteristic
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if self.kind == FieldKind.PRIME:
            return (a * b) % self.characteristic
        if a == 0 or b == 0:
            return 0
        exp_list, log_list = self._scalar_tables
        return exp_list[(log_list[a] + log_list[b]) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionFieldError(f"Inversion de 0 dans {self}")
        exp_list, log_list = self._scalar_tables
        return exp_list[(-log_list[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, exponent: int) -> int:
        """Exponentiation rapide (carré et multiplication) ; exposant négatif accepté si a != 0."""
        if exponent < 0:
            a = self.inv(a)
            exponent = -exponent
        result = 1
        while exponent:
            if exponent & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            exponent >>= 1
        return result

    def dot(self, u, v) -> int:
        """Produit scalaire de deux vecteurs d'entiers."""
        total = 0
        for a, b in zip(u, v):
            total = self.add(total, self.mul(int(a), int(b)))
        return total

    # ------------------------------------------------------------------
    # Arithmétique en masse (tableaux numpy int64)
    # ------------------------------------------------------------------

    def add_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.kind == FieldKind.PRIME:
            return (np.asarray(a, dtype=np.int64) + b) % self.characteristic
        return np.bitwise_xor(np.asarray(a, dtype=np.int64), b)

    def sub_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.kind == FieldKind.PRIME:
            return (np.asarray(a, dtype=np.int64) - b) % self.characteristic
        return np.bitwise_xor(np.asarray(a, dtype=np.int64), b)

    def neg_array(self, a: np.ndarray) -> np.ndarray:
        if self.kind == FieldKind.PRIME:
            return (-np.asarray(a, dtype=np.int64)) % self.characteristic
        return np.asarray(a, dtype=np.int64).copy()

    def mul_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Produit élément par élément (avec diffusion numpy)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.kind == FieldKind.PRIME:
            return (a * b) % self.characteristic
        exp_table, log_table = self._tables
        product = exp_table[(log_table[a] + log_table[b]) % (self.order - 1)]
        return np.where((a == 0) | (b == 0), 0, product)

    def scale(self, coefficient: int, values: np.ndarray) -> np.ndarray:
        """Multiplie tout un tableau par un scalaire."""
        values = np.asarray(values, dtype=np.int64)
        if coefficient == 0:
            return np.zeros_like(values)
        if coefficient == 1:
            return values.copy()
        if self.kind == FieldKind.PRIME:
            return (values * coefficient) % self.characteristic
        exp_table, log_table = self._tables
        product = exp_table[(log_table[values] + int(log_table[coefficient])) % (self.order - 1)]
        return np.where(values == 0, 0, product)

    def matmul(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """
        Produit matriciel `left @ right` dans GF(q).

        Args:
            left: Tableau (..., n), typiquement une bande de blocs (blocs x n)
            right: Matrice (n, m) de coefficients

        Returns:
            np.ndarray: Tableau (..., m)
        """
        left = np.asarray(left, dtype=np.int64)
        right = np.asarray(right, dtype=np.int64)
        if left.shape[-1] != right.shape[0]:
            raise ParameterError(f"Formes incompatibles {left.shape} @ {right.shape}")
        if self.kind == FieldKind.PRIME:
            return (left @ right) % self.characteristic

        exp_table, log_table = self._tables
        modulus = self.order - 1
        result = np.zeros(left.shape[:-1] + (right.shape[1],), dtype=np.int64)
        for i in range(right.shape[0]):
            column = left[..., i]
            nonzero = column != 0
            column_logs = log_table[column]
            for j in range(right.shape[1]):
                coefficient = int(right[i, j])
                if coefficient == 0:
                    continue
                product = exp_table[(column_logs + int(log_table[coefficient])) % modulus]
                result[..., j] ^= np.where(nonzero, product, 0)
        return result

    def mul_table(self) -> np.ndarray:
        """Table de multiplication complète q x q (q <= 256 uniquement)."""
        if self.order > 256:
            raise ParameterError("Table complète réservée aux corps d'ordre <= 256")
        elements = np.arange(self.order, dtype=np.int64)
        return self.mul_arrays(elements[:, None], elements[None, :])

    def add_table(self) -> np.ndarray:
        """Table d'addition complète q x q (q <= 256 uniquement)."""
        if self.order > 256:
            raise ParameterError("Table complète réservée aux corps d'ordre <= 256")
        elements = np.arange(self.order, dtype=np.int64)
        return self.add_arrays(elements[:, None], elements[None, :])


@lru_cache(maxsize=None)
def _cached_field(kind: FieldKind, characteristic: int, degree: int, poly: int) -> FieldSpec:
    return FieldSpec(kind, characteristic, degree, poly)
