# src/core/field/tables.py
"""
Tables fixes et utilitaires arithmétiques lents pour les corps finis.

Les fonctions de ce module servent à construire les tables log/antilog et
d'oracle dans les tests ; elles ne sont pas utilisées sur les chemins chauds.
"""

from functools import lru_cache
from typing import Dict, List

# Polynômes de réduction pour GF(2^m), m = 1..16 (bit i = coefficient de x^i)
REDUCTION_POLYNOMIALS: Dict[int, int] = {
    1: 0b11,                 # x + 1
    2: 0b111,                # x^2 + x + 1
    3: 0b1011,               # x^3 + x + 1
    4: 0b10011,              # x^4 + x + 1
    5: 0b100101,             # x^5 + x^2 + 1
    6: 0b1000011,            # x^6 + x + 1
    7: 0b10001001,           # x^7 + x^3 + 1
    8: 0x11D,                # x^8 + x^4 + x^3 + x^2 + 1
    9: 0x211,                # x^9 + x^4 + 1
    10: 0x409,               # x^10 + x^3 + 1
    11: 0x805,               # x^11 + x^2 + 1
    12: 0x1053,              # x^12 + x^6 + x^4 + x + 1
    13: 0x201B,              # x^13 + x^4 + x^3 + x + 1
    14: 0x4443,              # x^14 + x^10 + x^6 + x + 1
    15: 0x8003,              # x^15 + x + 1
    16: 0x1100B,             # x^16 + x^12 + x^3 + x + 1
}

MAX_ORDER = 65536
MAX_DEGREE = 16


def is_prime(value: int) -> bool:
    """Test de primalité par divisions successives (suffisant pour p <= 2^16)."""
    if value < 2:
        return False
    if value % 2 == 0:
        return value == 2
    divisor = 3
    while divisor * divisor <= value:
        if value % divisor == 0:
            return False
        divisor += 2
    return True


def prime_factors(value: int) -> List[int]:
    """
    Retourne les facteurs premiers distincts d'un entier positif.

    Args:
        value: Entier >= 1

    Returns:
        List[int]: Facteurs premiers triés (vide pour 1)
    """
    factors = []
    divisor = 2
    while divisor * divisor <= value:
        if value % divisor == 0:
            factors.append(divisor)
            while value % divisor == 0:
                value //= divisor
        divisor += 1
    if value > 1:
        factors.append(value)
    return factors


def gf2_poly_mod(dividend: int, divisor: int) -> int:
    """Reste de la division de deux polynômes binaires (représentés en masques)."""
    divisor_degree = divisor.bit_length() - 1
    while dividend and dividend.bit_length() - 1 >= divisor_degree:
        dividend ^= divisor << (dividend.bit_length() - 1 - divisor_degree)
    return dividend


@lru_cache(maxsize=None)
def is_irreducible_gf2(poly: int) -> bool:
    """
    Vérifie qu'un polynôme binaire est irréductible sur GF(2).

    Division d'essai par tous les polynômes de degré 1 à deg/2.
    """
    degree = poly.bit_length() - 1
    if degree < 1:
        return False
    for candidate in range(2, 1 << (degree // 2 + 1)):
        if gf2_poly_mod(poly, candidate) == 0:
            return False
    return True


def gf2_multiply(a: int, b: int, poly: int, degree: int) -> int:
    """Multiplication sans retenue suivie de la réduction modulo `poly`."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if (a >> degree) & 1:
            a ^= poly
    return result
