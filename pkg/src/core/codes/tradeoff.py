# core/codes/tradeoff.py
"""
Points extrêmes de la courbe stockage / bande passante de réparation.

Valeurs exactes (fractions) pour un fichier de B symboles, k nœuds de
reconstruction et d assistants.
"""

from fractions import Fraction
from typing import Tuple

from src.utils.error_handler import ParameterError


def _check(B: int, k: int, d: int) -> None:
    if B < 1 or k < 1 or d < k:
        raise ParameterError(f"Paramètres invalides B={B}, k={k}, d={d} (d >= k >= 1 requis)")


def mbr_point(B: int, k: int, d: int) -> Tuple[Fraction, Fraction]:
    """(alpha, beta) au point de bande passante minimale."""
    _check(B, k, d)
    denominator = 2 * k * d - k * k + k
    return Fraction(2 * B * d, denominator), Fraction(2 * B, denominator)


def msr_point(B: int, k: int, d: int) -> Tuple[Fraction, Fraction]:
    """(alpha, beta) au point de stockage minimal."""
    _check(B, k, d)
    return Fraction(B, k), Fraction(B, k * (d - k + 1))


def repair_bandwidth(beta: Fraction, d: int) -> Fraction:
    """Symboles téléchargés pour une réparation : d * beta."""
    return d * beta


def naive_repair_symbols(B: int) -> int:
    """Réparation MDS classique : télécharger tout le fichier puis ré-encoder."""
    return B
