# src/core/field/element.py
"""
Éléments de corps fini typés et opérations associées.

`FieldElement` porte son corps : toute opération entre éléments de corps
différents est refusée (`FieldMismatchError`), jamais réduite en silence.
"""

from dataclasses import dataclass

from src.core.field.spec import FieldSpec
from src.utils.error_handler import FieldMismatchError, ParameterError


@dataclass(frozen=True)
class FieldElement:
    """Un élément de GF(q)."""
    value: int
    field: FieldSpec

    def __post_init__(self):
        if not isinstance(self.value, int) or not self.field.contains(self.value):
            raise ParameterError(f"Valeur {self.value!r} hors de [0, {self.field.order})")

    def _same_field(self, other: "FieldElement") -> None:
        if other.field != self.field:
            raise FieldMismatchError(f"Corps différents : {self.field} et {other.field}")

    def _wrap(self, value: int) -> "FieldElement":
        return FieldElement(value, self.field)

    def __add__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        self._same_field(other)
        return self._wrap(self.field.add(self.value, other.value))

    def __sub__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        self._same_field(other)
        return self._wrap(self.field.sub(self.value, other.value))

    def __mul__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        self._same_field(other)
        return self._wrap(self.field.mul(self.value, other.value))

    def __truediv__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        self._same_field(other)
        return self._wrap(self.field.div(self.value, other.value))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        return self._wrap(self.field.pow(self.value, exponent))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"FieldElement({self.value}, {self.field})"

    def inverse(self) -> "FieldElement":
        return self._wrap(self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.value == 0


def element_from_int(value: int, field: FieldSpec) -> FieldElement:
    """Construit un élément à partir de sa représentation entière (doit être dans [0, q))."""
    return FieldElement(int(value), field)


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def neg(a: FieldElement) -> FieldElement:
    return -a


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def div(a: FieldElement, b: FieldElement) -> FieldElement:
    return a / b


def inv(a: FieldElement) -> FieldElement:
    """Inverse multiplicatif ; lève `ZeroDivisionFieldError` pour 0."""
    return a.inverse()


def power(a: FieldElement, exponent: int) -> FieldElement:
    """a^exponent par carré et multiplication (power(a, 0) = 1)."""
    return a ** exponent


# Nom court de l'opération ; `power` évite de masquer la fonction native
pow = power
