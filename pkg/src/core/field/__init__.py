"""
Package d'arithmétique exacte dans les corps finis GF(q).
"""

from .spec import FieldKind, FieldSpec
from .element import (
    FieldElement,
    add,
    div,
    element_from_int,
    inv,
    mul,
    neg,
    pow,
    power,
    sub,
)

__all__ = [
    'FieldKind', 'FieldSpec', 'FieldElement', 'add', 'div', 'element_from_int',
    'inv', 'mul', 'neg', 'pow', 'power', 'sub',
]
