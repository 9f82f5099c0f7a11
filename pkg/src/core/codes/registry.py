# core/codes/registry.py
"""
Point d'entrée unique pour construire un code à partir de sa famille.
"""

from typing import Optional, Sequence, Union

from loguru import logger

from src.core.codes import mbr, msr
from src.core.codes.base import CodeFamily
from src.core.codes.mds import systematize
from src.core.field import FieldSpec
from src.utils.error_handler import UnsupportedOperationError

AnyCodeSpec = Union[mbr.MbrCodeSpec, msr.MsrCodeSpec]


def build_code(family: Union[CodeFamily, str], n: int, k: int,
               field: Optional[FieldSpec] = None, aux_seed: Optional[int] = 0,
               systematic: Optional[Sequence[int]] = None) -> AnyCodeSpec:
    """
    Construit un code MBR ou MSR.

    Args:
        family: "mbr" ou "msr"
        n: Nombre de nœuds
        k: Nombre de nœuds de reconstruction
        field: Corps imposé (sélection automatique sinon)
        aux_seed: Graine des vecteurs auxiliaires (MSR), None pour des vecteurs nuls
        systematic: Nœuds à rendre systématiques (MBR uniquement)

    Returns:
        AnyCodeSpec: La spécification construite
    """
    family = CodeFamily(family)
    if family == CodeFamily.MBR:
        spec = mbr.build(n, k, field)
        if systematic:
            spec = systematize(spec, systematic)
        return spec
    if systematic:
        raise UnsupportedOperationError("La variante systématique n'existe que pour les codes MBR")
    logger.debug(f"Construction MSR n={n}, k={k}")
    return msr.build(n, k, field, aux_seed)
