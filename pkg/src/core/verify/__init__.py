"""
Vérification des codes de stockage linéaires par leurs sous-espaces.
"""

from .storage_code import LinearStorageCode, format_code_text, mutate, parse_code_text
from .checks import (
    CertificateReport,
    CheckItem,
    CheckReport,
    StructureReport,
    can_reconstruct,
    certify,
    check_all_corollary1,
    check_all_lemma2,
    check_corollary1,
    check_lemma1,
    check_lemma2,
    check_structure,
    regenerates_exactly,
)

__all__ = [
    'LinearStorageCode', 'format_code_text', 'mutate', 'parse_code_text',
    'CertificateReport', 'CheckItem', 'CheckReport', 'StructureReport', 'can_reconstruct',
    'certify', 'check_all_corollary1', 'check_all_lemma2', 'check_corollary1',
    'check_lemma1', 'check_lemma2', 'check_structure', 'regenerates_exactly',
]
