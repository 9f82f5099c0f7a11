"""
Codes régénérants exacts : points MBR (d = n - 1) et MSR (d = k + 1).
"""

from .base import CodeFamily, CodeParams, CodeSpec, NodeState, RepairTranscript, symbol_bits
from .mds import (
    ConstructionTag,
    VectorFamily,
    make_mds,
    select_mbr_field,
    select_msr_field,
    systematize,
    vandermonde_family,
    verify_mds,
)
from .mbr import DownloadPlan, IncidenceMatrix, MbrCodeSpec, MbrParams, build_incidence
from .msr import MsrCodeSpec, MsrNodeVectors, MsrParams, RegenCoefficients
from .registry import AnyCodeSpec, build_code

__all__ = [
    'CodeFamily', 'CodeParams', 'CodeSpec', 'NodeState', 'RepairTranscript', 'symbol_bits',
    'ConstructionTag', 'VectorFamily', 'make_mds', 'select_mbr_field', 'select_msr_field',
    'systematize', 'vandermonde_family', 'verify_mds', 'DownloadPlan', 'IncidenceMatrix',
    'MbrCodeSpec', 'MbrParams', 'build_incidence', 'MsrCodeSpec', 'MsrNodeVectors',
    'MsrParams', 'RegenCoefficients', 'AnyCodeSpec', 'build_code',
]
