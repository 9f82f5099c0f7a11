"""
Simulation d'un cluster de stockage à codes régénérants.
"""

from .manifest import Manifest
from .cluster import (
    HELPER_POLICIES,
    Cluster,
    ClusterEvent,
    ClusterReport,
    decode_stripe,
    lexicographic_policy,
    random_policy,
    verify_cluster,
)
from .trial import RepairRow, TrialConfig, TrialReport, run_trial

__all__ = [
    'Manifest', 'HELPER_POLICIES', 'Cluster', 'ClusterEvent', 'ClusterReport', 'decode_stripe',
    'lexicographic_policy', 'random_policy', 'verify_cluster', 'RepairRow', 'TrialConfig',
    'TrialReport', 'run_trial',
]
