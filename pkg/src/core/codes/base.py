# core/codes/base.py
"""
Types communs aux codes régénérants : paramètres, état d'un nœud, relevé de
réparation et classe de base abstraite des spécifications de code.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Sequence, Tuple

import numpy as np
from loguru import logger

from src.core.field import FieldSpec
from src.utils.error_handler import DataLossError, DuplicateNodeError, ParameterError


class CodeFamily(str, Enum):
    """Point de fonctionnement sur la courbe stockage / bande passante."""
    MBR = "mbr"
    MSR = "msr"


@dataclass(frozen=True)
class CodeParams:
    """Paramètres (n, k, d, alpha, beta, B) et ordre du corps q."""
    n: int
    k: int
    d: int
    alpha: int
    beta: int
    B: int
    q: int


@dataclass(eq=False)
class NodeState:
    """
    Les symboles stockés par un nœud.

    `symbols` a la forme (blocs, alpha) : une ligne par bloc de B symboles
    source. Un seul bloc est représenté par une matrice à une ligne.
    """
    node_id: int
    symbols: np.ndarray
    live: bool = True

    def __post_init__(self):
        array = np.asarray(self.symbols, dtype=np.int64)
        if array.ndim == 1:
            array = array[None, :]
        self.symbols = array

    @property
    def chunks(self) -> int:
        return self.symbols.shape[0]

    @property
    def alpha(self) -> int:
        return self.symbols.shape[1]

    def row(self, chunk: int = 0) -> List[int]:
        """Symboles du bloc `chunk` sous forme de liste d'entiers."""
        return self.symbols[chunk].tolist()

    def copy(self) -> "NodeState":
        return NodeState(self.node_id, self.symbols.copy(), self.live)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NodeState):
            return NotImplemented
        return (self.node_id == other.node_id
                and self.symbols.shape == other.symbols.shape
                and np.array_equal(self.symbols, other.symbols))

    __hash__ = None


@dataclass(frozen=True)
class RepairTranscript:
    """
    Relevé d'une régénération : qui a envoyé quoi, et combien.

    `per_helper_symbols` compte les symboles envoyés par bloc ; `coefficients`
    décrit le contenu envoyé par chaque assistant (colonne d'arête pour MBR,
    coefficients (a_i, b_i) pour MSR).
    """
    failed: int
    helpers: Tuple[int, ...]
    per_helper_symbols: Dict[int, int]
    chunks: int
    symbol_bits: int
    coefficients: Dict[int, Tuple[int, ...]] = field(default_factory=dict)

    @property
    def symbols_per_chunk(self) -> int:
        return sum(self.per_helper_symbols.values())

    @property
    def total_symbols(self) -> int:
        return self.symbols_per_chunk * self.chunks

    @property
    def symbol_bytes(self) -> int:
        """Largeur d'un symbole en octets, arrondie à l'octet supérieur."""
        return max(1, -(-self.symbol_bits // 8))

    @property
    def total_bytes(self) -> int:
        return -(-self.total_symbols * self.symbol_bits // 8)


def symbol_bits(field_spec: FieldSpec) -> int:
    """Nombre de bits nécessaires pour stocker un symbole de GF(q)."""
    return max(1, (field_spec.order - 1).bit_length())


class CodeSpec(ABC):
    """Classe de base abstraite des codes régénérants linéaires."""

    code_family: CodeFamily
    params: CodeParams
    field: FieldSpec

    @abstractmethod
    def encode(self, source) -> List[NodeState]:
        """
        Encode un bloc (B symboles) ou une bande de blocs (blocs x B).

        Args:
            source: Symboles source, entiers dans [0, q)

        Returns:
            List[NodeState]: Les n nœuds, par identifiant croissant
        """
        pass

    @abstractmethod
    def reconstruct(self, nodes: Sequence[NodeState]) -> np.ndarray:
        """
        Reconstruit la source à partir de k nœuds.

        Args:
            nodes: Au moins k nœuds distincts

        Returns:
            np.ndarray: Source de forme (blocs, B)
        """
        pass

    @abstractmethod
    def repair(self, failed: int, helpers: Sequence[NodeState]) -> Tuple[NodeState, RepairTranscript]:
        """
        Régénère le nœud `failed` à partir de d assistants.

        Args:
            failed: Identifiant du nœud défaillant (1..n)
            helpers: États des d nœuds assistants

        Returns:
            Tuple[NodeState, RepairTranscript]: Nouveau nœud et relevé de réparation
        """
        pass

    @abstractmethod
    def node_vectors(self, node_id: int) -> List[Tuple[int, ...]]:
        """Vecteurs de coefficients (longueur B) des alpha symboles du nœud."""
        pass

    @abstractmethod
    def construction_tag(self) -> str:
        pass

    @property
    def node_ids(self) -> List[int]:
        return list(range(1, self.params.n + 1))

    def default_helpers(self, failed: int, live: Sequence[int]) -> Tuple[int, ...]:
        """Les d plus petits identifiants vivants autres que `failed`."""
        candidates = sorted(i for i in live if i != failed)
        return tuple(candidates[:self.params.d])

    def _check_node_id(self, node_id: int) -> None:
        if not 1 <= node_id <= self.params.n:
            raise ParameterError(f"Nœud {node_id} hors de 1..{self.params.n}")

    def _as_stripe(self, source) -> np.ndarray:
        stripe = np.asarray(source, dtype=np.int64)
        if stripe.ndim == 1:
            stripe = stripe[None, :]
        if stripe.ndim != 2 or stripe.shape[1] != self.params.B:
            raise ParameterError(
                f"Source de forme {stripe.shape}, attendu (blocs, {self.params.B})")
        return self.field.check_symbols(stripe)

    def _select_nodes(self, nodes: Sequence[NodeState]) -> List[NodeState]:
        """Vérifie l'unicité et retient les k plus petits identifiants vivants."""
        ids = [node.node_id for node in nodes]
        if len(set(ids)) != len(ids):
            raise DuplicateNodeError(f"Nœuds dupliqués dans {ids}")
        for node_id in ids:
            self._check_node_id(node_id)
        live = sorted((node for node in nodes if node.live), key=lambda s: s.node_id)
        if len(live) < self.params.k:
            raise DataLossError(f"{len(live)} nœuds vivants fournis, {self.params.k} requis")
        selected = live[:self.params.k]
        if len(live) > self.params.k:
            logger.debug(f"Reconstruction limitée aux nœuds {[s.node_id for s in selected]}")
        return selected
