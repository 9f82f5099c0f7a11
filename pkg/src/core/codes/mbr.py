# core/codes/mbr.py
"""
Code régénérant exact au point MBR avec d = n - 1.

Chaque paire de nœuds {i, j} partage exactement un symbole codé f^t v_e,
où e est l'arête {i, j} du graphe complet à n sommets et (v_e) une famille
MDS de theta = n(n-1)/2 vecteurs de GF(q)^B. Un nœud défaillant est
régénéré en recevant un symbole de chacun des n - 1 autres nœuds.
"""

import itertools
from dataclasses import dataclass, replace
from dataclasses import field as dataclass_field
from functools import cached_property
from typing import ClassVar, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from src.core.codes.base import (
    CodeFamily,
    CodeParams,
    CodeSpec,
    NodeState,
    RepairTranscript,
    symbol_bits,
)
from src.core.codes.mds import VectorFamily, make_mds, select_mbr_field
from src.core.field import FieldSpec
from src.core.linalg import invert
from src.utils.error_handler import (
    CorruptionError,
    DimensionMismatchError,
    DuplicateNodeError,
    MissingHelperError,
    ParameterError,
)


@dataclass(frozen=True)
class MbrParams(CodeParams):
    """Paramètres MBR : beta = 1, alpha = d = n - 1, theta = n(n-1)/2."""
    theta: int


def derive_params(n: int, k: int, field: Optional[FieldSpec] = None) -> MbrParams:
    """
    Dérive les paramètres MBR de (n, k).

    Args:
        n: Nombre de nœuds
        k: Nombre de nœuds suffisant pour reconstruire
        field: Corps imposé (sélection automatique sinon)

    Returns:
        MbrParams: Paramètres avec beta = 1
    """
    if not 1 <= k < n:
        raise ParameterError(f"Paramètres MBR invalides n={n}, k={k} (1 <= k < n requis)")
    d = n - 1
    B = k * d - k * (k - 1) // 2
    theta = n * (n - 1) // 2
    q = (field or select_mbr_field(B, theta)).order
    return MbrParams(n=n, k=k, d=d, alpha=d, beta=1, B=B, q=q, theta=theta)


@dataclass(frozen=True)
class IncidenceMatrix:
    """
    Matrice d'incidence n x theta du graphe complet.

    `edges[c]` est la paire (i, j), i < j, de la colonne c ; les arêtes sont
    rangées dans l'ordre lexicographique (toutes celles du nœud 1 d'abord).
    """
    n: int
    edges: Tuple[Tuple[int, int], ...]

    @property
    def theta(self) -> int:
        return len(self.edges)

    def matrix(self) -> np.ndarray:
        incidence = np.zeros((self.n, self.theta), dtype=np.int64)
        for column, (i, j) in enumerate(self.edges):
            incidence[i - 1, column] = 1
            incidence[j - 1, column] = 1
        return incidence

    def node_columns(self, node_id: int) -> Tuple[int, ...]:
        """Colonnes (croissantes) des symboles stockés par le nœud."""
        return self._columns_by_node[node_id]

    def edge_column(self, i: int, j: int) -> int:
        """Colonne de l'arête {i, j}."""
        key = (min(i, j), max(i, j))
        try:
            return self._column_by_edge[key]
        except KeyError:
            raise ParameterError(f"Pas d'arête entre les nœuds {i} et {j}") from None

    def check_properties(self) -> bool:
        """
        Vérifie la structure du graphe complet : d uns par ligne, deux par
        colonne, et deux lignes quelconques ont exactement une colonne commune.
        """
        incidence = self.matrix()
        if not (incidence.sum(axis=1) == self.n - 1).all():
            return False
        if not (incidence.sum(axis=0) == 2).all():
            return False
        overlaps = incidence @ incidence.T
        off_diagonal = overlaps[~np.eye(self.n, dtype=bool)]
        return bool((off_diagonal == 1).all())

    @cached_property
    def _column_by_edge(self) -> Dict[Tuple[int, int], int]:
        return {edge: column for column, edge in enumerate(self.edges)}

    @cached_property
    def _columns_by_node(self) -> Dict[int, Tuple[int, ...]]:
        return {
            node: tuple(c for c, edge in enumerate(self.edges) if node in edge)
            for node in range(1, self.n + 1)
        }


def build_incidence(n: int) -> IncidenceMatrix:
    if n < 2:
        raise ParameterError(f"Graphe complet à {n} sommet(s) : n >= 2 requis")
    return IncidenceMatrix(n, tuple(itertools.combinations(range(1, n + 1), 2)))


@dataclass(frozen=True)
class DownloadPlan:
    """Colonnes distinctes obtenues en contactant un ensemble de nœuds."""
    nodes: Tuple[int, ...]
    columns: Tuple[int, ...]
    repetitions: int


@dataclass(frozen=True)
class MbrCodeSpec(CodeSpec):
    """Spécification immuable d'un code MBR (d = n - 1)."""
    code_family: ClassVar[CodeFamily] = CodeFamily.MBR

    params: MbrParams
    field: FieldSpec
    incidence: IncidenceMatrix
    family: VectorFamily
    systematic_nodes: Tuple[int, ...] = ()
    _inverse_cache: Dict[Tuple[int, ...], np.ndarray] = dataclass_field(
        default_factory=dict, init=False, repr=False, compare=False)
    _node_columns: Dict[int, Tuple[int, ...]] = dataclass_field(
        default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.family.count != self.params.theta or self.family.dimension != self.params.B:
            raise DimensionMismatchError(
                f"Famille [{self.family.count}, {self.family.dimension}] pour "
                f"theta={self.params.theta}, B={self.params.B}")
        if self.family.field != self.field or self.params.q != self.field.order:
            raise DimensionMismatchError(f"Famille sur {self.family.field}, code sur {self.field}")
        self._node_columns.update(
            {node: self.incidence.node_columns(node) for node in range(1, self.params.n + 1)})

    def columns_of(self, node_id: int) -> Tuple[int, ...]:
        self._check_node_id(node_id)
        return self._node_columns[node_id]

    def construction_tag(self) -> str:
        return self.family.tag.value

    def node_vectors(self, node_id: int) -> List[Tuple[int, ...]]:
        return [self.family.vectors[c] for c in self.columns_of(node_id)]

    def encode(self, source) -> List[NodeState]:
        stripe = self._as_stripe(source)
        # (blocs, theta) : un symbole f^t v_e par arête
        coded = self.field.matmul(stripe, self.family.matrix().data.T)
        return [NodeState(node, coded[:, list(self.columns_of(node))])
                for node in self.node_ids]

    def download_plan(self, node_ids: Sequence[int]) -> DownloadPlan:
        """
        Colonnes distinctes et nombre de répétitions pour un téléchargement.

        Pour k nœuds, exactement C(k, 2) symboles sont des doublons.
        """
        ids = tuple(node_ids)
        if len(set(ids)) != len(ids):
            raise DuplicateNodeError(f"Nœuds dupliqués dans {list(ids)}")
        gathered = [c for node in ids for c in self.columns_of(node)]
        columns = tuple(sorted(set(gathered)))
        return DownloadPlan(ids, columns, len(gathered) - len(columns))

    def reconstruct(self, nodes: Sequence[NodeState]) -> np.ndarray:
        selected = self._select_nodes(nodes)
        for state in selected:
            if state.alpha != self.params.alpha:
                raise DimensionMismatchError(
                    f"Nœud {state.node_id} : {state.alpha} symboles, alpha={self.params.alpha}")
        chunks = {state.chunks for state in selected}
        if len(chunks) != 1:
            raise DimensionMismatchError(f"Nombres de blocs différents : {sorted(chunks)}")

        plan = self.download_plan([s.node_id for s in selected])
        received: Dict[int, np.ndarray] = {}
        for state in selected:
            for position, column in enumerate(self.columns_of(state.node_id)):
                symbols = state.symbols[:, position]
                if column in received:
                    if not np.array_equal(received[column], symbols):
                        raise CorruptionError(
                            f"Symboles de l'arête {self.incidence.edges[column]} incohérents")
                    continue
                received[column] = symbols
        logger.debug(f"Reconstruction : {plan.repetitions} doublons écartés sur {plan.nodes}")

        observed = np.stack([received[c] for c in plan.columns], axis=1)
        return self.field.matmul(observed, self._decoding_matrix(plan.columns))

    def _decoding_matrix(self, columns: Tuple[int, ...]) -> np.ndarray:
        """Inverse de A^t où les lignes de A sont les vecteurs des colonnes reçues."""
        cached = self._inverse_cache.get(columns)
        if cached is None:
            selected = self.family.matrix().select_rows(columns)
            cached = invert(selected.transpose()).data
            self._inverse_cache[columns] = cached
        else:
            logger.debug(f"Inverse de décodage en cache pour {len(columns)} colonnes")
        return cached

    def helper_symbol(self, helper: NodeState, failed: int) -> np.ndarray:
        """Le symbole de l'arête {helper, failed}, pour chaque bloc."""
        column = self.incidence.edge_column(helper.node_id, failed)
        position = self.columns_of(helper.node_id).index(column)
        return helper.symbols[:, position]

    def regenerate(self, failed: int, helpers: Sequence[NodeState]) -> Tuple[NodeState, RepairTranscript]:
        """
        Régénère exactement le nœud `failed` à partir des n - 1 autres.

        Args:
            failed: Nœud à régénérer
            helpers: Les n - 1 autres nœuds, vivants

        Returns:
            Tuple[NodeState, RepairTranscript]: Nœud identique à l'original et relevé
        """
        self._check_node_id(failed)
        by_id: Dict[int, NodeState] = {}
        for state in helpers:
            if state.node_id in by_id:
                raise DuplicateNodeError(f"Assistant {state.node_id} fourni deux fois")
            if state.node_id == failed:
                raise ParameterError(f"Le nœud {failed} ne peut pas s'assister lui-même")
            self._check_node_id(state.node_id)
            if state.live:
                by_id[state.node_id] = state
        missing = [j for j in self.node_ids if j != failed and j not in by_id]
        if missing:
            raise MissingHelperError(f"Assistants manquants pour le nœud {failed} : {missing}")

        columns = self.columns_of(failed)
        received, per_helper, coefficients = [], {}, {}
        for column in columns:
            i, j = self.incidence.edges[column]
            helper = j if i == failed else i
            received.append(self.helper_symbol(by_id[helper], failed))
            per_helper[helper] = 1
            coefficients[helper] = (column,)

        transcript = RepairTranscript(
            failed=failed,
            helpers=tuple(sorted(by_id)),
            per_helper_symbols=per_helper,
            chunks=received[0].shape[0],
            symbol_bits=symbol_bits(self.field),
            coefficients=coefficients,
        )
        logger.debug(f"Nœud {failed} régénéré : {transcript.symbols_per_chunk} symboles par bloc")
        return NodeState(failed, np.stack(received, axis=1)), transcript

    def repair(self, failed: int, helpers: Sequence[NodeState]) -> Tuple[NodeState, RepairTranscript]:
        return self.regenerate(failed, helpers)


def build_spec(params: MbrParams, field: Optional[FieldSpec] = None) -> MbrCodeSpec:
    """
    Construit le code MBR : incidence du graphe complet et famille MDS [theta, B].

    Raises:
        FieldTooSmallError: Corps trop petit pour une famille de Vandermonde
    """
    field = field or select_mbr_field(params.B, params.theta)
    if field.order != params.q:
        params = replace(params, q=field.order)
    family = make_mds(params.theta, params.B, field)
    spec = MbrCodeSpec(params, field, build_incidence(params.n), family)
    logger.debug(f"Code MBR (n={params.n}, k={params.k}) sur {field}, famille {family.tag.value}")
    return spec


def build(n: int, k: int, field: Optional[FieldSpec] = None) -> MbrCodeSpec:
    return build_spec(derive_params(n, k, field), field)
