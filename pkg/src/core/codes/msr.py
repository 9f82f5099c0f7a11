# core/codes/msr.py
"""
Code régénérant au point MSR avec d = k + 1 (alpha = 2, B = 2k).

La source est coupée en deux moitiés f et g de k symboles. Le nœud i
stocke (f^t p_i, g^t p_i + f^t u_i) où les vecteurs principaux p_i forment
une famille MDS [n, k] et les vecteurs auxiliaires u_i sont arbitraires.
La réparation reproduit exactement le vecteur principal ; le vecteur
auxiliaire du nœud régénéré est remplacé et la table auxiliaire est mise
à jour sous verrou (un seul écrivain par code).
"""

import threading
from dataclasses import dataclass, replace
from typing import ClassVar, Dict, List, Mapping, Optional, Sequence, Tuple

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
from src.core.codes.mds import (
    ConstructionTag,
    select_msr_field,
    vandermonde_family,
    vandermonde_vector,
)
from src.core.field import FieldSpec
from src.core.linalg import Matrix, invert, nullspace, solve
from src.utils.error_handler import (
    DimensionMismatchError,
    DuplicateNodeError,
    FieldTooSmallError,
    MissingHelperError,
    ParameterError,
    ZeroDeltaError,
)


@dataclass(frozen=True)
class MsrParams(CodeParams):
    """Paramètres MSR : d = k + 1, alpha = 2, beta = 1, B = 2k."""


def derive_params(n: int, k: int, field: Optional[FieldSpec] = None) -> MsrParams:
    """
    Dérive les paramètres MSR de (n, k).

    Args:
        n: Nombre de nœuds (n >= k + 2)
        k: Nombre de nœuds suffisant pour reconstruire
        field: Corps imposé (sélection automatique sinon)

    Returns:
        MsrParams: Paramètres avec beta = 1
    """
    if k < 1 or n < k + 2:
        raise ParameterError(f"Paramètres MSR invalides n={n}, k={k} (k >= 1 et n >= k + 2 requis)")
    q = (field or select_msr_field(n)).order
    return MsrParams(n=n, k=k, d=k + 1, alpha=2, beta=1, B=2 * k, q=q)


@dataclass(frozen=True)
class MsrNodeVectors:
    """Vecteur principal p_i et vecteur auxiliaire u_i d'un nœud."""
    main: Tuple[int, ...]
    aux: Tuple[int, ...]


@dataclass(frozen=True)
class RegenCoefficients:
    """
    Coefficients d'une régénération : l'assistant i envoie
    a_i (f^t p_i) + b_i (g^t p_i + f^t u_i) ; le nouveau nœud combine les
    symboles reçus avec delta (premier symbole) et rho (second symbole).
    """
    target: int
    helpers: Tuple[int, ...]
    a: Tuple[int, ...]
    b: Tuple[int, ...]
    delta: Tuple[int, ...]
    rho: Tuple[int, ...]

    def for_helper(self, helper: int) -> Tuple[int, int]:
        index = self.helpers.index(helper)
        return self.a[index], self.b[index]


class MsrCodeSpec(CodeSpec):
    """
    Spécification d'un code MSR.

    Les vecteurs principaux ne changent jamais. La table auxiliaire est
    modifiée par chaque réparation (`aux_version` est alors incrémenté) ;
    les lectures passent par `snapshot()` pour voir un état cohérent.
    """
    code_family: ClassVar[CodeFamily] = CodeFamily.MSR

    def __init__(self, params: MsrParams, field: FieldSpec,
                 main_vectors: Sequence[Sequence[int]], aux_vectors: Sequence[Sequence[int]],
                 aux_seed: Optional[int] = None):
        if len(main_vectors) != params.n or len(aux_vectors) != params.n:
            raise DimensionMismatchError(
                f"{len(main_vectors)} vecteurs principaux et {len(aux_vectors)} auxiliaires pour n={params.n}")
        if params.q != field.order:
            raise DimensionMismatchError(f"Paramètres pour q={params.q}, corps {field}")
        self.params = params
        self.field = field
        self.aux_seed = aux_seed
        self.aux_version = 0
        self._lock = threading.RLock()
        self._main: Dict[int, Tuple[int, ...]] = {}
        self._aux: Dict[int, Tuple[int, ...]] = {}
        for node, (main, aux) in enumerate(zip(main_vectors, aux_vectors), start=1):
            self._main[node] = self._check_vector(main)
            self._aux[node] = self._check_vector(aux)
        self._inverse_cache: Dict[Tuple[int, ...], np.ndarray] = {}

    def _check_vector(self, vector: Sequence[int]) -> Tuple[int, ...]:
        if len(vector) != self.params.k:
            raise DimensionMismatchError(f"Vecteur de longueur {len(vector)}, k={self.params.k} attendu")
        values = tuple(int(x) for x in vector)
        if not all(self.field.contains(x) for x in values):
            raise ParameterError(f"Vecteur {values} hors de {self.field}")
        return values

    def construction_tag(self) -> str:
        return ConstructionTag.VANDERMONDE.value

    def main_vector(self, node_id: int) -> Tuple[int, ...]:
        self._check_node_id(node_id)
        return self._main[node_id]

    def aux_vector(self, node_id: int) -> Tuple[int, ...]:
        self._check_node_id(node_id)
        with self._lock:
            return self._aux[node_id]

    def node_vectors_pair(self, node_id: int) -> MsrNodeVectors:
        return MsrNodeVectors(self.main_vector(node_id), self.aux_vector(node_id))

    def snapshot(self) -> Tuple[int, Dict[int, Tuple[int, ...]]]:
        """Version et copie cohérente de la table auxiliaire."""
        with self._lock:
            return self.aux_version, dict(self._aux)

    def set_aux(self, node_id: int, vector: Sequence[int]) -> None:
        """Remplace le vecteur auxiliaire d'un nœud (rechargement depuis le disque)."""
        self._check_node_id(node_id)
        with self._lock:
            self._aux[node_id] = self._check_vector(vector)
            self.aux_version += 1

    def node_vectors(self, node_id: int) -> List[Tuple[int, ...]]:
        """Coefficients dans GF(q)^(2k) : (p_i, 0) puis (u_i, p_i)."""
        pair = self.node_vectors_pair(node_id)
        zeros = (0,) * self.params.k
        return [pair.main + zeros, pair.aux + pair.main]

    def _matrix(self, vectors: Sequence[Tuple[int, ...]]) -> np.ndarray:
        """Matrice k x len(vectors) dont les colonnes sont les vecteurs."""
        return np.array(vectors, dtype=np.int64).reshape(len(vectors), self.params.k).T

    def encode(self, source) -> List[NodeState]:
        stripe = self._as_stripe(source)
        k = self.params.k
        f, g = stripe[:, :k], stripe[:, k:]
        _, aux = self.snapshot()
        main = self._matrix([self._main[i] for i in self.node_ids])
        auxiliary = self._matrix([aux[i] for i in self.node_ids])
        first = self.field.matmul(f, main)
        second = self.field.add_arrays(self.field.matmul(g, main), self.field.matmul(f, auxiliary))
        return [NodeState(node, np.stack([first[:, node - 1], second[:, node - 1]], axis=1))
                for node in self.node_ids]

    def _decoding_matrix(self, node_ids: Tuple[int, ...]) -> np.ndarray:
        """Inverse de [p_i1 ... p_ik] ; les vecteurs principaux sont fixes."""
        cached = self._inverse_cache.get(node_ids)
        if cached is None:
            block = Matrix(self.field, self._matrix([self._main[i] for i in node_ids]))
            cached = invert(block).data
            self._inverse_cache[node_ids] = cached
        return cached

    def reconstruct(self, nodes: Sequence[NodeState],
                    aux: Optional[Mapping[int, Sequence[int]]] = None) -> np.ndarray:
        """
        Reconstruit (f, g) à partir de k nœuds.

        On résout d'abord le système de Vandermonde sur les premiers symboles,
        puis on retranche f^t u_i des seconds symboles avant de résoudre pour g.

        Args:
            nodes: Au moins k nœuds distincts
            aux: Table auxiliaire contemporaine des états (instantané courant sinon)
        """
        selected = self._select_nodes(nodes)
        for state in selected:
            if state.alpha != 2:
                raise DimensionMismatchError(f"Nœud {state.node_id} : {state.alpha} symboles, 2 attendus")
        ids = tuple(state.node_id for state in selected)
        if aux is None:
            _, aux = self.snapshot()
        inverse = self._decoding_matrix(ids)

        first = np.stack([state.symbols[:, 0] for state in selected], axis=1)
        second = np.stack([state.symbols[:, 1] for state in selected], axis=1)
        f = self.field.matmul(first, inverse)
        interference = self.field.matmul(f, self._matrix([aux[i] for i in ids]))
        g = self.field.matmul(self.field.sub_arrays(second, interference), inverse)
        return np.concatenate([f, g], axis=1)

    def regen_coefficients(self, failed: int, helpers: Sequence[int]) -> RegenCoefficients:
        """
        Calcule (a, b, delta, rho) pour régénérer `failed` à partir de d assistants.

        Args:
            failed: Nœud à régénérer
            helpers: d = k + 1 nœuds distincts, différents de `failed`

        Returns:
            RegenCoefficients: Coefficients déterministes (b_i = 1, delta_1 = 1)
        """
        self._check_node_id(failed)
        self._check_helpers(failed, helpers)
        return self._coefficients_for(failed, self._main[failed], tuple(helpers))

    def _check_helpers(self, target: int, helpers: Sequence[int]) -> None:
        if len(set(helpers)) != len(helpers):
            raise DuplicateNodeError(f"Assistants dupliqués : {list(helpers)}")
        if target in helpers:
            raise ParameterError(f"Le nœud {target} ne peut pas s'assister lui-même")
        for helper in helpers:
            self._check_node_id(helper)
        if len(helpers) != self.params.d:
            raise MissingHelperError(f"{len(helpers)} assistants fournis, d={self.params.d} requis")

    def _coefficients_for(self, target: int, target_main: Tuple[int, ...],
                          helpers: Tuple[int, ...]) -> RegenCoefficients:
        field = self.field
        _, aux = self.snapshot()
        block = Matrix(field, self._matrix([self._main[h] for h in helpers]))

        # rho : sum rho_i p_i = p_cible, variable libre à 0
        rho = solve(block, target_main).particular

        # delta : générateur du noyau de dimension 1, normalisé delta_1 = 1
        kernel = nullspace(block)
        if kernel.dim != 1:
            raise ZeroDeltaError(f"Noyau de dimension {kernel.dim} pour les assistants {helpers}")
        raw = kernel.vectors()[0]
        delta = tuple(field.mul(x, field.inv(raw[0])) for x in raw) if raw[0] else raw
        if any(x == 0 for x in delta):
            raise ZeroDeltaError(f"delta = {delta} a une composante nulle (assistants {helpers})")

        # a : sum delta_i a_i p_i = p_cible - sum delta_i u_i  (b_i = 1)
        correction = [0] * self.params.k
        for weight, helper in zip(delta, helpers):
            correction = [field.add(c, field.mul(weight, u)) for c, u in zip(correction, aux[helper])]
        rhs = [field.sub(p, c) for p, c in zip(target_main, correction)]
        x = solve(block, rhs).particular
        a = tuple(field.div(xi, di) for xi, di in zip(x, delta))
        b = (1,) * len(helpers)
        logger.debug(f"Coefficients pour le nœud {target} : delta={delta}, rho={rho}, a={a}")
        return RegenCoefficients(target, helpers, a, b, delta, tuple(rho))

    def helper_symbol(self, helper: NodeState, a: int, b: int) -> np.ndarray:
        """v_i = a_i (f^t p_i) + b_i (g^t p_i + f^t u_i), pour chaque bloc."""
        return self.field.add_arrays(self.field.scale(a, helper.symbols[:, 0]),
                                     self.field.scale(b, helper.symbols[:, 1]))

    def regenerate(self, failed: int, helper_symbols: Mapping[int, np.ndarray],
                   coefficients: Optional[RegenCoefficients] = None
                   ) -> Tuple[NodeState, Tuple[int, ...], RepairTranscript]:
        """
        Combine les d symboles reçus en un nouveau nœud.

        Le nouveau nœud stocke (sum delta_i v_i, sum rho_i v_i), soit
        (f^t p, g^t p + f^t u~) avec u~ = sum rho_i (a_i p_i + b_i u_i). La
        table auxiliaire est mise à jour avec u~.

        Args:
            failed: Nœud régénéré
            helper_symbols: Symboles v_i reçus, par assistant
            coefficients: Coefficients utilisés par les assistants (recalculés sinon)

        Returns:
            Tuple[NodeState, Tuple[int, ...], RepairTranscript]: Nœud, u~ et relevé
        """
        self._check_node_id(failed)
        with self._lock:
            helpers = tuple(helper_symbols)
            if coefficients is None:
                coefficients = self.regen_coefficients(failed, helpers)
            elif set(coefficients.helpers) != set(helpers):
                raise MissingHelperError(
                    f"Symboles reçus de {sorted(helpers)}, coefficients pour {sorted(coefficients.helpers)}")

            field = self.field
            received = np.stack([np.asarray(helper_symbols[h], dtype=np.int64)
                                 for h in coefficients.helpers], axis=1)
            delta = np.array(coefficients.delta, dtype=np.int64)[:, None]
            rho = np.array(coefficients.rho, dtype=np.int64)[:, None]
            first = field.matmul(received, delta)[:, 0]
            second = field.matmul(received, rho)[:, 0]

            new_aux = [0] * self.params.k
            for r, a, b, helper in zip(coefficients.rho, coefficients.a, coefficients.b, coefficients.helpers):
                main, aux = self._main[helper], self._aux[helper]
                for t in range(self.params.k):
                    term = field.add(field.mul(a, main[t]), field.mul(b, aux[t]))
                    new_aux[t] = field.add(new_aux[t], field.mul(r, term))
            new_aux = tuple(new_aux)
            self._aux[failed] = new_aux
            self.aux_version += 1

            transcript = RepairTranscript(
                failed=failed,
                helpers=tuple(sorted(coefficients.helpers)),
                per_helper_symbols={h: 1 for h in coefficients.helpers},
                chunks=received.shape[0],
                symbol_bits=symbol_bits(field),
                coefficients={h: coefficients.for_helper(h) for h in coefficients.helpers},
            )
            logger.debug(f"Nœud {failed} régénéré (table auxiliaire v{self.aux_version})")
            return NodeState(failed, np.stack([first, second], axis=1)), new_aux, transcript

    def repair(self, failed: int, helpers: Sequence[NodeState]) -> Tuple[NodeState, RepairTranscript]:
        states = self._usable_helpers(helpers)
        with self._lock:
            coefficients = self.regen_coefficients(failed, [s.node_id for s in states])
            symbols = {s.node_id: self.helper_symbol(s, *coefficients.for_helper(s.node_id))
                       for s in states}
            node, _, transcript = self.regenerate(failed, symbols, coefficients)
        return node, transcript

    def _usable_helpers(self, helpers: Sequence[NodeState]) -> List[NodeState]:
        live = sorted((s for s in helpers if s.live), key=lambda s: s.node_id)
        ids = [s.node_id for s in live]
        if len(set(ids)) != len(ids):
            raise DuplicateNodeError(f"Assistants dupliqués : {ids}")
        if len(live) < self.params.d:
            raise MissingHelperError(f"{len(live)} assistants vivants, d={self.params.d} requis")
        if len(live) > self.params.d:
            logger.debug(f"Assistants limités à {ids[:self.params.d]}")
        return live[:self.params.d]

    def add_node(self, helpers: Sequence[NodeState]) -> Tuple[NodeState, RepairTranscript]:
        """
        Ajoute un nœud n + 1 au point d'évaluation inutilisé suivant.

        Le nouveau nœud est généré par la même procédure que la réparation,
        en visant le nouveau vecteur principal.

        Raises:
            FieldTooSmallError: Si q <= n (plus de point d'évaluation libre)
        """
        with self._lock:
            n = self.params.n
            if self.field.order <= n:
                raise FieldTooSmallError(f"{self.field} n'a plus de point libre pour un nœud {n + 1}")
            states = self._usable_helpers(helpers)
            new_id = n + 1
            new_main = vandermonde_vector(n, self.params.k, self.field)
            coefficients = self._coefficients_for(new_id, new_main, tuple(s.node_id for s in states))

            self.params = replace(self.params, n=new_id)
            self._main[new_id] = new_main
            self._aux[new_id] = (0,) * self.params.k
            symbols = {s.node_id: self.helper_symbol(s, *coefficients.for_helper(s.node_id))
                       for s in states}
            node, _, transcript = self.regenerate(new_id, symbols, coefficients)
        logger.info(f"Nœud {new_id} ajouté (n={self.params.n})")
        return node, transcript


def build_spec(params: MsrParams, field: Optional[FieldSpec] = None,
               aux_seed: Optional[int] = 0) -> MsrCodeSpec:
    """
    Construit le code MSR : vecteurs principaux de Vandermonde aux points
    0..n-1, vecteurs auxiliaires tirés d'un générateur initialisé par
    `aux_seed` (tous nuls si `aux_seed` est None).

    Raises:
        FieldTooSmallError: Si q < n
    """
    field = field or select_msr_field(params.n)
    if field.order != params.q:
        params = replace(params, q=field.order)
    main = vandermonde_family(params.n, params.k, field).vectors
    if aux_seed is None:
        aux = [(0,) * params.k for _ in range(params.n)]
    else:
        rng = np.random.default_rng(aux_seed)
        aux = rng.integers(0, field.order, size=(params.n, params.k)).tolist()
    logger.debug(f"Code MSR (n={params.n}, k={params.k}) sur {field}, graine auxiliaire {aux_seed}")
    return MsrCodeSpec(params, field, main, aux, aux_seed)


def build(n: int, k: int, field: Optional[FieldSpec] = None,
          aux_seed: Optional[int] = 0) -> MsrCodeSpec:
    return build_spec(derive_params(n, k, field), field, aux_seed)
