# core/codes/mds.py
"""
Familles de vecteurs MDS : Vandermonde, contrôle de parité simple, identité.

Une famille de `count` vecteurs de longueur `dimension` est MDS lorsque
tout sous-ensemble de `dimension` vecteurs est linéairement indépendant.
"""

import itertools
from dataclasses import dataclass, replace
from enum import Enum
from typing import TYPE_CHECKING, Iterable, Sequence, Tuple

import numpy as np
from loguru import logger

from src.core.field import FieldSpec
from src.core.linalg import Matrix, invert, rank
from src.utils.error_handler import (
    DuplicateNodeError,
    FieldTooSmallError,
    ParameterError,
    SingularMatrixError,
)

if TYPE_CHECKING:
    from src.core.codes.mbr import MbrCodeSpec

# Au-delà, verify_mds échantillonne les sous-ensembles au lieu de les énumérer
EXHAUSTIVE_LIMIT = 20
SAMPLED_SUBSETS = 2000


class ConstructionTag(str, Enum):
    """Origine d'une famille de vecteurs."""
    VANDERMONDE = "vandermonde"
    SINGLE_PARITY_CHECK = "single-parity-check"
    IDENTITY = "identity"
    CUSTOM = "custom"


@dataclass(frozen=True)
class VectorFamily:
    """Famille ordonnée de vecteurs de GF(q)^dimension."""
    field: FieldSpec
    dimension: int
    vectors: Tuple[Tuple[int, ...], ...]
    tag: ConstructionTag = ConstructionTag.CUSTOM

    def __post_init__(self):
        for vector in self.vectors:
            if len(vector) != self.dimension:
                raise ParameterError(f"Vecteur de longueur {len(vector)}, attendu {self.dimension}")
            if not all(self.field.contains(int(x)) for x in vector):
                raise ParameterError(f"Vecteur {vector} hors de {self.field}")

    @classmethod
    def custom(cls, field: FieldSpec, dimension: int,
               vectors: Iterable[Sequence[int]]) -> "VectorFamily":
        return cls(field, dimension, tuple(tuple(int(x) for x in v) for v in vectors))

    @property
    def count(self) -> int:
        return len(self.vectors)

    def matrix(self) -> Matrix:
        """Matrice count x dimension dont les lignes sont les vecteurs."""
        return Matrix.from_rows(self.field, self.vectors, cols=self.dimension)

    def transformed(self, transform: Matrix) -> "VectorFamily":
        """Famille des lignes v^t T (changement de base de l'espace source)."""
        rows = (self.matrix() @ transform).to_rows()
        return VectorFamily.custom(self.field, self.dimension, rows)


def identity_family(dimension: int, field: FieldSpec) -> VectorFamily:
    vectors = tuple(tuple(int(i == j) for j in range(dimension)) for i in range(dimension))
    return VectorFamily(field, dimension, vectors, ConstructionTag.IDENTITY)


def single_parity_check_family(dimension: int, field: FieldSpec) -> VectorFamily:
    """Les vecteurs unitaires suivis du vecteur tout-à-un (valable sur tout corps)."""
    vectors = identity_family(dimension, field).vectors + (tuple([1] * dimension),)
    return VectorFamily(field, dimension, vectors, ConstructionTag.SINGLE_PARITY_CHECK)


def vandermonde_vector(point: int, dimension: int, field: FieldSpec) -> Tuple[int, ...]:
    """(1, x, x^2, ..., x^(dimension-1)) au point x."""
    vector, value = [], 1
    for _ in range(dimension):
        vector.append(value)
        value = field.mul(value, point)
    return tuple(vector)


def vandermonde_family(count: int, dimension: int, field: FieldSpec) -> VectorFamily:
    """
    Famille de Vandermonde aux points 0, 1, ..., count-1 (ordre entier croissant).

    Raises:
        FieldTooSmallError: Si q < count (points distincts impossibles)
    """
    if field.order < count:
        raise FieldTooSmallError(
            f"{count} points distincts requis, {field} n'a que {field.order} éléments")
    vectors = tuple(vandermonde_vector(x, dimension, field) for x in range(count))
    return VectorFamily(field, dimension, vectors, ConstructionTag.VANDERMONDE)


def make_mds(count: int, dimension: int, field: FieldSpec) -> VectorFamily:
    """
    Construit une famille MDS [count, dimension] sur `field`.

    Cas particuliers : count = dimension donne l'identité (tout corps),
    count = dimension + 1 le code de parité simple (tout corps, GF(2) compris).
    Sinon Vandermonde, qui exige q >= count.

    Args:
        count: Nombre de vecteurs
        dimension: Longueur des vecteurs
        field: Corps de base

    Returns:
        VectorFamily: La famille construite
    """
    if dimension < 1 or count < dimension:
        raise ParameterError(f"Famille MDS impossible : count={count}, dimension={dimension}")
    if count == dimension:
        family = identity_family(dimension, field)
    elif count == dimension + 1:
        family = single_parity_check_family(dimension, field)
    else:
        family = vandermonde_family(count, dimension, field)
    logger.debug(f"Famille MDS [{count}, {dimension}] sur {field} : {family.tag.value}")
    return family


def verify_mds(family: VectorFamily, k: int, seed: int = 0) -> bool:
    """
    Vérifie que tout sous-ensemble de k vecteurs est de rang k.

    Énumération exhaustive jusqu'à `EXHAUSTIVE_LIMIT` vecteurs, échantillon
    aléatoire reproductible au-delà.
    """
    if k < 1 or k > family.dimension:
        raise ParameterError(f"k={k} hors de 1..{family.dimension}")
    if family.count < k:
        return False
    matrix = family.matrix()
    if family.count <= EXHAUSTIVE_LIMIT:
        subsets = itertools.combinations(range(family.count), k)
    else:
        logger.warning(f"verify_mds : {family.count} vecteurs, vérification par échantillonnage")
        rng = np.random.default_rng(seed)
        subsets = (tuple(sorted(rng.choice(family.count, size=k, replace=False).tolist()))
                   for _ in range(SAMPLED_SUBSETS))
    for subset in subsets:
        if rank(matrix.select_rows(subset)) < k:
            logger.debug(f"Sous-ensemble dépendant : {subset}")
            return False
    return True


def select_mbr_field(B: int, theta: int) -> FieldSpec:
    """
    Corps par défaut d'un code MBR.

    GF(2) quand la famille est l'identité (theta = B) ou la parité simple
    (theta = B + 1), sinon le plus petit corps d'ordre >= theta.
    """
    if theta <= B + 1:
        return FieldSpec.binary(1)
    return FieldSpec.smallest_at_least(theta)


def select_msr_field(n: int) -> FieldSpec:
    """Plus petit corps d'ordre >= n (vecteurs principaux de Vandermonde)."""
    return FieldSpec.smallest_at_least(n)


def systematize(spec: "MbrCodeSpec", nodes: Sequence[int]) -> "MbrCodeSpec":
    """
    Rend systématique un ensemble de k nœuds d'un code MBR.

    Les B colonnes distinctes stockées par ces nœuds (par indice croissant)
    sont envoyées sur la base canonique par un changement de base inversible :
    ces nœuds stockent alors les symboles source sans codage.

    Args:
        spec: Spécification MBR
        nodes: Les k identifiants à rendre systématiques

    Returns:
        MbrCodeSpec: Spécification équivalente, famille transformée
    """
    params = spec.params
    chosen = sorted(nodes)
    if len(set(chosen)) != len(chosen):
        raise DuplicateNodeError(f"Nœuds dupliqués dans {list(nodes)}")
    if len(chosen) != params.k:
        raise ParameterError(f"{len(chosen)} nœuds fournis, k={params.k} requis")

    columns = spec.download_plan(chosen).columns
    if len(columns) != params.B:
        raise ParameterError(f"Les nœuds {chosen} couvrent {len(columns)} colonnes, B={params.B}")
    selected = spec.family.matrix().select_rows(columns)
    try:
        transform = invert(selected)
    except SingularMatrixError as e:
        raise ParameterError(f"Les nœuds {chosen} n'engendrent pas les {params.B} dimensions") from e

    if transform == Matrix.identity(spec.field, params.B):
        logger.debug(f"Nœuds {chosen} déjà systématiques")
        return replace(spec, systematic_nodes=tuple(chosen))

    logger.info(f"Code MBR rendu systématique sur les nœuds {chosen}")
    return replace(spec, family=spec.family.transformed(transform), systematic_nodes=tuple(chosen))
