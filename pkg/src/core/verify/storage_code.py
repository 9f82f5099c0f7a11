# core/verify/storage_code.py
"""
Description d'un code de stockage linéaire quelconque : pour chaque nœud,
alpha vecteurs de coefficients de longueur B.

Format texte :

    # commentaire
    n k d alpha beta B field=<spec>
    v v v ... | v v v ... | ...      (une ligne par nœud, alpha vecteurs)
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Sequence, Tuple

import numpy as np

from src.core.codes.base import CodeSpec
from src.core.field import FieldSpec
from src.core.linalg import Subspace
from src.utils.error_handler import CodeFileFormatError, ParameterError

Vector = Tuple[int, ...]


@dataclass(frozen=True)
class LinearStorageCode:
    """Code linéaire : le nœud i stocke les produits f^t l pour ses alpha vecteurs l."""
    n: int
    k: int
    d: int
    alpha: int
    beta: int
    B: int
    field: FieldSpec
    nodes: Tuple[Tuple[Vector, ...], ...]

    def __post_init__(self):
        if not 1 <= self.k <= self.n or self.d < 1 or self.d >= self.n:
            raise ParameterError(f"Paramètres invalides n={self.n}, k={self.k}, d={self.d}")
        if len(self.nodes) != self.n:
            raise ParameterError(f"{len(self.nodes)} nœuds décrits, n={self.n}")
        for node, vectors in enumerate(self.nodes, start=1):
            if len(vectors) != self.alpha:
                raise ParameterError(f"Nœud {node} : {len(vectors)} vecteurs, alpha={self.alpha}")
            for vector in vectors:
                if len(vector) != self.B:
                    raise ParameterError(f"Nœud {node} : vecteur de longueur {len(vector)}, B={self.B}")
                if not all(self.field.contains(x) for x in vector):
                    raise ParameterError(f"Nœud {node} : vecteur {vector} hors de {self.field}")

    @classmethod
    def from_spec(cls, spec: CodeSpec) -> "LinearStorageCode":
        """Description linéaire d'un code MBR ou MSR construit."""
        p = spec.params
        nodes = tuple(tuple(tuple(v) for v in spec.node_vectors(i)) for i in spec.node_ids)
        return cls(p.n, p.k, p.d, p.alpha, p.beta, p.B, spec.field, nodes)

    @property
    def node_ids(self) -> List[int]:
        return list(range(1, self.n + 1))

    @cached_property
    def _subspaces(self) -> Dict[int, Subspace]:
        return {i: Subspace.span(self.field, self.B, self.nodes[i - 1]) for i in self.node_ids}

    def subspace(self, node_id: int) -> Subspace:
        """W_i, le sous-espace engendré par les vecteurs du nœud."""
        if not 1 <= node_id <= self.n:
            raise ParameterError(f"Nœud {node_id} hors de 1..{self.n}")
        return self._subspaces[node_id]

    def with_vector(self, node_id: int, position: int, vector: Sequence[int]) -> "LinearStorageCode":
        """Copie où le vecteur `position` du nœud `node_id` est remplacé."""
        nodes = [list(vectors) for vectors in self.nodes]
        nodes[node_id - 1][position] = tuple(int(x) for x in vector)
        return LinearStorageCode(self.n, self.k, self.d, self.alpha, self.beta, self.B,
                                 self.field, tuple(tuple(v) for v in nodes))


def mutate(code: LinearStorageCode, rng: np.random.Generator) -> Tuple[LinearStorageCode, int, int]:
    """
    Remplace un vecteur choisi au hasard par un vecteur aléatoire différent.

    Returns:
        Tuple[LinearStorageCode, int, int]: (code muté, nœud, position)
    """
    node = int(rng.integers(1, code.n + 1))
    position = int(rng.integers(0, code.alpha))
    original = code.nodes[node - 1][position]
    while True:
        candidate = tuple(int(x) for x in rng.integers(0, code.field.order, size=code.B))
        if candidate != original:
            return code.with_vector(node, position, candidate), node, position


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_code_text(text: str) -> LinearStorageCode:
    """
    Lit la description textuelle d'un code.

    Args:
        text: Contenu au format `n k d alpha beta B field=<spec>` puis une ligne par nœud

    Returns:
        LinearStorageCode: Le code décrit

    Raises:
        CodeFileFormatError: En-tête, nombre de lignes ou vecteurs invalides
    """
    lines = [(number, _strip(line)) for number, line in enumerate(text.splitlines(), start=1)]
    lines = [(number, line) for number, line in lines if line]
    if not lines:
        raise CodeFileFormatError("Description de code vide")

    header_number, header = lines[0]
    tokens = header.split()
    if len(tokens) != 7 or not tokens[6].startswith("field="):
        raise CodeFileFormatError(
            f"Ligne {header_number} : en-tête attendu `n k d alpha beta B field=<spec>`")
    try:
        n, k, d, alpha, beta, B = (int(t) for t in tokens[:6])
        field = FieldSpec.parse(tokens[6][len("field="):])
    except ValueError as e:
        raise CodeFileFormatError(f"Ligne {header_number} : {e}") from e

    body = lines[1:]
    if len(body) != n:
        raise CodeFileFormatError(f"{len(body)} lignes de nœud pour n={n}")
    nodes = []
    for number, line in body:
        try:
            vectors = tuple(tuple(int(x) for x in chunk.split()) for chunk in line.split("|"))
        except ValueError as e:
            raise CodeFileFormatError(f"Ligne {number} : entier invalide ({e})") from e
        nodes.append(vectors)
    try:
        return LinearStorageCode(n, k, d, alpha, beta, B, field, tuple(nodes))
    except ParameterError as e:
        raise CodeFileFormatError(str(e)) from e


def format_code_text(code: LinearStorageCode) -> str:
    header = f"{code.n} {code.k} {code.d} {code.alpha} {code.beta} {code.B} field={code.field}"
    lines = [header]
    for vectors in code.nodes:
        lines.append(" | ".join(" ".join(str(x) for x in vector) for vector in vectors))
    return "\n".join(lines) + "\n"
