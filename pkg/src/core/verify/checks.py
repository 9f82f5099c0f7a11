# core/verify/checks.py
"""
Vérifications de la caractérisation par sous-espaces des codes à
régénération exacte au point MBR.

Notation : W_i est le sous-espace engendré par les vecteurs du nœud i.
  - dim W_i = alpha pour tout i ;
  - dim(W_i ∩ sum_{j in D} W_j) = m beta pour tout D de taille m < k ;
  - pour tout ensemble D de d assistants, les W_i ∩ W_j (j in D) sont de
    dimension beta et en somme directe ;
  - structure : sur tout sous-ensemble de d + 1 nœuds, les intersections
    deux à deux forment le motif d'arêtes du graphe complet.
"""

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from loguru import logger

from src.core.linalg import Subspace, intersect, intersection_dim, sum_dim, sum_spaces
from src.core.verify.storage_code import LinearStorageCode
from src.utils.error_handler import ParameterError


@dataclass(frozen=True)
class CheckItem:
    """Une dimension calculée comparée à la valeur attendue."""
    subject: str
    expected: int
    actual: int

    @property
    def passed(self) -> bool:
        return self.expected == self.actual


@dataclass
class CheckReport:
    """Rapport d'une vérification : un élément par nœud ou par sous-ensemble."""
    name: str
    items: List[CheckItem] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def failures(self) -> List[CheckItem]:
        return [item for item in self.items if not item.passed]

    def __bool__(self) -> bool:
        return self.passed

    def to_text(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lines = [f"check={self.name} status={status} items={len(self.items)} failures={len(self.failures())}"]
        for item in self.failures():
            lines.append(f"  {item.subject}: attendu={item.expected} obtenu={item.actual}")
        return "\n".join(lines)


@dataclass
class StructureReport:
    """Résultat du test de structure, avec les raisons d'échec."""
    subsets_checked: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.passed

    def to_text(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lines = [f"check=structure status={status} subsets={self.subsets_checked} failures={len(self.failures)}"]
        lines.extend(f"  {reason}" for reason in self.failures[:20])
        return "\n".join(lines)


@dataclass
class CertificateReport:
    """Les quatre vérifications réunies."""
    lemma1: CheckReport
    corollary1: CheckReport
    lemma2: CheckReport
    structure: StructureReport

    @property
    def passed(self) -> bool:
        return all(self._by_name().values())

    def _by_name(self) -> Dict[str, bool]:
        return {
            "lemma1": self.lemma1.passed,
            "corollary1": self.corollary1.passed,
            "lemma2": self.lemma2.passed,
            "structure": self.structure.passed,
        }

    def failed_checks(self) -> List[str]:
        return [name for name, ok in self._by_name().items() if not ok]

    def to_text(self) -> str:
        blocks = [self.lemma1.to_text(), self.corollary1.to_text(),
                  self.lemma2.to_text(), self.structure.to_text()]
        blocks.append(f"certificate={'PASS' if self.passed else 'FAIL'}")
        return "\n".join(blocks)


def _check_subset(code: LinearStorageCode, i: int, subset: Sequence[int]) -> None:
    if len(set(subset)) != len(subset):
        raise ParameterError(f"Nœuds dupliqués dans {list(subset)}")
    if i in subset:
        raise ParameterError(f"Le nœud {i} ne peut pas figurer dans {list(subset)}")
    for node in (i, *subset):
        code.subspace(node)


def check_lemma1(code: LinearStorageCode) -> CheckReport:
    """dim W_i = alpha pour chaque nœud."""
    report = CheckReport("lemma1")
    for i in code.node_ids:
        report.items.append(CheckItem(f"dim W_{i}", code.alpha, code.subspace(i).dim))
    return report


def check_corollary1(code: LinearStorageCode, i: int, subset: Sequence[int]) -> int:
    """
    Dimension de W_i ∩ (somme des W_j, j dans `subset`).

    Args:
        code: Code à examiner
        i: Nœud examiné
        subset: Ensemble D_m de m < k nœuds, sans i

    Returns:
        int: La dimension calculée (attendue : m * beta)

    Raises:
        ParameterError: Si m >= k ou si i appartient à D_m
    """
    _check_subset(code, i, subset)
    if len(subset) >= code.k:
        raise ParameterError(f"m = {len(subset)} >= k = {code.k} : condition définie pour m < k seulement")
    if not subset:
        return 0
    combined = sum_spaces([code.subspace(j) for j in subset])
    return intersection_dim(code.subspace(i), combined)


def check_all_corollary1(code: LinearStorageCode) -> CheckReport:
    """check_corollary1 pour tout nœud et tout D_m, 1 <= m < k."""
    report = CheckReport("corollary1")
    for i in code.node_ids:
        others = [j for j in code.node_ids if j != i]
        for m in range(1, code.k):
            for subset in itertools.combinations(others, m):
                actual = check_corollary1(code, i, subset)
                report.items.append(CheckItem(f"W_{i} ∩ W{list(subset)}", m * code.beta, actual))
    return report


def check_lemma2(code: LinearStorageCode, i: int, helpers: Sequence[int]) -> CheckReport:
    """
    Les W_i ∩ W_j (j dans D) sont de dimension beta et en somme directe de
    dimension d * beta = alpha.
    """
    _check_subset(code, i, helpers)
    if len(helpers) != code.d:
        raise ParameterError(f"{len(helpers)} assistants, d={code.d} requis")
    report = CheckReport("lemma2")
    target = code.subspace(i)
    pieces = []
    for j in helpers:
        piece = intersect(target, code.subspace(j))
        pieces.append(piece)
        report.items.append(CheckItem(f"W_{i} ∩ W_{j}", code.beta, piece.dim))
    report.items.append(CheckItem(f"somme des intersections de W_{i} sur {list(helpers)}",
                                  code.d * code.beta, sum_dim(pieces)))
    report.items.append(CheckItem(f"d * beta = alpha (nœud {i})", code.alpha, code.d * code.beta))
    return report


def check_all_lemma2(code: LinearStorageCode) -> CheckReport:
    """
    check_lemma2 pour tout nœud i et tout ensemble de d assistants.

    Sans objet pour k < 2 : la dimension beta des intersections deux à deux
    découle de la condition d'intersection avec m = 1 < k.
    """
    report = CheckReport("lemma2")
    if code.k < 2:
        logger.debug("lemma2 sans objet pour k < 2")
        return report
    for i in code.node_ids:
        others = [j for j in code.node_ids if j != i]
        for helpers in itertools.combinations(others, code.d):
            report.items.extend(check_lemma2(code, i, helpers).items)
    return report


def check_structure(code: LinearStorageCode) -> StructureReport:
    """
    Test de structure sur chaque sous-ensemble de d + 1 nœuds.

    Dans chaque sous-ensemble : chaque paire de nœuds s'intersecte en un
    sous-espace de dimension beta, ces intersections sont deux à deux
    distinctes, et pour chaque nœud elles forment une décomposition en
    somme directe de W_i. Enfin tout ensemble de k nœuds engendre B
    dimensions.
    """
    report = StructureReport()
    if code.alpha != code.d * code.beta:
        report.failures.append(f"alpha={code.alpha} différent de d * beta={code.d * code.beta}")
        return report

    pattern_subsets = itertools.combinations(code.node_ids, code.d + 1) if code.k >= 2 else ()
    for subset in pattern_subsets:
        report.subsets_checked += 1
        edges: Dict[Tuple[int, int], Subspace] = {}
        for i, j in itertools.combinations(subset, 2):
            edge = intersect(code.subspace(i), code.subspace(j))
            edges[(i, j)] = edge
            if edge.dim != code.beta:
                report.failures.append(f"dim(W_{i} ∩ W_{j}) = {edge.dim}, beta={code.beta}")

        for (e1, s1), (e2, s2) in itertools.combinations(edges.items(), 2):
            if s1.dim and s1.same_span(s2):
                report.failures.append(f"intersections {e1} et {e2} identiques")

        for i in subset:
            incident = [s for (a, b), s in edges.items() if i in (a, b)]
            total = sum_dim(incident)
            if total != code.alpha or total != code.subspace(i).dim:
                report.failures.append(f"W_{i} n'est pas la somme directe de ses intersections ({total})")

    for nodes in itertools.combinations(code.node_ids, code.k):
        spanned = sum_dim([code.subspace(j) for j in nodes])
        if spanned != code.B:
            report.failures.append(f"les nœuds {list(nodes)} engendrent {spanned} < B={code.B}")

    if report.failures:
        logger.debug(f"Structure : {len(report.failures)} échec(s), premier : {report.failures[0]}")
    return report


def certify(code: LinearStorageCode) -> CertificateReport:
    """Exécute les quatre vérifications."""
    report = CertificateReport(
        lemma1=check_lemma1(code),
        corollary1=check_all_corollary1(code),
        lemma2=check_all_lemma2(code),
        structure=check_structure(code),
    )
    logger.info(f"Certificat {'valide' if report.passed else 'invalide'} : "
                f"échecs {report.failed_checks() or 'aucun'}")
    return report


def can_reconstruct(code: LinearStorageCode, nodes: Sequence[int]) -> bool:
    """Les nœuds donnés engendrent-ils tout GF(q)^B ?"""
    return sum_dim([code.subspace(j) for j in nodes]) == code.B


def regenerates_exactly(code: LinearStorageCode, i: int, helpers: Sequence[int]) -> bool:
    """
    Réparation exacte de W_i par transfert d'intersections : chaque
    assistant j envoie au plus beta dimensions de W_i ∩ W_j, et ces
    envois doivent engendrer W_i.
    """
    _check_subset(code, i, helpers)
    target = code.subspace(i)
    sent = []
    for j in helpers:
        piece = intersect(target, code.subspace(j))
        vectors = piece.vectors()[:code.beta]
        if vectors:
            sent.append(Subspace.span(code.field, code.B, vectors))
    if not sent:
        return target.dim == 0
    return sum_dim(sent) == target.dim
