# core/storesim/cluster.py
"""
Simulateur de cluster de stockage : n nœuds, défaillances franches,
réparations par régénération et collecte des données par k nœuds.

Toutes les modifications passent par le journal d'événements ; à graine
égale, deux simulations produisent le même journal.
"""

import itertools
import shutil
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from src.core.codes import AnyCodeSpec, NodeState, RepairTranscript, build_code
from src.core.codes.mbr import MbrCodeSpec
from src.core.codes.msr import MsrCodeSpec
from src.core.field import FieldSpec
from src.core.storesim.manifest import Manifest
from src.core.storesim.packing import decode_symbols, encode_symbols, from_stripe, to_stripe
from src.core.verify import CertificateReport, LinearStorageCode, certify
from src.utils.error_handler import (
    CorruptionError,
    DataLossError,
    ExactRegenError,
    ManifestError,
    MissingHelperError,
    ParameterError,
    RepairImpossibleError,
    StorageIOError,
    UnsupportedOperationError,
)

MANIFEST_FILE = "manifest.txt"
AUX_FILE = "aux.txt"
# Nombre maximal de k-sous-ensembles comparés par verify_cluster
MAX_CONSISTENCY_SUBSETS = 20

HelperPolicy = Callable[[AnyCodeSpec, int, Sequence[int], np.random.Generator], Tuple[int, ...]]


def lexicographic_policy(spec: AnyCodeSpec, failed: int, live: Sequence[int],
                         rng: np.random.Generator) -> Tuple[int, ...]:
    """Les d plus petits identifiants vivants."""
    return spec.default_helpers(failed, live)


def random_policy(spec: AnyCodeSpec, failed: int, live: Sequence[int],
                  rng: np.random.Generator) -> Tuple[int, ...]:
    """d assistants tirés au hasard parmi les nœuds vivants."""
    candidates = sorted(i for i in live if i != failed)
    size = min(spec.params.d, len(candidates))
    chosen = rng.choice(candidates, size=size, replace=False)
    return tuple(sorted(int(x) for x in chosen))


HELPER_POLICIES: Dict[str, HelperPolicy] = {
    "lexicographic": lexicographic_policy,
    "random": random_policy,
}


def node_directory(root: Path, node_id: int) -> Path:
    return Path(root) / f"node_{node_id}"


def chunk_file(root: Path, node_id: int, chunk: int) -> Path:
    return node_directory(root, node_id) / f"chunk_{chunk}.sym"


@dataclass(frozen=True)
class ClusterEvent:
    """Entrée du journal : ingestion, défaillance, réparation, ajout ou collecte."""
    seq: int
    kind: str
    node: Optional[int] = None
    detail: str = ""

    def to_text(self) -> str:
        node = "-" if self.node is None else self.node
        return f"seq={self.seq} kind={self.kind} node={node} {self.detail}".rstrip()


class Cluster:
    """
    État simulé d'un cluster : spécification du code, nœuds vivants et
    journal. Un seul écrivain à la fois (verrou interne) ; les collectes
    travaillent sur une copie des états.
    """

    def __init__(self, spec: AnyCodeSpec, manifest: Manifest, nodes: Dict[int, NodeState],
                 seed: int = 0, policy: HelperPolicy = lexicographic_policy):
        self.spec = spec
        self._manifest = manifest
        self._nodes: Dict[int, NodeState] = dict(nodes)
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self.policy = policy
        self.events: List[ClusterEvent] = []
        self.transcripts: List[RepairTranscript] = []
        self._lock = threading.RLock()

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def ingest(cls, data: bytes, code: str, n: int, k: int, field: Optional[FieldSpec] = None,
               aux_seed: Optional[int] = 0, systematic: Optional[Sequence[int]] = None,
               seed: int = 0, policy: HelperPolicy = lexicographic_policy) -> Tuple["Cluster", Manifest]:
        """
        Encode un fichier sur un nouveau cluster.

        Args:
            data: Contenu du fichier (non vide)
            code: "mbr" ou "msr"
            n: Nombre de nœuds
            k: Nombre de nœuds de reconstruction
            field: Corps imposé (sélection automatique sinon)
            aux_seed: Graine des vecteurs auxiliaires (MSR)
            systematic: Nœuds systématiques (MBR)
            seed: Graine des tirages du simulateur

        Returns:
            Tuple[Cluster, Manifest]: Le cluster et son manifeste
        """
        if not data:
            raise ParameterError("Impossible d'encoder un fichier vide")
        spec = build_code(code, n, k, field, aux_seed, systematic)
        stripe, padding = to_stripe(data, spec.field, spec.params.B)
        states = spec.encode(stripe)
        manifest = _manifest_for(spec, len(data), stripe.shape[0], padding)
        cluster = cls(spec, manifest, {s.node_id: s for s in states}, seed, policy)
        cluster._log("ingest", None, f"length={len(data)} chunks={manifest.chunks} padding={padding}")
        logger.info(f"Fichier de {len(data)} octets encodé : {manifest.chunks} bloc(s), code {manifest.code.value}")
        return cluster, manifest

    @property
    def manifest(self) -> Manifest:
        return self._manifest

    @property
    def params(self):
        return self.spec.params

    def _refresh_manifest(self) -> None:
        update = {"n": self.params.n}
        if isinstance(self.spec, MsrCodeSpec):
            update.update(theta=self.params.n, aux_version=self.spec.aux_version)
        self._manifest = self._manifest.model_copy(update=update)

    def _log(self, kind: str, node: Optional[int], detail: str = "") -> ClusterEvent:
        event = ClusterEvent(len(self.events) + 1, kind, node, detail)
        self.events.append(event)
        return event

    def format_events(self) -> str:
        return "\n".join(event.to_text() for event in self.events)

    # ------------------------------------------------------------------
    # Cycle de vie des nœuds
    # ------------------------------------------------------------------

    def live_nodes(self) -> List[int]:
        return sorted(self._nodes)

    def failed_nodes(self) -> List[int]:
        return [i for i in self.spec.node_ids if i not in self._nodes]

    def node_state(self, node_id: int) -> NodeState:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise DataLossError(f"Le nœud {node_id} est indisponible") from None

    def fail(self, node_id: Optional[int] = None) -> ClusterEvent:
        """Défaillance franche d'un nœud donné, ou d'un nœud vivant tiré au hasard."""
        with self._lock:
            live = self.live_nodes()
            if node_id is None:
                if not live:
                    raise DataLossError("Aucun nœud vivant")
                node_id = int(self.rng.choice(live))
            self.spec._check_node_id(node_id)
            if node_id not in self._nodes:
                raise ParameterError(f"Le nœud {node_id} est déjà défaillant")
            del self._nodes[node_id]
            logger.info(f"Défaillance du nœud {node_id}")
            return self._log("fail", node_id)

    def fail_burst(self, count: int) -> List[ClusterEvent]:
        """`count` défaillances simultanées tirées au hasard."""
        if count < 1 or count > len(self._nodes):
            raise ParameterError(f"Rafale de {count} défaillances pour {len(self._nodes)} nœuds vivants")
        return [self.fail() for _ in range(count)]

    def _check_repairable(self) -> List[int]:
        live = self.live_nodes()
        if len(live) < self.params.k:
            raise DataLossError(f"{len(live)} nœuds vivants < k={self.params.k} : données perdues")
        if len(live) < self.params.d:
            raise RepairImpossibleError(
                f"{len(live)} nœuds vivants < d={self.params.d} : réparation impossible, collecte possible")
        return live

    def _helper_states(self, target: int, helpers: Optional[Sequence[int]], live: List[int]) -> List[NodeState]:
        chosen = tuple(helpers) if helpers else self.policy(self.spec, target, live, self.rng)
        missing = [h for h in chosen if h not in self._nodes]
        if missing:
            raise MissingHelperError(f"Assistants indisponibles : {missing}")
        return [self._nodes[h] for h in chosen]

    def repair(self, failed: int, helpers: Optional[Sequence[int]] = None) -> RepairTranscript:
        """
        Régénère un nœud défaillant pour tous les blocs.

        Args:
            failed: Nœud à régénérer
            helpers: Assistants imposés (politique du cluster sinon)

        Returns:
            RepairTranscript: Relevé de la réparation

        Raises:
            DataLossError: Moins de k nœuds vivants
            RepairImpossibleError: Moins de d nœuds vivants
        """
        with self._lock:
            self.spec._check_node_id(failed)
            if failed in self._nodes:
                raise ParameterError(f"Le nœud {failed} n'est pas défaillant")
            live = self._check_repairable()
            states = self._helper_states(failed, helpers, live)
            state, transcript = self.spec.repair(failed, states)
            self._nodes[failed] = state
            self.transcripts.append(transcript)
            self._refresh_manifest()
            helper_list = ",".join(str(h) for h in transcript.helpers)
            self._log("repair", failed, f"helpers={helper_list} symbols={transcript.total_symbols}")
            logger.info(f"Nœud {failed} réparé depuis {list(transcript.helpers)} "
                        f"({transcript.symbols_per_chunk} symboles par bloc)")
            return transcript

    def repair_all(self) -> List[RepairTranscript]:
        """Répare les nœuds défaillants un par un, par identifiant croissant."""
        return [self.repair(failed) for failed in self.failed_nodes()]

    def add_node(self, helpers: Optional[Sequence[int]] = None) -> RepairTranscript:
        """Ajoute un nœud (MSR uniquement) généré à partir de d assistants."""
        if not isinstance(self.spec, MsrCodeSpec):
            raise UnsupportedOperationError("L'ajout de nœud n'est possible que pour un code MSR")
        with self._lock:
            live = self._check_repairable()
            states = self._helper_states(self.params.n + 1, helpers, live)
            state, transcript = self.spec.add_node(states)
            self._nodes[state.node_id] = state
            self.transcripts.append(transcript)
            self._refresh_manifest()
            self._log("add", state.node_id, f"symbols={transcript.total_symbols}")
            return transcript

    # ------------------------------------------------------------------
    # Collecte
    # ------------------------------------------------------------------

    def choose_collect_nodes(self, random_subset: bool = False) -> Tuple[int, ...]:
        live = self.live_nodes()
        if len(live) < self.params.k:
            raise DataLossError(f"{len(live)} nœuds vivants < k={self.params.k} : données perdues")
        if random_subset:
            chosen = self.rng.choice(live, size=self.params.k, replace=False)
            return tuple(sorted(int(x) for x in chosen))
        return tuple(live[:self.params.k])

    def collect(self, nodes: Optional[Sequence[int]] = None, random_subset: bool = False,
                workers: int = 1) -> bytes:
        """
        Reconstruit le fichier à partir de k nœuds vivants.

        Args:
            nodes: Nœuds contactés (les k plus petits vivants sinon)
            random_subset: Tirer k nœuds vivants au hasard
            workers: Nombre de fils de décodage (blocs répartis par plages)

        Returns:
            bytes: Le fichier d'origine
        """
        with self._lock:
            chosen = tuple(nodes) if nodes else self.choose_collect_nodes(random_subset)
            states = [self.node_state(i).copy() for i in chosen]
            # Table auxiliaire lue avec les états : une réparation concurrente la modifie
            aux = self.spec.snapshot()[1] if isinstance(self.spec, MsrCodeSpec) else None
            manifest = self._manifest
            self._log("collect", None, "nodes=" + ",".join(str(i) for i in chosen))

        stripe = decode_stripe(self.spec, states, workers, aux=aux)
        symbols = stripe.reshape(-1)[:manifest.payload_symbols]
        return from_stripe(symbols, manifest.length, self.spec.field)

    # ------------------------------------------------------------------
    # Persistance
    # ------------------------------------------------------------------

    def save(self, directory: Path) -> None:
        """Écrit le manifeste, la table auxiliaire (MSR) et un dossier par nœud vivant."""
        directory = Path(directory)
        try:
            directory.mkdir(parents=True, exist_ok=True)
            self.save_metadata(directory)
            for node_id in self.spec.node_ids:
                if node_id in self._nodes:
                    self.save_node(directory, node_id)
                elif node_directory(directory, node_id).exists():
                    shutil.rmtree(node_directory(directory, node_id))
        except OSError as e:
            logger.error(f"Écriture du cluster impossible : {e}")
            raise StorageIOError(f"Écriture de {directory} impossible : {e}") from e
        logger.info(f"Cluster enregistré dans {directory}")

    def save_metadata(self, directory: Path) -> None:
        directory = Path(directory)
        (directory / MANIFEST_FILE).write_text(self._manifest.to_text(), encoding="utf-8")
        if isinstance(self.spec, MsrCodeSpec):
            version, aux = self.spec.snapshot()
            lines = [f"version={version}"]
            lines += [f"{node}: " + " ".join(str(x) for x in aux[node]) for node in sorted(aux)]
            (directory / AUX_FILE).write_text("\n".join(lines) + "\n", encoding="utf-8")

    def save_node(self, directory: Path, node_id: int) -> None:
        """Réécrit uniquement le dossier d'un nœud."""
        state = self.node_state(node_id)
        target = node_directory(directory, node_id)
        target.mkdir(parents=True, exist_ok=True)
        for chunk in range(state.chunks):
            chunk_file(directory, node_id, chunk).write_bytes(
                encode_symbols(state.symbols[chunk], self.spec.field))

    @classmethod
    def load(cls, directory: Path, seed: int = 0,
             policy: HelperPolicy = lexicographic_policy) -> "Cluster":
        """
        Relit un cluster enregistré ; les nœuds sans dossier sont défaillants.

        Raises:
            StorageIOError: Dossier ou fichier illisible
            ManifestError: Manifeste invalide ou incohérent
        """
        directory = Path(directory)
        manifest_path = directory / MANIFEST_FILE
        try:
            manifest = Manifest.from_text(manifest_path.read_text(encoding="utf-8"))
        except FileNotFoundError as e:
            logger.error(f"Manifeste introuvable : {manifest_path}")
            raise ManifestError(f"Manifeste introuvable : {manifest_path}") from e
        except OSError as e:
            raise StorageIOError(f"Lecture de {manifest_path} impossible : {e}") from e

        try:
            spec = build_code(manifest.code, manifest.n, manifest.k, manifest.field_spec,
                              manifest.aux_seed, manifest.systematic or None)
        except ExactRegenError as e:
            raise ManifestError(f"Paramètres du manifeste inutilisables : {e}") from e
        if spec.construction_tag() != manifest.construction:
            raise ManifestError(
                f"Construction '{manifest.construction}' attendue, '{spec.construction_tag()}' reconstruite")
        if isinstance(spec, MsrCodeSpec):
            _load_aux(spec, directory / AUX_FILE, manifest.aux_version)

        nodes: Dict[int, NodeState] = {}
        alpha = spec.params.alpha
        for node_id in spec.node_ids:
            folder = node_directory(directory, node_id)
            if not folder.is_dir():
                continue
            rows = []
            for chunk in range(manifest.chunks):
                path = chunk_file(directory, node_id, chunk)
                try:
                    rows.append(decode_symbols(path.read_bytes(), alpha, spec.field))
                except OSError as e:
                    raise StorageIOError(f"Lecture de {path} impossible : {e}") from e
            nodes[node_id] = NodeState(node_id, np.stack(rows))
        cluster = cls(spec, manifest, nodes, seed, policy)
        cluster._log("load", None, f"live={','.join(str(i) for i in cluster.live_nodes())}")
        logger.info(f"Cluster chargé depuis {directory} : nœuds vivants {cluster.live_nodes()}")
        return cluster


def _manifest_for(spec: AnyCodeSpec, length: int, chunks: int, padding: int) -> Manifest:
    p = spec.params
    is_msr = isinstance(spec, MsrCodeSpec)
    return Manifest(
        code=spec.code_family, n=p.n, k=p.k, d=p.d, alpha=p.alpha, beta=p.beta, B=p.B,
        theta=p.n if is_msr else p.theta, field=str(spec.field), length=length, chunks=chunks,
        padding=padding, construction=spec.construction_tag(),
        aux_version=spec.aux_version if is_msr else 0,
        aux_seed=spec.aux_seed if is_msr else None,
        systematic=() if is_msr else spec.systematic_nodes,
    )


def _load_aux(spec: MsrCodeSpec, path: Path, expected_version: int) -> None:
    if not path.exists():
        if expected_version:
            raise ManifestError(f"Table auxiliaire {path} absente (version {expected_version} attendue)")
        return
    try:
        lines = [line.strip() for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]
        version = int(lines[0].partition("=")[2])
        for line in lines[1:]:
            node, _, values = line.partition(":")
            spec.set_aux(int(node), [int(x) for x in values.split()])
    except (OSError, ValueError, IndexError) as e:
        raise ManifestError(f"Table auxiliaire {path} illisible : {e}") from e
    if version != expected_version:
        raise ManifestError(f"Table auxiliaire v{version}, manifeste v{expected_version}")
    spec.aux_version = version


def decode_stripe(spec: AnyCodeSpec, states: Sequence[NodeState], workers: int = 1,
                 aux: Optional[Dict[int, Tuple[int, ...]]] = None) -> np.ndarray:
    """
    Décode tous les blocs ; avec plusieurs fils, chaque fil traite une plage
    contiguë de blocs et les résultats sont concaténés dans l'ordre.

    Pour un code MSR, `aux` est la table auxiliaire lue en même temps que
    les états.
    """
    reconstruct = spec.reconstruct if aux is None else partial(spec.reconstruct, aux=aux)
    chunks = states[0].chunks
    if workers <= 1 or chunks < 2:
        return reconstruct(states)
    ranges = [r for r in np.array_split(np.arange(chunks), min(workers, chunks)) if r.size]

    def decode_range(indices: np.ndarray) -> np.ndarray:
        lo, hi = int(indices[0]), int(indices[-1]) + 1
        return reconstruct([NodeState(s.node_id, s.symbols[lo:hi]) for s in states])

    with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
        parts = list(pool.map(decode_range, ranges))
    logger.debug(f"Décodage de {chunks} blocs sur {len(ranges)} fils")
    return np.concatenate(parts, axis=0)


@dataclass
class ClusterReport:
    """Résultat de verify_cluster."""
    certificate: Optional[CertificateReport] = None
    failures: List[str] = field(default_factory=list)
    subsets_checked: int = 0

    @property
    def passed(self) -> bool:
        certified = self.certificate is None or self.certificate.passed
        return certified and not self.failures

    def failed_checks(self) -> List[str]:
        names = list(self.certificate.failed_checks()) if self.certificate else []
        names += sorted({reason.split(":", 1)[0] for reason in self.failures})
        return names

    def to_text(self) -> str:
        blocks = [self.certificate.to_text()] if self.certificate else []
        blocks += [f"{reason}" for reason in self.failures]
        blocks.append(f"consistency_subsets={self.subsets_checked}")
        blocks.append(f"cluster={'PASS' if self.passed else 'FAIL'}")
        return "\n".join(blocks)


def verify_cluster(cluster: Cluster) -> ClusterReport:
    """
    Vérifie un cluster : certificat de sous-espaces (MBR), cohérence des
    copies d'arêtes entre nœuds vivants (MBR) et accord des décodages sur
    plusieurs k-sous-ensembles de nœuds vivants.
    """
    report = ClusterReport()
    spec = cluster.spec
    live = cluster.live_nodes()

    if isinstance(spec, MbrCodeSpec):
        report.certificate = certify(LinearStorageCode.from_spec(spec))
        for i, j in itertools.combinations(live, 2):
            left = spec.helper_symbol(cluster.node_state(i), j)
            right = spec.helper_symbol(cluster.node_state(j), i)
            if not np.array_equal(left, right):
                report.failures.append(f"edge-copies: arête {{{i}, {j}}} incohérente")

    if len(live) < spec.params.k:
        report.failures.append(f"availability: {len(live)} nœuds vivants < k={spec.params.k}")
        return report

    reference = None
    subsets = itertools.islice(itertools.combinations(live, spec.params.k), MAX_CONSISTENCY_SUBSETS)
    for subset in subsets:
        report.subsets_checked += 1
        try:
            decoded = spec.reconstruct([cluster.node_state(i) for i in subset])
        except CorruptionError as e:
            report.failures.append(f"decode-consistency: {list(subset)} {e}")
            continue
        if reference is None:
            reference = decoded
        elif not np.array_equal(reference, decoded):
            report.failures.append(f"decode-consistency: {list(subset)} diffère du premier décodage")
    logger.info(f"Vérification du cluster : {'succès' if report.passed else 'échec'}")
    return report

