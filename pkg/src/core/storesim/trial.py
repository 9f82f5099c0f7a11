# core/storesim/trial.py
"""
Essais reproductibles : cycles de défaillance / réparation sur un fichier
aléatoire, avec comptabilité de bande passante comparée aux optimums.
"""

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Literal, Optional

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field, model_validator

from src.core.codes import CodeFamily
from src.core.codes.mbr import derive_params as derive_mbr
from src.core.codes.msr import derive_params as derive_msr
from src.core.codes.tradeoff import mbr_point, msr_point, naive_repair_symbols, repair_bandwidth
from src.core.field import FieldSpec
from src.core.storesim.cluster import HELPER_POLICIES, Cluster
from src.utils.error_handler import StorageIOError


class TrialConfig(BaseModel):
    """Configuration d'un essai."""
    code: CodeFamily
    n: int = Field(ge=2)
    k: int = Field(ge=1)
    cycles: int = Field(default=100, ge=0)
    seed: int = 0
    failure_model: Literal["single", "burst"] = "single"
    burst: int = Field(default=1, ge=1)
    field: Optional[str] = None
    length: int = Field(default=64, ge=1)
    aux_seed: Optional[int] = 0
    policy: Literal["lexicographic", "random"] = "lexicographic"
    random_collect: bool = False
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _check_feasible(self) -> "TrialConfig":
        field_spec = FieldSpec.parse(self.field) if self.field else None
        derive = derive_mbr if self.code == CodeFamily.MBR else derive_msr
        params = derive(self.n, self.k, field_spec)
        size = self.burst if self.failure_model == "burst" else 1
        if size > params.n - params.d:
            raise ValueError(f"rafale de {size} > n - d = {params.n - params.d} : réparation impossible")
        return self

    @property
    def field_spec(self) -> Optional[FieldSpec]:
        return FieldSpec.parse(self.field) if self.field else None


@dataclass(frozen=True)
class RepairRow:
    """Une ligne du CSV : une réparation."""
    cycle: int
    failed: int
    helpers: str
    symbols_per_chunk: int
    chunks: int
    total_symbols: int
    total_bytes: int


@dataclass
class TrialReport:
    """Métriques d'un essai et optimums théoriques correspondants."""
    config: TrialConfig
    n: int
    k: int
    d: int
    alpha: int
    beta: int
    B: int
    q: int
    chunks: int
    repairs: int = 0
    total_repair_symbols: int = 0
    total_repair_bytes: int = 0
    reconstructions: int = 0
    reconstruction_successes: int = 0
    theoretical_alpha: str = ""
    theoretical_repair_symbols: str = ""
    naive_repair_symbols: int = 0
    rows: List[RepairRow] = field(default_factory=list)
    events: str = ""

    @property
    def per_repair_symbols(self) -> float:
        """Symboles téléchargés par réparation et par bloc."""
        if not self.repairs:
            return 0.0
        return self.total_repair_symbols / (self.repairs * self.chunks)

    @property
    def passed(self) -> bool:
        return self.reconstruction_successes == self.reconstructions

    def to_text(self) -> str:
        values = {
            "code": self.config.code.value,
            "n": self.n, "k": self.k, "d": self.d, "alpha": self.alpha, "beta": self.beta,
            "B": self.B, "q": self.q, "chunks": self.chunks, "cycles": self.config.cycles,
            "seed": self.config.seed, "failure_model": self.config.failure_model,
            "repairs": self.repairs,
            "total_repair_symbols": self.total_repair_symbols,
            "total_repair_bytes": self.total_repair_bytes,
            "per_repair_symbols_per_chunk": f"{self.per_repair_symbols:g}",
            "theoretical_alpha": self.theoretical_alpha,
            "theoretical_repair_symbols_per_chunk": self.theoretical_repair_symbols,
            "naive_repair_symbols_per_chunk": self.naive_repair_symbols,
            "reconstructions": self.reconstructions,
            "reconstruction_successes": self.reconstruction_successes,
        }
        return "\n".join(f"{key}={value}" for key, value in values.items()) + "\n"

    def write_csv(self, path: Path) -> None:
        """Une ligne par réparation."""
        try:
            with open(path, "w", newline="", encoding="utf-8") as f:
                writer = csv.writer(f)
                writer.writerow(["cycle", "failed", "helpers", "symbols_per_chunk",
                                 "chunks", "total_symbols", "total_bytes"])
                for row in self.rows:
                    writer.writerow([row.cycle, row.failed, row.helpers, row.symbols_per_chunk,
                                     row.chunks, row.total_symbols, row.total_bytes])
        except OSError as e:
            logger.error(f"Écriture du CSV impossible : {e}")
            raise StorageIOError(f"Écriture de {path} impossible : {e}") from e


def run_trial(config: TrialConfig) -> TrialReport:
    """
    Exécute un essai : ingestion d'un fichier aléatoire, puis `cycles`
    défaillances (unitaires ou en rafale) suivies de réparations et d'une
    collecte comparée à l'original.

    Args:
        config: Configuration validée

    Returns:
        TrialReport: Métriques, déterministes à graine égale
    """
    rng = np.random.default_rng(config.seed)
    data = rng.integers(0, 256, size=config.length, dtype=np.uint8).tobytes()
    cluster, manifest = Cluster.ingest(
        data, config.code.value, config.n, config.k, config.field_spec,
        aux_seed=config.aux_seed, seed=config.seed, policy=HELPER_POLICIES[config.policy])
    p = cluster.params

    if config.code == CodeFamily.MBR:
        alpha_opt, beta_opt = mbr_point(p.B, p.k, p.d)
    else:
        alpha_opt, beta_opt = msr_point(p.B, p.k, p.d)
    report = TrialReport(
        config=config, n=p.n, k=p.k, d=p.d, alpha=p.alpha, beta=p.beta, B=p.B, q=p.q,
        chunks=manifest.chunks, theoretical_alpha=str(alpha_opt),
        theoretical_repair_symbols=str(repair_bandwidth(beta_opt, p.d)),
        naive_repair_symbols=naive_repair_symbols(p.B),
    )

    def check_collect() -> None:
        report.reconstructions += 1
        if cluster.collect(random_subset=config.random_collect, workers=config.workers) == data:
            report.reconstruction_successes += 1
        else:
            logger.warning(f"Collecte incorrecte après {report.repairs} réparation(s)")

    if config.cycles == 0:
        check_collect()

    burst = config.burst if config.failure_model == "burst" else 1
    for cycle in range(1, config.cycles + 1):
        cluster.fail_burst(burst)
        for transcript in cluster.repair_all():
            report.repairs += 1
            report.total_repair_symbols += transcript.total_symbols
            report.total_repair_bytes += transcript.total_bytes
            report.rows.append(RepairRow(
                cycle=cycle, failed=transcript.failed,
                helpers=" ".join(str(h) for h in transcript.helpers),
                symbols_per_chunk=transcript.symbols_per_chunk, chunks=transcript.chunks,
                total_symbols=transcript.total_symbols, total_bytes=transcript.total_bytes,
            ))
        check_collect()

    report.events = cluster.format_events()
    logger.info(f"Essai terminé : {report.repairs} réparations, "
                f"{report.reconstruction_successes}/{report.reconstructions} collectes exactes")
    return report
