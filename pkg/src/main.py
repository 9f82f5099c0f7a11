# src/main.py
"""
Point d'entrée en ligne de commande : encode, repair, reconstruct, verify,
simulate, fail et info.

Codes de sortie : 0 succès, 1 paramètres, 2 entrées-sorties,
3 perte de données ou vérification échouée.
"""

import argparse
import shutil
import sys
from pathlib import Path
from typing import List, Literal, Optional

from loguru import logger
from pydantic import BaseModel, Field, ValidationError

from src.config import AppConfig
from src.core.codes.base import CodeFamily
from src.core.field import FieldSpec
from src.core.storesim import HELPER_POLICIES, Cluster, TrialConfig, run_trial, verify_cluster
from src.core.storesim.cluster import node_directory
from src.core.verify import certify, parse_code_text
from src.utils.error_handler import (
    EXIT_OK,
    EXIT_PARAMETER,
    ParameterError,
    StorageIOError,
    UserFriendlyErrorHandler,
    VerificationError,
)
from src.utils.logger import setup_logging
from src.utils.validation import FilenameValidator, ParameterValidator


class CliConfig(BaseModel):
    """Arguments de la commande, validés avant toute entrée-sortie."""
    command: Literal["encode", "repair", "reconstruct", "verify", "simulate", "fail", "info"]
    code: Optional[CodeFamily] = None
    n: Optional[int] = None
    k: Optional[int] = None
    field: Optional[str] = None
    input: Optional[Path] = None
    out: Optional[Path] = None
    cluster: Optional[Path] = None
    codefile: Optional[Path] = None
    csv: Optional[Path] = None
    node: Optional[int] = None
    nodes: Optional[str] = None
    helpers: Optional[str] = None
    systematic: Optional[str] = None
    seed: Optional[int] = None
    aux_seed: Optional[int] = 0
    cycles: int = Field(default=100, ge=0)
    burst: Optional[int] = Field(default=None, ge=1)
    length: int = Field(default=64, ge=1)
    policy: Optional[Literal["lexicographic", "random"]] = None
    workers: Optional[int] = Field(default=None, ge=1)
    verbose: bool = False
    dump_log: Optional[Path] = None

    def check(self) -> None:
        """
        Contrôles métier : contraintes (n, k), corps, listes de nœuds, noms.

        Raises:
            ParameterError: Au premier paramètre invalide
        """
        if self.code is not None and self.n is not None and self.k is not None:
            ok, message = ParameterValidator.validate_code_params(self.code.value, self.n, self.k)
            if not ok:
                n, k = ParameterValidator.suggest_parameters(self.code.value, self.n, self.k)
                raise ParameterError(f"{message} (suggestion : --n {n} --k {k})")
        ok, message = ParameterValidator.validate_field_spec(self.field)
        if not ok:
            raise ParameterError(message)
        for name in ("nodes", "helpers", "systematic"):
            text = getattr(self, name)
            if text is not None:
                _, message = ParameterValidator.parse_node_list(text, 65536)
                if message:
                    raise ParameterError(f"--{name} : {message}")
        if self.systematic and self.code == CodeFamily.MSR:
            raise ParameterError("--systematic n'existe que pour --code mbr")
        for path in (self.out, self.csv):
            if path is not None:
                ok, message = FilenameValidator.validate(path.name)
                if not ok:
                    raise ParameterError(
                        f"Nom '{path.name}' invalide : {message} "
                        f"(suggestion : {FilenameValidator.suggest_fix(path.name)})")

    def node_list(self, text: Optional[str], n: int) -> Optional[List[int]]:
        if text is None:
            return None
        nodes, message = ParameterValidator.parse_node_list(text, n)
        if message:
            raise ParameterError(message)
        return nodes


class CliArgumentParser(argparse.ArgumentParser):
    """Analyseur dont les erreurs d'usage sortent avec le code 1 (paramètres)."""

    def error(self, message: str):
        raise ParameterError(f"{self.prog} : {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = CliArgumentParser(prog="exactregen", description="Codes régénérants exacts MBR / MSR")
    parser.add_argument("--verbose", action="store_true", help="journalisation détaillée")
    parser.add_argument("--dump-log", type=Path, help="écrit le journal de la commande dans ce fichier")
    sub = parser.add_subparsers(dest="command", required=True)

    def code_args(p, required=True):
        p.add_argument("--code", choices=["mbr", "msr"], required=required)
        p.add_argument("--n", type=int, required=required)
        p.add_argument("--k", type=int, required=required)
        p.add_argument("--field", help="prime:<p> ou gf2:<m> (sélection automatique sinon)")

    p = sub.add_parser("encode", help="encode un fichier sur un nouveau cluster")
    code_args(p)
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--out", type=Path)
    p.add_argument("--systematic", help="nœuds systématiques, ex. 1,2,3 (MBR)")
    p.add_argument("--aux-seed", type=int, default=0)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("repair", help="régénère un nœud défaillant")
    p.add_argument("--cluster", type=Path, required=True)
    p.add_argument("--node", type=int, required=True)
    p.add_argument("--helpers", help="assistants imposés, ex. 1,2,4,5")
    p.add_argument("--policy", choices=sorted(HELPER_POLICIES))
    p.add_argument("--seed", type=int)

    p = sub.add_parser("reconstruct", help="reconstruit le fichier à partir de k nœuds")
    p.add_argument("--cluster", type=Path, required=True)
    p.add_argument("--nodes", help="nœuds contactés, ex. 1,2,3")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--workers", type=int)

    p = sub.add_parser("verify", help="vérifie un cluster ou une description de code")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--cluster", type=Path)
    group.add_argument("--codefile", type=Path)

    p = sub.add_parser("simulate", help="essai de défaillances / réparations")
    code_args(p)
    p.add_argument("--cycles", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.add_argument("--burst", type=int, help="défaillances simultanées par cycle")
    p.add_argument("--length", type=int, default=64, help="taille du fichier aléatoire (octets)")
    p.add_argument("--policy", choices=sorted(HELPER_POLICIES))
    p.add_argument("--csv", type=Path, help="CSV des réparations")
    p.add_argument("--workers", type=int)

    p = sub.add_parser("fail", help="supprime le dossier d'un nœud")
    p.add_argument("--cluster", type=Path, required=True)
    p.add_argument("--node", type=int, required=True)

    p = sub.add_parser("info", help="affiche le manifeste d'un cluster")
    p.add_argument("--cluster", type=Path, required=True)
    return parser


def _print_values(values: dict) -> None:
    for key, value in values.items():
        print(f"{key}={value}")


def _read_bytes(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as e:
        logger.error(f"Lecture de {path} impossible : {e}")
        raise StorageIOError(f"Lecture de {path} impossible : {e}") from e


def _write_bytes(path: Path, data: bytes) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
    except OSError as e:
        logger.error(f"Écriture de {path} impossible : {e}")
        raise StorageIOError(f"Écriture de {path} impossible : {e}") from e


def cmd_encode(cfg: CliConfig, app: AppConfig) -> int:
    data = _read_bytes(cfg.input)
    field = FieldSpec.parse(cfg.field) if cfg.field else None
    systematic = cfg.node_list(cfg.systematic, cfg.n)
    out = cfg.out or (app.paths.workspace_path or Path.cwd()) / f"{cfg.input.stem}.cluster"

    cluster, manifest = Cluster.ingest(
        data, cfg.code.value, cfg.n, cfg.k, field, aux_seed=cfg.aux_seed,
        systematic=systematic, seed=_seed(cfg, app))
    cluster.save(out)

    values = {
        "code": manifest.code.value, "n": manifest.n, "k": manifest.k, "d": manifest.d,
        "alpha": manifest.alpha, "beta": manifest.beta, "B": manifest.B, "theta": manifest.theta,
        "q": cluster.spec.field.order, "field": manifest.field, "construction": manifest.construction,
        "length": manifest.length, "chunks": manifest.chunks, "padding": manifest.padding,
    }
    if manifest.code == CodeFamily.MSR:
        values["min_q"] = manifest.n
    values["cluster"] = out
    _print_values(values)
    return EXIT_OK


def _seed(cfg: CliConfig, app: AppConfig) -> int:
    return cfg.seed if cfg.seed is not None else app.default_seed


def _load(cfg: CliConfig, app: AppConfig) -> Cluster:
    policy = HELPER_POLICIES[cfg.policy or app.helper_policy]
    return Cluster.load(cfg.cluster, seed=_seed(cfg, app), policy=policy)


def cmd_repair(cfg: CliConfig, app: AppConfig) -> int:
    cluster = _load(cfg, app)
    helpers = cfg.node_list(cfg.helpers, cluster.params.n)
    transcript = cluster.repair(cfg.node, helpers)
    try:
        cluster.save_node(cfg.cluster, cfg.node)
        cluster.save_metadata(cfg.cluster)
    except OSError as e:
        raise StorageIOError(f"Écriture du nœud {cfg.node} impossible : {e}") from e
    _print_values({
        "failed": transcript.failed,
        "helpers": ",".join(str(h) for h in transcript.helpers),
        "symbols_per_chunk": transcript.symbols_per_chunk,
        "chunks": transcript.chunks,
        "total_symbols": transcript.total_symbols,
        "total_bytes": transcript.total_bytes,
    })
    return EXIT_OK


def cmd_reconstruct(cfg: CliConfig, app: AppConfig) -> int:
    cluster = _load(cfg, app)
    nodes = cfg.node_list(cfg.nodes, cluster.params.n)
    data = cluster.collect(nodes, workers=cfg.workers or app.workers)
    _write_bytes(cfg.out, data)
    _print_values({"length": len(data), "out": cfg.out})
    return EXIT_OK


def cmd_verify(cfg: CliConfig, app: AppConfig) -> int:
    if cfg.codefile is not None:
        text = _read_bytes(cfg.codefile).decode("utf-8", errors="replace")
        report = certify(parse_code_text(text))
    else:
        report = verify_cluster(_load(cfg, app))
    print(report.to_text())
    if not report.passed:
        raise VerificationError(f"échecs : {', '.join(report.failed_checks())}")
    return EXIT_OK


def cmd_simulate(cfg: CliConfig, app: AppConfig) -> int:
    try:
        trial = TrialConfig(
            code=cfg.code, n=cfg.n, k=cfg.k, cycles=cfg.cycles, seed=_seed(cfg, app),
            failure_model="burst" if cfg.burst else "single", burst=cfg.burst or 1,
            field=cfg.field, length=cfg.length, policy=cfg.policy or app.helper_policy,
            workers=cfg.workers or app.workers,
        )
    except ValidationError as e:
        raise ParameterError(f"Essai infaisable : {e}") from e
    report = run_trial(trial)
    print(report.to_text(), end="")
    if cfg.csv is not None:
        report.write_csv(cfg.csv)
    if not report.passed:
        raise VerificationError(
            f"{report.reconstructions - report.reconstruction_successes} collecte(s) incorrecte(s)")
    return EXIT_OK


def cmd_fail(cfg: CliConfig, app: AppConfig) -> int:
    cluster = _load(cfg, app)
    cluster.fail(cfg.node)
    try:
        shutil.rmtree(node_directory(cfg.cluster, cfg.node))
    except OSError as e:
        raise StorageIOError(f"Suppression du nœud {cfg.node} impossible : {e}") from e
    _print_values({"failed": cfg.node, "live": ",".join(str(i) for i in cluster.live_nodes())})
    return EXIT_OK


def cmd_info(cfg: CliConfig, app: AppConfig) -> int:
    cluster = _load(cfg, app)
    print(cluster.manifest.to_text(), end="")
    _print_values({"live": ",".join(str(i) for i in cluster.live_nodes())})
    return EXIT_OK


COMMANDS = {
    "encode": cmd_encode,
    "repair": cmd_repair,
    "reconstruct": cmd_reconstruct,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "fail": cmd_fail,
    "info": cmd_info,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Exécute une commande et retourne son code de sortie.

    Les arguments sont validés avant de toucher au dossier de l'application.

    Args:
        argv: Arguments (sys.argv[1:] par défaut)

    Returns:
        int: 0, 1, 2 ou 3
    """
    try:
        args = build_parser().parse_args(argv)
        cfg = CliConfig(**vars(args))
        cfg.check()
    except (ParameterError, ValidationError) as e:
        print(f"Paramètres invalides : {e}", file=sys.stderr)
        return EXIT_PARAMETER

    try:
        app = AppConfig.load_config()
    except ValidationError as e:
        print(f"Configuration invalide : {e}", file=sys.stderr)
        return EXIT_PARAMETER
    except OSError as e:
        title, message = UserFriendlyErrorHandler.handle_file_error(e, str(AppConfig.default_base_path()))
        print(f"{title} : {message}", file=sys.stderr)
        return UserFriendlyErrorHandler.exit_code_for(e)

    log_buffer = setup_logging(app, verbose=args.verbose)
    logger.debug(f"Commande {args.command} : {vars(args)}")

    try:
        return COMMANDS[cfg.command](cfg, app)
    except Exception as e:
        code = UserFriendlyErrorHandler.exit_code_for(e)
        if isinstance(e, OSError):
            path = getattr(args, "cluster", None) or getattr(args, "input", None) or ""
            title, message = UserFriendlyErrorHandler.handle_file_error(e, str(path))
        else:
            title, message = UserFriendlyErrorHandler.handle_code_error(e, args.command)
        print(f"{title} : {message}", file=sys.stderr)
        logger.debug(f"Sortie {code} après {type(e).__name__}")
        return code
    finally:
        if args.dump_log is not None:
            args.dump_log.write_text(log_buffer.text(), encoding="utf-8")


if __name__ == "__main__":
    sys.exit(main())
