"""
Configuration de l'application : chemins, dossier de travail par défaut et
réglages lus dans l'environnement.
"""

from pathlib import Path
from typing import Literal, Optional
from pydantic import BaseModel, ConfigDict, Field
from dotenv import load_dotenv
import json
import os
from loguru import logger


def _env_flag(name: str) -> bool:
    return os.getenv(name, 'false').lower() == 'true'


class AppPaths(BaseModel):
    """Gestion des chemins de l'application."""
    base_path: Path            # Dossier racine de l'application
    config_file: Path         # Fichier de configuration
    logs_path: Path           # Dossier des logs
    workspace_path: Optional[Path] = None  # Dossier des clusters par défaut

    def ensure_all_paths(self) -> None:
        """Crée les répertoires nécessaires pour l'application."""
        for path in (self.base_path, self.logs_path):
            if not path.exists():
                path.mkdir(parents=True, exist_ok=True)
                logger.info(f"Création du répertoire : {path}")


class AppConfig(BaseModel):
    """Configuration principale de l'application."""

    # Les valeurs lues dans l'environnement sont validées comme les autres
    model_config = ConfigDict(validate_default=True)

    app_name: str = "ExactRegen"
    app_version: str = "1.0"

    debug_mode: bool = Field(default_factory=lambda: _env_flag('DEBUG_MODE'))
    log_to_file: bool = Field(default_factory=lambda: _env_flag('EXACTREGEN_LOG_TO_FILE'))

    # Réglages du simulateur
    default_seed: int = Field(default_factory=lambda: int(os.getenv('EXACTREGEN_SEED', '0')))
    workers: int = Field(default_factory=lambda: int(os.getenv('EXACTREGEN_WORKERS', '1')), ge=1)
    helper_policy: Literal["lexicographic", "random"] = Field(
        default_factory=lambda: os.getenv('EXACTREGEN_HELPER_POLICY', 'lexicographic')
    )

    paths: AppPaths

    def save_config(self) -> None:
        """Sauvegarde la configuration dans un fichier JSON."""
        config_data = {
            "workspace_path": str(self.paths.workspace_path) if self.paths.workspace_path else None,
            "default_seed": self.default_seed,
            "workers": self.workers,
            "helper_policy": self.helper_policy,
        }

        self.paths.config_file.parent.mkdir(parents=True, exist_ok=True)

        with open(self.paths.config_file, 'w') as f:
            json.dump(config_data, f, indent=4)
        logger.info("Configuration sauvegardée")

    def load_saved_config(self) -> None:
        """Charge la configuration depuis le fichier JSON."""
        if not self.paths.config_file.exists():
            return
        with open(self.paths.config_file, 'r') as f:
            config_data = json.load(f)
        if workspace_path := config_data.get("workspace_path"):
            self.paths.workspace_path = Path(workspace_path)
            logger.info(f"Dossier de travail chargé : {self.paths.workspace_path}")
        # Les variables d'environnement restent prioritaires
        if "default_seed" in config_data and 'EXACTREGEN_SEED' not in os.environ:
            self.default_seed = int(config_data["default_seed"])
        if "workers" in config_data and 'EXACTREGEN_WORKERS' not in os.environ:
            self.workers = max(1, int(config_data["workers"]))
        if config_data.get("helper_policy") in ("lexicographic", "random") \
                and 'EXACTREGEN_HELPER_POLICY' not in os.environ:
            self.helper_policy = config_data["helper_policy"]

    @staticmethod
    def default_base_path() -> Path:
        """Dossier racine selon l'OS, ou EXACTREGEN_HOME s'il est défini."""
        if home := os.getenv('EXACTREGEN_HOME'):
            return Path(home)
        if os.name == 'nt':  # Windows
            return Path(os.getenv('LOCALAPPDATA', Path.home())) / "ExactRegen"
        return Path.home() / ".exactregen"

    @classmethod
    def load_config(cls) -> 'AppConfig':
        """Charge ou crée une nouvelle configuration."""
        load_dotenv()

        base_path = cls.default_base_path()
        paths = AppPaths(
            base_path=base_path,
            config_file=base_path / "config.json",
            logs_path=base_path / "logs"
        )

        config = cls(paths=paths)
        paths.ensure_all_paths()
        config.load_saved_config()

        return config

    def set_workspace(self, path: Path) -> None:
        """Définit le dossier de travail et sauvegarde la configuration."""
        self.paths.workspace_path = path
        self.save_config()
        logger.info(f"Nouveau dossier de travail défini : {path}")
