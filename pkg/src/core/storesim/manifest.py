# core/storesim/manifest.py
"""
Manifeste d'un cluster : tout ce qu'il faut pour reconstruire le code et
relire les blocs, sérialisé en lignes `clé=valeur`.
"""

from typing import Optional, Tuple

from loguru import logger
from pydantic import BaseModel, ValidationError, model_validator

from src.core.codes.base import CodeFamily
from src.core.field import FieldSpec
from src.utils.error_handler import ManifestError

MANIFEST_VERSION = 1

# Ordre d'écriture des clés
_KEYS = (
    "version", "code", "n", "k", "d", "alpha", "beta", "B", "theta", "field",
    "length", "chunks", "padding", "construction", "aux_version", "aux_seed", "systematic",
)


class Manifest(BaseModel):
    """Description persistée d'un fichier encodé."""
    version: int = MANIFEST_VERSION
    code: CodeFamily
    n: int
    k: int
    d: int
    alpha: int
    beta: int
    B: int
    theta: int
    field: str
    length: int
    chunks: int
    padding: int
    construction: str
    aux_version: int = 0
    aux_seed: Optional[int] = None
    systematic: Tuple[int, ...] = ()

    @model_validator(mode="after")
    def _check_layout(self) -> "Manifest":
        if self.version != MANIFEST_VERSION:
            raise ValueError(f"version {self.version} non prise en charge")
        FieldSpec.parse(self.field)
        if self.length < 1 or self.chunks < 1:
            raise ValueError("longueur et nombre de blocs doivent être positifs")
        if not 0 <= self.padding < self.B:
            raise ValueError(f"bourrage {self.padding} hors de [0, B={self.B})")
        return self

    @property
    def field_spec(self) -> FieldSpec:
        return FieldSpec.parse(self.field)

    @property
    def payload_symbols(self) -> int:
        return self.chunks * self.B - self.padding

    def to_text(self) -> str:
        values = self.model_dump()
        lines = []
        for key in _KEYS:
            value = values[key]
            if key == "code":
                value = value.value
            elif key == "aux_seed":
                value = "none" if value is None else value
            elif key == "systematic":
                value = ",".join(str(x) for x in value)
            lines.append(f"{key}={value}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Manifest":
        """
        Analyse un manifeste `clé=valeur`.

        Raises:
            ManifestError: Ligne mal formée, clé inconnue ou valeur invalide
        """
        values = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep or key not in _KEYS:
                raise ManifestError(f"Manifeste, ligne {number} : '{line}' invalide")
            values[key] = value.strip()

        if values.get("aux_seed", "none") == "none":
            values["aux_seed"] = None
        systematic = values.get("systematic", "")
        try:
            values["systematic"] = tuple(int(x) for x in systematic.split(",") if x.strip())
            return cls(**values)
        except (ValidationError, ValueError) as e:
            logger.error(f"Manifeste invalide : {e}")
            raise ManifestError(f"Manifeste invalide : {e}") from e
