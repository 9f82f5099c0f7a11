"""
Fixtures partagées : corps de référence, codes d'exemple et dossier
d'application isolé.
"""

import numpy as np
import pytest

from src.core.codes import mbr, msr
from src.core.field import FieldSpec


@pytest.fixture
def gf7() -> FieldSpec:
    return FieldSpec.prime(7)


@pytest.fixture
def gf11() -> FieldSpec:
    return FieldSpec.prime(11)


@pytest.fixture
def gf16() -> FieldSpec:
    return FieldSpec.binary(4)


@pytest.fixture
def gf256() -> FieldSpec:
    return FieldSpec.binary(8)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(2024)


@pytest.fixture
def mbr_53() -> mbr.MbrCodeSpec:
    """Code MBR (n=5, k=3) sur GF(2), famille de parité simple de dimension 9."""
    return mbr.build(5, 3)


@pytest.fixture
def mbr_53_gf11(gf11) -> mbr.MbrCodeSpec:
    return mbr.build(5, 3, gf11)


@pytest.fixture
def msr_53(gf7) -> msr.MsrCodeSpec:
    return msr.build(5, 3, gf7, aux_seed=7)


@pytest.fixture(autouse=True)
def isolated_home(tmp_path, monkeypatch):
    """Dossier d'application et variables d'environnement isolés."""
    home = tmp_path / "home"
    monkeypatch.setenv("EXACTREGEN_HOME", str(home))
    for name in ("DEBUG_MODE", "EXACTREGEN_LOG_TO_FILE", "EXACTREGEN_SEED",
                 "EXACTREGEN_WORKERS", "EXACTREGEN_HELPER_POLICY"):
        monkeypatch.delenv(name, raising=False)
    return home
