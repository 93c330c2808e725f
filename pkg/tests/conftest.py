"""Shared fixtures: a few small braces reused across the suite."""

import json

import numpy as np
import pytest

from braceforge.algebra.brace import BraceTable
from braceforge.algebra.family_xv import build_brace
from braceforge.config.settings import get_settings
from braceforge.models.params import FamilyParams


@pytest.fixture
def fresh_settings(monkeypatch):
    """Keep BRACEFORGE_* from the caller's shell out of the tests."""
    for key in ("BRACEFORGE_THREADS", "BRACEFORGE_SAMPLES", "BRACEFORGE_SEED", "BRACEFORGE_TIME_BUDGET"):
        monkeypatch.delenv(key, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture(scope="session")
def params5() -> FamilyParams:
    return FamilyParams.create(5, 1)


@pytest.fixture(scope="session")
def family5(params5) -> BraceTable:
    return build_brace(params5)


@pytest.fixture(scope="session")
def family5_skew() -> BraceTable:
    """A member with nonzero i and k, and y != 1."""
    return build_brace(FamilyParams.create(5, 2, 3, 1))


@pytest.fixture(scope="session")
def trivial5() -> BraceTable:
    return BraceTable.trivial(5, 4)


@pytest.fixture(scope="session")
def trivial9() -> BraceTable:
    return BraceTable.trivial(3, 2)


@pytest.fixture(scope="session")
def ring9() -> BraceTable:
    """Brace of the algebra x F_3[x] / (x^3): basis e1 = x, e2 = x^2."""
    products = np.zeros((2, 2, 2), dtype=np.int64)
    products[0, 0] = [0, 1]
    return BraceTable.from_ring(3, 2, products)


@pytest.fixture
def tampered9() -> BraceTable:
    """Trivial brace over F_3^2 with lambda_1 replaced by the shear [[1, 1], [0, 1]].

    Every lambda stays linear and invertible, but a -> lambda_a is no longer a homomorphism.
    """
    mats = np.tile(np.eye(2, dtype=np.int64), (9, 1, 1))
    mats[1] = [[1, 1], [0, 1]]
    return BraceTable(3, 2, mats)


@pytest.fixture
def write_json(tmp_path):
    def _write(name: str, document: dict) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return str(path)

    return _write
