import sys
from pathlib import Path

import numpy as np
import pytest

TESTS = Path(__file__).resolve().parent
if str(TESTS) not in sys.path:
    sys.path.insert(0, str(TESTS))


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def fixtures_dir() -> Path:
    return TESTS / "fixtures"


@pytest.fixture
def data_dir() -> Path:
    return TESTS.parent / "data"


@pytest.fixture
def golden_dir() -> Path:
    return TESTS / "golden"


@pytest.fixture(autouse=True)
def _isolated_tile_cache(monkeypatch, tmp_path):
    # keep tests away from the user's real cache directory
    monkeypatch.setenv("TERRAMAP_TILE_CACHE", str(tmp_path / "tilecache"))


@pytest.fixture(autouse=True)
def _fresh_canvas():
    import terramap.app as app

    app.clear()
    yield
    app.clear()
