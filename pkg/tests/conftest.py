import pytest

from lambertkit import config
from lambertkit.arith import classical
from lambertkit.factorization import FactorizationPair, LambertParams, snk_matrix
from lambertkit.qseries import pochhammer


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    """Point the report cache at a throwaway directory."""
    path = tmp_path / "cache"
    monkeypatch.setattr(config, "CACHE_DIR", path)
    monkeypatch.setattr(config, "USE_CACHE", True)
    return path


@pytest.fixture(scope="session")
def figure_pair():
    return FactorizationPair(pochhammer(1, 1, 16), LambertParams(1, 0, 2, 1))


@pytest.fixture(scope="session")
def figure_matrix(figure_pair):
    return snk_matrix(figure_pair, 16)


@pytest.fixture(params=["one", "phi", "mu", "sigma_1"])
def unit_seed(request):
    return classical(request.param)
