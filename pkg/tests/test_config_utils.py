import importlib
import logging

import pytest

from lambertkit import config, utils


def test_scan_bound_defaults():
    assert config.get_scan_bound("conjecture") == 150
    assert config.get_scan_bound("rho-table") == 21
    assert config.get_scan_bound("recover") == 30
    assert config.get_scan_bound("matrix", 7) == 7


def test_sha():
    assert utils._sha("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"


def test_cache_path_is_keyed_by_sha(tmp_path):
    path = utils.cache_path("conjecture", "abc", tmp_path)
    assert path == tmp_path / "conjecture" / f"{utils._sha('abc')}.json"


def test_cached_json_builds_once(cache_dir):
    calls = []

    def build():
        calls.append(1)
        return {"rows": [21, 37]}

    assert utils.cached_json("demo", "key", build) == {"rows": [21, 37]}
    assert utils.cached_json("demo", "key", build) == {"rows": [21, 37]}
    assert len(calls) == 1
    assert utils.cache_path("demo", "key").exists()
    utils.cached_json("demo", "other", build)
    assert len(calls) == 2


def test_cached_json_can_be_bypassed(cache_dir):
    calls = []
    for _ in range(2):
        utils.cached_json("demo", "key", lambda: calls.append(1) or [1], use_cache=False)
    assert len(calls) == 2
    assert not cache_dir.exists()


def test_configure_logging():
    utils.configure_logging("DEBUG")
    assert logging.getLogger("lambertkit").level == logging.DEBUG
    utils.configure_logging("WARNING")
    assert logging.getLogger("lambertkit").level == logging.WARNING


@pytest.mark.parametrize(
    "key,value",
    [
        ("LAMBERTKIT_SIEVE_BOUND", "lots"),
        ("LAMBERTKIT_ENUMERATION_CAP", "0"),
        ("LAMBERTKIT_LOG_LEVEL", "chatty"),
    ],
)
def test_bad_environment_is_rejected(monkeypatch, key, value):
    monkeypatch.setenv(key, value)
    try:
        with pytest.raises(ValueError, match=key):
            importlib.reload(config)
    finally:
        monkeypatch.delenv(key)
        importlib.reload(config)


def test_environment_is_read_at_import(monkeypatch):
    monkeypatch.setenv("LAMBERTKIT_ENUMERATION_CAP", "25")
    monkeypatch.setenv("LAMBERTKIT_USE_CACHE", "0")
    try:
        importlib.reload(config)
        assert config.ENUMERATION_CAP == 25
        assert config.USE_CACHE is False
    finally:
        monkeypatch.delenv("LAMBERTKIT_ENUMERATION_CAP")
        monkeypatch.delenv("LAMBERTKIT_USE_CACHE")
        importlib.reload(config)
