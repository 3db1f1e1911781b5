"""
Utility functions for lambertkit.

• sha256 keys and a JSON cache under <CACHE_DIR>/<kind>/<sha>.json
• one-shot logging setup for the CLI
"""

from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Callable

from lambertkit import config

logger = logging.getLogger(__name__)

_LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _sha(text: str) -> str:
    """Computes SHA256 hash of a string."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def configure_logging(level: str | None = None) -> None:
    logging.basicConfig(level=level or config.LOG_LEVEL, format=_LOG_FORMAT)
    logging.getLogger("lambertkit").setLevel(level or config.LOG_LEVEL)


def cache_path(kind: str, key: str, cache_dir: Path | None = None) -> Path:
    root = Path(cache_dir) if cache_dir is not None else config.CACHE_DIR
    return root / kind / f"{_sha(key)}.json"


def cached_json(
    kind: str,
    key: str,
    builder: Callable[[], Any],
    *,
    use_cache: bool | None = None,
    cache_dir: Path | None = None,
) -> Any:
    """Return the cached JSON payload for *key*, building and storing it on a miss."""
    enabled = config.USE_CACHE if use_cache is None else use_cache
    path = cache_path(kind, key, cache_dir)

    if enabled and path.exists():
        logger.debug("cache hit %s", path)
        return json.loads(path.read_text())

    payload = builder()
    if enabled:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, sort_keys=True, indent=2))
        logger.debug("cache write %s", path)
    return payload
