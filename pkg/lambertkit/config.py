"""
Configuration settings for lambertkit.

All knobs come from the environment (or a local .env file) so the CLI and the
test-suite can be tuned without code changes.
"""

import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

_LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}


def _int_env(key: str, default: int, minimum: int) -> int:
    raw = os.getenv(key, str(default))
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{key} must be an integer, got {raw!r}") from None
    if value < minimum:
        raise ValueError(f"{key} must be >= {minimum}, got {value}")
    return value


# Arithmetic
# Smallest-prime-factor sieve limit; larger n are factored with sympy.
SIEVE_BOUND = _int_env("LAMBERTKIT_SIEVE_BOUND", 1_000_000, 2)

# Exhaustive partition enumeration is exponential, keep it small.
ENUMERATION_CAP = _int_env("LAMBERTKIT_ENUMERATION_CAP", 40, 1)

# Cache
CACHE_DIR = Path(os.getenv("LAMBERTKIT_CACHE_DIR", ".cache"))
USE_CACHE = os.getenv("LAMBERTKIT_USE_CACHE", "1").strip().lower() not in {"0", "false", "no"}

# Logging
LOG_LEVEL = os.getenv("LAMBERTKIT_LOG_LEVEL", "WARNING").upper()
if LOG_LEVEL not in _LOG_LEVELS:
    raise ValueError(f"LAMBERTKIT_LOG_LEVEL must be one of {sorted(_LOG_LEVELS)}, got {LOG_LEVEL!r}")

# Default truncation / scan bound per CLI verb
DEFAULT_BOUND = {
    "matrix": 16,
    "invert": 16,
    "conjecture": 150,
    "ds-table": 50,
    "rho-table": 21,
}
_FALLBACK_BOUND = 30


def get_scan_bound(verb: str, requested: int | None = None) -> int:
    """Get the explicit bound, or the default for the given verb."""
    if requested is not None:
        return requested
    return DEFAULT_BOUND.get(verb, _FALLBACK_BOUND)
