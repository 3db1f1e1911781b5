"""
Classical arithmetic functions and Dirichlet algebra.

• Factorization through a smallest-prime-factor sieve that grows on demand up
  to LAMBERTKIT_SIEVE_BOUND; sympy.factorint beyond it.
• ArithFn memoizes every value it computes (append-only, safe to share).
• Λ and log are exact LOGLIN values.
"""

from __future__ import annotations

import json
import logging
import re
import threading
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from pathlib import Path
from typing import Callable, Sequence

import sympy

from lambertkit import config
from lambertkit.kernel import (
    LogLin,
    Ring,
    RingElement,
    RingError,
    join,
    ring_of,
    unit_inverse,
    is_unit,
    zero,
)

logger = logging.getLogger(__name__)


class ArithFn:
    """A named arithmetic function n ≥ 1 → RingElement."""

    def __init__(self, name: str, fn: Callable[[int], RingElement], ring: Ring = Ring.INT):
        self.name = name
        self.ring = ring
        self._fn = fn
        self._memo: dict[int, RingElement] = {}

    def __call__(self, n: int) -> RingElement:
        try:
            return self._memo[n]
        except KeyError:
            pass
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ValueError(f"{self.name} is defined for integers n >= 1, got {n!r}")
        value = self._fn(n)
        return self._memo.setdefault(n, value)

    def values(self, N: int) -> list[RingElement]:
        return [self(n) for n in range(1, N + 1)]

    def __repr__(self) -> str:
        return f"ArithFn({self.name!r}, ring={self.ring.value})"

    # pointwise algebra
    def __add__(self, other: "ArithFn") -> "ArithFn":
        return ArithFn(f"({self.name}+{other.name})", lambda n: self(n) + other(n), join(self.ring, other.ring))

    def __sub__(self, other: "ArithFn") -> "ArithFn":
        return ArithFn(f"({self.name}-{other.name})", lambda n: self(n) - other(n), join(self.ring, other.ring))

    def __neg__(self) -> "ArithFn":
        return ArithFn(f"-{self.name}", lambda n: -self(n), self.ring)

    def scaled(self, c: RingElement) -> "ArithFn":
        return ArithFn(f"{c}*{self.name}", lambda n: c * self(n), join(self.ring, ring_of(c)))

    @classmethod
    def from_table(cls, name: str, values: Sequence[RingElement], ring: Ring | None = None) -> "ArithFn":
        """values[0] is a_1."""
        table = list(values)
        if ring is None:
            ring = Ring.INT
            for v in table:
                ring = join(ring, ring_of(v))

        def lookup(n: int) -> RingElement:
            if n > len(table):
                raise ValueError(f"table {name!r} defines only n <= {len(table)}, asked for {n}")
            return table[n - 1]

        return cls(name, lookup, ring)

    @classmethod
    def from_json(cls, path: str | Path) -> "ArithFn":
        """A JSON array [a_1, a_2, ...] of integers or "p/q" strings."""
        raw = json.loads(Path(path).read_text())
        if not isinstance(raw, list) or not raw:
            raise ValueError(f"{path}: expected a non-empty JSON array")
        values = [Fraction(v) if isinstance(v, str) else int(v) for v in raw]
        if any(isinstance(v, Fraction) for v in values):
            values = [Fraction(v) for v in values]
        return cls.from_table(Path(path).stem, values)


# ───────────────────────────────────────── factorization ──
_SPF: list[int] = [0, 1]
_SPF_LOCK = threading.Lock()


def _grow_sieve(limit: int) -> None:
    global _SPF
    with _SPF_LOCK:
        if limit < len(_SPF):
            return
        size = min(max(limit, 2 * len(_SPF), 1024), config.SIEVE_BOUND)
        spf = list(range(size + 1))
        for i in range(2, isqrt(size) + 1):
            if spf[i] == i:
                for j in range(i * i, size + 1, i):
                    if spf[j] == j:
                        spf[j] = i
        _SPF = spf
        logger.debug("smallest-prime-factor sieve grown to %d", size)


def factorize(n: int) -> dict[int, int]:
    """Prime → exponent map of n ≥ 1 (empty for n = 1)."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    if n > config.SIEVE_BOUND:
        return {int(p): int(e) for p, e in sympy.factorint(n).items()}
    if n >= len(_SPF):
        _grow_sieve(n)
    spf = _SPF
    out: dict[int, int] = {}
    while n > 1:
        p = spf[n]
        out[p] = out.get(p, 0) + 1
        n //= p
    return out


@lru_cache(maxsize=65536)
def divisors(n: int) -> tuple[int, ...]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return tuple(sorted(divs))


def bigomega(n: int) -> int:
    return sum(factorize(n).values())


# ───────────────────────────────────────── classical functions ──
def _mu(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def _phi(n: int) -> int:
    out = 1
    for p, e in factorize(n).items():
        out *= p ** (e - 1) * (p - 1)
    return out


def _sigma(t: int) -> Callable[[int], int]:
    def sigma(n: int) -> int:
        out = 1
        for p, e in factorize(n).items():
            out *= sum(p ** (i * t) for i in range(e + 1))
        return out

    return sigma


def _jordan(t: int) -> Callable[[int], int]:
    def jordan(n: int) -> int:
        out = 1
        for p, e in factorize(n).items():
            out *= p ** (t * (e - 1)) * (p**t - 1)
        return out

    return jordan


def _vonmangoldt(n: int) -> LogLin:
    f = factorize(n)
    if len(f) == 1:
        (p,) = f
        return LogLin.of_prime(p)
    return LogLin()


def _r2(n: int) -> int:
    d1 = sum(1 for d in divisors(n) if d % 4 == 1)
    d3 = sum(1 for d in divisors(n) if d % 4 == 3)
    return 4 * (d1 - d3)


def _chi4(n: int) -> int:
    if n % 2 == 0:
        return 0
    return 1 if n % 4 == 1 else -1


def _divisor_parity_difference(n: int) -> int:
    odd = sum(1 for d in divisors(n) if d % 2)
    return odd - (len(divisors(n)) - odd)


_SIMPLE: dict[str, tuple[Callable[[int], RingElement], Ring]] = {
    "mu": (_mu, Ring.INT),
    "phi": (_phi, Ring.INT),
    "liouville": (lambda n: -1 if bigomega(n) % 2 else 1, Ring.INT),
    "vonmangoldt": (_vonmangoldt, Ring.LOGLIN),
    "mu_abs": (lambda n: abs(_mu(n)), Ring.INT),
    "omega": (lambda n: len(factorize(n)), Ring.INT),
    "r2": (_r2, Ring.INT),
    "one": (lambda n: 1, Ring.INT),
    "log": (lambda n: LogLin(factorize(n)), Ring.LOGLIN),
    "eps": (lambda n: 1 if n == 1 else 0, Ring.INT),
    "chi4": (_chi4, Ring.INT),
    "sign_alternating": (lambda n: 1 if n % 2 else -1, Ring.INT),
    "divisor_parity_difference": (_divisor_parity_difference, Ring.INT),
}

_INDEXED: dict[str, tuple[Callable[[int], Callable[[int], int]], int]] = {
    "sigma": (_sigma, 0),
    "id": (lambda t: (lambda n: n**t), 0),
    "jordan": (_jordan, 1),
}

_INDEXED_NAME = re.compile(r"^(sigma|id|jordan)_(\d+)$")


def registry() -> list[str]:
    return sorted(_SIMPLE) + [f"{base}_t" for base in sorted(_INDEXED)]


@lru_cache(maxsize=None)
def classical(name: str, t: int | None = None) -> ArithFn:
    """Look up a classical function: 'mu', 'sigma_2', or ('sigma', 2)."""
    m = _INDEXED_NAME.match(name)
    if m:
        name, t = m.group(1), int(m.group(2))
    elif name.endswith("_t") and name[:-2] in _INDEXED:
        name = name[:-2]
    if name in _SIMPLE:
        fn, ring = _SIMPLE[name]
        return ArithFn(name, fn, ring)
    if name in _INDEXED:
        factory, t_min = _INDEXED[name]
        if t is None or isinstance(t, bool) or not isinstance(t, int):
            raise ValueError(f"{name}_t needs an integer t, got {t!r}")
        if t < t_min:
            raise ValueError(f"{name}_t needs t >= {t_min}, got {t}")
        return ArithFn(f"{name}_{t}", factory(t), Ring.INT)
    raise ValueError(f"unknown arithmetic function {name!r}; known: {', '.join(registry())}")


def plus_minus(g: ArithFn) -> ArithFn:
    """g_±(n) = g(n) for n > 1 and −1 at n = 1."""
    return ArithFn(f"{g.name}_pm", lambda n: -1 if n == 1 else g(n), g.ring)


# ───────────────────────────────────────── Dirichlet algebra ──
def dirichlet_convolve(f: ArithFn, g: ArithFn) -> ArithFn:
    if f.ring is Ring.LOGLIN and g.ring is Ring.LOGLIN:
        raise RingError("cannot convolve two LOGLIN functions")
    ring = join(f.ring, g.ring)
    z = zero(ring)

    def conv(n: int) -> RingElement:
        acc = z
        for d in divisors(n):
            acc = acc + f(d) * g(n // d)
        return acc

    return ArithFn(f"({f.name}*{g.name})", conv, ring)


def dirichlet_inverse(f: ArithFn) -> ArithFn:
    f1 = f(1)
    if not is_unit(f1):
        raise RingError(f"{f.name}(1) = {f1} is not a unit; no Dirichlet inverse")
    inv1 = unit_inverse(f1)
    z = zero(f.ring)

    def inv_value(n: int) -> RingElement:
        if n == 1:
            return inv1
        acc = z
        for d in divisors(n)[:-1]:
            acc = acc + f(n // d) * inverse(d)
        return -(inv1 * acc)

    inverse = ArithFn(f"{f.name}^-1", inv_value, f.ring)
    return inverse


def offset_divisor_sum(a: ArithFn, alpha: int, offset: int, m: int) -> RingElement:
    """Σ a(d) over d ≥ 1 with (αd + offset) a positive divisor of m."""
    acc = zero(a.ring)
    for e in divisors(m):
        q, r = divmod(e - offset, alpha)
        if r == 0 and q >= 1:
            acc = acc + a(q)
    return acc


def restricted_divisor_sum(a: ArithFn, alpha: int, beta: int, m: int) -> RingElement:
    """b_m = Σ_{(αd−β) | m} a_d."""
    if alpha < 1 or not 0 <= beta < alpha:
        raise ValueError(f"need alpha >= 1 and 0 <= beta < alpha, got ({alpha}, {beta})")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return offset_divisor_sum(a, alpha, -beta, m)


def summatory(a: ArithFn, x: int) -> RingElement:
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    acc = zero(a.ring)
    for n in range(1, x + 1):
        acc = acc + a(n)
    return acc
