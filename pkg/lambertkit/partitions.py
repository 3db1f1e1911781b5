"""
Partition counting functions and exhaustive enumerators.

The enumerators are exponential and exist as independent oracles for the
combinatorial readings of the factorization matrices; they refuse n above
LAMBERTKIT_ENUMERATION_CAP.
"""

from __future__ import annotations

import enum
import logging
import threading
from dataclasses import dataclass, replace
from typing import Callable, Iterator

from lambertkit import config
from lambertkit.qseries import (
    TruncatedSeries,
    neg_pochhammer,
    pentagonal_terms,
    pochhammer,
    series_inverse,
)

logger = logging.getLogger(__name__)


class EnumerationLimitError(ValueError):
    """Exhaustive enumeration requested beyond the configured cap."""


class Kind(str, enum.Enum):
    ALL = "ALL"
    DISTINCT_ODD = "DISTINCT_ODD"
    PARTS_IN_PROGRESSION = "PARTS_IN_PROGRESSION"
    DISTINCT_PARTS_IN_PROGRESSION = "DISTINCT_PARTS_IN_PROGRESSION"


class Parity(str, enum.Enum):
    EVEN_COUNT = "EVEN_COUNT"
    ODD_COUNT = "ODD_COUNT"


@dataclass(frozen=True)
class PartitionConstraint:
    """Which parts are allowed (αk−β, k ≥ 1), whether they must be distinct, and an optional parity on the number of parts."""

    kind: Kind = Kind.ALL
    alpha: int = 1
    beta: int = 0
    parity: Parity | None = None

    def __post_init__(self):
        if self.kind is Kind.ALL:
            object.__setattr__(self, "alpha", 1)
            object.__setattr__(self, "beta", 0)
        elif self.kind is Kind.DISTINCT_ODD:
            object.__setattr__(self, "alpha", 2)
            object.__setattr__(self, "beta", 1)
        if self.alpha < 1 or not 0 <= self.beta < self.alpha:
            raise ValueError(f"progression needs alpha >= 1 and 0 <= beta < alpha, got ({self.alpha}, {self.beta})")

    @classmethod
    def all(cls) -> "PartitionConstraint":
        return cls(Kind.ALL)

    @classmethod
    def distinct_odd(cls) -> "PartitionConstraint":
        return cls(Kind.DISTINCT_ODD)

    @classmethod
    def progression(cls, alpha: int, beta: int) -> "PartitionConstraint":
        return cls(Kind.PARTS_IN_PROGRESSION, alpha, beta)

    @classmethod
    def distinct_progression(cls, alpha: int, beta: int) -> "PartitionConstraint":
        return cls(Kind.DISTINCT_PARTS_IN_PROGRESSION, alpha, beta)

    def with_parity(self, parity: Parity | None) -> "PartitionConstraint":
        return replace(self, parity=parity)

    @property
    def distinct(self) -> bool:
        return self.kind in (Kind.DISTINCT_ODD, Kind.DISTINCT_PARTS_IN_PROGRESSION)

    def is_part(self, value: int) -> bool:
        return value >= 1 and (value + self.beta) % self.alpha == 0

    def allowed_parts(self, n: int) -> list[int]:
        """Admissible part sizes ≤ n, largest first."""
        parts = []
        k = 1
        while self.alpha * k - self.beta <= n:
            parts.append(self.alpha * k - self.beta)
            k += 1
        return parts[::-1]


# ───────────────────────────────────────── p(n) ──
_P: list[int] = [1]
_P_LOCK = threading.Lock()


def partition_p(n: int) -> int:
    """Euler's partition function by the pentagonal recurrence; 0 for n < 0."""
    if n < 0:
        return 0
    if n >= len(_P):
        with _P_LOCK:
            for m in range(len(_P), n + 1):
                total = 0
                for g, sign in pentagonal_terms(m):
                    if g:
                        total -= sign * _P[m - g]
                _P.append(total)
    return _P[n]


class _SeriesTable:
    """Coefficients of a fixed series, rebuilt at a larger order on demand."""

    def __init__(self, build: Callable[[int], TruncatedSeries]):
        self._build = build
        self._coeffs: tuple[int, ...] = ()
        self._lock = threading.Lock()

    def __call__(self, n: int) -> int:
        if n < 0:
            return 0
        if n >= len(self._coeffs):
            with self._lock:
                if n >= len(self._coeffs):
                    order = max(n, 2 * len(self._coeffs), 64)
                    self._coeffs = self._build(order).coeffs
                    logger.debug("series table grown to order %d", order)
        return self._coeffs[n]


_TILDE_Q = _SeriesTable(lambda N: pochhammer(1, 2, N))
_ODD_PARTS = _SeriesTable(lambda N: series_inverse(pochhammer(1, 2, N)))
_DISTINCT_PARTS = _SeriesTable(lambda N: neg_pochhammer(1, 1, N))


def tilde_q(n: int) -> int:
    """[q^n] (q;q²)_∞: (#even-length − #odd-length) partitions of n into distinct odd parts."""
    return _TILDE_Q(n)


def distinct_odd_q(n: int) -> int:
    """[q^n] 1/(q;q²)_∞, the number of partitions of n into odd parts."""
    return _ODD_PARTS(n)


def distinct_parts_q(n: int) -> int:
    return _DISTINCT_PARTS(n)


# ───────────────────────────────────────── enumeration ──
def _generate(remaining: int, parts: list[int], start: int, distinct: bool) -> Iterator[tuple[int, ...]]:
    if remaining == 0:
        yield ()
        return
    for idx in range(start, len(parts)):
        part = parts[idx]
        if part > remaining:
            continue
        nxt = idx + 1 if distinct else idx
        for rest in _generate(remaining - part, parts, nxt, distinct):
            yield (part,) + rest


def enumerate_partitions(n: int, c: PartitionConstraint | None = None) -> Iterator[tuple[int, ...]]:
    """All partitions of n satisfying c, as non-increasing tuples."""
    c = c or PartitionConstraint.all()
    if n < 0:
        return
    if n > config.ENUMERATION_CAP:
        raise EnumerationLimitError(f"enumeration of n={n} exceeds LAMBERTKIT_ENUMERATION_CAP={config.ENUMERATION_CAP}")
    for partition in _generate(n, c.allowed_parts(n), 0, c.distinct):
        if c.parity is Parity.EVEN_COUNT and len(partition) % 2:
            continue
        if c.parity is Parity.ODD_COUNT and len(partition) % 2 == 0:
            continue
        yield partition


def count_occurrences(n: int, part_value: int, c: PartitionConstraint | None = None) -> int:
    """Occurrences of part_value summed over all partitions of n satisfying c."""
    c = c or PartitionConstraint.all()
    if part_value > n or not c.is_part(part_value):
        return 0
    return sum(p.count(part_value) for p in enumerate_partitions(n, c))


def signed_occurrences(n: int, k: int, alpha: int, beta: int) -> int:
    """Occurrences of αk−β in odd-length minus even-length partitions into distinct parts αj−β."""
    base = PartitionConstraint.distinct_progression(alpha, beta)
    part = alpha * k - beta
    if part > n:
        return 0
    odd = count_occurrences(n, part, base.with_parity(Parity.ODD_COUNT))
    even = count_occurrences(n, part, base.with_parity(Parity.EVEN_COUNT))
    return odd - even
