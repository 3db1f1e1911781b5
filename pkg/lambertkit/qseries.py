"""
Truncated formal power series in q over a kernel ring.

• (q;q)_∞ is always expanded with the pentagonal number theorem; every other
  (q^a;q^b)_∞ product is multiplied out factor by factor.
• Truncation orders are explicit: a product keeps the smaller order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from lambertkit.kernel import (
    PolyD,
    Ring,
    RingElement,
    RingError,
    coerce,
    is_unit,
    join,
    ring_of,
    unit_inverse,
    zero,
    encode,
)


@dataclass(frozen=True)
class TruncatedSeries:
    order: int
    ring: Ring
    coeffs: tuple[RingElement, ...]

    def __post_init__(self):
        if self.order < 0:
            raise ValueError(f"series order must be >= 0, got {self.order}")
        if len(self.coeffs) != self.order + 1:
            raise ValueError(f"order {self.order} needs {self.order + 1} coefficients, got {len(self.coeffs)}")
        object.__setattr__(self, "coeffs", tuple(coerce(c, self.ring) for c in self.coeffs))

    @classmethod
    def from_coeffs(
        cls, coeffs: Sequence[RingElement], order: int | None = None, ring: Ring | None = None
    ) -> "TruncatedSeries":
        """Pad with zeros (or cut) to the requested order; the ring defaults to the join of the inputs."""
        if order is None:
            order = len(coeffs) - 1
        if ring is None:
            ring = Ring.INT
            for c in coeffs:
                ring = join(ring, ring_of(c))
        cs = list(coeffs[: order + 1]) + [zero(ring)] * max(0, order + 1 - len(coeffs))
        return cls(order, ring, tuple(cs))

    @classmethod
    def one(cls, order: int, ring: Ring = Ring.INT) -> "TruncatedSeries":
        return cls.from_coeffs([1], order, ring)

    def __getitem__(self, n: int) -> RingElement:
        if n < 0:
            return zero(self.ring)
        if n > self.order:
            raise IndexError(f"coefficient {n} beyond truncation order {self.order}")
        return self.coeffs[n]

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return TruncatedSeries(order, self.ring, self.coeffs[: order + 1])

    def to_json(self) -> dict:
        return {"order": self.order, "ring": self.ring.value, "coeffs": [encode(c) for c in self.coeffs]}


# ───────────────────────────────────────── arithmetic ──
def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    ring = join(a.ring, b.ring)
    order = min(a.order, b.order)
    return TruncatedSeries(order, ring, tuple(a.coeffs[i] + b.coeffs[i] for i in range(order + 1)))


def series_scale(a: TruncatedSeries, c: RingElement) -> TruncatedSeries:
    ring = join(a.ring, ring_of(c))
    return TruncatedSeries(a.order, ring, tuple(x * c for x in a.coeffs))


def series_shift(a: TruncatedSeries, m: int) -> TruncatedSeries:
    """Multiply by q^m (m ≥ 0), keeping the order."""
    if m < 0:
        raise ValueError("shift must be >= 0")
    z = zero(a.ring)
    return TruncatedSeries(a.order, a.ring, tuple(a.coeffs[n - m] if n >= m else z for n in range(a.order + 1)))


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Truncated Cauchy product."""
    ring = join(a.ring, b.ring)
    order = min(a.order, b.order)
    z = zero(ring)
    out = [z] * (order + 1)
    bc = b.coeffs
    for i in range(order + 1):
        x = a.coeffs[i]
        if not x:
            continue
        for j in range(order + 1 - i):
            y = bc[j]
            if y:
                out[i + j] = out[i + j] + x * y
    return TruncatedSeries(order, ring, tuple(out))


def series_pow(a: TruncatedSeries, e: int) -> TruncatedSeries:
    if e < 0:
        return series_pow(series_inverse(a), -e)
    result = TruncatedSeries.one(a.order, a.ring)
    for _ in range(e):
        result = series_mul(result, a)
    return result


def series_inverse(a: TruncatedSeries) -> TruncatedSeries:
    c0 = a.coeffs[0]
    if not is_unit(c0):
        raise RingError(f"constant term {c0} is not a unit; the series has no inverse")
    inv0 = unit_inverse(c0)
    z = zero(a.ring)
    out = [inv0]
    for n in range(1, a.order + 1):
        acc = z
        for k in range(1, n + 1):
            x = a.coeffs[k]
            if x:
                acc = acc + x * out[n - k]
        out.append(-(inv0 * acc))
    return TruncatedSeries(a.order, a.ring, tuple(out))


# ───────────────────────────────────────── constructions ──
def pentagonal_terms(limit: int) -> Iterator[tuple[int, int]]:
    """(index, sign) of (q;q)_∞ = Σ (−1)^j q^{j(3j±1)/2}, indices ≤ limit, in increasing order."""
    if limit >= 0:
        yield 0, 1
    j = 1
    while j * (3 * j - 1) // 2 <= limit:
        sign = -1 if j % 2 else 1
        yield j * (3 * j - 1) // 2, sign
        if j * (3 * j + 1) // 2 <= limit:
            yield j * (3 * j + 1) // 2, sign
        j += 1


def pochhammer(a: int, b: int, N: int) -> TruncatedSeries:
    """Π_{j≥0} (1 − q^{a+jb}) truncated at q^N."""
    if a < 1 or b < 1:
        raise ValueError(f"pochhammer needs a, b >= 1, got ({a}, {b})")
    if N < 0:
        raise ValueError("order must be >= 0")
    cs = [0] * (N + 1)
    if (a, b) == (1, 1):
        for idx, sign in pentagonal_terms(N):
            cs[idx] = sign
        return TruncatedSeries(N, Ring.INT, tuple(cs))
    cs[0] = 1
    e = a
    while e <= N:
        for n in range(N, e - 1, -1):
            cs[n] -= cs[n - e]
        e += b
    return TruncatedSeries(N, Ring.INT, tuple(cs))


def neg_pochhammer(a: int, b: int, N: int) -> TruncatedSeries:
    """Π_{j≥0} (1 + q^{a+jb}) truncated at q^N."""
    if a < 1 or b < 1:
        raise ValueError(f"neg_pochhammer needs a, b >= 1, got ({a}, {b})")
    cs = [0] * (N + 1)
    cs[0] = 1
    e = a
    while e <= N:
        for n in range(N, e - 1, -1):
            cs[n] += cs[n - e]
        e += b
    return TruncatedSeries(N, Ring.INT, tuple(cs))


def theta3(N: int) -> TruncatedSeries:
    """1 + 2 Σ_{n≥1} q^{n²}."""
    if N < 0:
        raise ValueError("order must be >= 0")
    cs = [0] * (N + 1)
    cs[0] = 1
    n = 1
    while n * n <= N:
        cs[n * n] = 2
        n += 1
    return TruncatedSeries(N, Ring.INT, tuple(cs))


def lambert_term(e_num: int, e_den: int, N: int, d_param: bool = False) -> TruncatedSeries:
    """q^{e_num} / (1 − q^{e_den}), or q^{e_num} / (1 − d·q^{e_den}) over ℤ[d]."""
    if e_num < 1 or e_den < 1:
        raise ValueError(f"lambert_term exponents must be >= 1, got ({e_num}, {e_den})")
    ring = Ring.POLY_D if d_param else Ring.INT
    cs: list[RingElement] = [zero(ring)] * (N + 1)
    m = 0
    e = e_num
    while e <= N:
        cs[e] = PolyD.monomial(1, m) if d_param else 1
        e += e_den
        m += 1
    return TruncatedSeries(N, ring, tuple(cs))
