"""
Factorization pairs (C(q), s_{n,k}) for generalized Lambert series.

A pair multiplies C(q) into Σ_k a_k q^{num(k)} / (1 − q^{den(k)}) and reads the
coefficient of q^n as Σ_k s_{n,k} a_k.  num(k) ≥ k always holds, so every
matrix built here is lower triangular.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

from lambertkit.arith import ArithFn, classical, dirichlet_convolve, dirichlet_inverse, divisors
from lambertkit.kernel import PolyD, Ring, RingElement, TriMatrix, is_unit, join, zero
from lambertkit.partitions import partition_p
from lambertkit.qseries import (
    TruncatedSeries,
    lambert_term,
    neg_pochhammer,
    pentagonal_terms,
    pochhammer,
    series_add,
    series_inverse,
    series_mul,
    series_scale,
    theta3,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LambertParams:
    """Exponents num(k) = α·k + β and den(k) = γ·k + δ, both ≥ 1 for every k ≥ 1."""

    alpha_num: int
    beta_num: int
    gamma_den: int
    delta_den: int

    def __post_init__(self):
        if self.alpha_num < 1 or self.gamma_den < 1:
            raise ValueError(f"need alpha_num >= 1 and gamma_den >= 1, got {self}")
        if self.alpha_num + self.beta_num < 1 or self.gamma_den + self.delta_den < 1:
            raise ValueError(f"exponents must stay >= 1 for every k >= 1, got {self}")

    @classmethod
    def ordinary(cls) -> "LambertParams":
        return cls(1, 0, 1, 0)

    @classmethod
    def parse(cls, text: str) -> "LambertParams":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"params must be four comma-separated integers, got {text!r}")
        try:
            return cls(*(int(p) for p in parts))
        except ValueError as exc:
            raise ValueError(f"invalid params {text!r}: {exc}") from None

    def numerator(self, k: int) -> int:
        return self.alpha_num * k + self.beta_num

    def denominator(self, k: int) -> int:
        return self.gamma_den * k + self.delta_den

    def __str__(self) -> str:
        return f"{self.alpha_num},{self.beta_num},{self.gamma_den},{self.delta_den}"


@dataclass(frozen=True)
class FactorizationPair:
    C: TruncatedSeries
    params: LambertParams = field(default_factory=LambertParams.ordinary)
    d_param: bool = False

    def __post_init__(self):
        if not is_unit(self.C.coeffs[0]):
            raise ValueError(f"C(q) needs a unit constant term, got {self.C.coeffs[0]}")


# ───────────────────────────────────────── C(q) constructions ──
_C_SERIES: dict[str, Callable[[int], TruncatedSeries]] = {
    "euler": lambda N: pochhammer(1, 1, N),
    "distinct_inverse": lambda N: series_inverse(neg_pochhammer(1, 1, N)),
    "odd": lambda N: pochhammer(1, 2, N),
    "one": lambda N: TruncatedSeries.one(N),
}


def c_series(name: str, N: int) -> TruncatedSeries:
    """euler = (q;q)_∞, distinct_inverse = 1/(−q;q)_∞, odd = (q;q²)_∞, one = 1."""
    try:
        return _C_SERIES[name](N)
    except KeyError:
        raise ValueError(f"unknown C(q) {name!r}; known: {', '.join(sorted(_C_SERIES))}") from None


def c_series_names() -> list[str]:
    return sorted(_C_SERIES)


# ───────────────────────────────────────── matrices ──
def lambert_series(a: ArithFn, params: LambertParams, N: int, d_param: bool = False) -> TruncatedSeries:
    ring = join(a.ring, Ring.POLY_D if d_param else Ring.INT)
    total = TruncatedSeries.from_coeffs([], N, ring)
    k = 1
    while params.numerator(k) <= N:
        ak = a(k)
        if ak:
            term = lambert_term(params.numerator(k), params.denominator(k), N, d_param)
            total = series_add(total, series_scale(term, ak))
        k += 1
    return total


def _snk_column(fp: FactorizationPair, k: int, N: int, ring: Ring) -> list[RingElement]:
    """[q^n] C·q^{num(k)}/(1 − w·q^{den(k)}) for n = 0..N."""
    col = [zero(ring)] * (N + 1)
    C = fp.C.coeffs
    e = fp.params.numerator(k)
    m = 0
    while e <= N:
        w = PolyD.monomial(1, m) if fp.d_param else 1
        for n in range(e, N + 1):
            c = C[n - e]
            if c:
                col[n] = col[n] + w * c
        e += fp.params.denominator(k)
        m += 1
    return col


def snk_matrix(fp: FactorizationPair, N: int) -> TriMatrix:
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if fp.C.order < N:
        raise ValueError(f"C(q) is truncated at order {fp.C.order}, need {N}")
    ring = join(fp.C.ring, Ring.POLY_D if fp.d_param else Ring.INT)
    cols = [_snk_column(fp, k, N, ring) for k in range(1, N + 1)]
    logger.debug("built %dx%d s-matrix for params %s (d=%s)", N, N, fp.params, fp.d_param)
    return TriMatrix(N, ring, tuple(tuple(cols[k - 1][n] for k in range(1, n + 1)) for n in range(1, N + 1)))


def factorization_check(a: ArithFn, fp: FactorizationPair, N: int) -> bool:
    s = snk_matrix(fp, N)
    left = series_mul(fp.C.truncate(N), lambert_series(a, fp.params, N, fp.d_param))
    values = a.values(N)
    for n in range(1, N + 1):
        right = zero(join(s.ring, a.ring))
        for k, x in enumerate(s.row(n), start=1):
            if x:
                right = right + x * values[k - 1]
        if left[n] != right:
            logger.warning("factorization fails at n=%d: %s != %s", n, left[n], right)
            return False
    return True


def shift_relation_check(alpha: int, beta: int, delta: int, N: int, C: TruncatedSeries | None = None) -> bool:
    """s_{n,k} for exponents (αk−β+δ, αk−β) equals the ordinary s_{n−δ, αk−β}."""
    if alpha < 1 or not 0 <= beta < alpha:
        raise ValueError(f"need alpha >= 1 and 0 <= beta < alpha, got ({alpha}, {beta})")
    size = N + max(0, -delta)
    C = C if C is not None else pochhammer(1, 1, size)
    shifted = snk_matrix(FactorizationPair(C.truncate(N), LambertParams(alpha, delta - beta, alpha, -beta)), N)
    ordinary = snk_matrix(FactorizationPair(C.truncate(size)), size)
    for n in range(1, N + 1):
        for k in range(1, n + 1):
            if shifted[n, k] != ordinary.get(n - delta, alpha * k - beta):
                logger.warning("shift relation fails at (%d,%d)", n, k)
                return False
    return True


# ───────────────────────────────────────── γ-defined inverses ──
def gamma_inverse_matrix(gamma: ArithFn, C: TruncatedSeries, N: int) -> TriMatrix:
    """Entry (n,k) = Σ_{d|n} [q^{d−k}] 1/C(q) · γ(n/d)."""
    if C.order < N:
        raise ValueError(f"C(q) is truncated at order {C.order}, need {N}")
    cinv = series_inverse(C.truncate(N))
    ring = join(cinv.ring, gamma.ring)
    z = zero(ring)

    def entry(n: int, k: int) -> RingElement:
        acc = z
        for d in divisors(n):
            if d >= k:
                c = cinv[d - k]
                if c:
                    acc = acc + c * gamma(n // d)
        return acc

    return TriMatrix.from_function(N, entry, ring)


def pentagonal_B(b: Callable[[int], RingElement], k: int) -> RingElement:
    """[q^k] (q;q)_∞ · Σ_{m≥1} b_m q^m."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    acc = zero(getattr(b, "ring", Ring.INT))
    for g, sign in pentagonal_terms(k - 1):
        acc = acc + sign * b(k - g)
    return acc


def bar_a_closed(a: ArithFn, gamma: ArithFn, alpha: int, beta: int, n: int) -> RingElement:
    """Σ over D | n with D = αj + β, j ≥ 1, of a_j·γ̃(n/D), γ̃ = γ ∗ 1."""
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    gamma_tilde = dirichlet_convolve(gamma, classical("one"))
    acc = zero(join(a.ring, gamma.ring))
    for D in divisors(n):
        j, r = divmod(D - beta, alpha)
        if r == 0 and j >= 1:
            acc = acc + a(j) * gamma_tilde(n // D)
    return acc


def b_coefficients(a: ArithFn, alpha: int, beta: int, C: TruncatedSeries, N: int) -> TruncatedSeries:
    """C(q)·Σ_d a_d q^{αd+β}/(1 − q^{αd+β}) to order N."""
    params = LambertParams(alpha, beta, alpha, beta)
    return series_mul(C.truncate(N), lambert_series(a, params, N))


def bar_a_sequence(
    a: ArithFn, gamma: ArithFn, alpha: int, beta: int, C: TruncatedSeries, N: int
) -> list[RingElement]:
    """bar_a_1..bar_a_N through the γ-defined inverse matrix."""
    m = gamma_inverse_matrix(gamma, C, N)
    B = b_coefficients(a, alpha, beta, C, N)
    return _row_products(m, B)


def _row_products(m: TriMatrix, B: TruncatedSeries) -> list[RingElement]:
    out = []
    ring = join(m.ring, B.ring)
    for n in range(1, m.size + 1):
        acc = zero(ring)
        for k, x in enumerate(m.row(n), start=1):
            if x and B[k]:
                acc = acc + x * B[k]
        out.append(acc)
    return out


def bar_a_via_matrix(
    a: ArithFn, gamma: ArithFn, alpha: int, beta: int, C: TruncatedSeries, n: int
) -> RingElement:
    return bar_a_sequence(a, gamma, alpha, beta, C, n)[-1]


# ───────────────────────────────────────── γ_k tables ──
def _shifted_partition_inverse() -> ArithFn:
    return dirichlet_inverse(ArithFn("p_1", lambda n: partition_p(n - 1)))


def gamma_table(sinv: TriMatrix) -> TriMatrix:
    """γ_k(n) with s⁻¹_{n,k} = Σ_{d|n} p(d−1)·γ_k(n/d), one column per k."""
    pinv = _shifted_partition_inverse()
    z = zero(sinv.ring)

    def entry(n: int, k: int) -> RingElement:
        acc = z
        for d in divisors(n):
            x = sinv.get(d, k)
            if x:
                acc = acc + x * pinv(n // d)
        return acc

    return TriMatrix.from_function(sinv.size, entry, sinv.ring)


# ───────────────────────────────────────── identity suite ──
@dataclass(frozen=True)
class IdentityResult:
    name: str
    holds: bool
    first_failure: int | None = None

    def to_json(self) -> dict:
        return {"name": self.name, "holds": self.holds, "first_failure": self.first_failure}


def compare_routes(name: str, routes: list[list[RingElement]]) -> IdentityResult:
    for n, values in enumerate(zip(*routes), start=1):
        if any(v != values[0] for v in values[1:]):
            logger.warning("identity %s fails at n=%d: %s", name, n, [str(v) for v in values])
            return IdentityResult(name, False, n)
    logger.info("identity %s holds", name)
    return IdentityResult(name, True)


def _divisor_side(alpha: int, beta: int, weight: Callable[[int, int], RingElement], ring: Ring, N: int):
    """n ↦ Σ_{D|n, D = αj+β, j ≥ 1} weight(j, n/D) for n ≤ N."""
    out = []
    for n in range(1, N + 1):
        acc = zero(ring)
        for D in divisors(n):
            j, r = divmod(D - beta, alpha)
            if r == 0 and j >= 1:
                acc = acc + weight(j, n // D)
        out.append(acc)
    return out


_PROGRESSIONS = ((2, 1), (3, 1), (3, 2))


def example_identity_suite(N: int = 30) -> list[IdentityResult]:
    """Applications of the γ-defined factorization, each checked three ways for n ≤ N."""
    C = pochhammer(1, 1, N)
    one = classical("one")
    chi4 = classical("chi4")
    results = []

    def family(name, a, gamma, alpha, beta, weight, ring=Ring.INT, extra=None):
        routes = [
            _divisor_side(alpha, beta, weight, ring, N),
            [bar_a_closed(a, gamma, alpha, beta, n) for n in range(1, N + 1)],
            bar_a_sequence(a, gamma, alpha, beta, C, N),
        ]
        if extra is not None:
            routes.append(extra)
        results.append(compare_routes(f"{name} (alpha={alpha}, beta={beta})", routes))

    for alpha, beta in _PROGRESSIONS:
        for t in (0, 1, 2):
            sigma = classical("sigma", t)
            family(f"sigma_{t}", one, classical("id", t), alpha, beta, lambda j, m, s=sigma: s(m))
        for t in (1, 2):
            sigma = classical("sigma", t)
            family(f"id_1/sigma_{t}", classical("id_1"), classical("id", t), alpha, beta,
                   lambda j, m, s=sigma: j * s(m))
        family("phi recovers n", classical("id_1"), classical("phi"), alpha, beta, lambda j, m: j * m)
        log = classical("log")
        family("vonmangoldt/log", one, classical("vonmangoldt"), alpha, beta, lambda j, m: log(m), Ring.LOGLIN)
        for t in (1, 2):
            family(f"jordan_{t}", classical("id_1"), classical("jordan", t), alpha, beta,
                   lambda j, m, t=t: j * m**t)

    # sums of two squares: exponents 2d − 1 run over the odd divisors
    r2 = classical("r2")
    id1 = classical("id_1")
    family("r2 via 4*chi4", id1, chi4.scaled(4), 2, -1, lambda j, m: id1(j) * r2(m))

    alternating = classical("sign_alternating").scaled(4)
    theta_B = series_mul(C, series_add(series_mul(theta3(N), theta3(N)), series_scale(TruncatedSeries.one(N), -1)))
    for label, gamma, gamma_tilde in (
        ("r2 weights against phi", classical("phi"), classical("id_1")),
        ("r2 weights against (-1)^(n+1)", classical("sign_alternating"), classical("divisor_parity_difference")),
    ):
        via_theta = _row_products(gamma_inverse_matrix(gamma, C, N), theta_B)
        family(label, alternating, gamma, 2, -1,
               lambda j, m, gt=gamma_tilde: 4 * chi4(2 * j - 1) * gt(m), extra=via_theta)
    return results
