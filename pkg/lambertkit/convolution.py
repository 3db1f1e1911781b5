"""
Factorizations over Dirichlet convolutions f ∗ g and the j-fold self-convolution functions.

ds(j, g, n) uses the seed g(n)·[n > 1] − δ_{n,1}; with it D_g + ε is the Dirichlet
inverse of g and the closed-form inverse matrices below are exact.  The published
self-convolution table is the magnitude convention unsigned_ds, which runs the same
recursion on 2ε − g.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from math import comb

from lambertkit.arith import (
    ArithFn,
    bigomega,
    classical,
    dirichlet_convolve,
    divisors,
    plus_minus,
)
from lambertkit.factorization import (
    FactorizationPair,
    IdentityResult,
    LambertParams,
    compare_routes,
    lambert_series,
    pentagonal_B,
    snk_matrix,
)
from lambertkit.kernel import RingElement, TriMatrix, join, zero
from lambertkit.partitions import partition_p
from lambertkit.qseries import pochhammer, series_mul

logger = logging.getLogger(__name__)


class SelfConvTable:
    """Memoized ds(j, g, n) and D_g(n) for one seed function g with g(1) = 1."""

    def __init__(self, g: ArithFn):
        if g(1) != 1:
            raise ValueError(f"self-convolutions need g(1) = 1, got {g.name}(1) = {g(1)}")
        self.g = g
        self.ring = g.ring
        self._ds: dict[tuple[int, int], RingElement] = {}
        self._D: dict[int, RingElement] = {}

    def ds(self, j: int, n: int) -> RingElement:
        if j < 1 or n < 1:
            raise ValueError(f"ds needs j, n >= 1, got ({j}, {n})")
        key = (j, n)
        if key in self._ds:
            return self._ds[key]
        if j == 1:
            value = -1 if n == 1 else self.g(n)
        else:
            value = zero(self.ring)
            for d in divisors(n)[1:]:
                value = value + self.g(d) * self.ds(j - 1, n // d)
        self._ds[key] = value
        return value

    def D(self, n: int) -> RingElement:
        """Σ_{j=1}^{n} ds(2j, n)."""
        if n not in self._D:
            total = zero(self.ring)
            for j in range(1, n + 1):
                total = total + self.ds(2 * j, n)
            self._D[n] = total
        return self._D[n]


@lru_cache(maxsize=64)
def _table(g: ArithFn) -> SelfConvTable:
    return SelfConvTable(g)


def ds(j: int, g: ArithFn, n: int) -> RingElement:
    return _table(g).ds(j, n)


@lru_cache(maxsize=64)
def _fold_powers(g: ArithFn) -> list[ArithFn]:
    """[g_±, g_± ∗ g, g_± ∗ g ∗ g, ...], grown on demand."""
    return [plus_minus(g)]


def _fold(g: ArithFn, i: int) -> ArithFn:
    powers = _fold_powers(g)
    while len(powers) <= i:
        powers.append(dirichlet_convolve(powers[-1], g))
    return powers[i]


def ds_binomial(m: int, g: ArithFn, n: int) -> RingElement:
    """ds(m, g, n) as Σ_i C(m−1, i)(−1)^{m−1−i}·(g_± ∗ g^{∗i})(n)."""
    if g(1) != 1:
        raise ValueError(f"self-convolutions need g(1) = 1, got {g.name}(1) = {g(1)}")
    acc = zero(g.ring)
    for i in range(m):
        acc = acc + comb(m - 1, i) * (-1) ** (m - 1 - i) * _fold(g, i)(n)
    return acc


def reflect(g: ArithFn) -> ArithFn:
    """2ε − g."""
    return ArithFn(f"reflect({g.name})", lambda n: (2 if n == 1 else 0) - g(n), g.ring)


@lru_cache(maxsize=64)
def _reflected(g: ArithFn) -> ArithFn:
    return reflect(g)


def unsigned_ds(j: int, g: ArithFn, n: int) -> RingElement:
    return (-1) ** j * ds(j, _reflected(g), n)


def ds_table(g: ArithFn, J: int, N: int, unsigned: bool = True) -> list[list[RingElement]]:
    """Rows n = 1..N, columns j = 1..J."""
    fn = unsigned_ds if unsigned else ds
    return [[fn(j, g, n) for j in range(1, J + 1)] for n in range(1, N + 1)]


def D_fn(g: ArithFn, method: str = "recursive") -> ArithFn:
    if method == "recursive":
        table = _table(g)
        return ArithFn(f"D_{g.name}", table.D, g.ring)
    if method == "binomial":
        if g(1) != 1:
            raise ValueError(f"self-convolutions need g(1) = 1, got {g.name}(1) = {g(1)}")

        def via_binomial(n: int) -> RingElement:
            # ds(2j, g, n) vanishes once 2j > Ω(n) + 1
            acc = zero(g.ring)
            for j in range(1, (bigomega(n) + 1) // 2 + 1):
                acc = acc + ds_binomial(2 * j, g, n)
            return acc

        return ArithFn(f"D_{g.name}", via_binomial, g.ring)
    raise ValueError(f"unknown method {method!r}; use 'recursive' or 'binomial'")


# ───────────────────────────────────────── matrices ──
@lru_cache(maxsize=16)
def ordinary_snk(N: int) -> TriMatrix:
    """s_{n,k} = [q^n] (q;q)_∞ q^k/(1 − q^k)."""
    return snk_matrix(FactorizationPair(pochhammer(1, 1, N)), N)


def tilde_snk(g: ArithFn, N: int) -> TriMatrix:
    """Σ_j s_{n,kj}·g(j)."""
    s = ordinary_snk(N)
    ring = join(s.ring, g.ring)

    def entry(n: int, k: int) -> RingElement:
        acc = zero(ring)
        for j in range(1, n // k + 1):
            x = s[n, k * j]
            if x:
                acc = acc + x * g(j)
        return acc

    return TriMatrix.from_function(N, entry, ring)


def inverse_tilde_snk(g: ArithFn, N: int) -> TriMatrix:
    """(p_k ∗ μ)(n) + (p_k ∗ D_g ∗ μ)(n)."""
    h = dirichlet_convolve(D_fn(g) + classical("eps"), classical("mu"))
    z = zero(g.ring)

    def entry(n: int, k: int) -> RingElement:
        acc = z
        for d in divisors(n):
            p = partition_p(d - k)
            if p:
                acc = acc + p * h(n // d)
        return acc

    return TriMatrix.from_function(N, entry, g.ring)


def convolution_factorization_check(f: ArithFn, g: ArithFn, N: int) -> bool:
    """(q;q)_∞·Σ (f∗g)(n)qⁿ/(1−qⁿ) has coefficients Σ_k tilde_snk(g)_{n,k}·f(k)."""
    fg = dirichlet_convolve(f, g)
    left = series_mul(pochhammer(1, 1, N), lambert_series(fg, LambertParams.ordinary(), N))
    t = tilde_snk(g, N)
    for n in range(1, N + 1):
        right = zero(join(t.ring, f.ring))
        for k, x in enumerate(t.row(n), start=1):
            if x:
                right = right + x * f(k)
        if left[n] != right:
            logger.warning("convolution factorization fails at n=%d for (%s, %s)", n, f.name, g.name)
            return False
    return True


# ───────────────────────────────────────── ρ and u ──
def _rho_from(s: TriMatrix, tinv: TriMatrix, n: int, k: int, i: int) -> RingElement:
    acc = zero(join(s.ring, tinv.ring))
    for j in range(1, n // i + 1):
        x = s.get(n, i * j)
        if x:
            y = tinv.get(j, k)
            if y:
                acc = acc + x * y
    return acc


def rho(n: int, k: int, i: int, g: ArithFn, N: int) -> RingElement:
    """Σ_j s_{n,ij}·tilde_s⁻¹_{j,k}(g)."""
    if not (1 <= k <= n <= N and 1 <= i <= n):
        raise ValueError(f"need 1 <= k, i <= n <= N, got n={n}, k={k}, i={i}, N={N}")
    return _rho_from(ordinary_snk(N), inverse_tilde_snk(g, N), n, k, i)


def u(n: int, k: int, i: int, g: ArithFn, N: int) -> RingElement:
    """Σ_{m=0}^{n} ρ^{(i)}_{n−m,k}·p(m)."""
    if not (1 <= k <= n <= N and 1 <= i <= n):
        raise ValueError(f"need 1 <= k, i <= n <= N, got n={n}, k={k}, i={i}, N={N}")
    s = ordinary_snk(N)
    tinv = inverse_tilde_snk(g, N)
    acc = zero(g.ring)
    for m in range(0, n - k + 1):
        acc = acc + _rho_from(s, tinv, n - m, k, i) * partition_p(m)
    return acc


def rho_table(k: int = 1, g: ArithFn | None = None, rows: int = 21, cols: int = 10) -> list[list[RingElement]]:
    """ρ^{(i)}_{n,k} for n = 1..rows (rows of the table) and i = 1..cols (columns)."""
    g = g or classical("eps")
    s = ordinary_snk(rows)
    tinv = inverse_tilde_snk(g, rows)
    return [[_rho_from(s, tinv, n, k, i) for i in range(1, cols + 1)] for n in range(1, rows + 1)]


# ───────────────────────────────────────── corollaries ──
def _euler_partial_sums(N: int) -> list[int]:
    """[q^{k−1}] (q;q)_∞/(1 − q) for k = 1..N."""
    e = pochhammer(1, 1, N)
    out, running = [], 0
    for k in range(1, N + 1):
        running += e[k - 1]
        out.append(running)
    return out


def dirichlet_inverse_via_fact(f: ArithFn, N: int) -> ArithFn:
    if f(1) != 1:
        raise ValueError(f"{f.name}(1) must be 1, got {f(1)}")
    m = inverse_tilde_snk(f, N)
    E = _euler_partial_sums(N)
    values = []
    for n in range(1, N + 1):
        acc = zero(m.ring)
        for k, x in enumerate(m.row(n), start=1):
            if x and E[k - 1]:
                acc = acc + x * E[k - 1]
        values.append(acc)
    return ArithFn.from_table(f"{f.name}^-1", values, f.ring)


def solve_convolution(f: ArithFn, h: ArithFn, N: int) -> ArithFn:
    """The g with f ∗ g = h ∗ μ, read off the inverse matrix and the pentagonal transform of h."""
    m = inverse_tilde_snk(f, N)
    B = [pentagonal_B(h, k) for k in range(1, N + 1)]
    ring = join(m.ring, h.ring)
    values = []
    for n in range(1, N + 1):
        acc = zero(ring)
        for k, x in enumerate(m.row(n), start=1):
            if x and B[k - 1]:
                acc = acc + x * B[k - 1]
        values.append(acc)
    return ArithFn.from_table(f"solve({f.name},{h.name})", values, ring)


def b_recurrence_check(b: ArithFn, N: int) -> bool:
    """b regenerated from the Lambert series over b ∗ μ, in both recurrence shapes."""
    mu = classical("mu")
    regenerated = solve_convolution(mu, b, N)
    for n in range(1, N + 1):
        if regenerated(n) != b(n):
            logger.warning("b recurrence (inverse form) fails at n=%d", n)
            return False
    t = tilde_snk(mu, N)
    inner = []
    for j in range(1, N + 1):
        acc = zero(join(t.ring, b.ring))
        for k, x in enumerate(t.row(j), start=1):
            if x:
                acc = acc + x * b(k)
        inner.append(acc)
    for n in range(1, N + 1):
        acc = zero(join(t.ring, b.ring))
        for j in range(1, n + 1):
            acc = acc + partition_p(n - j) * inner[j - 1]
        if acc != b(n):
            logger.warning("b recurrence (double-sum form) fails at n=%d", n)
            return False
    return True


def application_identity_suite(N: int = 30) -> list[IdentityResult]:
    """Known convolution pairs recovered through solve_convolution, n ≤ N."""
    one, mu, phi, id1, sigma1 = (classical(x) for x in ("one", "mu", "phi", "id_1", "sigma_1"))
    # f ∗ g ∗ 1 = h; φ ∗ Id₁ ∗ 1 = Id₁ ∗ Id₁ since φ ∗ 1 = Id₁
    id1_id1 = dirichlet_convolve(id1, id1)
    cases: list[tuple[str, ArithFn, ArithFn, ArithFn]] = []
    for t in (0, 1, 2):
        sigma = classical("sigma", t)
        cases.append((f"mu from sigma_{t}", sigma, sigma, mu))
        cases.append((f"sigma_{t} from mu", mu, sigma, sigma))
    cases += [
        ("phi from one", one, sigma1, phi),
        ("one from phi", phi, sigma1, one),
        ("phi from id_1", id1, id1_id1, phi),
        ("id_1 from phi", phi, id1_id1, id1),
        ("log from mu", mu, classical("log"), classical("log")),
    ]
    results = []
    for label, f, h, expected in cases:
        solved = solve_convolution(f, h, N)
        results.append(compare_routes(label, [solved.values(N), expected.values(N)]))
    return results


def phi_unit_expansion_at_four() -> int:
    """The explicit φ-fold expansion of 1 = Σ_k tilde_s⁻¹_{4,k}(φ)·B_{k−1}(σ₁) at n = 4."""
    phi, sigma = classical("phi"), classical("sigma_1")
    pm = plus_minus(phi)
    f1 = dirichlet_convolve(pm, phi)
    f2 = dirichlet_convolve(f1, phi)
    f3 = dirichlet_convolve(f2, phi)
    first = (f3(4) - 3 * f2(4) + 4 * f1(4) - 2 * phi(4) + 2) * sigma(1)
    second = (f1(2) - phi(2) + 1) * (sigma(1) - sigma(2))
    third = sigma(1) + sigma(2) - sigma(3)
    fourth = sigma(2) + sigma(3) - sigma(4)
    return first - second - third - fourth
