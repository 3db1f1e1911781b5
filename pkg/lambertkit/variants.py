"""
Variant factorizations and residual reports for the degenerate exponent schemes.

• s1 = S·U and s2 = S·V with U lower all-ones and V = I − (subdiagonal shift):
  their inverses have closed forms in p(n) and μ.
• conjecture_degenerate compares the exact inverse for exponents (k, αk + 1) with
  the conjectured closed form and keeps every nonzero difference.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from lambertkit.arith import ArithFn, classical, dirichlet_convolve, divisors, summatory
from lambertkit.convolution import D_fn, ordinary_snk
from lambertkit.factorization import (
    FactorizationPair,
    LambertParams,
    gamma_inverse_matrix,
    pentagonal_B,
    snk_matrix,
)
from lambertkit.kernel import (
    PolyD,
    Ring,
    RingElement,
    SingularReport,
    TriMatrix,
    decode,
    encode,
    join,
    tri_invert,
    zero,
)
from lambertkit.partitions import partition_p
from lambertkit.qseries import TruncatedSeries, pochhammer, series_inverse, series_mul

logger = logging.getLogger(__name__)


def ordinary_inverse_entry(n: int, k: int) -> int:
    """(p_k ∗ μ)(n), zero for n < 1."""
    if n < 1:
        return 0
    mu = classical("mu")
    return sum(partition_p(d - k) * mu(n // d) for d in divisors(n) if d >= k)


# ───────────────────────────────────────── s1 / s2 ──
def s1_matrix(N: int) -> TriMatrix:
    """d(n) pentagonally transformed, minus the partial row sum Σ_{i<k} s_{n,i}."""
    s = ordinary_snk(N)
    sigma0 = classical("sigma_0")

    def entry(n: int, k: int) -> int:
        return pentagonal_B(sigma0, n) - sum(s[n, i] for i in range(1, k))

    return TriMatrix.from_function(N, entry)


def s2_matrix(N: int) -> TriMatrix:
    s = ordinary_snk(N)
    return TriMatrix.from_function(N, lambda n, k: s[n, k] - s.get(n, k + 1))


def s1_inverse(N: int) -> TriMatrix:
    return TriMatrix.from_function(
        N, lambda n, k: ordinary_inverse_entry(n, k) - (ordinary_inverse_entry(n - 1, k) if n > 1 else 0)
    )


def s2_inverse(N: int) -> TriMatrix:
    return TriMatrix.from_function(N, lambda n, k: sum(ordinary_inverse_entry(j, k) for j in range(k, n + 1)))


def _apply(m: TriMatrix, values: list[RingElement]) -> list[RingElement]:
    out = []
    for n in range(1, m.size + 1):
        acc = zero(m.ring)
        for k, x in enumerate(m.row(n), start=1):
            if x:
                acc = acc + x * values[k - 1]
        out.append(acc)
    return out


def recover_a(a: ArithFn, N: int) -> list[RingElement]:
    """a_n from the s1 inverse and the pentagonal transform of A ∗ 1."""
    A = ArithFn(f"A[{a.name}]", lambda n: summatory(a, n), a.ring)
    A1 = dirichlet_convolve(A, classical("one"))
    return _apply(s1_inverse(N), [pentagonal_B(A1, k) for k in range(1, N + 1)])


def recover_A(a: ArithFn, N: int) -> list[RingElement]:
    """A(n) from the s2 inverse and the pentagonal transform of a ∗ 1."""
    a1 = dirichlet_convolve(a, classical("one"))
    return _apply(s2_inverse(N), [pentagonal_B(a1, k) for k in range(1, N + 1)])


def weighted_matrix(b: ArithFn, N: int) -> TriMatrix:
    """s_{n,k}/b_k − s_{n,k+1}/b_{k+1} over the rationals."""
    weights = [b(i) for i in range(1, N + 1)]
    for i, w in enumerate(weights, start=1):
        if w == 0:
            raise ValueError(f"weight {b.name}({i}) is zero")
    s = ordinary_snk(N)
    return TriMatrix.from_function(
        N,
        lambda n, k: Fraction(s[n, k]) / weights[k - 1] - (Fraction(s[n, k + 1]) / weights[k] if k < n else 0),
        Ring.RAT,
    )


def weighted_inverse(b: ArithFn, N: int) -> TriMatrix:
    """Σ_{i≤n} b_i·s⁻¹_{i,k}."""
    return TriMatrix.from_function(
        N, lambda n, k: Fraction(sum(b(i) * ordinary_inverse_entry(i, k) for i in range(k, n + 1))), Ring.RAT
    )


def weighted_variant_check(b: ArithFn, N: int, a: ArithFn | None = None) -> bool:
    a = a or classical("mu")
    m = weighted_matrix(b, N)
    inv = weighted_inverse(b, N)
    if not (m @ inv).is_identity() or not (inv @ m).is_identity():
        logger.warning("weighted inverse is not two-sided for weights %s", b.name)
        return False
    partial, running = [], Fraction(0)
    for i in range(1, N + 1):
        running += b(i) * a(i)
        partial.append(running)
    a1 = dirichlet_convolve(a, classical("one"))
    for n, value in enumerate(_apply(m, partial), start=1):
        if value != pentagonal_B(a1, n):
            logger.warning("weighted factorization fails at n=%d for weights %s", n, b.name)
            return False
    return True


def pm_transform(a: ArithFn) -> ArithFn:
    """b_n = a_n for odd n and a_n − 2a_{n/2} for even n."""
    return ArithFn(f"pm({a.name})", lambda n: a(n) if n % 2 else a(n) - 2 * a(n // 2), a.ring)


def pm_transform_check(a: ArithFn, N: int) -> bool:
    """Σ a_n qⁿ/(1 + qⁿ) and Σ b_n qⁿ/(1 − qⁿ) agree coefficientwise up to q^N."""
    b = pm_transform(a)
    for m in range(1, N + 1):
        left = zero(a.ring)
        right = zero(a.ring)
        for n in divisors(m):
            left = left + (1 if (m // n) % 2 else -1) * a(n)
            right = right + b(n)
        if left != right:
            logger.warning("plus-minus transform fails at q^%d", m)
            return False
    return True


# ───────────────────────────────────────── conjecture reports ──
@dataclass
class ConjectureReport:
    label: str
    params: LambertParams
    d_param: bool
    N: int
    ring: Ring
    residuals: dict[tuple[int, int], RingElement] = field(default_factory=dict)
    singular: SingularReport | None = None

    @property
    def nonzero_rows(self) -> list[int]:
        return sorted({n for n, _ in self.residuals})

    def row_vector(self, n: int) -> list[RingElement]:
        """Residuals of row n for k = 1..n."""
        return [self.residuals.get((n, k), zero(self.ring)) for k in range(1, n + 1)]

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "params": str(self.params),
            "d_param": self.d_param,
            "N": self.N,
            "ring": self.ring.value,
            "nonzero_rows": self.nonzero_rows,
            "residuals": [
                {"n": n, "k": k, "value": encode(v)} for (n, k), v in sorted(self.residuals.items())
            ],
            "singular": self.singular.to_json() if self.singular is not None else None,
        }

    @classmethod
    def from_json(cls, payload: Mapping) -> "ConjectureReport":
        ring = Ring(payload["ring"])
        singular = None
        if payload.get("singular"):
            s = payload["singular"]
            partial = TriMatrix.from_json(s["partial"]) if s.get("partial") else None
            singular = SingularReport(s["row"], s["reason"], partial)
        return cls(
            label=payload["label"],
            params=LambertParams.parse(payload["params"]),
            d_param=bool(payload["d_param"]),
            N=int(payload["N"]),
            ring=ring,
            residuals={(r["n"], r["k"]): decode(r["value"], ring) for r in payload["residuals"]},
            singular=singular,
        )


def _weight(i: int, d_flag: bool) -> RingElement:
    return PolyD.monomial(1, i) if d_flag else 1


def _single_terms(n: int, alpha: int, d_flag: bool) -> list[tuple[int, RingElement]]:
    """(x, w) with x = (n − i)/(αi + 1) ≥ 1 an integer."""
    terms = []
    i = 1
    while i + (alpha * i + 1) <= n:
        x, r = divmod(n - i, alpha * i + 1)
        if r == 0:
            terms.append((x, _weight(i, d_flag)))
        i += 1
    return terms


def _nested_terms(n: int, d_flag: bool) -> list[tuple[int, RingElement]]:
    """(x, w) of the p(m ± 1) correction sum, restricted to x ≥ 1."""
    terms = []
    m = 2
    while 4 * partition_p(m + 1) + partition_p(m - 1) <= n:
        step, offset = partition_p(m + 1), partition_p(m - 1)
        i = 1
        while step * i + offset + step * (2 * i + 1) <= n:
            x, r = divmod(n - step * i - offset, step * (2 * i + 1))
            if r == 0:
                terms.append((x, _weight(i, d_flag)))
            i += 1
        m += 1
    return terms


def conjectured_inverse_entry(n: int, k: int, alpha: int, d_flag: bool) -> RingElement:
    """Closed form for exponents (k, αk + 1); the p(m ± 1) correction applies to α = 2 only."""
    value: RingElement = PolyD.const(partition_p(n - k)) if d_flag else partition_p(n - k)
    for x, w in _single_terms(n, alpha, d_flag):
        value = value - w * partition_p(x - k)
    if alpha == 2:
        for x, w in _nested_terms(n, d_flag):
            value = value + w * partition_p(x - k)
    return value


def chain_inverse(alpha: int, d_flag: bool, N: int) -> TriMatrix:
    """Inverse for exponents (k, αk + 1) by s⁻¹_{n,k} = p(n−k) − Σ_i w(i)·s⁻¹_{(n−i)/(αi+1),k}."""
    ring = Ring.POLY_D if d_flag else Ring.INT
    rows: list[tuple[RingElement, ...]] = []
    for n in range(1, N + 1):
        terms = _single_terms(n, alpha, d_flag)
        row = []
        for k in range(1, n + 1):
            value = partition_p(n - k)
            for x, w in terms:
                if x >= k:
                    value = value - w * rows[x - 1][k - 1]
            row.append(value)
        rows.append(tuple(row))
    return TriMatrix(N, ring, tuple(rows))


def degenerate_params(alpha: int) -> LambertParams:
    return LambertParams(1, 0, alpha, 1)


def conjecture_degenerate(alpha: int, d_flag: bool, N: int) -> ConjectureReport:
    if alpha < 2:
        raise ValueError(f"alpha must be >= 2, got {alpha}")
    params = degenerate_params(alpha)
    s = snk_matrix(FactorizationPair(pochhammer(1, 1, N), params, d_flag), N)
    ring = s.ring
    report = ConjectureReport("degenerate", params, d_flag, N, ring)
    inv = tri_invert(s)
    if isinstance(inv, SingularReport):
        report.singular = inv
        return report
    for n in range(1, N + 1):
        for k in range(1, n + 1):
            diff = inv[n, k] - conjectured_inverse_entry(n, k, alpha, d_flag)
            if diff:
                report.residuals[(n, k)] = diff
    logger.info("alpha=%d d=%s N=%d: %d nonzero residual rows", alpha, d_flag, N, len(report.nonzero_rows))
    return report


def _strip(vector: list[RingElement]) -> list[RingElement]:
    out = list(vector)
    while out and not out[-1]:
        out.pop()
    return out


def cross_alpha_report(alphas: tuple[int, ...] = (3, 4, 5)) -> dict:
    """First nonzero residual row per α (expected at (α+1)(α+2)+1) and whether the rows agree."""
    rows = {}
    for alpha in alphas:
        report = conjecture_degenerate(alpha, False, (alpha + 1) * (alpha + 2) + 1)
        first = report.nonzero_rows[0] if report.nonzero_rows else None
        vector = _strip(report.row_vector(first)) if first else []
        rows[alpha] = {"row": first, "vector": vector}
    vectors = [r["vector"] for r in rows.values()]
    agree = all(v == vectors[0] for v in vectors) and bool(vectors[0])
    logger.info("cross-alpha residual rows %s agree=%s", {a: r["row"] for a, r in rows.items()}, agree)
    return {
        "rows": {str(a): {"row": r["row"], "vector": [encode(x) for x in r["vector"]]} for a, r in rows.items()},
        "agree": agree,
    }


def tilde_a_conjecture_check(a: ArithFn, gamma: ArithFn, N: int) -> ConjectureReport:
    """ã read off the γ-defined factorization of A(k) against A ∗ μ + A ∗ D_γ ∗ μ."""
    if gamma(1) != 1:
        raise ValueError(f"{gamma.name}(1) must be 1, got {gamma(1)}")
    C = pochhammer(1, 1, N)
    A = [summatory(a, k) for k in range(1, N + 1)]
    inv = tri_invert(gamma_inverse_matrix(gamma, C, N))
    ring = join(a.ring, gamma.ring)
    report = ConjectureReport("tilde_a", LambertParams.ordinary(), False, N, ring)
    if isinstance(inv, SingularReport):
        report.singular = inv
        return report
    L = TruncatedSeries.from_coeffs([zero(ring)] + _apply(inv, A), N, ring)
    b = series_mul(series_inverse(C), L)
    mu = classical("mu")
    A_fn = ArithFn.from_table(f"A[{a.name}]", A, ring)
    D = D_fn(gamma)
    closed = dirichlet_convolve(dirichlet_convolve(A_fn, D + classical("eps")), mu)
    for n in range(1, N + 1):
        via_matrix = sum((b[d] * mu(n // d) for d in divisors(n)), zero(ring))
        diff = via_matrix - closed(n)
        if diff:
            report.residuals[(n, 1)] = diff
    logger.info("tilde-a check for (%s, %s): %d residuals", a.name, gamma.name, len(report.residuals))
    return report
