import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lambertkit.arith import ArithFn, classical, restricted_divisor_sum
from lambertkit.kernel import PolyD, Ring, RingError
from lambertkit.partitions import enumerate_partitions, partition_p
from lambertkit.qseries import (
    TruncatedSeries,
    lambert_term,
    neg_pochhammer,
    pentagonal_terms,
    pochhammer,
    series_add,
    series_inverse,
    series_mul,
    series_pow,
    series_scale,
    series_shift,
    theta3,
)

coeff_lists = st.lists(st.integers(-20, 20), min_size=1, max_size=12)


def _product(a, b, N):
    """Π (1 − q^{a+jb}) multiplied out one factor at a time."""
    out = TruncatedSeries.one(N)
    e = a
    while e <= N:
        out = series_mul(out, TruncatedSeries.from_coeffs([1] + [0] * (e - 1) + [-1], N))
        e += b
    return out


def test_euler_product_is_pentagonal():
    assert pochhammer(1, 1, 10).coeffs == (1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0)
    assert pochhammer(1, 1, 60) == _product(1, 1, 60)
    assert [i for i, c in enumerate(pochhammer(1, 1, 40).coeffs) if c] == [g for g, _ in pentagonal_terms(40)]


@pytest.mark.parametrize("a,b", [(1, 2), (2, 3), (3, 1)])
def test_other_products_match_direct_expansion(a, b):
    assert pochhammer(a, b, 30) == _product(a, b, 30)


def test_pochhammer_order_zero():
    assert pochhammer(2, 1, 0).coeffs == (1,)
    with pytest.raises(ValueError):
        pochhammer(0, 1, 5)


def test_euler_inverse_is_the_partition_function():
    inv = series_inverse(pochhammer(1, 1, 50))
    assert list(inv.coeffs) == [partition_p(n) for n in range(51)]
    assert [inv[n] for n in range(16)] == [len(list(enumerate_partitions(n))) for n in range(16)]
    assert series_mul(inv, pochhammer(1, 1, 50)) == TruncatedSeries.one(50)


def test_odd_parts_generating_function():
    inv = series_inverse(pochhammer(1, 2, 25))
    odd = [sum(1 for p in enumerate_partitions(n) if all(x % 2 for x in p)) for n in range(26)]
    assert list(inv.coeffs) == odd


def test_distinct_parts_product():
    distinct = [sum(1 for p in enumerate_partitions(n) if len(set(p)) == len(p)) for n in range(21)]
    assert list(neg_pochhammer(1, 1, 20).coeffs) == distinct


def test_series_inverse_requires_a_unit():
    with pytest.raises(RingError):
        series_inverse(TruncatedSeries.from_coeffs([2, 1], 5))
    assert series_inverse(TruncatedSeries.one(7)) == TruncatedSeries.one(7)


def test_theta3_squared_counts_lattice_points():
    assert theta3(4).coeffs == (1, 2, 0, 0, 2)
    assert theta3(0).coeffs == (1,)
    sq = series_mul(theta3(100), theta3(100))
    for n in range(101):
        count = sum(1 for x in range(-10, 11) for y in range(-10, 11) if x * x + y * y == n)
        assert sq[n] == count
        if n:
            assert sq[n] == classical("r2")(n)


def test_lambert_terms():
    assert lambert_term(1, 1, 4).coeffs == (0, 1, 1, 1, 1)
    assert lambert_term(1, 3, 7).coeffs == (0, 1, 0, 0, 1, 0, 0, 1)
    weighted = lambert_term(1, 3, 7, d_param=True)
    assert weighted.ring is Ring.POLY_D
    assert weighted[1] == 1
    assert weighted[4] == PolyD.d()
    assert weighted[7] == PolyD.monomial(1, 2)
    assert weighted[5] == 0


def test_shift_scale_and_power():
    a = TruncatedSeries.from_coeffs([1, 2, 3], 4)
    assert series_shift(a, 2).coeffs == (0, 0, 1, 2, 3)
    assert series_scale(a, -2).coeffs == (-2, -4, -6, 0, 0)
    assert series_pow(a, 2) == series_mul(a, a)
    assert series_pow(a, -1) == series_inverse(a)
    assert series_add(a, series_scale(a, -1)) == TruncatedSeries.from_coeffs([], 4)


def test_product_keeps_the_smaller_order():
    one_minus_q = TruncatedSeries.from_coeffs([1, -1], 12)
    geometric = TruncatedSeries.from_coeffs([1] * 10, 9)
    prod = series_mul(one_minus_q, geometric)
    assert prod.order == 9
    assert prod == TruncatedSeries.one(9)


@settings(max_examples=40, deadline=None)
@given(coeff_lists, coeff_lists, coeff_lists)
def test_product_is_commutative_and_associative(a, b, c):
    A, B, C = (TruncatedSeries.from_coeffs(x, 10) for x in (a, b, c))
    assert series_mul(A, B) == series_mul(B, A)
    assert series_mul(series_mul(A, B), C) == series_mul(A, series_mul(B, C))


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.integers(-50, 50), min_size=20, max_size=20),
    st.integers(1, 4).flatmap(lambda alpha: st.tuples(st.just(alpha), st.integers(0, alpha - 1))),
)
def test_lambert_coefficients_are_restricted_divisor_sums(values, progression):
    alpha, beta = progression
    a = ArithFn("a", lambda n: values[(n - 1) % 20])
    N = 60
    total = TruncatedSeries.from_coeffs([], N)
    n = 1
    while alpha * n - beta <= N:
        e = alpha * n - beta
        total = series_add(total, series_scale(lambert_term(e, e, N), a(n)))
        n += 1
    for m in range(1, N + 1):
        assert total[m] == restricted_divisor_sum(a, alpha, beta, m)


def test_series_json():
    payload = lambert_term(1, 2, 5, d_param=True).to_json()
    assert payload == {"order": 5, "ring": "POLY_D", "coeffs": [[], [1], [], [0, 1], [], [0, 0, 1]]}
