import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lambertkit import config
from lambertkit.arith import ArithFn, classical
from lambertkit.partitions import (
    EnumerationLimitError,
    Kind,
    Parity,
    PartitionConstraint,
    count_occurrences,
    distinct_odd_q,
    distinct_parts_q,
    enumerate_partitions,
    partition_p,
    signed_occurrences,
    tilde_q,
)
from lambertkit.qseries import (
    TruncatedSeries,
    lambert_term,
    neg_pochhammer,
    pochhammer,
    series_add,
    series_inverse,
    series_mul,
    series_scale,
)

PROGRESSIONS = [(1, 0), (2, 1), (3, 1), (3, 2)]


def test_partition_function_values():
    assert partition_p(0) == 1
    assert partition_p(5) == 7
    assert partition_p(-3) == 0
    assert partition_p(100) == 190569292


def test_partition_function_agrees_with_enumeration():
    for n in range(31):
        assert partition_p(n) == len(list(enumerate_partitions(n)))


def test_enumerated_partitions_are_non_increasing():
    parts = list(enumerate_partitions(6, PartitionConstraint.distinct_progression(2, 1)))
    assert parts == [(5, 1)]
    for p in enumerate_partitions(8):
        assert list(p) == sorted(p, reverse=True) and sum(p) == 8


def test_enumeration_is_capped():
    with pytest.raises(EnumerationLimitError):
        list(enumerate_partitions(config.ENUMERATION_CAP + 1))


def test_constraint_validation():
    with pytest.raises(ValueError):
        PartitionConstraint.progression(2, 2)
    with pytest.raises(ValueError):
        PartitionConstraint.progression(0, 0)
    c = PartitionConstraint.distinct_odd()
    assert c.kind is Kind.DISTINCT_ODD and (c.alpha, c.beta) == (2, 1) and c.distinct
    assert PartitionConstraint.progression(3, 1).allowed_parts(10) == [8, 5, 2]
    assert c.with_parity(Parity.ODD_COUNT).parity is Parity.ODD_COUNT


def test_tilde_q_is_the_signed_distinct_odd_count():
    series = pochhammer(1, 2, 50)
    assert tilde_q(0) == 1
    assert [tilde_q(n) for n in range(51)] == list(series.coeffs)
    for n in range(1, 26):
        c = PartitionConstraint.distinct_odd()
        even = len(list(enumerate_partitions(n, c.with_parity(Parity.EVEN_COUNT))))
        odd = len(list(enumerate_partitions(n, c.with_parity(Parity.ODD_COUNT))))
        assert tilde_q(n) == even - odd


def _odd_divisor_weights(a, m):
    return sum(a(d) for d in range(1, (m + 1) // 2 + 1) if m % (2 * d - 1) == 0)


def _check_distinct_odd_factorization(a, N):
    for n in range(1, N + 1):
        lhs = sum(_odd_divisor_weights(a, m) * tilde_q(n - m) for m in range(1, n + 1))
        rhs = sum(signed_occurrences(n, k, 2, 1) * a(k) for k in range(1, (n + 1) // 2 + 1))
        assert lhs == rhs, n


def test_tilde_q_convolves_odd_divisor_sums_of_phi():
    _check_distinct_odd_factorization(classical("phi"), 30)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=16, max_size=16))
def test_tilde_q_convolves_odd_divisor_sums(values):
    _check_distinct_odd_factorization(ArithFn.from_table("a", values), 30)


def test_odd_part_counts():
    assert distinct_odd_q(0) == 1
    assert distinct_odd_q(5) == len(list(enumerate_partitions(5, PartitionConstraint.progression(2, 1)))) == 3
    assert [distinct_odd_q(n) for n in range(51)] == list(series_inverse(pochhammer(1, 2, 50)).coeffs)
    assert [distinct_parts_q(n) for n in range(51)] == list(neg_pochhammer(1, 1, 50).coeffs)


def test_count_occurrences_examples():
    assert count_occurrences(4, 1, PartitionConstraint.distinct_odd()) == 1
    assert count_occurrences(3, 5, PartitionConstraint.all()) == 0
    # 5+1, 3+3, 3+1+1+1, 1+1+1+1+1+1
    assert count_occurrences(6, 3, PartitionConstraint.progression(2, 1)) == 3
    assert count_occurrences(6, 2, PartitionConstraint.progression(2, 1)) == 0


def test_signed_occurrences_examples():
    assert signed_occurrences(1, 1, 2, 1) == 1
    assert signed_occurrences(4, 3, 2, 1) == 0


@pytest.mark.parametrize("alpha,beta", PROGRESSIONS)
def test_signed_occurrences_match_the_series(alpha, beta):
    N = 22
    C = pochhammer(alpha - beta, alpha, N)
    k = 1
    while alpha * k - beta <= N:
        e = alpha * k - beta
        series = series_mul(lambert_term(e, e, N), C)
        for n in range(1, N + 1):
            assert signed_occurrences(n, k, alpha, beta) == series[n]
        k += 1


@pytest.mark.parametrize("alpha,beta", PROGRESSIONS)
def test_occurrence_counts_factor_the_progression_series(alpha, beta):
    N = 22
    C = pochhammer(alpha - beta, alpha, N)
    c = PartitionConstraint.progression(alpha, beta)
    a = [3, -1, 4, 1, -5, 9, 2, -6, 5, 3, 5, 8, -9, 7, 9, 3, 2, 3, 8, 4, -6, 2]
    lhs = TruncatedSeries.from_coeffs([], N)
    k = 1
    while alpha * k - beta <= N:
        e = alpha * k - beta
        lhs = series_add(lhs, series_scale(lambert_term(e, e, N), a[k - 1]))
        k += 1
    inner = [0] + [
        sum(count_occurrences(n, alpha * k - beta, c) * a[k - 1] for k in range(1, N + 1)) for n in range(1, N + 1)
    ]
    rhs = series_mul(C, TruncatedSeries.from_coeffs(inner, N))
    assert lhs == rhs


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=15, max_size=15))
def test_distinct_odd_occurrences_carry_the_parity_sign(a):
    N = 28
    lambert = TruncatedSeries.from_coeffs([], N)
    for k in range(1, 15):
        lambert = series_add(lambert, series_scale(lambert_term(2 * k - 1, 2 * k - 1, N), a[k - 1]))
    lhs = series_mul(lambert, pochhammer(1, 2, N))
    c = PartitionConstraint.distinct_odd()
    for n in range(1, N + 1):
        total = sum(count_occurrences(n, 2 * k - 1, c) * a[k - 1] for k in range(1, 15))
        assert lhs[n] == (-1) ** (n - 1) * total
