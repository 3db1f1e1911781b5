import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lambertkit.arith import ArithFn, classical
from lambertkit.factorization import (
    FactorizationPair,
    LambertParams,
    bar_a_closed,
    bar_a_sequence,
    bar_a_via_matrix,
    c_series,
    c_series_names,
    compare_routes,
    example_identity_suite,
    factorization_check,
    gamma_inverse_matrix,
    gamma_table,
    lambert_series,
    pentagonal_B,
    shift_relation_check,
    snk_matrix,
)
from lambertkit.kernel import PolyD, Ring, TriMatrix, recurrence_check, tri_invert
from lambertkit.partitions import partition_p, signed_occurrences
from lambertkit.qseries import TruncatedSeries, pochhammer, series_inverse


@st.composite
def lambert_params(draw):
    alpha = draw(st.integers(1, 3))
    gamma = draw(st.integers(1, 3))
    return LambertParams(
        alpha, draw(st.integers(1 - alpha, 2)), gamma, draw(st.integers(1 - gamma, 2))
    )


def test_params_parse_and_validate():
    assert LambertParams.parse("1, 0, 2, 1") == LambertParams(1, 0, 2, 1)
    assert str(LambertParams(2, -1, 2, -1)) == "2,-1,2,-1"
    assert LambertParams(2, -1, 3, 1).numerator(3) == 5
    assert LambertParams(2, -1, 3, 1).denominator(3) == 10
    for bad in ("1,0,2", "a,b,c,d", "1,-1,1,0", "0,1,1,0"):
        with pytest.raises(ValueError):
            LambertParams.parse(bad)


def test_pair_needs_a_unit_constant_term():
    with pytest.raises(ValueError):
        FactorizationPair(TruncatedSeries.from_coeffs([2, 1], 5))
    with pytest.raises(ValueError, match="unknown C"):
        c_series("theta", 5)
    assert c_series_names() == ["distinct_inverse", "euler", "odd", "one"]


def test_ordinary_matrix_first_rows():
    s = snk_matrix(FactorizationPair(pochhammer(1, 1, 6)), 6)
    assert s.row(1) == (1,)
    assert s.row(2) == (0, 1)
    assert s.row(3) == (-1, -1, 1)
    assert s.row(4) == (-1, 0, -1, 1)
    assert s.row(6) == (0, 0, 1, -1, -1, 1)


def test_figure_pair_and_its_inverse(figure_matrix):
    assert figure_matrix.size == 16
    assert sum(len(row) for row in figure_matrix.rows) == 136
    inv = tri_invert(figure_matrix)
    assert isinstance(inv, TriMatrix)
    assert recurrence_check(figure_matrix, inv)
    assert (figure_matrix @ inv).is_identity()


def test_weighted_figure_entry():
    fp = FactorizationPair(pochhammer(1, 1, 10), LambertParams(1, 0, 2, 1), d_param=True)
    s = snk_matrix(fp, 10)
    assert s.ring is Ring.POLY_D
    inv = tri_invert(s)
    assert inv[10, 1] == PolyD.parse("-d^3-2d+30")
    plain = snk_matrix(FactorizationPair(pochhammer(1, 1, 10), LambertParams(1, 0, 2, 1)), 10)
    assert s.evaluate_d(1) == plain
    assert inv.evaluate_d(1) == tri_invert(plain)


def test_matrix_size_checks():
    with pytest.raises(ValueError):
        snk_matrix(FactorizationPair(pochhammer(1, 1, 5)), 0)
    with pytest.raises(ValueError):
        snk_matrix(FactorizationPair(pochhammer(1, 1, 5)), 8)


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.integers(-30, 30), min_size=40, max_size=40),
    lambert_params(),
    st.sampled_from(["euler", "distinct_inverse", "one"]),
    st.booleans(),
)
def test_factorization_sweep(values, params, c_name, d_param):
    N = 40
    a = ArithFn.from_table("a", values)
    assert factorization_check(a, FactorizationPair(c_series(c_name, N), params, d_param), N)


@pytest.mark.parametrize("alpha,beta", [(1, 0), (2, 1), (3, 2)])
def test_progression_matrices_count_signed_occurrences(alpha, beta):
    N = 25
    params = LambertParams(alpha, -beta, alpha, -beta)
    s = snk_matrix(FactorizationPair(pochhammer(alpha - beta, alpha, N), params), N)
    for n in range(1, N + 1):
        for k in range(1, n + 1):
            assert s[n, k] == signed_occurrences(n, k, alpha, beta)


def test_inverse_progression_matrix_has_nonnegative_entries():
    N = 20
    C = series_inverse(pochhammer(1, 2, N))
    s = snk_matrix(FactorizationPair(C, LambertParams(2, -1, 2, -1)), N)
    assert all(x >= 0 for row in s.rows for x in row)


@pytest.mark.parametrize("alpha,beta,delta", [(1, 0, 2), (2, 1, 0), (2, 1, 3), (3, 2, 1), (3, 1, -1)])
def test_shift_relation(alpha, beta, delta):
    assert shift_relation_check(alpha, beta, delta, 20)


def test_shift_relation_validates():
    with pytest.raises(ValueError):
        shift_relation_check(2, 2, 0, 10)


def test_pentagonal_transform():
    one = classical("one")
    assert [pentagonal_B(one, k) for k in range(1, 8)] == [1, 0, -1, -1, -1, 0, 0]
    with pytest.raises(ValueError):
        pentagonal_B(one, 0)
    # [q^k] (q;q)_∞ Σ p(m-1) q^m = [k == 1]
    shifted = ArithFn("p_1", lambda m: partition_p(m - 1))
    assert [pentagonal_B(shifted, k) for k in range(1, 30)] == [1] + [0] * 28


def test_lambert_series_matches_the_matrix():
    a = classical("phi")
    params = LambertParams(2, -1, 2, -1)
    series = lambert_series(a, params, 20)
    s = snk_matrix(FactorizationPair(TruncatedSeries.one(20), params), 20)
    for n in range(1, 21):
        assert series[n] == sum(x * a(k) for k, x in enumerate(s.row(n), start=1))


@pytest.mark.parametrize("alpha,beta", [(2, 1), (3, 1), (3, 2)])
@pytest.mark.parametrize("a_name,gamma_name", [("one", "id_1"), ("id_1", "phi"), ("mu", "sigma_1")])
def test_bar_a_routes_agree(a_name, gamma_name, alpha, beta):
    N = 40
    a, gamma = classical(a_name), classical(gamma_name)
    closed = [bar_a_closed(a, gamma, alpha, beta, n) for n in range(1, N + 1)]
    via_matrix = bar_a_sequence(a, gamma, alpha, beta, pochhammer(1, 1, N), N)
    assert closed == via_matrix


def test_bar_a_single_value():
    a, gamma = classical("one"), classical("id_1")
    C = pochhammer(1, 1, 15)
    assert bar_a_via_matrix(a, gamma, 2, 1, C, 15) == bar_a_closed(a, gamma, 2, 1, 15)
    with pytest.raises(ValueError):
        bar_a_closed(a, gamma, 0, 1, 5)


def test_gamma_table_diagonal(figure_matrix):
    inv = tri_invert(figure_matrix)
    table = gamma_table(inv)
    assert table.size == 16
    # only d = k contributes on the diagonal
    assert [table[k, k] for k in range(1, 17)] == [inv[k, k] for k in range(1, 17)]


def test_compare_routes_reports_first_failure():
    assert compare_routes("same", [[1, 2, 3], [1, 2, 3]]).holds
    result = compare_routes("differs", [[1, 2, 3], [1, 5, 4]])
    assert not result.holds and result.first_failure == 2
    assert result.to_json() == {"name": "differs", "holds": False, "first_failure": 2}


def test_example_identity_suite():
    results = example_identity_suite(30)
    assert len(results) >= 30
    failing = [r.name for r in results if not r.holds]
    assert failing == []
    assert any(r.name.startswith("r2 via 4*chi4") for r in results)


def test_gamma_inverse_matrix_with_unit_gamma():
    m = gamma_inverse_matrix(classical("eps"), pochhammer(1, 1, 15), 15)
    for n in range(1, 16):
        assert m.row(n) == tuple(partition_p(n - k) for k in range(1, n + 1))
    with pytest.raises(ValueError):
        gamma_inverse_matrix(classical("eps"), pochhammer(1, 1, 5), 8)
