from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lgcy.series import (
    LaurentMatrix,
    LogSeries,
    TruncSeries,
    antidiagonal,
    geometric_binomial_sum,
    laurent_adjoint,
    series_exp_log,
    series_invert,
)

N = 6
fracs = st.fractions(min_value=-5, max_value=5, max_denominator=20)
series = st.lists(fracs, min_size=N + 1, max_size=N + 1).map(lambda c: TruncSeries(c, "x"))
unit_series = st.lists(fracs, min_size=N, max_size=N).map(lambda c: TruncSeries([Fraction(1)] + c, "x"))
nilpotent_series = st.lists(fracs, min_size=N, max_size=N).map(lambda c: TruncSeries([Fraction(0)] + c, "x"))


def x_series(*coeffs):
    return TruncSeries([Fraction(c) for c in coeffs], "x")


@given(series, series, series)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(series, series)
def test_theta_is_a_derivation(a, b):
    assert (a * b).theta() == a.theta() * b + a * b.theta()


@given(unit_series)
def test_exp_log_roundtrip(f):
    assert series_exp_log(series_exp_log(f, "log"), "exp") == f


@given(nilpotent_series)
def test_log_exp_roundtrip(g):
    assert g.exp().log() == g


@given(unit_series)
def test_inverse_multiplies_back(f):
    assert f * series_invert(f) == TruncSeries.constant(1, N, "x")


def test_invert_identity():
    assert series_invert(x_series(1)) == x_series(1)


def test_invert_geometric():
    assert series_invert(x_series(1, -1, 0, 0)) == x_series(1, 1, 1, 1)


def test_invert_icy_head():
    f = x_series(1, 120, 113400)
    g = series_invert(f)
    assert g == x_series(1, -120, 14400 - 113400)
    assert f * g == x_series(1, 0, 0)


def test_invert_needs_unit():
    with pytest.raises(ZeroDivisionError):
        series_invert(x_series(0, 1))


def test_exp_zero():
    assert series_exp_log(x_series(0, 0, 0), "exp") == x_series(1, 0, 0)


def test_log_one_minus_x():
    assert series_exp_log(x_series(1, -1, 0, 0, 0), "log") == TruncSeries(
        [0, -1, Fraction(-1, 2), Fraction(-1, 3), Fraction(-1, 4)], "x")


def test_log_needs_unit_constant():
    with pytest.raises(ValueError):
        x_series(2, 1).log()


def test_exp_needs_zero_constant():
    with pytest.raises(ValueError):
        x_series(1, 1).exp()


def test_mixed_order_narrows():
    a = TruncSeries([1, 1, 1, 1], "x")
    b = TruncSeries([1, 1], "x")
    assert (a * b).order == 1
    assert (a + b).order == 1


def test_power_matches_repeated_product():
    f = x_series(1, 3, -2, 5)
    assert f.power(Fraction(3)) == f * f * f
    root = f.power(Fraction(1, 2))
    assert root * root == f


def test_geometric_binomial_sum_j2():
    T0 = x_series(0, 1, 0, 0, 0)
    assert geometric_binomial_sum(T0, 2) == x_series(1, 1, 1, 1, 1)


def test_geometric_binomial_sum_j3():
    assert geometric_binomial_sum(x_series(0, 1, 0), 3) == x_series(1, 2, 3)


@given(nilpotent_series)
@settings(max_examples=30)
def test_geometric_binomial_sum_j5(T0):
    closed = (TruncSeries.constant(1, N, "x") - T0).power(Fraction(-4))
    assert geometric_binomial_sum(T0, 5) == closed


def test_geometric_binomial_sum_rejects():
    with pytest.raises(ValueError):
        geometric_binomial_sum(x_series(1, 1), 2)
    with pytest.raises(ValueError):
        geometric_binomial_sum(x_series(0, 1), 1)


# --- log series -------------------------------------------------------------

def test_log_series_derivation_on_ell():
    ell = LogSeries([TruncSeries([0, 0, 0], "q"), TruncSeries([1, 0, 0], "q")])
    assert ell.D() == LogSeries([TruncSeries([1, 0, 0], "q")])


@given(series, series, series, series)
@settings(max_examples=40)
def test_log_series_product_rule(a0, a1, b0, b1):
    A, B = LogSeries([a0, a1]), LogSeries([b0, b1])
    assert (A * B).D() == A.D() * B + A * B.D()


# --- Laurent matrices and the pairing adjoint --------------------------------

P4 = antidiagonal([Fraction(5)] * 4)

entry = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-2, 2), fracs)
laurent = st.lists(entry, max_size=6).map(
    lambda es: LaurentMatrix.from_entries(4, {(i, j): {k: c} for i, j, k, c in es if c != 0}))


def test_adjoint_of_identity():
    one = LaurentMatrix.identity(4)
    assert one.adjoint(P4).deviation(one) == 0


def test_adjoint_single_entry_worked_example():
    """Adjoint of e_01 z, compared with the quoted e_32 z."""
    M = LaurentMatrix.from_entries(4, {(0, 1): {1: Fraction(1)}})
    expected = LaurentMatrix.from_entries(4, {(3, 2): {1: Fraction(1)}})
    assert laurent_adjoint(M, P4).deviation(expected) == 0


def test_adjoint_single_entry_transpose_convention():
    """P^-1 M^T P sends e_ij to e_(3-j)(3-i)."""
    M = LaurentMatrix.from_entries(4, {(0, 1): {1: Fraction(1)}})
    expected = LaurentMatrix.from_entries(4, {(2, 3): {1: Fraction(1)}})
    assert laurent_adjoint(M, P4).deviation(expected) == 0


@given(laurent)
def test_adjoint_involution(M):
    assert M.adjoint(P4).adjoint(P4).deviation(M) == 0


@given(laurent, laurent)
@settings(max_examples=50)
def test_adjoint_anti_homomorphism(M, K):
    assert (M * K).adjoint(P4).deviation(K.adjoint(P4) * M.adjoint(P4)) == 0


def test_inverse_unipotent():
    M = LaurentMatrix.from_entries(4, {(i, i): {0: Fraction(1)} for i in range(4)})
    M = M + LaurentMatrix.from_entries(4, {(1, 0): {-1: Fraction(2)}, (3, 1): {-2: Fraction(-1, 3)}})
    assert (M * M.inverse_unipotent()).deviation(LaurentMatrix.identity(4)) == 0
