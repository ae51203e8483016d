from fractions import Fraction

import pytest

from lgcy import birkhoff as bk
from lgcy.coeff import build_constant_pool
from lgcy.ifunctions import build_ilg
from lgcy.series import LaurentMatrix, antidiagonal, mat_max_abs
from lgcy.umatrix import (
    build_u_matrix,
    closed_form_b,
    displayed_u_entry,
    extract_b_matrix,
    symplectic_residual,
)


def rel(a, b):
    return abs(a - b) / abs(b)


def test_displayed_entries(pool, U4):
    tol = pool.tolerance()
    for r in range(4):
        for k in range(4):
            assert rel(U4.u[r][k], displayed_u_entry(pool, r, k)) < tol


def test_row_zero_formula(pool, U4):
    for k in range(4):
        x = pool.xi ** (k + 1)
        want = (-1) ** (k + 1) * pool.two_pi_i / pool.gamma5(4 - k) * x / (1 - x)
        assert rel(U4.u[0][k], want) < pool.tolerance()


def test_symplectic(pool, U4):
    assert symplectic_residual(U4) < pool.tolerance()
    assert U4.support_residual() == 0


def test_u_matrix_guards(pool):
    with pytest.raises(ValueError):
        build_u_matrix(build_constant_pool(96), 4)
    with pytest.raises(ValueError):
        build_u_matrix(pool, 3)
    with pytest.raises(ValueError):
        build_u_matrix(build_constant_pool(256, K=3), 5)


@pytest.fixture(scope="module")
def bmat(U5):
    return extract_b_matrix(U5, build_ilg(20, twisted=True, mu_cap=0))


def test_b_closed_forms(pool, bmat):
    x = pool.xi
    assert rel(bmat.b[0][0], -pool.two_pi_i / pool.gamma5(4) * x / (1 - x)) < pool.tolerance()
    assert rel(bmat.b[1][1], pool.two_pi_i ** 2 / pool.gamma5(3) * x ** 2 / (1 - x ** 2) ** 2) < pool.tolerance()
    for i in range(2):
        for j in range(4):
            assert rel(bmat.b[i][j], closed_form_b(pool, i, j)) < pool.tolerance()


def test_b_rows_two_three_finite(pool, bmat, U5):
    for i in (2, 3, 4):
        for j in range(5):
            assert abs(bmat.b[i][j]) < 1e3
            assert abs(bmat.b[i][j] - U5.u[i][j]) < pool.tolerance()
    assert bmat.leakage == 0


def test_extended_column(pool, U5):
    assert [U5.u[r][4] for r in range(4)] == [0] * 4
    assert U5.u[4][4] == -1


# --- Birkhoff ------------------------------------------------------------------

def test_factor_shapes(pool, factors):
    assert bk.reassembly_residual(factors) < pool.tolerance()
    assert bk.triangularity_residual(factors) < pool.tolerance()
    for v in bk.factor_symplectic_residuals(factors).values():
        assert v < pool.tolerance()


def test_s_u_displayed(pool, factors):
    SU = factors.s_times_u_minus_z()
    for i in range(4):
        for j in range(4):
            got = SU.coeff(j - i)[i][j] if (j - i) in SU.terms else 0
            want = bk.displayed_s_u_entry(pool, i, j)
            assert abs(got - want) <= pool.tolerance() * max(1, abs(want))


def test_s_u_diagonal_examples(pool, factors):
    SU = factors.s_times_u_minus_z().coeff(0)
    x = pool.xi
    assert rel(SU[0][0], -pool.two_pi_i / pool.gamma5(4) * x / (1 - x)) < pool.tolerance()
    assert rel(SU[1][1], -pool.two_pi_i ** 2 / pool.gamma5(3) * x ** 3 / (1 - x ** 2) ** 2) < pool.tolerance()


def test_u_plus_closed_forms(pool, factors):
    for i in range(3):
        assert rel(factors.u_plus_entry(i, i + 1), bk.closed_form_u_plus(pool, i)) < pool.tolerance()
    assert abs(factors.u_plus_entry(2, 3) - factors.u_plus_entry(0, 1)) < pool.tolerance()


def test_zero_pivot_rejected():
    with pytest.raises(ZeroDivisionError):
        bk.scalar_lu([[0, 1], [1, 0]])


# --- quadratic forms --------------------------------------------------------------

P4 = antidiagonal([Fraction(5)] * 4)


def test_W_V_trivial():
    one = LaurentMatrix.identity(4)
    W, V = bk.quad_form_W(one), bk.quad_form_V(one)
    assert W.entries == {} and V.entries == {}
    assert W.remainder == 0 and V.remainder == 0


def test_W_first_order_exact():
    S1 = LaurentMatrix.from_entries(4, {(3, 0): {-1: Fraction(1)}})
    assert S1.adjoint(P4).deviation(S1) == 0
    W = bk.quad_form_W(LaurentMatrix.identity(4) + S1, K=3)
    assert W.remainder == 0
    assert W.get(0, 0) == S1.coeff(-1)
    assert all(mat_max_abs(W.get(k, l)) == 0 for k in range(4) for l in range(4 - k) if (k, l) != (0, 0))


def test_V_first_order_exact():
    R1 = LaurentMatrix.from_entries(4, {(3, 0): {1: Fraction(2)}, (1, 2): {1: Fraction(-1)}})
    assert R1.adjoint(P4).deviation(R1) == 0
    V = bk.quad_form_V(LaurentMatrix.identity(4) + R1, K=3)
    assert V.remainder == 0
    assert V.get(0, 0) == R1.coeff(1)
    assert all(mat_max_abs(V.get(k, l)) == 0 for k in range(4) for l in range(4 - k) if (k, l) != (0, 0))


def test_W_V_from_factorization(pool, factors):
    W = bk.quad_form_W(factors.S, K=3)
    V = bk.quad_form_V(factors.R, K=3)
    tol = pool.tolerance()
    assert W.remainder < tol and V.remainder < tol
    assert W.symmetry_residual() < tol and V.symmetry_residual() < tol
    diff = tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(W.get(0, 0), factors.S.coeff(-1)))
    assert mat_max_abs(diff) < tol
    diff = tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(V.get(0, 0), factors.R.coeff(1)))
    assert mat_max_abs(diff) < tol


def test_divide_by_sum_remainder():
    """a^2 + b^2 is not divisible by a + b; remainder 2 b^2."""
    one = ((Fraction(1),),)
    F = {(2, 0): one, (0, 2): one}
    Q, rem = bk.divide_by_sum(F, 1, 3)
    assert rem == 2


def test_quad_form_rejects_wrong_side(factors):
    with pytest.raises(ValueError):
        bk.quad_form_W(factors.R)
    with pytest.raises(ValueError):
        bk.quad_form_V(factors.S)
