"""Birkhoff factorization U(z) = U_-(z) U_0 U_+(z) and the quadratic forms
W and V attached to S = U_-^(-1) and R = U_0 U_+ U_0^(-1).

Because the entry (r, m) of U(-z) sits at z^(m-r), the matrix is
D(z)^(-1) u D(z) with D = diag(z^r) and u scalar.  A scalar LU
decomposition u = l v therefore factorizes U(-z) = L(z) Up(z) with
L(z) = 1 + O(1/z) lower triangular and Up(z) upper triangular in
non-negative powers.
"""

from dataclasses import dataclass

from .series import (
    max_magnitude,
    LaurentMatrix,
    mat_add,
    mat_inverse,
    mat_max_abs,
    mat_mul,
    mat_scale,
    mat_transpose,
    mat_zero,
)
from .umatrix import PAIRING4


def scalar_lu(u):
    """Doolittle LU without pivoting: u = l v, l unit lower triangular."""
    n = len(u)
    l = [[0] * n for _ in range(n)]
    v = [[0] * n for _ in range(n)]
    for i in range(n):
        l[i][i] = 1 + 0 * u[0][0]
        for j in range(i, n):
            v[i][j] = u[i][j] - sum(l[i][k] * v[k][j] for k in range(i))
        if abs(v[i][i]) == 0:
            raise ZeroDivisionError(f"zero pivot at {i}: U is not Birkhoff-factorizable in this order")
        for j in range(i + 1, n):
            l[j][i] = (u[j][i] - sum(l[j][k] * v[k][i] for k in range(i))) / v[i][i]
    return l, v


def _banded(mat):
    n = len(mat)
    return LaurentMatrix.from_entries(n, {(r, m): {m - r: mat[r][m]} for r in range(n) for m in range(n) if mat[r][m] != 0})


@dataclass(frozen=True)
class BirkhoffFactors:
    U: LaurentMatrix        # U(z)
    U_minus: LaurentMatrix  # 1 + O(1/z)
    U0: LaurentMatrix       # diagonal constant
    U_plus: LaurentMatrix   # 1 + O(z)
    S: LaurentMatrix        # U_minus^(-1)
    R: LaurentMatrix        # U0 U_plus U0^(-1)
    lower: tuple
    upper: tuple

    def u_plus_entry(self, i, j):
        """Coefficient of z^(j-i) in (U_+(z))_ij."""
        return self.U_plus.coeff(j - i)[i][j]

    def s_times_u_minus_z(self):
        """S(-z) U(-z), the upper-triangular positive-power factor."""
        return self.S.subs_neg() * self.U.subs_neg()


def birkhoff_factorize(U):
    l, v = scalar_lu(U.u)
    n = len(l)
    L = _banded(l)      # U(-z) = L(z) Up(z)
    Up = _banded(v)
    U_minus = L.subs_neg()
    d = tuple(tuple(v[i][i] if i == j else 0 for j in range(n)) for i in range(n))
    dinv = mat_inverse(d)
    U0 = LaurentMatrix.constant(d)
    U_plus = LaurentMatrix.constant(dinv) * Up.subs_neg()
    S = U_minus.inverse_unipotent()
    R = Up.subs_neg() * LaurentMatrix.constant(dinv)
    return BirkhoffFactors(U.plus_z(), U_minus, U0, U_plus, S, R, tuple(map(tuple, l)), tuple(map(tuple, v)))


def reassembly_residual(F):
    return (F.U_minus * F.U0 * F.U_plus).deviation(F.U)


def factor_symplectic_residuals(F, P=PAIRING4):
    one = LaurentMatrix.identity(F.U.n)
    return {
        "S": (F.S * F.S.subs_neg().adjoint(P)).deviation(one),
        "R": (F.R * F.R.subs_neg().adjoint(P)).deviation(one),
        "U0": (F.U0 * F.U0.adjoint(P)).deviation(one),
    }


def triangularity_residual(F):
    """How far the factors are from their required shapes."""
    worst = 0
    n = F.U.n
    for k, m in F.U_minus.terms.items():
        for i in range(n):
            for j in range(n):
                want_zero = (k > 0) or (k == 0 and i != j) or (k < 0 and i <= j)
                if want_zero:
                    worst = max_magnitude((worst, abs(m[i][j])))
                elif k == 0:
                    worst = max_magnitude((worst, abs(m[i][j] - 1)))
    for k, m in F.U_plus.terms.items():
        for i in range(n):
            for j in range(n):
                want_zero = (k < 0) or (k == 0 and i != j) or (k > 0 and i >= j)
                if want_zero:
                    worst = max_magnitude((worst, abs(m[i][j])))
                elif k == 0:
                    worst = max_magnitude((worst, abs(m[i][j] - 1)))
    for k, m in F.U0.terms.items():
        for i in range(n):
            for j in range(n):
                if k != 0 or i != j:
                    worst = max_magnitude((worst, abs(m[i][j])))
    return worst


def displayed_s_u_entry(pool, i, j):
    """Entry (i, j), j >= i, of the displayed S(-z)U(-z) = U_0 U_+(-z), as the
    coefficient of z^(j-i).  Entries below the diagonal are zero."""
    if j < i:
        return 0 * pool.xi
    x = pool.xi
    tpi = pool.two_pi_i
    G = pool.gamma5(4 - j)
    sign = (-1) ** (i + j + 1)
    if i == 0:
        body = x ** (j + 1) / (1 - x ** (j + 1))
    elif i == 1:
        num = {1: x ** 3, 2: x ** 4 * (1 + x), 3: x ** 5 * (1 + x + x * x)}[j]
        body = num / (1 - x ** (j + 1)) ** 2
    elif i == 2:
        num = {2: x ** 6, 3: x ** 7 * (1 + x + x * x)}[j]
        body = num / (1 - x ** (j + 1)) ** 3
    elif i == 3:
        body = x ** 10 / (1 - x ** 4) ** 4
    else:
        raise ValueError("the displayed matrix is 4 x 4")
    return sign * tpi ** (i + 1) / G * body


def closed_form_u_plus(pool, i):
    """(U_+)_{i,i+1} for i = 0, 1, 2."""
    x = pool.xi
    if i == 0:
        return x / (1 + x) * pool.gamma5(4) / pool.gamma5(3)
    if i == 1:
        return x * (1 + x) ** 3 / (1 + x + x * x) ** 2 * pool.gamma5(3) / pool.gamma5(2)
    if i == 2:
        return x * (1 + x + x * x) * (1 - x ** 3) ** 3 / (1 - x ** 4) ** 3 * pool.gamma5(2) / pool.gamma5(1)
    raise ValueError("closed forms are given for i = 0, 1, 2")


def r1_gamma_constant(pool):
    """2 xi/(1+xi) G(4/5)^5/G(3/5)^5 + xi(1+xi)^3/(1+xi+xi^2)^2 G(3/5)^5/G(2/5)^5."""
    return 2 * closed_form_u_plus(pool, 0) + closed_form_u_plus(pool, 1)


# --- quadratic forms -------------------------------------------------------

def _bivariate_product(A, B, n):
    """Product of {(k, l): matrix} bivariate polynomials."""
    out = {}
    for (a1, a2), X in A.items():
        for (b1, b2), Y in B.items():
            key = (a1 + b1, a2 + b2)
            prod = mat_mul(X, Y)
            out[key] = mat_add(out[key], prod) if key in out else prod
    return out


def divide_by_sum(F, n, K):
    """Divide F(a, b) = sum F_kl a^k b^l by (a + b).

    Synthetic division in a with the root a = -b: the quotient is Q(a, b)
    with F = (a + b) Q + F(-b, b).  Returns (Q truncated to k + l <= K,
    max |coefficient| of the remainder F(-b, b))."""
    if not F:
        return {}, 0
    top = max(k for k, _ in F)
    # rows[k] = polynomial in b (dict l -> matrix) multiplying a^k
    rows = {}
    for (k, l), M in F.items():
        rows.setdefault(k, {})[l] = M
    Q = {}
    carry = {}
    for k in range(top, -1, -1):
        cur = dict(rows.get(k, {}))
        for l, M in carry.items():
            cur[l] = mat_add(cur[l], M) if l in cur else M
        if k == 0:
            remainder = cur
            break
        # quotient coefficient of a^(k-1) is cur; carry -b * cur down
        for l, M in cur.items():
            Q[(k - 1, l)] = M
        carry = {l + 1: mat_scale(M, -1) for l, M in cur.items()}
    else:
        remainder = {}
    rem = max_magnitude(mat_max_abs(M) for M in remainder.values())
    Qt = {key: M for key, M in Q.items() if key[0] + key[1] <= K}
    return Qt, rem


def _as_poly_in_inverse(M, shift_sign):
    """{k: matrix} for M = sum_k M_k x^k, re-indexed by the power of 1/x
    (shift_sign=-1) or of x (shift_sign=+1)."""
    return {shift_sign * k: m for k, m in M.terms.items()}


@dataclass(frozen=True)
class QuadForm:
    """Matrices Q[(k, l)] for k + l <= K plus the divisibility remainder."""

    name: str
    K: int
    n: int
    entries: dict
    remainder: object

    def get(self, k, l):
        return self.entries.get((k, l), mat_zero(self.n))

    def symmetry_residual(self, P=PAIRING4):
        """max over k+l<=K of |Q_kl* - Q_lk| with * the pairing adjoint."""
        Pinv = mat_inverse(P)
        worst = 0
        for k in range(self.K + 1):
            for l in range(self.K + 1 - k):
                adj = mat_mul(mat_mul(Pinv, mat_transpose(self.get(k, l))), P)
                other = self.get(l, k)
                worst = max_magnitude((worst, mat_max_abs(tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(adj, other)))))
        return worst


def quad_form_W(S, K=3, P=PAIRING4):
    """sum W_kl w^-k z^-l = (S(w)* S(z) - 1)/(w^-1 + z^-1); S = 1 + O(1/z)."""
    n = S.n
    if S.window[1] > 0:
        raise ValueError("S must only carry non-positive powers of z")
    Sstar = _as_poly_in_inverse(S.adjoint(P), -1)
    Sz = _as_poly_in_inverse(S, -1)
    A = {(k, 0): M for k, M in Sstar.items()}
    B = {(0, l): M for l, M in Sz.items()}
    F = _bivariate_product(A, B, n)
    F[(0, 0)] = mat_add(F.get((0, 0), mat_zero(n)), mat_scale(LaurentMatrix.identity(n).coeff(0), -1))
    Q, rem = divide_by_sum(F, n, K)
    return QuadForm("W", K, n, Q, rem)


def quad_form_V(R, K=3, P=PAIRING4):
    """sum V_kl w^k z^l = (1 - R(-w)* R(-z))/(w + z); R = 1 + O(z)."""
    n = R.n
    if R.window[0] < 0:
        raise ValueError("R must only carry non-negative powers of z")
    Rm = R.subs_neg()
    Rstar = _as_poly_in_inverse(Rm.adjoint(P), 1)
    Rz = _as_poly_in_inverse(Rm, 1)
    A = {(k, 0): M for k, M in Rstar.items()}
    B = {(0, l): mat_scale(M, -1) for l, M in Rz.items()}
    F = _bivariate_product(A, B, n)
    F[(0, 0)] = mat_add(F.get((0, 0), mat_zero(n)), LaurentMatrix.identity(n).coeff(0))
    Q, rem = divide_by_sum(F, n, K)
    return QuadForm("V", K, n, Q, rem)
