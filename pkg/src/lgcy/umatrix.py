"""The symplectic transformation U(z) identifying the LG and CY Givental
spaces, built by expanding its Gamma-function formula in the nilpotent
variable h = H/z, and the b-matrix it induces on I-function components."""

from dataclasses import dataclass

from .coeff import loggamma_coeffs
from .series import LaurentMatrix, max_magnitude, TruncSeries, antidiagonal, mat_identity, mat_max_abs

PAIRING4 = antidiagonal([5, 5, 5, 5])


def _mul(a, b, n):
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n)]


def _exp(a, n, one):
    r = [one] + [0 * one] * (n - 1)
    for k in range(1, n):
        r[k] = sum(i * a[i] * r[k - i] for i in range(1, k + 1)) / k
    return r


def u_column(pool, m, n_rows):
    """h-expansion (h^0..h^(n_rows-1)) of column m of U(-z), times z^(r-m).

    U(-z) phi_m = xi^(m+1) / (e^(-2 pi i h) - xi^(m+1))
                  * Gamma^5(1 + h)/Gamma(1 + 5h) * (-2 pi i)(-1)^m / Gamma^5(1 - (m+1)/5)
    with log Gamma(1+x) = sum c_k x^k giving Gamma^5(1+h)/Gamma(1+5h)
    = exp(sum_k c_k (5 - 5^k) h^k).
    """
    ctx = pool.ctx
    one = ctx.mpc(1)
    c = loggamma_coeffs(max(n_rows - 1, 1), pool)
    gamma_ratio = _exp([0 * one] + [c[k - 1] * (5 - 5 ** k) for k in range(1, n_rows)], n_rows, one)
    x = pool.xi ** (m + 1)
    # e^(-2 pi i h) - x = (1 - x) + y with y nilpotent
    y = [0 * one] + [(-pool.two_pi_i) ** k / ctx.factorial(k) for k in range(1, n_rows)]
    inv = [0 * one] * n_rows
    power = [one] + [0 * one] * (n_rows - 1)
    for k in range(n_rows):
        coef = (-1) ** k / (1 - x) ** (k + 1)
        inv = [a + coef * p for a, p in zip(inv, power)]
        power = _mul(power, y, n_rows)
    col = _mul([x * v for v in inv], gamma_ratio, n_rows)
    pref = -pool.two_pi_i * (-1) ** m / pool.gamma5(4 - m)
    return [pref * v for v in col]


@dataclass(frozen=True)
class UMatrix:
    """u[r][m] with U(-z) having entry u[r][m] z^(m-r)."""

    pool: object
    u: tuple

    @property
    def n(self):
        return len(self.u)

    def minus_z(self):
        n = self.n
        return LaurentMatrix.from_entries(n, {(r, m): {m - r: self.u[r][m]} for r in range(n) for m in range(n)})

    def plus_z(self):
        return self.minus_z().subs_neg()

    def support_residual(self):
        """Largest coefficient off the z^(m-r) band (zero by construction)."""
        M = self.minus_z()
        worst = 0
        for k, mat in M.terms.items():
            for r in range(self.n):
                for m in range(self.n):
                    if m - r != k:
                        worst = max_magnitude((worst, abs(mat[r][m])))
        return worst


def build_u_matrix(pool, rows=4):
    """rows=4 is the untwisted matrix.  rows=5 is the lambda -> 0 limit on
    the phi_4-extended space: row 4 is the h^4 coefficient and the phi_4
    column is -phi_4 (the pole of 1/(e^(-2 pi i h) - 1) eats one power of mu)."""
    if pool.precision < 128:
        raise ValueError("U-matrix needs at least 128 bits")
    if rows not in (4, 5):
        raise ValueError("rows must be 4 or 5")
    if rows - 1 > pool.K:
        raise ValueError(f"need zeta({rows - 1}) in the pool")
    cols = [u_column(pool, m, rows) for m in range(4)]
    u = [[cols[m][r] for m in range(4)] for r in range(rows)]
    if rows == 5:
        for r in range(4):
            u[r].append(0 * pool.xi)
        u[4].append(-1 + 0 * pool.xi)
    return UMatrix(pool, tuple(tuple(r) for r in u))


def displayed_u_entry(pool, r, k):
    """Closed forms of the 16 displayed entries u_{rk} (rows r = 0..3)."""
    x = pool.xi ** (k + 1)
    s = (-1) ** (k + 1)
    tpi = pool.two_pi_i
    G = pool.gamma5(4 - k)
    C, E = pool.num(pool.C), pool.E
    if r == 0:
        body = x / (1 - x)
    elif r == 1:
        body = x / (1 - x) ** 2
    elif r == 2:
        body = x * (1 + x) / (2 * (1 - x) ** 3) + C * x / (1 - x)
    elif r == 3:
        body = x * (1 + 4 * x + x * x) / (6 * (1 - x) ** 4) + C * x / (1 - x) ** 2 - E * x / (1 - x)
    else:
        raise ValueError("only rows 0..3 are displayed")
    return s * tpi ** (r + 1) / G * body


def symplectic_residual(U, P=PAIRING4):
    """max coefficient of U(z) U(-z)* - 1."""
    prod = U.plus_z() * U.minus_z().adjoint(P)
    return prod.deviation(LaurentMatrix.identity(U.n))


def closed_form_b(pool, i, j):
    """b_ij = (-1)^(j+1) (2 pi i)^(i+1) / Gamma^5(1-(j+1)/5) * xi^(j+1)/(1-xi^(j+1))^(i+1)."""
    x = pool.xi ** (j + 1)
    return (-1) ** (j + 1) * pool.two_pi_i ** (i + 1) / pool.gamma5(4 - j) * x / (1 - x) ** (i + 1)


@dataclass(frozen=True)
class BMatrix:
    b: tuple
    continued: tuple  # the series I~_r(t) read off U(z)(t I^LG(t,-z))/5
    leakage: object  # largest coefficient found at an unexpected z-power


def apply_u_to_lg(U, lg_components, pool):
    """U(z) applied to t I^LG(t, -z); returns per CY index r a dict
    {z-power: series}."""
    n = U.n
    num = pool.num
    vec = []
    for m in range(n):
        g = lg_components[m]
        tg = TruncSeries((0,) + tuple(num(c) for c in g.coeffs), "t")
        vec.append({1 - m: tg * ((-1) ** (1 - m))})
    Uz = U.plus_z()
    out = []
    for r in range(n):
        acc = {}
        for k, mat in Uz.terms.items():
            for m in range(n):
                if mat[r][m] == 0:
                    continue
                for p, series in vec[m].items():
                    term = series * mat[r][m]
                    acc[k + p] = acc[k + p] + term if k + p in acc else term
        out.append(acc)
    return out


def extract_b_matrix(U, ilg):
    """b_ij such that I~_i(t) = (t/5) sum_j b_ij I^LG_j(t).  Read from the
    t^(j+1) coefficient of I~_i, using I^LG_j = t^j/j! + O(t^(j+5))."""
    pool = U.pool
    n = U.n
    comps = [ilg.component(m) for m in range(n)]
    applied = apply_u_to_lg(U, comps, pool)
    continued, leakage = [], 0
    for r, acc in enumerate(applied):
        main = acc.get(1 - r)
        for p, series in acc.items():
            if p != 1 - r:
                leakage = max_magnitude((leakage, series.max_abs()))
        continued.append(main * ((-1) ** (1 - r)) / 5)
    fact = 1
    b = []
    for r in range(n):
        row = []
        fact = 1
        for j in range(n):
            if j:
                fact *= j
            row.append(5 * fact * continued[r][j + 1])
        b.append(tuple(row))
    return BMatrix(tuple(b), tuple(continued), leakage)


def identity_deviation(M):
    n = len(M)
    I = mat_identity(n)
    return mat_max_abs(tuple(tuple(M[i][j] - I[i][j] for j in range(n)) for i in range(n)))
