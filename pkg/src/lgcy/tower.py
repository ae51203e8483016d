"""The I_{p,q} tower, L, the normalization matrix Psi, Delta_alpha, the
potentials G whose u-derivatives are the diagonal of R_1, and the
comparison of M(t, 0) with -(Psi~^CY)^(-1) Psi^LG."""

from dataclasses import dataclass
from fractions import Fraction

from .coeff import MuPoly
from .ifunctions import CY, LG, build_icy, build_ilg
from .series import LogSeries, TruncSeries, max_magnitude

# natural scale of the expansion variable: coefficients are compared as c_n r^n
SIDE_RADIUS = {CY: Fraction(1, 3125), LG: 1}


def _diag_series(entry):
    return entry.to_series() if isinstance(entry, LogSeries) else entry


def tower_recursion(row0, P, D, ratio, twisted=False):
    """table[(p, q)] = D(table[(p-1, q)] / table[(p-1, p-1)]).

    In the twisted theory the denominator is read against the basis element
    phi_1^(p-1) = mu^((p-1)//5) phi_(p-1), i.e. with that power of mu removed,
    so every I_{p,q} keeps the grading mu^(q//5) of I_{0,q}."""
    table = {(0, q): f for q, f in enumerate(row0)}
    Q = len(row0) - 1
    for p in range(1, P + 1):
        den = table[(p - 1, p - 1)]
        if twisted and (p - 1) // 5:
            den = den * MuPoly.monomial(-((p - 1) // 5))
        for q in range(p, Q + 1):
            table[(p, q)] = D(ratio(table[(p - 1, q)], den))
    return table


def _log_ratio(a, d):
    return a / _diag_series(d)


def _series_ratio(a, d):
    return a / d


@dataclass(frozen=True)
class Tower:
    side: str
    P: int
    table: dict
    L: TruncSeries

    def entry(self, p, q):
        return self.table[(p, q)]

    def diag(self, p):
        return _diag_series(self.table[(p, p)])


def big_L(side, order):
    """L^CY = (1 - 5^5 q)^(-1/5),  L^LG = (1 - (t/5)^5)^(-1/5)."""
    if side == CY:
        base = TruncSeries([1, -3125] + [0] * (order - 1), "q") if order >= 1 else TruncSeries([1], "q")
    else:
        coeffs = [Fraction(0)] * (order + 1)
        coeffs[0] = Fraction(1)
        if order >= 5:
            coeffs[5] = Fraction(-1, 3125)
        base = TruncSeries(coeffs, "t")
    return base.power(Fraction(-1, 5))


def build_tower(side, P=9, order=20, mu_cap=2):
    """Tower of the twisted I-function.  On the LG side D = d/dt costs one
    order per row, so the I-function is built P orders deeper."""
    if P > 5 * mu_cap + 4:
        raise ValueError("rows beyond the mu-cap need more I-function components")
    if side == CY:
        ifn = build_icy(order, twisted=True, mu_cap=mu_cap)
        table = tower_recursion(list(ifn.components), P, LogSeries.D, _log_ratio, twisted=True)
    elif side == LG:
        ifn = build_ilg(order + P, twisted=True, mu_cap=mu_cap)
        table = tower_recursion(list(ifn.components), P, TruncSeries.deriv, _series_ratio, twisted=True)
    else:
        raise ValueError(f"unknown side {side!r}")
    return Tower(side, P, table, big_L(side, order))


def _exact_zero(series):
    return all(c == 0 for c in series.coeffs)


def tower_identity_residuals(tower):
    """Exact residual series of the three tower identities.

    (1) prod_{p<=4} I_pp - L^5, (2) I_{5+p,5+p} - mu I_pp, (3) I_pp - I_{4-p,4-p}."""
    mu = MuPoly.monomial(1)
    prod = tower.diag(0)
    for p in range(1, 5):
        prod = prod * tower.diag(p)
    out = {"product": prod - tower.L ** 5}
    for p in range(5):
        if 5 + p <= tower.P:
            out[f"period{p}"] = tower.diag(5 + p) - tower.diag(p) * mu
        out[f"mirror{p}"] = tower.diag(p) - tower.diag(4 - p)
    return out


def rational_part(series):
    """mu^0 coefficients of a MuPoly-valued series (identity on rationals)."""
    return series.map(lambda c: c.at_zero() if isinstance(c, MuPoly) else c)


# --- formal lambda grading -----------------------------------------------------

class GradedSeries:
    """sum_e lambda^e f_e(x), e rational; lambda is never evaluated."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = {Fraction(e): f for e, f in terms.items()}

    def __mul__(self, other):
        if not isinstance(other, GradedSeries):
            return GradedSeries({e: f * other for e, f in self.terms.items()})
        out = {}
        for a, f in self.terms.items():
            for b, g in other.terms.items():
                out[a + b] = out[a + b] + f * g if a + b in out else f * g
        return GradedSeries(out)

    __rmul__ = __mul__

    def __add__(self, other):
        out = dict(self.terms)
        for e, f in other.terms.items():
            out[e] = out[e] + f if e in out else f
        return GradedSeries(out)

    def __neg__(self):
        return GradedSeries({e: -f for e, f in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def inverse(self):
        if len(self.terms) != 1:
            raise ZeroDivisionError("only homogeneous elements are inverted")
        (e, f), = self.terms.items()
        return GradedSeries({-e: f.inverse()})

    def deviation_from(self, degree, series, upto, radius=None):
        """max |coefficient| r^n through x^upto of self - lambda^degree series."""
        worst = 0
        for e, f in self.terms.items():
            g = f - series if e == degree else f
            worst = max_magnitude((worst, g.max_abs(upto, radius)))
        if degree not in self.terms:
            worst = max_magnitude((worst, series.max_abs(upto, radius)))
        return worst


def _lift(series, pool):
    return rational_part(series).map(pool.num) if not _is_complex(series) else series


def _is_complex(series):
    return not isinstance(series.coeffs[0], (int, Fraction, MuPoly))


def c_scalars(I00, I11, L):
    """c_{-1}..c_4 with c_0 = lambda^(3/2) I00/L, c_1 = lambda^(1/2) I00 I11/L^2,
    c_2 = 1/c_1, c_3 = 1/c_0 and c_{-1} = 1/c_4 = lambda^(5/2)."""
    one = L * 0 + 1
    c0 = GradedSeries({Fraction(3, 2): I00 / L})
    c1 = GradedSeries({Fraction(1, 2): I00 * I11 / (L * L)})
    return {
        -1: GradedSeries({Fraction(5, 2): one}),
        0: c0,
        1: c1,
        2: c1.inverse(),
        3: c0.inverse(),
        4: GradedSeries({Fraction(-5, 2): one}),
    }


@dataclass(frozen=True)
class PsiData:
    c: dict
    psi: tuple
    psi_inv: tuple
    delta: tuple
    order: int
    radius: object = 1


def psi_from_c(c, pool, order):
    psi = tuple(tuple(c[3 - m] * pool.xi_pow(a * (m - Fraction(3, 2))) for m in range(5)) for a in range(5))
    psi_inv = tuple(tuple(c[m] * (pool.xi_pow(a * (Fraction(3, 2) - m)) / 5) for a in range(5)) for m in range(5))
    return psi, psi_inv


def psi_and_delta(tower, pool):
    I00 = _lift(tower.diag(0), pool)
    I11 = _lift(tower.diag(1), pool)
    L = tower.L.map(pool.num)
    order = min(I00.order, I11.order, L.order)
    c = c_scalars(I00, I11, L)
    psi, psi_inv = psi_from_c(c, pool, order)
    delta = tuple(GradedSeries({3: (I00 * I00 / (L * L)) * pool.xi_pow(3 * a)}) for a in range(5))
    return PsiData(c, psi, psi_inv, delta, order, pool.num(SIDE_RADIUS[tower.side]))


def _graded_matmul(A, B):
    n, m, k = len(A), len(B[0]), len(B)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = A[i][0] * B[0][j]
            for s in range(1, k):
                acc = acc + A[i][s] * B[s][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _pairing_inverse(one):
    """eta^(-1): 1/5 on the antidiagonal of indices 0..3, lambda^(-5)/5 at (4, 4)."""
    zero = GradedSeries({0: one * 0})
    out = [[zero] * 5 for _ in range(5)]
    for m in range(4):
        out[m][3 - m] = GradedSeries({0: one / 5})
    out[4][4] = GradedSeries({-5: one / 5})
    return tuple(tuple(r) for r in out)


def _identity_deviation(M, one, upto, radius=None):
    worst = 0
    for i, row in enumerate(M):
        for j, g in enumerate(row):
            worst = max_magnitude((worst, g.deviation_from(0, one if i == j else one * 0, upto, radius)))
    return worst


def psi_checks(data, pool, upto=None):
    upto = data.order if upto is None else upto
    rad = data.radius
    one = data.c[-1].terms[Fraction(5, 2)]
    psiT = tuple(zip(*data.psi))
    orth = _graded_matmul(_graded_matmul(data.psi, _pairing_inverse(one)), psiT)
    inv = _graded_matmul(data.psi, data.psi_inv)
    c21 = data.c[2] * data.c[1]
    delta = 0
    for a in range(5):
        sq = data.psi[a][0] * data.psi[a][0] * data.delta[a]
        delta = max_magnitude((delta, sq.deviation_from(0, one, upto, rad)))
    ratio = 0
    for a in range(5):
        for b in range(5):
            r = data.delta[a] * data.delta[b].inverse()
            ratio = max_magnitude((ratio, r.deviation_from(0, one * pool.xi_pow(3 * (a - b)), upto, rad)))
    return {
        "psi_eta_psiT": _identity_deviation(orth, one, upto, rad),
        "psi_psi_inv": _identity_deviation(inv, one, upto, rad),
        "c2c1": c21.deviation_from(0, one, upto, rad),
        "psi_sq_delta": delta,
        "delta_ratio": ratio,
    }


# --- R_1 and the G potentials ------------------------------------------------------

@dataclass(frozen=True)
class CanonicalForm:
    """du = L * (dq/q) on the CY side, L * dt on the LG side.

    G is the potential with (R_1)_aa = (1/(5 xi^a lambda)) dG/du; dG holds
    D G with D = q d/dq or d/dt, and r1_scaled = dG/du = 5 xi^a lambda (R_1)_aa."""

    side: str
    L: TruncSeries
    G: object
    dG: TruncSeries
    r1_scaled: TruncSeries

    def r1_diag(self, alpha, pool):
        return GradedSeries({-1: self.r1_scaled * (pool.xi_pow(-alpha) / 5)})

    def alpha_sum(self, pool):
        """sum_a (R_1)_aa du^a / du with du^a = xi^a lambda du."""
        total = None
        for a in range(5):
            term = self.r1_diag(a, pool) * GradedSeries({1: self.L * 0 + pool.xi_pow(a)})
            total = term if total is None else total + term
        return total


def g_potential(side, I00, I11, L, ell_coefficient=Fraction(-3, 4)):
    """5/4 log L - 4 log I00 - log I11, minus 3/4 log q on the CY side."""
    G = L.log() * Fraction(5, 4) - I00.log() * 4 - I11.log()
    if side == CY:
        zero = G * 0
        return LogSeries([G, zero + ell_coefficient])
    return G


def r1_diag_potential(tower, pool=None):
    I00 = rational_part(tower.diag(0))
    I11 = rational_part(tower.diag(1))
    L = tower.L
    if pool is not None:
        I00, I11, L = I00.map(pool.num), I11.map(pool.num), L.map(pool.num)
    G = g_potential(tower.side, I00, I11, L)
    if tower.side == CY:
        dG = G.D().to_series()
    else:
        dG = G.deriv()
    n = min(dG.order, L.order)
    return CanonicalForm(tower.side, L, G, dG, dG.truncate(n) / L.truncate(n))


# --- M(t, 0) ---------------------------------------------------------------------

def valuation_ratio(a, d, tol):
    """a/d for series sharing a leading power of the variable."""
    v = d.valuation(tol)
    if v is None:
        raise ZeroDivisionError("division by a numerically zero series")
    return a.strip(v) / d.strip(v)


def m_zero_check(lg_tower, continued, pool, upto=None):
    """Residual of diag((-1)^m 5^(m+1) t^-(m+1) prod_{j<=m} I~_jj/I_jj)
    against -(Psi~^CY)^(-1) Psi^LG, plus the largest off-diagonal entry."""
    lg = psi_and_delta(lg_tower, pool)
    psi_cont_inv = psi_from_c(continued.c_scalars(), pool, continued.order)[1]
    M = _graded_matmul(psi_cont_inv, lg.psi)
    tol = continued.tol
    lg_diag = [_lift(lg_tower.diag(j), pool) for j in range(5)]
    formulas = []
    num = continued.diag(0)
    den = lg_diag[0]
    for m in range(5):
        if m:
            num = num * continued.diag(m)
            den = den * lg_diag[m]
        v = m + 1
        head = max_magnitude(num.coeffs[:v])
        if head > tol * max_magnitude(num.coeffs):
            raise ValueError("product of continued diagonal entries has unexpected low-order terms")
        formulas.append(num.strip(v) / den.truncate(num.order - v) * ((-1) ** m * 5 ** v))
    upto = min(f.order for f in formulas) if upto is None else upto
    off, diag = 0, 0
    zero = formulas[0] * 0
    for m in range(5):
        for n in range(5):
            entry = -M[m][n]
            if m == n:
                diag = max_magnitude((diag, entry.deviation_from(0, formulas[m], upto)))
            else:
                off = max_magnitude((off, entry.deviation_from(0, zero, upto)))
    return {"diagonal": diag, "off_diagonal": off, "formulas": formulas, "upto": upto}
