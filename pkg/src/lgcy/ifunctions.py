"""Hypergeometric I-functions on both sides, their Picard-Fuchs operators,
mirror maps and J-function slices.

Components are indexed by j >= 0 with

    I(x, z) = z * sum_j I_{0,j}(x) z^(-j) Phi_(j mod 5),

so I_{0,0} and I_{0,1} are the usual I_0 and I_1.  In the twisted theory
I_{0,j} carries the factor mu^(j // 5), mu = lambda^5.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .coeff import MuPoly
from .series import GradedElem, LogSeries, TruncSeries

CY, LG = "cy", "lg"


@dataclass(frozen=True)
class IFunction:
    side: str
    twisted: bool
    order: int
    components: tuple

    @property
    def n_components(self):
        return len(self.components)

    def component(self, j):
        return self.components[j]

    @property
    def I0(self):
        return self.components[0]

    @property
    def I1(self):
        return self.components[1]

    def graded_coefficient(self, n):
        """Coefficient of x^n as {z-power: GradedElem}.  On the CY side the
        prefactor q^(H/z) is left symbolic, i.e. only the ell^0 part is read."""
        kind = "twisted" if self.twisted else "cy"
        out = {}
        for j, comp in enumerate(self.components):
            series = comp.part(0) if isinstance(comp, LogSeries) else comp
            c = series[n]
            if c == 0:
                continue
            out[1 - j] = GradedElem.basis(kind, j % 5, c)
        return out


def _n_components(twisted, mu_cap):
    if not twisted:
        return 4
    if mu_cap < 0:
        raise ValueError("mu_cap must be non-negative")
    return 5 * mu_cap + 5


def _cy_hypergeometric_coeffs(order, J):
    """A_d(w) = prod_{k<=5d}(5w + k) / prod_{k<=d}((w + k)^5 - w^5) mod w^(J+1).

    With w = phi/z the twisted relation phi^5 = mu turns (phi + kz)^5 - lambda^5
    into z^5((w + k)^5 - w^5), so the whole CY I-function is a series in w;
    the coefficient of w^j is then mu^(j//5) Phi_(j mod 5) z^(-j)."""
    n = J + 1
    one = [Fraction(1)] + [Fraction(0)] * (n - 1)
    A = one[:]
    out = [A[:]]
    for d in range(1, order + 1):
        for k in range(5 * d - 4, 5 * d + 1):
            A = [k * A[i] + (5 * A[i - 1] if i else 0) for i in range(n)]
        # (w + d)^5 - w^5 = sum_{i<5} C(5,i) d^(5-i) w^i
        den = [Fraction(0)] * n
        for i, c in enumerate((1, 5, 10, 10, 5)):
            if i < n:
                den[i] = Fraction(c * d ** (5 - i))
        inv = [Fraction(0)] * n
        inv[0] = 1 / den[0]
        for k in range(1, n):
            inv[k] = -sum(den[i] * inv[k - i] for i in range(1, min(k, 4) + 1)) * inv[0]
        A = [sum(A[i] * inv[k - i] for i in range(k + 1)) for k in range(n)]
        out.append(A[:])
    return out


def cy_frobenius_basis(order, J=4):
    """Rational log-series r_0..r_J with I_{0,j} = mu^(j//5) r_j."""
    A = _cy_hypergeometric_coeffs(order, J)
    basis = []
    for j in range(J + 1):
        parts = []
        for i in range(j + 1):
            f = Fraction(1, factorial(i))
            parts.append(TruncSeries([A[d][j - i] * f for d in range(order + 1)], "q"))
        basis.append(LogSeries(parts))
    return basis


def _twist_roots(a):
    """The k with 0 < k < (a+1)/5 and <k> = <(a+1)/5>."""
    n = a // 5
    top = Fraction(a + 1, 5)
    return [top - i for i in range(1, n + 1)]


def _elementary_symmetric(values):
    e = [Fraction(1)]
    for v in values:
        e = [e[i] + (v * e[i - 1] if i else 0) for i in range(len(e))] + [v * e[-1]]
    return e


def lg_frobenius_basis(order, J=4):
    """Rational series r_0..r_J with I^LG_{0,j} = mu^(j//5) r_j.

    Each term t^a/a! z^(-a) prod_k((kz)^5 + lambda^5) phi_(a mod 5) expands as
    sum_i mu^i z^(5i - 5n) e_(n-i)(k^5), so the z^(-j) part (j = a - 5(n-i))
    picks e_(a//5 - j//5)."""
    basis = []
    for j in range(J + 1):
        coeffs = [Fraction(0)] * (order + 1)
        for a in range(j, order + 1, 5):
            e = _elementary_symmetric([k ** 5 for k in _twist_roots(a)])
            coeffs[a] = e[a // 5 - j // 5] / factorial(a)
        basis.append(TruncSeries(coeffs, "t"))
    return basis


def _attach_mu(series, j):
    mu_pow = MuPoly.monomial(j // 5)
    return series.map(lambda c: mu_pow * c)


def build_icy(order, twisted=False, mu_cap=2):
    if order < 1:
        raise ValueError("order must be at least 1")
    n = _n_components(twisted, mu_cap)
    basis = cy_frobenius_basis(order, n - 1)
    if twisted:
        basis = [_attach_mu(r, j) for j, r in enumerate(basis)]
    return IFunction(CY, twisted, order, tuple(basis))


def build_ilg(order, twisted=False, mu_cap=2):
    if order < 1:
        raise ValueError("order must be at least 1")
    n = _n_components(twisted, mu_cap)
    basis = lg_frobenius_basis(order, n - 1)
    if twisted:
        basis = [_attach_mu(r, j) for j, r in enumerate(basis)]
    return IFunction(LG, twisted, order, tuple(basis))


# --- Picard-Fuchs operators ------------------------------------------------

def _falling_product(theta_series, shifts, scale=1):
    """prod_i (scale*theta + i) applied to a series, as repeated theta steps."""
    out = theta_series
    for i in shifts:
        out = out.D() * scale + out * i if isinstance(out, LogSeries) else out.theta() * scale + out * i
    return out


@dataclass(frozen=True)
class PFOperator:
    """CY:  -D^5 + (lambda/z)^5 + q prod_{i=1}^5 (5D + i),  D = q d/dq.
    LG:  (D_t/5)^5 + (lambda/z)^5 - t^(-5) prod_{i=1}^5 (D_t - i),  D_t = t d/dt,
    acting on t I^LG.  variant='verbatim' uses (D_t - 1)^5 instead."""

    side: str
    variant: str = "indexed"


CY_PF = PFOperator(CY)
LG_PF = PFOperator(LG)


def pf_apply(op, f, mu_on=True):
    """Residual of the operator on every component; f is an IFunction or a
    list of components I_{0,j}.  The (lambda/z)^5 term couples j to j-5.
    On the LG side the residual is multiplied by t^5 to clear the t^(-5)."""
    comps = list(f.components) if isinstance(f, IFunction) else list(f)
    mu = MuPoly.monomial(1) if mu_on else 0
    out = []
    if op.side == CY:
        for j, g in enumerate(comps):
            g = LogSeries.of(g)
            if g.order < 5:
                raise ValueError("order too small for a degree-5 operator")
            d5 = g
            for _ in range(5):
                d5 = d5.D()
            prod = _falling_product(g, range(1, 6), scale=5)
            res = -d5 + LogSeries([p.shift(1) for p in prod.parts])
            if j >= 5 and mu_on:
                res = res + LogSeries.of(comps[j - 5]) * mu
            out.append(res)
        return out
    if op.side != LG:
        raise ValueError(f"unknown side {op.side!r}")
    for j, g in enumerate(comps):
        if g.order < 5:
            raise ValueError("order too small for a degree-5 operator")
        tg = TruncSeries((0,) + g.coeffs, g.var)
        d5 = tg
        for _ in range(5):
            d5 = d5.theta() / 5
        shifts = range(1, 6) if op.variant == "indexed" else [1] * 5
        prod = tg
        for i in shifts:
            prod = prod.theta() - prod * i
        res = d5.shift(5) - prod
        if j >= 5 and mu_on:
            res = res + TruncSeries((0,) + comps[j - 5].coeffs, g.var).shift(5) * mu
        out.append(res.truncate(g.order))
    return out


def mirror_map(ifn):
    """tau = I_1 / I_0."""
    return ifn.I1 / (ifn.I0.to_series() if isinstance(ifn.I0, LogSeries) else ifn.I0)


def j_slice(ifn):
    """Components of I / I_0: the J-function restricted to the mirror-map slice."""
    I0 = ifn.I0.to_series() if isinstance(ifn.I0, LogSeries) else ifn.I0
    inv = I0.inverse()
    return [c * inv for c in ifn.components]
