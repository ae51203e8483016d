"""Scalar layer: exact rationals, Laurent polynomials in mu, and a pool of
high-precision transcendental constants."""

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

BigRational = Fraction


def default_tolerance(precision):
    return mpmath.mpf(2) ** (-(precision // 2))


class MuPoly:
    """Laurent polynomial in mu = lambda^5 with rational coefficients.

    Stored as a sorted tuple of (exponent, coefficient) pairs with zero
    coefficients removed.  Negative exponents are allowed because the
    twisted pairing divides by mu.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif not isinstance(terms, dict):
            terms = {0: terms}
        self._terms = tuple(sorted((int(k), Fraction(v)) for k, v in terms.items() if v != 0))

    @classmethod
    def monomial(cls, k, c=1):
        return cls({k: c})

    @property
    def terms(self):
        return dict(self._terms)

    def coeff(self, k):
        for e, c in self._terms:
            if e == k:
                return c
        return Fraction(0)

    def degree(self):
        return self._terms[-1][0] if self._terms else None

    def low_degree(self):
        return self._terms[0][0] if self._terms else None

    def is_monomial(self):
        return len(self._terms) == 1

    def truncate(self, cap):
        return MuPoly({k: c for k, c in self._terms if k <= cap})

    def evaluate(self, mu):
        total = 0
        for k, c in self._terms:
            total += c * mu ** k
        return total

    def at_zero(self):
        if self._terms and self._terms[0][0] < 0:
            raise ZeroDivisionError("negative mu power evaluated at mu = 0")
        return self.coeff(0)

    @staticmethod
    def _lift(other):
        if isinstance(other, MuPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return MuPoly({0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms:
            out[k] = out.get(k, 0) + c
        return MuPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return MuPoly({k: -c for k, c in self._terms})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MuPoly({k: c * other for k, c in self._terms})
        if not isinstance(other, MuPoly):
            return NotImplemented
        out = {}
        for a, ca in self._terms:
            for b, cb in other._terms:
                out[a + b] = out.get(a + b, 0) + ca * cb
        return MuPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return MuPoly({k: c / other for k, c in self._terms})
        if isinstance(other, MuPoly):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def inverse(self):
        if not self.is_monomial():
            raise ZeroDivisionError(f"only monomials are invertible in Q[mu, 1/mu]: {self}")
        (k, c), = self._terms
        return MuPoly({-k: 1 / c})

    def __pow__(self, n):
        out = MuPoly(1)
        base = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            out = out * base
        return out

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return False
        return self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for k, c in self._terms:
            parts.append(str(c) if k == 0 else f"{c}*mu^{k}")
        return " + ".join(parts)


@dataclass(frozen=True)
class ConstantPool:
    """Transcendental constants at a fixed binary precision.

    Every value lives in a private mpmath context so that pools of
    different precision can coexist.
    """

    precision: int
    K: int
    ctx: object = field(repr=False)
    pi: object = field(repr=False)
    euler: object = field(repr=False)
    zeta: dict = field(repr=False)
    gamma_fifth: dict = field(repr=False)
    xi: object = field(repr=False)
    two_pi_i: object = field(repr=False)
    C: Fraction = Fraction(5, 12)
    E: object = field(default=None, repr=False)

    def num(self, x):
        """Lift an int, Fraction or MuPoly constant into the pool's context."""
        if isinstance(x, Fraction):
            return self.ctx.mpf(x.numerator) / x.denominator
        if isinstance(x, MuPoly):
            return self.num(x.at_zero())
        return self.ctx.mpmathify(x)

    def xi_pow(self, s):
        """xi^s := exp(2 pi i s / 5) for rational s."""
        s = Fraction(s)
        return self.ctx.expjpi(self.ctx.mpf(2 * s.numerator) / (5 * s.denominator))

    def gamma5(self, j):
        """Gamma(j/5)^5 taken from the cached value."""
        return self.gamma_fifth[j] ** 5

    def tolerance(self):
        return self.ctx.mpf(2) ** (-(self.precision // 2))


def build_constant_pool(precision=256, K=6):
    if precision < 64:
        raise ValueError("precision below 64 bits is not supported")
    if K < 3:
        raise ValueError("need at least zeta(2) and zeta(3)")
    ctx = mpmath.MPContext()
    ctx.prec = precision
    pi = +ctx.pi
    zeta = {k: ctx.zeta(k) for k in range(2, K + 1)}
    gamma_fifth = {j: ctx.gamma(ctx.mpf(j) / 5) for j in range(1, 5)}
    two_pi_i = ctx.mpc(0, 2 * pi)
    return ConstantPool(
        precision=precision,
        K=K,
        ctx=ctx,
        pi=pi,
        euler=+ctx.euler,
        zeta=zeta,
        gamma_fifth=gamma_fifth,
        xi=ctx.expjpi(ctx.mpf(2) / 5),
        two_pi_i=two_pi_i,
        E=-40 * zeta[3] / two_pi_i ** 3,
    )


def loggamma_coeffs(n, pool):
    """c_1..c_n with log Gamma(1+x) = sum c_k x^k + O(x^(n+1))."""
    if n > pool.K:
        raise ValueError(f"pool only holds zeta(k) for k <= {pool.K}")
    out = [-pool.euler]
    for k in range(2, n + 1):
        out.append((-1) ** k * pool.zeta[k] / k)
    return out
