"""Truncated power series, log-series, graded quotient rings and Laurent
matrices.  The scalar ring is whatever the coefficients are (Fraction,
MuPoly or mpmath complex); nothing here inspects the type beyond the few
helpers below."""

from fractions import Fraction
from math import comb

import mpmath


def _div(c, n):
    if isinstance(c, int):
        return Fraction(c, n)
    return c / n


def _recip(c):
    if isinstance(c, int):
        return Fraction(1, c)
    return 1 / c


def _magnitude_key(v):
    return mpmath.mpf(v.numerator) / v.denominator if isinstance(v, Fraction) else v


def max_magnitude(values):
    """max |v| over a mix of Fractions and mpmath numbers."""
    return max((abs(v) for v in values), key=_magnitude_key, default=0)


def _is_zero(c, tol=None):
    if tol is None:
        return c == 0
    return abs(c) <= tol


class TruncSeries:
    """f = sum_{n<=N} c_n x^n, with x^(N+1) and higher discarded."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs, var="x"):
        self.coeffs = tuple(coeffs)
        if not self.coeffs:
            raise ValueError("a truncated series needs at least one coefficient")
        self.var = var

    @classmethod
    def constant(cls, c, order, var="x"):
        return cls([c] + [0] * order, var)

    @classmethod
    def monomial(cls, k, order, c=1, var="x"):
        coeffs = [0] * (order + 1)
        if k <= order:
            coeffs[k] = c
        return cls(coeffs, var)

    @property
    def order(self):
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        if isinstance(n, slice):
            return self.coeffs[n]
        if n < 0 or n > self.order:
            raise IndexError(f"coefficient x^{n} outside truncation order {self.order}")
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self):
        return f"TruncSeries({list(self.coeffs)!r}, var={self.var!r})"

    def truncate(self, order):
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return TruncSeries(self.coeffs[: order + 1], self.var)

    def map(self, fn):
        return TruncSeries([fn(c) for c in self.coeffs], self.var)

    def _pair(self, other):
        n = min(self.order, other.order)
        return self.coeffs[: n + 1], other.coeffs[: n + 1]

    def __add__(self, other):
        if isinstance(other, TruncSeries):
            a, b = self._pair(other)
            return TruncSeries([x + y for x, y in zip(a, b)], self.var)
        if isinstance(other, LogSeries):
            return NotImplemented
        return TruncSeries((self.coeffs[0] + other,) + self.coeffs[1:], self.var)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        if isinstance(other, LogSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            a, b = self._pair(other)
            n = len(a)
            out = []
            for k in range(n):
                acc = 0
                for i in range(k + 1):
                    if a[i] != 0 and b[k - i] != 0:
                        acc = acc + a[i] * b[k - i]
                out.append(acc)
            return TruncSeries(out, self.var)
        if isinstance(other, LogSeries):
            return NotImplemented
        return TruncSeries([c * other for c in self.coeffs], self.var)

    def __rmul__(self, other):
        return TruncSeries([other * c for c in self.coeffs], self.var)

    def __truediv__(self, other):
        if isinstance(other, TruncSeries):
            return self * other.inverse()
        return TruncSeries([_div(c, other) for c in self.coeffs], self.var)

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = TruncSeries.constant(1, self.order, self.var)
        for _ in range(n):
            out = out * self
        return out

    def inverse(self):
        a = self.coeffs
        if _is_zero(a[0]):
            raise ZeroDivisionError("series with zero constant term is not invertible")
        r0 = _recip(a[0])
        r = [r0]
        for k in range(1, len(a)):
            acc = 0
            for i in range(1, k + 1):
                if a[i] != 0:
                    acc = acc + a[i] * r[k - i]
            r.append(-acc * r0)
        return TruncSeries(r, self.var)

    def theta(self):
        """x d/dx."""
        return TruncSeries([n * c for n, c in enumerate(self.coeffs)], self.var)

    def deriv(self):
        """d/dx; the order drops by one."""
        if self.order == 0:
            raise ValueError("derivative of an order-0 series has no known coefficients")
        return TruncSeries([n * c for n, c in enumerate(self.coeffs)][1:], self.var)

    def shift(self, k):
        """Multiply by x^k.  For k < 0 the low coefficients must vanish and
        the order drops by |k|."""
        if k >= 0:
            return TruncSeries(([0] * k + list(self.coeffs))[: len(self.coeffs)], self.var)
        for c in self.coeffs[:-k]:
            if not _is_zero(c):
                raise ValueError(f"cannot divide by x^{-k}: low coefficient {c} is nonzero")
        return TruncSeries(self.coeffs[-k:], self.var)

    def valuation(self, tol=None):
        for n, c in enumerate(self.coeffs):
            if not _is_zero(c, tol):
                return n
        return None

    def strip(self, v):
        """Drop the first v coefficients without checking them (divide by x^v)."""
        return TruncSeries(self.coeffs[v:], self.var)

    def substitute_power(self, k):
        """f(x^k), keeping the same truncation order."""
        out = [0] * (self.order + 1)
        for n, c in enumerate(self.coeffs):
            if n * k > self.order:
                break
            out[n * k] = c
        return TruncSeries(out, self.var)

    def exp(self):
        a = self.coeffs
        if not _is_zero(a[0]):
            raise ValueError("exp needs a zero constant term")
        r = [a[0] * 0 + 1]
        for k in range(1, len(a)):
            acc = 0
            for i in range(1, k + 1):
                if a[i] != 0:
                    acc = acc + i * a[i] * r[k - i]
            r.append(_div(acc, k))
        return TruncSeries(r, self.var)

    def log(self):
        a = self.coeffs
        if a[0] != 1:
            raise ValueError("log needs constant term 1")
        return (self.theta() * self.inverse()).integrate_theta()

    def integrate_theta(self):
        """Inverse of theta on series with zero constant term."""
        if not _is_zero(self.coeffs[0]):
            raise ValueError("theta-integration needs a zero constant term")
        return TruncSeries([0] + [_div(c, n) for n, c in enumerate(self.coeffs) if n > 0], self.var)

    def power(self, a):
        """f^a for rational a, f(0) = 1, by the recurrence f (f^a)' = a f' f^a."""
        f = self.coeffs
        if f[0] != 1:
            raise ValueError("rational powers need constant term 1")
        a = Fraction(a)
        g = [f[0] * 0 + 1]
        for k in range(1, len(f)):
            acc = 0
            for i in range(1, k + 1):
                if f[i] != 0:
                    acc = acc + (a * i - (k - i)) * f[i] * g[k - i]
            g.append(_div(acc, k))
        return TruncSeries(g, self.var)

    def evaluate(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def max_abs(self, upto=None, radius=None):
        """max |c_n| (times radius^n when a radius is given)."""
        cs = self.coeffs if upto is None else self.coeffs[: upto + 1]
        if radius is not None and radius != 1:
            cs = [c * radius ** n for n, c in enumerate(cs)]
        return max_magnitude(cs)

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            return self.coeffs == other.coeffs
        return NotImplemented

    __hash__ = None


def series_invert(f):
    return f.inverse()


def series_exp_log(f, mode):
    if mode == "exp":
        return f.exp()
    if mode == "log":
        return f.log()
    raise ValueError(f"unknown mode {mode!r}")


def geometric_binomial_sum(T0, j):
    """sum_m C(m+j-2, m) T0^m, which equals (1 - T0)^(1-j)."""
    if j < 2:
        raise ValueError("j must be at least 2")
    if not _is_zero(T0[0]):
        raise ValueError("T0 must have zero constant term")
    total = TruncSeries.constant(1, T0.order, T0.var)
    power = TruncSeries.constant(1, T0.order, T0.var)
    for m in range(1, T0.order + 1):
        power = power * T0
        total = total + power * comb(m + j - 2, m)
    return total


class LogSeries:
    """sum_i ell^i f_i(x) with ell a formal log x; D = x d/dx + d/d ell."""

    __slots__ = ("parts",)

    def __init__(self, parts):
        parts = list(parts)
        if not parts:
            raise ValueError("empty log-series")
        while len(parts) > 1 and all(c == 0 for c in parts[-1].coeffs):
            parts.pop()
        n = min(p.order for p in parts)
        self.parts = tuple(p.truncate(n) for p in parts)

    @classmethod
    def of(cls, f):
        return f if isinstance(f, LogSeries) else cls([f])

    @property
    def order(self):
        return self.parts[0].order

    @property
    def ell_degree(self):
        return len(self.parts) - 1

    @property
    def var(self):
        return self.parts[0].var

    def part(self, i):
        if i < len(self.parts):
            return self.parts[i]
        return TruncSeries.constant(0, self.order, self.var)

    def is_log_free(self):
        return self.ell_degree == 0

    def to_series(self):
        if not self.is_log_free():
            raise ValueError("log-series still carries powers of ell")
        return self.parts[0]

    def map(self, fn):
        return LogSeries([p.map(fn) for p in self.parts])

    def __repr__(self):
        return f"LogSeries({list(self.parts)!r})"

    def __add__(self, other):
        other = LogSeries.of(other) if isinstance(other, TruncSeries) else other
        if isinstance(other, LogSeries):
            n = max(len(self.parts), len(other.parts))
            return LogSeries([self.part(i) + other.part(i) for i in range(n)])
        return LogSeries([self.parts[0] + other] + list(self.parts[1:]))

    __radd__ = __add__

    def __neg__(self):
        return LogSeries([-p for p in self.parts])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            other = LogSeries.of(other)
        if isinstance(other, LogSeries):
            out = [None] * (len(self.parts) + len(other.parts) - 1)
            for i, a in enumerate(self.parts):
                for j, b in enumerate(other.parts):
                    term = a * b
                    out[i + j] = term if out[i + j] is None else out[i + j] + term
            return LogSeries(out)
        return LogSeries([p * other for p in self.parts])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, LogSeries):
            other = other.to_series()
        if isinstance(other, TruncSeries):
            inv = other.inverse()
            return LogSeries([p * inv for p in self.parts])
        return LogSeries([p / other for p in self.parts])

    def D(self):
        out = []
        for i, p in enumerate(self.parts):
            term = p.theta()
            if i + 1 < len(self.parts):
                term = term + self.parts[i + 1] * (i + 1)
            out.append(term)
        return LogSeries(out)

    def truncate(self, order):
        return LogSeries([p.truncate(order) for p in self.parts])

    def evaluate(self, x, ell):
        acc = 0
        for p in reversed(self.parts):
            acc = acc * ell + p.evaluate(x)
        return acc

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            other = LogSeries.of(other)
        if isinstance(other, LogSeries):
            return self.parts == other.parts
        return NotImplemented

    __hash__ = None


class GradedElem:
    """Element of Q[H]/(H^4) ('cy') or Q[mu][phi]/(phi^5 - mu) ('twisted')."""

    __slots__ = ("kind", "coeffs")

    DIM = {"cy": 4, "twisted": 5}

    def __init__(self, kind, coeffs):
        if kind not in self.DIM:
            raise ValueError(f"unknown ring {kind!r}")
        coeffs = list(coeffs)
        dim = self.DIM[kind]
        if len(coeffs) > dim:
            raise ValueError("too many coefficients for the ring")
        coeffs += [0] * (dim - len(coeffs))
        self.kind = kind
        self.coeffs = tuple(coeffs)

    @classmethod
    def basis(cls, kind, i, c=1):
        coeffs = [0] * cls.DIM[kind]
        coeffs[i] = c
        return cls(kind, coeffs)

    @classmethod
    def generator_power(cls, kind, k):
        """H^k or phi^k (reduced with phi^5 = mu)."""
        from .coeff import MuPoly

        if kind == "cy":
            return cls(kind, []) if k >= 4 else cls.basis(kind, k)
        return cls.basis(kind, k % 5, MuPoly.monomial(k // 5))

    def __getitem__(self, i):
        return self.coeffs[i]

    def _check(self, other):
        if not isinstance(other, GradedElem) or other.kind != self.kind:
            raise TypeError("mixing graded rings")

    def __add__(self, other):
        self._check(other)
        return GradedElem(self.kind, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return GradedElem(self.kind, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, GradedElem):
            return GradedElem(self.kind, [a * other for a in self.coeffs])
        self._check(other)
        dim = self.DIM[self.kind]
        out = [0] * dim
        if self.kind == "cy":
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs[: dim - i]):
                    out[i + j] = out[i + j] + a * b
        else:
            from .coeff import MuPoly

            mu = MuPoly.monomial(1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    term = a * b
                    if i + j >= 5:
                        out[i + j - 5] = out[i + j - 5] + term * mu
                    else:
                        out[i + j] = out[i + j] + term
        return GradedElem(self.kind, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GradedElem):
            return NotImplemented
        return self.kind == other.kind and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def __repr__(self):
        return f"GradedElem({self.kind!r}, {list(self.coeffs)!r})"


def pairing(x, y):
    """(Phi_i, Phi_j) = 5 delta_{i+j,3}; in the twisted ring also (phi_4, phi_4) = 5 mu."""
    x._check(y)
    total = 0
    for i in range(4):
        total = total + x[i] * y[3 - i]
    total = total * 5
    if x.kind == "twisted":
        from .coeff import MuPoly

        total = total + x[4] * y[4] * MuPoly.monomial(1, 5)
    return total


def dual_basis(kind, i):
    """Phi^i with (Phi^i, Phi_j) = delta_ij."""
    if kind == "twisted" and i == 4:
        from .coeff import MuPoly

        return GradedElem.basis(kind, 4, MuPoly.monomial(-1, Fraction(1, 5)))
    return GradedElem.basis(kind, 3 - i, Fraction(1, 5))


# --- plain nested-tuple matrices over any field ------------------------------

def mat_zero(n, m=None):
    m = n if m is None else m
    return tuple(tuple(0 for _ in range(m)) for _ in range(n))


def mat_identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_add(A, B):
    return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_sub(A, B):
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_scale(A, c):
    return tuple(tuple(a * c for a in row) for row in A)


def mat_mul(A, B):
    cols = list(zip(*B))
    out = []
    for row in A:
        r = []
        for col in cols:
            acc = 0
            for a, b in zip(row, col):
                if a != 0 and b != 0:
                    acc = acc + a * b
            r.append(acc)
        out.append(tuple(r))
    return tuple(out)


def mat_transpose(A):
    return tuple(zip(*A))


def mat_inverse(A):
    """Gauss-Jordan; pivots on the largest magnitude so it also suits floats."""
    n = len(A)
    M = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: _magnitude_key(abs(M[r][col])))
        if M[piv][col] == 0:
            raise ZeroDivisionError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        inv = _recip(M[col][col])
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return tuple(tuple(row[n:]) for row in M)


def mat_max_abs(A):
    return max_magnitude(a for row in A for a in row)


def antidiagonal(values):
    n = len(values)
    return tuple(tuple(values[i] if i + j == n - 1 else 0 for j in range(n)) for i in range(n))


class LaurentMatrix:
    """Square matrix with entries in a Laurent polynomial ring in z,
    stored as {power: scalar matrix}."""

    __slots__ = ("n", "terms")

    def __init__(self, n, terms):
        self.n = n
        self.terms = {k: tuple(tuple(r) for r in m) for k, m in terms.items()}

    @classmethod
    def identity(cls, n):
        return cls(n, {0: mat_identity(n)})

    @classmethod
    def constant(cls, M):
        return cls(len(M), {0: M})

    @classmethod
    def from_entries(cls, n, entries):
        """entries: {(i, j): {power: value}}."""
        terms = {}
        for (i, j), poly in entries.items():
            for k, v in poly.items():
                m = terms.setdefault(k, [[0] * n for _ in range(n)])
                m[i][j] = m[i][j] + v
        return cls(n, terms)

    @property
    def window(self):
        if not self.terms:
            return (0, 0)
        return (min(self.terms), max(self.terms))

    def coeff(self, k):
        return self.terms.get(k, mat_zero(self.n))

    def entry(self, i, j):
        return {k: m[i][j] for k, m in self.terms.items()}

    def __add__(self, other):
        out = dict(self.terms)
        for k, m in other.terms.items():
            out[k] = mat_add(out[k], m) if k in out else m
        return LaurentMatrix(self.n, out)

    def __neg__(self):
        return LaurentMatrix(self.n, {k: mat_scale(m, -1) for k, m in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentMatrix):
            return LaurentMatrix(self.n, {k: mat_scale(m, other) for k, m in self.terms.items()})
        out = {}
        for a, A in self.terms.items():
            for b, B in other.terms.items():
                prod = mat_mul(A, B)
                out[a + b] = mat_add(out[a + b], prod) if a + b in out else prod
        return LaurentMatrix(self.n, out)

    def subs_neg(self):
        """M(z) -> M(-z)."""
        return LaurentMatrix(self.n, {k: (m if k % 2 == 0 else mat_scale(m, -1)) for k, m in self.terms.items()})

    def adjoint(self, P):
        return laurent_adjoint(self, P)

    def transpose(self):
        return LaurentMatrix(self.n, {k: mat_transpose(m) for k, m in self.terms.items()})

    def deviation(self, other):
        """max |coefficient| of self - other over all z-powers."""
        diff = self - other
        if not diff.terms:
            return 0
        return max_magnitude(mat_max_abs(m) for m in diff.terms.values())

    def inverse_unipotent(self):
        """(1 + N)^-1 = sum (-N)^k when self - 1 is nilpotent."""
        one = LaurentMatrix.identity(self.n)
        N = self - one
        out, power = one, one
        for _ in range(self.n):
            power = power * (-N)
            out = out + power
        return out

    def __repr__(self):
        return f"LaurentMatrix(n={self.n}, window={self.window})"


def laurent_adjoint(M, P):
    """M*(z) = P^-1 M(z)^T P; the caller handles any z -> -z convention."""
    Pinv = mat_inverse(P)
    return LaurentMatrix(M.n, {k: mat_mul(mat_mul(Pinv, mat_transpose(m)), P) for k, m in M.terms.items()})
