"""Analytic continuation of the CY I-function to the LG point.

Two independent routes:

* symbolic: I~_i(t) = (t/5) sum_j b_ij I^LG_j(t) with b read off U;
* numeric: transport the Frobenius basis of the quintic Picard-Fuchs ODE
  from a point near q = 0 to a point near q = infinity by high-order
  Taylor stepping, then solve for the connection matrix in the LG
  Frobenius basis there.
"""

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .ifunctions import cy_frobenius_basis, lg_frobenius_basis
from .series import TruncSeries, max_magnitude
from .tower import c_scalars, tower_recursion, GradedSeries

CONIFOLD = Fraction(1, 3125)


# --- symbolic continuation ---------------------------------------------------------

def _strip_ratio(a, d):
    v = d.valuation()
    if v is None:
        raise ZeroDivisionError("division by a zero series")
    return a.strip(v) / d.strip(v)


def _theta_q_in_t(f):
    """q d/dq = -(1/5) t d/dt under q = t^(-5)."""
    return f.theta() * Fraction(-1, 5)


@dataclass(frozen=True)
class ContinuedCY:
    b: tuple
    components: tuple
    table: dict
    L: TruncSeries
    beta: object
    order: int
    tol: object

    def diag(self, p):
        return self.table[(p, p)]

    def mirror_map(self):
        """tau^C = I~_1 / I~_0."""
        return _strip_ratio(self.components[1], self.components[0])

    def c_scalars(self):
        I00, I11, L = self.diag(0), self.diag(1), self.L
        c = c_scalars(I00.strip(1), I11.strip(1), L.strip(1))
        return c


def build_continued_cy(b, lg_basis, order, pool, beta=-1, P=4):
    """lg_basis: the rational LG series r_0..r_4 at mu = 0 (order >= order)."""
    n = len(b)
    num = pool.num
    lg = [r.truncate(order).map(num) for r in lg_basis[:n]]
    comps = []
    for i in range(n):
        acc = lg[0] * b[i][0]
        for j in range(1, n):
            acc = acc + lg[j] * b[i][j]
        comps.append(TruncSeries((0 * pool.xi,) + tuple(c / 5 for c in acc.coeffs), "t"))
    table = tower_recursion(comps, min(P, n - 1), _theta_q_in_t, _strip_ratio)
    from .tower import big_L

    L_lg = big_L("lg", order).map(num)
    L = TruncSeries((0 * pool.xi,) + tuple(c * beta / 5 for c in L_lg.coeffs), "t")
    return ContinuedCY(tuple(map(tuple, b)), tuple(comps), table, L, beta, order, pool.tolerance())


def continued_identity_residuals(cont):
    """prod_{p<=4} I~_pp - L~^5 (relative to the leading coefficient)."""
    prod = cont.diag(0)
    for p in range(1, 5):
        prod = prod * cont.diag(p)
    target = cont.L ** 5
    n = min(prod.order, target.order)
    diff = prod.truncate(n) - target.truncate(n)
    return diff.max_abs() / max_magnitude(target.coeffs)


# --- numeric transport ---------------------------------------------------------------

def _stirling2(n):
    S = [[0] * (n + 1) for _ in range(n + 1)]
    S[0][0] = 1
    for a in range(1, n + 1):
        for k in range(1, a + 1):
            S[a][k] = k * S[a - 1][k] + S[a - 1][k - 1]
    return S


S2 = _stirling2(5)


def _pf_polys():
    """c_j(q) with sum_j c_j(q) (d/dq)^j f = 0 equivalent to
    -theta^5 f + q prod_{i=1}^5 (5 theta + i) f = 0."""
    p = [1]
    for i in range(1, 6):
        p = [(p[k - 1] * 5 if k else 0) + (p[k] * i if k < len(p) else 0) for k in range(len(p) + 1)]
    P = [sum(p[k] * S2[k][j] for k in range(6)) for j in range(6)]
    polys = []
    for j in range(6):
        c = [0] * (j + 2)
        c[j] = -S2[5][j]
        c[j + 1] = P[j]
        polys.append(c)
    return polys


PF_POLYS = _pf_polys()


def theta_to_taylor(th, q, ctx):
    """[theta^k f](q), k < 5  ->  [f^(k)(q)/k!]."""
    D = []
    for k in range(5):
        acc = th[k] - sum(S2[k][j] * q ** j * D[j] for j in range(k))
        D.append(acc / q ** k if k else acc)
    return [D[j] / math.factorial(j) for j in range(5)]


def taylor_to_theta(T, q):
    D = [T[j] * math.factorial(j) for j in range(5)]
    return [sum(S2[k][j] * q ** j * D[j] for j in range(k + 1)) for k in range(5)]


def _shifted(poly, a):
    n = len(poly)
    return [sum(poly[k] * math.comb(k, i) * a ** (k - i) for k in range(i, n)) for i in range(n)]


def taylor_coefficients(states, qa, order, ctx):
    """Continue the Taylor coefficients of each solution at qa up to s^order."""
    cs = [_shifted([ctx.mpf(x) for x in PF_POLYS[j]], qa) for j in range(6)]
    lead = cs[5][0]
    if lead == 0:
        raise ZeroDivisionError("Taylor expansion at a singular point")
    inv_lead = 1 / lead
    fs = [list(s) + [None] * (order - 4) for s in states]
    for n in range(order - 4):
        # gather sum over (j, i) of cs[j][i] (m+1)_j f_{m+j}, m = n - i, by target index
        weights = {}
        for j in range(6):
            cj = cs[j]
            for i, cij in enumerate(cj):
                if j == 5 and i == 0:
                    continue
                m = n - i
                if m < 0:
                    continue
                rf = 1
                for r in range(1, j + 1):
                    rf *= m + r
                k = m + j
                w = cij * rf
                weights[k] = weights[k] + w if k in weights else w
        rf_lead = (n + 1) * (n + 2) * (n + 3) * (n + 4) * (n + 5)
        scale = -inv_lead / rf_lead
        items = list(weights.items())
        for f in fs:
            acc = 0
            for k, w in items:
                acc += w * f[k]
            f[n + 5] = acc * scale
    return fs


def _evaluate_state(f, h):
    """[g^(k)(h)/k!] for g(s) = sum f_n s^n."""
    N = len(f) - 1
    hp = [1]
    for _ in range(N):
        hp.append(hp[-1] * h)
    out = []
    for k in range(5):
        acc = 0
        for n in range(k, N + 1):
            acc += math.comb(n, k) * f[n] * hp[n - k]
        out.append(acc)
    return out


@dataclass(frozen=True)
class TransportResult:
    path: tuple
    q_start: object
    q_end: object
    t_end: object
    ell_start: object
    taylor_order: int
    steps: int
    propagator: object      # theta-coordinates at q_end  <-  theta-coordinates at q_start
    end_states: tuple       # theta-vectors of the transported r_0..r_4 at q_end
    connection: tuple       # r_i = sum_j C_ij (t r^LG_j)
    error_estimate: object
    max_step_ratio: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def b(self):
        return tuple(tuple(5 * c for c in row) for row in self.connection)


def default_path(ctx, q0=Fraction(1, 100000)):
    """q0 -> (1 + i/2)/3125 -> 2/3125 -> 1: passes above the conifold."""
    c = ctx.mpf(1) / 3125
    return (ctx.mpf(q0.numerator) / q0.denominator, ctx.mpc(c, c / 2), 2 * c, ctx.mpf(1))


def path_from_json(text, ctx):
    spec = json.loads(text)
    pts = []
    for p in spec["waypoints"]:
        if isinstance(p, (list, tuple)):
            pts.append(ctx.mpc(ctx.mpf(str(p[0])), ctx.mpf(str(p[1]))))
        else:
            pts.append(ctx.mpc(ctx.mpf(str(p))))
    return tuple(pts), spec.get("taylor_order"), spec.get("precision")


def _check_path(path, ctx, margin):
    """Segments must keep margin * 5^-5 away from the conifold and at least
    half of |q_start| away from q = 0."""
    con = ctx.mpf(1) / 3125
    near0 = abs(path[0]) / 2
    for a, b in zip(path, path[1:]):
        for s, need in ((ctx.mpf(0), near0), (con, margin * con)):
            d = _segment_distance(a, b, s)
            if d < need:
                raise ValueError(f"path segment {a} -> {b} passes within {d} of singular point {s}")


def _segment_distance(a, b, s):
    ab = b - a
    if ab == 0:
        return abs(a - s)
    t = ((s - a) * ab.conjugate()).real / abs(ab) ** 2
    t = min(max(t, 0), 1)
    return abs(a + t * ab - s)


def transport_states(states, path, order, pool, max_step_ratio=0.5, eps=None, step_scale=1):
    """Move Taylor states of 5 solutions along the path.

    The step is limited by max_step_ratio times the distance to the nearest
    singular point and by the tail estimate |f_N| h^N <= eps * |state|.
    step_scale shrinks every accepted step (used for step-halving runs).
    Returns the end states, the per-step fundamental matrices and tail
    estimates."""
    ctx = pool.ctx
    if eps is None:
        eps = ctx.mpf(2) ** (-int(pool.precision * 0.9))
    sing = [ctx.mpf(0), ctx.mpf(1) / 3125]
    record = []
    q = ctx.mpc(path[0])
    for target in path[1:]:
        target = ctx.mpc(target)
        while True:
            fs = taylor_coefficients(states, q, order, ctx)
            dist = min(abs(q - s) for s in sing)
            scale = max_magnitude(x for s in states for x in s)
            tail = max_magnitude(f[n] for f in fs for n in (order - 1, order))
            h_tol = (eps * scale / tail) ** (ctx.mpf(1) / order) if tail != 0 else dist
            h_abs = step_scale * min(max_step_ratio * dist, h_tol)
            rem = target - q
            last = abs(rem) <= h_abs
            h = rem if last else rem / abs(rem) * h_abs
            new_states = [_evaluate_state(f, h) for f in fs]
            tail_err = max_magnitude(abs(f[n]) * abs(h) ** n * math.comb(n, 4) for f in fs for n in (order - 1, order))
            record.append((q, h, tail_err, states))
            states = new_states
            q = q + h
            if last:
                break
    return states, record


def _mat_from_rows(ctx, rows):
    return ctx.matrix([list(r) for r in rows])


def pf_transport(path=None, taylor_order=None, pool=None, max_step_ratio=0.5, margin=0.3, eps=None, step_scale=1):
    """Transport the CY Frobenius basis r_0..r_4 along the path and express
    the result in the LG basis t r^LG_j at t_end = q_end^(-1/5) (principal)."""
    ctx = pool.ctx
    if path is None:
        path = default_path(ctx)
    path = tuple(ctx.mpc(p) for p in path)
    if taylor_order is None:
        taylor_order = max(30, pool.precision // 3)
    q0, q1 = path[0], path[-1]
    if abs(q0) >= ctx.mpf(1) / 3125 * (1 - margin):
        raise ValueError("start point must lie well inside |q| < 5^-5")
    t1 = ctx.exp(-ctx.log(q1) / 5)
    if abs(t1) >= 5 * (1 - margin):
        raise ValueError("end point must lie well inside |t| < 5")
    _check_path(path, ctx, margin)

    ell0 = ctx.log(q0)
    n0 = int(pool.precision * math.log(2) / -float(ctx.log(abs(q0) * 3125))) + 8
    frob = cy_frobenius_basis(n0, 4)
    init = []
    for r in frob:
        th, g = [], r
        for _ in range(5):
            th.append(g.map(pool.num).evaluate(q0, ell0))
            g = g.D()
        init.append(theta_to_taylor(th, q0, ctx))

    ends, record = transport_states(init, path, taylor_order, pool, max_step_ratio, eps, step_scale)
    end_theta = [taylor_to_theta(s, q1) for s in ends]

    nt = int(pool.precision * math.log(2) / math.log(5 / float(abs(t1)))) + 25
    lg = lg_frobenius_basis(nt, 4)
    G = []
    for r in lg:
        g = TruncSeries((0,) + r.coeffs, "t").map(pool.num)
        row = []
        for k in range(5):
            row.append(g.evaluate(t1) * ctx.mpf(-1) ** k / ctx.mpf(5) ** k)
            g = g.theta()
        G.append(row)
    Gm = _mat_from_rows(ctx, G).T      # columns: LG basis theta-vectors
    Gm_inv = ctx.inverse(Gm)
    C = []
    for th in end_theta:
        sol = Gm_inv * ctx.matrix(th)
        C.append(tuple(sol[j] for j in range(5)))

    # propagator in theta coordinates: end_theta = Phi init_theta
    init_theta = _mat_from_rows(ctx, [taylor_to_theta(s, q0) for s in init]).T
    end_m = _mat_from_rows(ctx, end_theta).T
    Phi = end_m * ctx.inverse(init_theta)

    # error: each step's tail error carried to the end by the fundamental matrix
    F_end = _mat_from_rows(ctx, ends).T
    err = ctx.mpf(0)
    for (_, _, tail, states) in record:
        Fk = _mat_from_rows(ctx, states).T
        amp = ctx.mnorm(F_end * ctx.inverse(Fk), 1)
        err += tail * amp
    rounding = len(record) * ctx.mpf(2) ** (-pool.precision) * ctx.mnorm(F_end, 1) * 1e6
    conv = ctx.mnorm(_mat_from_rows(ctx, [taylor_to_theta([1 if i == k else 0 for i in range(5)], q1) for k in range(5)]), 1)
    err_C = 10 * (err + rounding) * conv * ctx.mnorm(Gm_inv, 1)

    return TransportResult(
        path=path,
        q_start=q0,
        q_end=q1,
        t_end=t1,
        ell_start=ell0,
        taylor_order=taylor_order,
        steps=len(record),
        propagator=Phi,
        end_states=tuple(tuple(r) for r in end_theta),
        connection=tuple(C),
        error_estimate=5 * err_C,
        max_step_ratio=max_step_ratio,
        diagnostics={"initial_terms": n0, "lg_terms": nt},
    )


def propagate_basis(path, taylor_order, pool, max_step_ratio=0.5, eps=None):
    """Theta-coordinate propagator of the ODE along a path (any base points
    away from the singularities)."""
    ctx = pool.ctx
    path = tuple(ctx.mpc(p) for p in path)
    q0, q1 = path[0], path[-1]
    init = [theta_to_taylor([1 if i == k else 0 for i in range(5)], q0, ctx) for k in range(5)]
    ends, record = transport_states(init, path, taylor_order, pool, max_step_ratio, eps)
    return _mat_from_rows(ctx, [taylor_to_theta(s, q1) for s in ends]).T, len(record)


def polygon_loop(center, radius, sides, ctx, start_angle=0):
    pts = [center + radius * ctx.expjpi(2 * ctx.mpf(k) / sides + start_angle) for k in range(sides)]
    return tuple(pts) + (pts[0],)


def cy_theta_vectors(q, ell, pool, n_terms=None):
    """theta^k r_j at a point inside the q-disk with a chosen value of log q."""
    ctx = pool.ctx
    if n_terms is None:
        n_terms = int(pool.precision * math.log(2) / -float(ctx.log(abs(q) * 3125))) + 8
    out = []
    for r in cy_frobenius_basis(n_terms, 4):
        th, g = [], r
        for _ in range(5):
            th.append(g.map(pool.num).evaluate(q, ell))
            g = g.D()
        out.append(th)
    return out


def _log_normalized(f):
    """log(f/f(0)); the dropped constant is invisible to d/dt."""
    g = f * (1 / f[0])
    return TruncSeries((1,) + g.coeffs[1:], g.var).log()


def continued_canonical_form(cont):
    """G~ = 5/4 log L~ - 4 log I~00 - log I~11 - 3/4 log q with q = t^-5.

    L~, I~00 and I~11 all vanish to first order at t = 0, so the log t
    terms cancel (5/4 - 4 - 1 + 15/4 = 0) and G~ is a series up to a
    branch constant.  du = L~ dq/q = -5 L~/t dt."""
    from .tower import CanonicalForm

    L = cont.L.strip(1)
    I00 = cont.diag(0).strip(1)
    I11 = cont.diag(1).strip(1)
    G = _log_normalized(L) * Fraction(5, 4) - _log_normalized(I00) * 4 - _log_normalized(I11)
    dG = G.deriv()
    n = min(dG.order, L.order)
    du_dt = L.truncate(n) * -5
    return CanonicalForm("continued", cont.L, G, dG, dG.truncate(n) / du_dt)
