"""Genus-one potentials on both sides and the differential form of the
genus-one LG/CY correspondence.

All d-forms are returned as coefficient series of dq/q on the CY side and
of dt on the LG side and for continued quantities.  Constants of
integration never enter.
"""

from dataclasses import dataclass
from fractions import Fraction

from .continuation import build_continued_cy, continued_canonical_form
from .ifunctions import CY, LG, build_icy, build_ilg, lg_frobenius_basis, mirror_map
from .series import LogSeries, TruncSeries, max_magnitude
from .tower import big_L, build_tower, r1_diag_potential, rational_part
from .umatrix import UMatrix, build_u_matrix, extract_b_matrix

VERTEX_CONSTANT = Fraction(25, 3)   # -<Phi_0 psi>_{1,1}


def _dlog(f):
    """f'/f for f(0) != 0."""
    n = f.order - 1
    return f.deriv().truncate(n) / f.truncate(n)


def _theta_log(f):
    return f.theta() / f


def _conifold_factor(side, order):
    """1 - 5^5 q, or 1 - (t/5)^5."""
    if side == CY:
        c = [Fraction(0)] * (order + 1)
        c[0] = Fraction(1)
        if order >= 1:
            c[1] = Fraction(-3125)
        return TruncSeries(c, "q")
    c = [Fraction(0)] * (order + 1)
    c[0] = Fraction(1)
    if order >= 5:
        c[5] = Fraction(-1, 3125)
    return TruncSeries(c, "t")


def _clip(*series):
    n = min(s.order for s in series)
    return [s.truncate(n) for s in series]


def f1_closed_form_deriv(side, order):
    """Derivative of the logged closed-form genus-one potential.

    CY:  q d/dq log(I0^(-31/3) q^(-25/12) (1 - 5^5 q)^(-1/12) (q dtau/dq)^(-1/2))
    LG:  d/dt  log(I0^(-31/3) (1 - (t/5)^5)^(-1/12) (dtau/dt)^(-1/2))
    """
    if side == CY:
        ifn = build_icy(order + 1)
        I0 = ifn.I0.to_series()
        tau = mirror_map(ifn)
        dtau = tau.D().to_series()          # log-free: q dtau/dq = 1 + O(q)
        parts = _clip(_theta_log(I0), _theta_log(_conifold_factor(CY, order + 1)), _theta_log(dtau))
        out = parts[0] * Fraction(-31, 3) - parts[1] * Fraction(1, 12) - parts[2] * Fraction(1, 2)
        return (out + Fraction(-25, 12)).truncate(order)
    if side == LG:
        ifn = build_ilg(order + 2)
        dtau = mirror_map(ifn).deriv()
        parts = _clip(_dlog(ifn.I0), _dlog(_conifold_factor(LG, order + 2)), _dlog(dtau))
        out = parts[0] * Fraction(-31, 3) - parts[1] * Fraction(1, 12) - parts[2] * Fraction(1, 2)
        return out.truncate(order)
    raise ValueError(f"unknown side {side!r}")


def f1_r1_route(tower, pool):
    """dF_1 = -200/24 dlog(q^(1/5) I0) - 5/24 dlog(q^(1/5) L) + 1/2 sum_a (R_1)_aa du^a.

    On the LG side the q^(1/5) factors are absent.  The R_1 sum is taken
    through the canonical coordinates du^a = xi^a lambda du."""
    cf = r1_diag_potential(tower, pool)
    I0 = rational_part(tower.diag(0)).map(pool.num)
    L = tower.L.map(pool.num)
    r1_sum = cf.alpha_sum(pool).terms[0]          # sum_a (R_1)_aa du^a/du
    if tower.side == CY:
        a, b, c = _clip(_theta_log(I0), _theta_log(L), r1_sum * L.truncate(r1_sum.order))
        fifth = Fraction(1, 5)
        return (a + fifth) * Fraction(-200, 24) - (b + fifth) * Fraction(5, 24) + c * Fraction(1, 2)
    a, b, c = _clip(_dlog(I0), _dlog(L), r1_sum * L.truncate(r1_sum.order))
    return a * Fraction(-200, 24) - b * Fraction(5, 24) + c * Fraction(1, 2)


def continued_f1_deriv(cont):
    """d/dt of F~_1^CY: the CY closed form continued to the LG point.

    I0~ ~ t, q dtau/dq ~ t and (1 - 5^5 q) = -5^5 t^-5 (1 - (t/5)^5), and the
    log t coefficients -31/3 + 125/12 + 5/12 - 1/2 sum to zero, so
    dF~/dt = -31/3 dlog(I0~/t) - 1/12 dlog(1 - (t/5)^5) - 1/2 dlog(q dtau/dq / t)."""
    I0 = cont.components[0].strip(1)
    dtau = (cont.mirror_map().theta() * Fraction(-1, 5)).strip(1)
    con = _conifold_factor(LG, I0.order).map(lambda c: c * (I0[0] * 0 + 1))
    a, b, c = _clip(_dlog(I0), _dlog(con), _dlog(dtau))
    return a * Fraction(-31, 3) - b * Fraction(1, 12) - c * Fraction(1, 2)


def vertex_contribution(dF_lg, continued, lg_I0):
    """d/dt of F_1^LG + 25/3 (log(t I0^LG) - log(5 I0~)).

    I0~ = t g(t) with g(0) = b_00/5, so the bracket is log(I0^LG / (5 g))."""
    g = continued.components[0].strip(1)
    a, b = _clip(_dlog(lg_I0.map(lambda c: c * (g[0] * 0 + 1))), _dlog(g))
    d, a, b = _clip(dF_lg, a, b)
    return d + (a - b) * VERTEX_CONSTANT


def loop_from_potentials(cy_form, lg_form):
    """1/2 (dG~ - dG^LG) from two canonical forms written in the same variable."""
    a, b = _clip(cy_form.dG, lg_form.dG)
    return (a - b) * Fraction(1, 2)


def loop_contribution(lg_tower, continued, pool):
    """1/2 (dG~/dt - dG^LG/dt) at mu = 0."""
    return loop_from_potentials(continued_canonical_form(continued), r1_diag_potential(lg_tower, pool))


@dataclass(frozen=True)
class GenusOneForms:
    dF_lg: TruncSeries
    dF_cy_continued: TruncSeries
    vertex: TruncSeries
    loop: TruncSeries
    total: TruncSeries
    residual: TruncSeries
    per_order: tuple        # relative |residual_k| / max|rhs| for k <= upto
    max_residual: object
    upto: int
    tolerance: object

    @property
    def passed(self):
        return self.max_residual <= self.tolerance


def genus_one_forms(lg_tower, lhs, rhs, pool, upto):
    """lhs is the continuation used by the vertex and loop terms, rhs the one
    used for F~^CY; they are the same object except in fault-injection runs."""
    dF_lg = f1_closed_form_deriv(LG, lg_tower.L.order).map(pool.num)
    lg_I0 = rational_part(lg_tower.diag(0)).map(pool.num)
    vertex = vertex_contribution(dF_lg, lhs, lg_I0)
    loop = loop_contribution(lg_tower, lhs, pool)
    total = vertex.truncate(min(vertex.order, loop.order)) + loop.truncate(min(vertex.order, loop.order))
    target = continued_f1_deriv(rhs)
    n = min(total.order, target.order, upto)
    residual = total.truncate(n) - target.truncate(n)
    scale = max_magnitude(target.coeffs[: n + 1])
    per_order = tuple(abs(c) / scale for c in residual.coeffs)
    return GenusOneForms(
        dF_lg=dF_lg,
        dF_cy_continued=target,
        vertex=vertex,
        loop=loop,
        total=total,
        residual=residual,
        per_order=per_order,
        max_residual=max_magnitude(per_order),
        upto=n,
        tolerance=pool.tolerance(),
    )


def continuation_inputs(order, pool, mu_cap=0, u=None):
    """(b, continued, lg tower) at the given order; u overrides the 5x5 U."""
    U = build_u_matrix(pool, 5) if u is None else u
    extra = 8
    B = extract_b_matrix(U, build_ilg(order + extra, twisted=True, mu_cap=0))
    cont = build_continued_cy(B.b, lg_frobenius_basis(order + extra, 4), order + extra, pool)
    lg_tower = build_tower(LG, P=4, order=order + extra, mu_cap=mu_cap)
    return B, cont, lg_tower


def flip_u_entry(U, r, m):
    """U with the sign of u_rm reversed (fault injection)."""
    rows = [list(row) for row in U.u]
    rows[r][m] = -rows[r][m]
    return UMatrix(U.pool, tuple(tuple(row) for row in rows))


def perturb_b(b, i, j, delta):
    rows = [list(row) for row in b]
    rows[i][j] = rows[i][j] + delta
    return tuple(tuple(row) for row in rows)


def genus_one_check(order, pool, mu_cap=0, lhs_b=None, lhs_u=None):
    """Residual of dF_1^C - dF~_1^CY through t^(order - 5).

    lhs_b or lhs_u replace the continuation data entering the vertex and
    loop terms only (negative controls)."""
    if order < 8:
        raise ValueError("genus-one check needs order >= 8")
    B, cont, lg_tower = continuation_inputs(order, pool, mu_cap)
    lhs = cont
    if lhs_u is not None:
        Bx = extract_b_matrix(lhs_u, build_ilg(cont.order, twisted=True, mu_cap=0))
        lhs = build_continued_cy(Bx.b, lg_frobenius_basis(cont.order, 4), cont.order, pool)
    elif lhs_b is not None:
        lhs = build_continued_cy(lhs_b, lg_frobenius_basis(cont.order, 4), cont.order, pool)
    return genus_one_forms(lg_tower, lhs, cont, pool, order - 5)


def genus_zero_consistency(cont, B, pool, upto):
    """tau^C = I~_1/I~_0 from the b-linear combination against the same
    ratio of the series obtained by applying U(z) to t I^LG directly."""
    tau = cont.mirror_map()
    direct = B.continued[1].strip(1) / B.continued[0].strip(1)
    n = min(tau.order, direct.order, upto)
    diff = (tau.truncate(n) - direct.truncate(n)).max_abs()
    return diff / max_magnitude(tau.coeffs[: n + 1])
