"""Verification suites.  Each suite appends CheckRecords to a report; the
heavy objects (U, Birkhoff factors, continuation, transport) are built once
per run and shared."""

import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from types import SimpleNamespace

from . import birkhoff as bk
from .coeff import build_constant_pool
from .continuation import (
    build_continued_cy,
    continued_canonical_form,
    continued_identity_residuals,
    cy_theta_vectors,
    polygon_loop,
    pf_transport,
    propagate_basis,
)
from .genus_one import (
    continuation_inputs,
    f1_closed_form_deriv,
    f1_r1_route,
    flip_u_entry,
    genus_one_check,
    genus_one_forms,
    genus_zero_consistency,
    loop_contribution,
    perturb_b,
    vertex_contribution,
)
from .ifunctions import CY, LG, CY_PF, LG_PF, PFOperator, build_icy, build_ilg, lg_frobenius_basis, mirror_map, pf_apply
from .report import FAIL, PASS, SCHEMA_VERSION, CheckRecord, VerificationReport, format_number
from .series import LaurentMatrix, LogSeries, TruncSeries, antidiagonal, max_magnitude
from .tower import (
    SIDE_RADIUS,
    build_tower,
    m_zero_check,
    psi_and_delta,
    psi_checks,
    r1_diag_potential,
    rational_part,
    tower_identity_residuals,
)
from .umatrix import (
    build_u_matrix,
    closed_form_b,
    displayed_u_entry,
    extract_b_matrix,
    symplectic_residual,
)

SUITES = ("constants", "series", "pf", "u-matrix", "birkhoff", "tower", "continuation", "genus-one")

TRANSPORT_TOLERANCE = Fraction(1, 10 ** 20)
CONTROL_MARGIN = 10 ** 10


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    order: int = 12
    precision: int = 256
    tolerance: object = None          # None: 2^(-precision/2)
    mu_cap: int = 2
    path: tuple = None                # complex waypoints for the transport
    taylor_order: int = None
    suites: tuple = SUITES
    report: str = None
    fmt: str = "text"

    def validate(self):
        if self.precision < 128:
            raise ConfigError("precision must be at least 128 bits")
        if self.order < 5:
            raise ConfigError("order must be at least 5")
        if self.mu_cap < 0:
            raise ConfigError("mu-cap must be non-negative")
        if "genus-one" in self.suites and self.order < 8:
            raise ConfigError("the genus-one suite needs order >= 8")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suite(s): {', '.join(unknown)}")
        if self.fmt not in ("text", "json"):
            raise ConfigError("format must be json or text")
        if self.taylor_order is not None and self.taylor_order < 10:
            raise ConfigError("Taylor order must be at least 10")
        return self


class Session:
    """Lazily built shared objects for one configuration."""

    def __init__(self, config):
        self.config = config

    @cached_property
    def pool(self):
        return build_constant_pool(self.config.precision, 6)

    @cached_property
    def tol(self):
        t = self.config.tolerance
        return self.pool.tolerance() if t is None else self.pool.ctx.mpf(t)

    @cached_property
    def U4(self):
        return build_u_matrix(self.pool, 4)

    @cached_property
    def U5(self):
        return build_u_matrix(self.pool, 5)

    @cached_property
    def factors(self):
        return bk.birkhoff_factorize(self.U4)

    @cached_property
    def continuation(self):
        """(BMatrix, ContinuedCY, LG tower at mu_cap 0)."""
        return continuation_inputs(self.config.order, self.pool)

    @cached_property
    def transport(self):
        return pf_transport(self.config.path, self.config.taylor_order, self.pool)

    def tower(self, side):
        mu_cap = self.config.mu_cap
        return build_tower(side, P=min(9, 5 * mu_cap + 4), order=self.config.order, mu_cap=mu_cap)


class Recorder:
    def __init__(self, report, session):
        self.report = report
        self.session = session

    def check(self, cid, reference, residual, tolerance=None, passed=None, exact=False, order=None, details=None, started=None):
        cfg = self.session.config
        tolerance = self.session.tol if tolerance is None and not exact else tolerance
        if passed is None:
            passed = residual == 0 if exact else residual <= tolerance
        if exact:
            res_text = "0 (exact)" if residual == 0 else f"{format_number(residual)} (exact arithmetic)"
            tol_text = "exact"
        else:
            res_text = format_number(residual)
            tol_text = format_number(tolerance)
        self.report.add(CheckRecord(
            id=cid,
            reference=reference,
            status=PASS if passed else FAIL,
            residual=res_text,
            tolerance=tol_text,
            order=cfg.order if order is None else order,
            precision=cfg.precision,
            wall_time=round(time.perf_counter() - started, 4) if started is not None else 0.0,
            details={k: format_number(v) if not isinstance(v, (str, int, list)) else v for k, v in (details or {}).items()},
        ))
        return passed


def _exact_max(series_list):
    """Largest |coefficient| over exact series (Fractions or MuPolys)."""
    worst = Fraction(0)
    for s in series_list:
        parts = s.parts if isinstance(s, LogSeries) else [s]
        for p in parts:
            for c in p.coeffs:
                if hasattr(c, "terms"):
                    for v in c.terms.values():
                        worst = max(worst, abs(v))
                elif c != 0:
                    worst = max(worst, abs(Fraction(c)))
    return worst


def _rel(a, b):
    return abs(a - b) / abs(b)


# --- suites --------------------------------------------------------------------------------

def suite_constants(rec):
    s = rec.session
    pool, ctx = s.pool, s.pool.ctx
    t0 = time.perf_counter()
    refl = max_magnitude(abs(pool.gamma_fifth[j] * pool.gamma_fifth[5 - j] * ctx.sin(pool.pi * j / 5) - pool.pi) for j in range(1, 5))
    rec.check("constants.gamma_reflection", "Gamma(j/5) Gamma(1 - j/5) = pi / sin(pi j/5)", refl, started=t0)
    t0 = time.perf_counter()
    x = pool.xi
    root = max_magnitude((abs(x ** 5 - 1), abs(1 + x + x ** 2 + x ** 3 + x ** 4)))
    rec.check("constants.xi_root_of_unity", "xi = exp(2 pi i/5) is a primitive fifth root of unity", root, started=t0)
    t0 = time.perf_counter()
    e_res = abs(pool.E * pool.two_pi_i ** 3 + 40 * pool.zeta[3])
    rec.check("constants.E", "E = -40 zeta(3)/(2 pi i)^3 and C = 5/12", e_res, started=t0,
              passed=e_res <= s.tol and pool.C == Fraction(5, 12), details={"E": pool.E, "C": str(pool.C)})
    t0 = time.perf_counter()
    from .coeff import loggamma_coeffs

    c = loggamma_coeffs(pool.K, pool)
    lg = max_magnitude(abs(c[k - 1] - ctx.polygamma(k - 1, 1) / ctx.factorial(k)) for k in range(1, pool.K + 1))
    rec.check("constants.loggamma_coefficients", "log Gamma(1+x) Taylor coefficients against polygamma values", lg, started=t0)


def suite_series(rec):
    N = rec.session.config.order
    t0 = time.perf_counter()
    f = TruncSeries([Fraction(1), Fraction(2), Fraction(-1, 3)] + [Fraction(k, k + 1) for k in range(3, N + 1)], "x")
    g = f.log().exp()
    rec.check("series.exp_log_roundtrip", "exp(log f) = f over the rationals", _exact_max([g - f]), exact=True, started=t0)
    t0 = time.perf_counter()
    inv = f * f.inverse() - TruncSeries.constant(1, N, "x")
    rec.check("series.inverse_multiply_back", "f * f^-1 = 1 over the rationals", _exact_max([inv]), exact=True, started=t0)
    t0 = time.perf_counter()
    from .ifunctions import cy_frobenius_basis

    r = cy_frobenius_basis(N, 3)
    a, b = r[1], r[2]
    deriv = (a * b).D() - (a.D() * b + a * b.D())
    rec.check("series.log_derivation_rule", "D(fg) = D(f) g + f D(g) with D(ell) = 1", _exact_max([deriv]), exact=True, started=t0)
    t0 = time.perf_counter()
    P = antidiagonal([Fraction(5)] * 4)
    A = LaurentMatrix.from_entries(4, {(0, 1): {1: Fraction(2)}, (2, 0): {-1: Fraction(1, 3)}, (3, 3): {0: Fraction(7)}, (1, 2): {2: Fraction(-1)}})
    B = LaurentMatrix.from_entries(4, {(1, 0): {0: Fraction(5)}, (0, 3): {1: Fraction(1, 2)}, (2, 2): {-1: Fraction(3)}})
    inv_res = A.adjoint(P).adjoint(P).deviation(A)
    anti = (A * B).adjoint(P).deviation(B.adjoint(P) * A.adjoint(P))
    rec.check("series.adjoint_involution", "(M*)* = M and (AB)* = B* A* for the pairing adjoint",
              max(Fraction(inv_res), Fraction(anti)), exact=True, started=t0)


def suite_pf(rec):
    cfg = rec.session.config
    N = cfg.order
    upto = N - 5
    t0 = time.perf_counter()
    icy = build_icy(N, twisted=True, mu_cap=cfg.mu_cap)
    res = [r.truncate(upto) for r in pf_apply(CY_PF, icy)]
    rec.check("pf.cy_twisted", "Picard-Fuchs operator annihilates the twisted CY I-function", _exact_max(res), exact=True, started=t0,
              details={"components": icy.n_components})
    t0 = time.perf_counter()
    ilg = build_ilg(N, twisted=True, mu_cap=cfg.mu_cap)
    res = [r.truncate(upto) for r in pf_apply(LG_PF, ilg)]
    rec.check("pf.lg_twisted", "Picard-Fuchs operator annihilates t I^LG (twisted)", _exact_max(res), exact=True, started=t0,
              details={"components": ilg.n_components})
    t0 = time.perf_counter()
    res = [r.truncate(upto) for r in pf_apply(CY_PF, build_icy(N), mu_on=False)]
    res += [r.truncate(upto) for r in pf_apply(LG_PF, build_ilg(N), mu_on=False)]
    rec.check("pf.untwisted", "the mu = 0 operators annihilate the untwisted I-functions", _exact_max(res), exact=True, started=t0)
    t0 = time.perf_counter()
    verb = _exact_max([r.truncate(upto) for r in pf_apply(PFOperator(LG, "verbatim"), ilg)])
    rec.check("pf.lg_repeated_root_form_rejected", "the (theta - 1)^5 reading of the LG operator does not annihilate t I^LG",
              verb, exact=True, passed=verb != 0, started=t0)
    t0 = time.perf_counter()
    I0 = build_icy(3).I0.part(0).coeffs
    I1 = build_icy(3).I1
    ok = list(I0[:3]) == [1, 120, 113400] and I1.part(0)[1] == 770
    rec.check("pf.cy_known_coefficients", "I_0 = 1 + 120 q + 113400 q^2 + ..., [q](I_1 - I_0 log q) = 770", 0 if ok else 1,
              exact=True, started=t0, details={"I0": [str(c) for c in I0[:4]]})
    t0 = time.perf_counter()
    tau = mirror_map(build_ilg(max(N, 6)))
    ok = tau[1] == 1 and all(tau[k] == 0 for k in (0, 2, 3, 4, 5)) and tau[6] == Fraction(13, 1125000)
    rec.check("pf.lg_mirror_map", "tau^LG = t + 13/1125000 t^6 + O(t^11)", 0 if ok else 1, exact=True, started=t0)


def suite_u_matrix(rec):
    s = rec.session
    pool = s.pool
    t0 = time.perf_counter()
    U = s.U4
    worst = max_magnitude(_rel(U.u[r][k], displayed_u_entry(pool, r, k)) for r in range(4) for k in range(4))
    rec.check("u.displayed_entries", "all 16 entries of U(-z) against the closed forms with C and E", worst, started=t0)
    t0 = time.perf_counter()
    rec.check("u.symplectic", "U(z) U(-z)* = 1", symplectic_residual(U), started=t0)
    t0 = time.perf_counter()
    rec.check("u.band_support", "entry (r, m) of U(-z) is a multiple of z^(m-r)", U.support_residual(), started=t0)
    t0 = time.perf_counter()
    B = s.continuation[0]
    cf = max_magnitude(_rel(B.b[i][j], closed_form_b(pool, i, j)) for i in range(2) for j in range(4))
    rec.check("u.b_closed_form", "b_ij read off U(z)(t I^LG) against the closed form, rows 0 and 1", cf, started=t0)
    t0 = time.perf_counter()
    bu = max_magnitude(abs(B.b[i][j] - s.U5.u[i][j]) for i in range(5) for j in range(5))
    rec.check("u.b_equals_u", "b agrees with the scalar matrix of U(-z) (5 x 5, lambda -> 0)", bu, started=t0,
              details={"leakage": B.leakage})


def suite_birkhoff(rec):
    s = rec.session
    pool = s.pool
    F = s.factors
    t0 = time.perf_counter()
    rec.check("birkhoff.reassembly", "U_- U_0 U_+ = U", bk.reassembly_residual(F), started=t0)
    t0 = time.perf_counter()
    rec.check("birkhoff.shapes", "U_- = 1 + O(1/z), U_0 diagonal, U_+ = 1 + O(z), both triangular", bk.triangularity_residual(F), started=t0)
    t0 = time.perf_counter()
    sym = bk.factor_symplectic_residuals(F)
    rec.check("birkhoff.factor_symplectic", "S, R and U_0 are symplectic", max_magnitude(sym.values()), started=t0, details=sym)
    t0 = time.perf_counter()
    SU = F.s_times_u_minus_z()
    worst = 0
    for i in range(4):
        for j in range(4):
            got = SU.coeff(j - i)[i][j] if (j - i) in SU.terms else 0
            want = bk.displayed_s_u_entry(pool, i, j)
            worst = max_magnitude((worst, abs(got - want) / (abs(want) if j >= i else 1)))
    rec.check("birkhoff.s_u_displayed", "S(-z)U(-z) entrywise against the displayed upper-triangular matrix", worst, started=t0)
    t0 = time.perf_counter()
    for i, cid in ((0, "u_plus_01"), (1, "u_plus_12"), (2, "u_plus_23")):
        t0 = time.perf_counter()
        val = F.u_plus_entry(i, i + 1)
        rec.check(f"birkhoff.{cid}", f"(U_+)_{i}{i + 1} against its Gamma-function closed form",
                  _rel(val, bk.closed_form_u_plus(pool, i)), started=t0, details={"value": val})
    t0 = time.perf_counter()
    rec.check("birkhoff.u_plus_23_equals_01", "(U_+)_23 = (U_+)_01", abs(F.u_plus_entry(2, 3) - F.u_plus_entry(0, 1)), started=t0)

    t0 = time.perf_counter()
    W = bk.quad_form_W(F.S, 3)
    V = bk.quad_form_V(F.R, 3)
    rec.check("quad.divisibility", "S(w)*S(z) - 1 and 1 - R(-w)*R(-z) divisible by the sum of the variables",
              max_magnitude((W.remainder, V.remainder)), started=t0)
    t0 = time.perf_counter()
    rec.check("quad.symmetry", "W_kl* = W_lk and V_kl* = V_lk", max_magnitude((W.symmetry_residual(), V.symmetry_residual())), started=t0)
    t0 = time.perf_counter()
    S1 = F.S.coeff(-1)
    R1 = F.R.coeff(1)
    d = max_magnitude((
        bk.mat_max_abs(tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(W.get(0, 0), S1))),
        bk.mat_max_abs(tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(V.get(0, 0), R1))),
    ))
    rec.check("quad.first_order", "W_00 = S_1 and V_00 = R_1", d, started=t0)
    t0 = time.perf_counter()
    one = LaurentMatrix.identity(4)
    W1, V1 = bk.quad_form_W(one), bk.quad_form_V(one)
    empty = not W1.entries and not V1.entries and W1.remainder == 0 and V1.remainder == 0
    rec.check("quad.degenerate", "S = 1 and R = 1 give W = V = 0", 0 if empty else 1, exact=True, started=t0)


def suite_tower(rec):
    s = rec.session
    cfg = s.config
    for side in (CY, LG):
        t0 = time.perf_counter()
        tw = s.tower(side)
        res = tower_identity_residuals(tw)
        keys = sorted(res)
        rec.check(f"tower.{side}_identities",
                  "prod I_pp = L^5, I_{5+p,5+p} = mu I_pp, I_pp = I_{4-p,4-p} over Q[mu]",
                  _exact_max(list(res.values())), exact=True, started=t0, details={"identities": keys, "rows": tw.P})
        t0 = time.perf_counter()
        pc = psi_checks(psi_and_delta(tw, s.pool), s.pool)
        rec.check(f"tower.{side}_psi", "Psi eta^-1 Psi^T = 1, Psi Psi^-1 = 1, c_2 c_1 = 1, Psi_a0^2 Delta_a = 1, Delta ratios",
                  max_magnitude(pc.values()), started=t0, details=pc)
    t0 = time.perf_counter()
    cf = r1_diag_potential(s.tower(CY), s.pool)
    val = cf.r1_scaled[0]
    rec.check("tower.cy_r1_at_zero", "5 lambda xi^a (R_1^CY)_aa at q = 0 equals -3/4", abs(val + s.pool.ctx.mpf(3) / 4),
              started=t0, details={"value": val})


def suite_continuation(rec):
    s = rec.session
    pool, ctx = s.pool, s.pool.ctx
    B, cont, lg_tower = s.continuation
    t0 = time.perf_counter()
    rel = _rel(cont.components[0][1], B.b[0][0] / 5)
    rec.check("continuation.leading_coefficient", "I~_0 = (b_00/5) t (1 + O(t))", rel, started=t0)
    t0 = time.perf_counter()
    rec.check("continuation.product_identity", "prod I~_pp = L~^5 with L~ = -(t/5) L^LG", continued_identity_residuals(cont),
              started=t0, details={"beta": "-1"})
    t0 = time.perf_counter()
    comps = [c.strip(1) for c in cont.components]
    res = pf_apply(LG_PF, comps, mu_on=False)
    scale = max_magnitude(max_magnitude(abs(x) for x in c.coeffs) for c in comps)
    rec.check("continuation.pf_in_t", "I~ is annihilated by the CY operator written in t",
              max_magnitude(r.max_abs() for r in res) / scale, started=t0)
    t0 = time.perf_counter()
    upto = min(12, s.config.order)
    mz = m_zero_check(lg_tower, cont, pool, upto)
    rec.check("continuation.m_matrix_linear", "-(Psi~^CY)^-1 Psi^LG = diag((-1)^m 5^(m+1) t^-(m+1) prod I~_jj/I_jj)",
              max_magnitude((mz["diagonal"], mz["off_diagonal"])), order=mz["upto"], started=t0,
              details={"diagonal": mz["diagonal"], "off_diagonal": mz["off_diagonal"]})

    t0 = time.perf_counter()
    F = s.factors
    X = bk.r1_gamma_constant(pool)
    r1 = continued_canonical_form(cont).r1_scaled[0]
    rec.check("continuation.r1_gamma_constant", "5 lambda xi^a (R~_1^CY)_aa at t = 0 equals the Gamma expression",
              _rel(r1, X), started=t0, details={"value": r1})
    t0 = time.perf_counter()
    trace = F.u_plus_entry(0, 1) + F.u_plus_entry(1, 2) + F.u_plus_entry(2, 3)
    three_quarters = (r1 + ctx.mpf(3) / 4) - trace
    rec.check("continuation.trace_shift", "sum_a lambda xi^a (R_1^LG underlined)_aa at t = 0 equals 3/4 "
              "((R~_1 + 3/4) minus tr Lambda (U_+)_1)", abs(three_quarters - ctx.mpf(3) / 4), started=t0,
              details={"value": three_quarters, "trace_minus_gamma_expression": trace - X})

    # numerical transport
    t0 = time.perf_counter()
    T = s.transport
    est = T.error_estimate
    closed = max_magnitude(abs(T.b[i][j] - closed_form_b(pool, i, j)) for i in range(2) for j in range(4))
    rec.check("continuation.transport_closed_form", "numeric transport: b_0j, b_1j against the closed forms",
              closed, tolerance=ctx.mpf(TRANSPORT_TOLERANCE.numerator) / TRANSPORT_TOLERANCE.denominator, started=t0,
              details={"steps": T.steps, "taylor_order": T.taylor_order, "error_estimate": est,
                       "t_end": T.t_end, "log_q_start": T.ell_start})
    t0 = time.perf_counter()
    vs_u = max_magnitude(abs(T.b[i][j] - B.b[i][j]) for i in range(5) for j in range(5))
    rec.check("continuation.transport_vs_u", "numeric transport against the U-extracted b, all rows, within the error estimate",
              vs_u, tolerance=est, started=t0)
    t0 = time.perf_counter()
    half = pf_transport(T.path, T.taylor_order, pool, step_scale=0.5)
    diff = max_magnitude(abs(a - b) for ra, rb in zip(T.b, half.b) for a, b in zip(ra, rb))
    rec.check("continuation.step_halving", "halving every step changes b by less than the error estimate",
              diff, tolerance=est, started=t0, details={"steps": half.steps})
    t0 = time.perf_counter()
    back, _ = propagate_basis(tuple(reversed(T.path)), T.taylor_order, pool)
    rev = ctx.mnorm(back * T.propagator - ctx.eye(5), 1)
    rec.check("continuation.path_reversal", "transport(P) transport(reverse P) = 1 within 10x the error estimate",
              rev, tolerance=10 * est, started=t0)
    t0 = time.perf_counter()
    loop = polygon_loop(ctx.mpf(1) / 1000, ctx.mpf(1) / 10000, 8, ctx)
    P, _ = propagate_basis(loop, T.taylor_order, pool)
    rec.check("continuation.trivial_loop", "a small loop enclosing no singular point has trivial monodromy",
              ctx.mnorm(P - ctx.eye(5), 1), tolerance=est, started=t0)
    t0 = time.perf_counter()
    loop0 = polygon_loop(ctx.mpf(0), ctx.mpf(1) / 10000, 8, ctx)
    P0, _ = propagate_basis(loop0, T.taylor_order, pool)
    th = cy_theta_vectors(loop0[0], ctx.log(loop0[0]), pool)
    v0 = P0 * ctx.matrix(th[0])
    v1 = P0 * ctx.matrix(th[1])
    d0 = max_magnitude(abs(v0[k] - th[0][k]) for k in range(5))
    d1 = max_magnitude(abs(v1[k] - th[1][k] - pool.two_pi_i * th[0][k]) for k in range(5))
    rec.check("continuation.loop_around_zero", "around q = 0: I_0 returns to itself, I_1 picks up 2 pi i I_0",
              max_magnitude((d0, d1)), tolerance=est, started=t0, details={"I0": d0, "I1": d1})


def suite_genus_one(rec):
    s = rec.session
    pool, ctx = s.pool, s.pool.ctx
    N = s.config.order
    for side in (CY, LG):
        t0 = time.perf_counter()
        tw = build_tower(side, P=4, order=N + 6, mu_cap=0)
        a = f1_r1_route(tw, pool)
        b = f1_closed_form_deriv(side, N + 6).map(pool.num)
        n = min(a.order, b.order, N)
        r = pool.num(SIDE_RADIUS[side])
        d = (a.truncate(n) - b.truncate(n)).max_abs(radius=r) / b.truncate(n).max_abs(radius=r)
        rec.check(f"genus_one.routes_{side}", "closed-form dF_1 against the R_1 decomposition route", d, order=n, started=t0)
    t0 = time.perf_counter()
    lg = f1_closed_form_deriv(LG, N)
    cy = f1_closed_form_deriv(CY, N)
    ok = all(lg[k] == 0 for k in range(4)) and cy[0] == Fraction(-25, 12)
    rec.check("genus_one.closed_form_heads", "dF_1^LG/dt = O(t^4); (q d/dq) F_1^CY = -25/12 + O(q)", 0 if ok else 1,
              exact=True, started=t0)

    t0 = time.perf_counter()
    B, cont, lg_tower = s.continuation
    forms = genus_one_forms(lg_tower, cont, cont, pool, N - 5)
    rec.check("genus_one.main", "dF_1^C(tau^C) = dF~_1^CY(tau^C) coefficientwise", forms.max_residual, order=forms.upto,
              started=t0, details={"per_order": [format_number(x, 3) for x in forms.per_order]})
    base = max_magnitude((forms.max_residual, ctx.mpf(2) ** (-2 * s.config.precision)))

    t0 = time.perf_counter()
    pert = genus_one_forms(lg_tower, build_continued_cy(perturb_b(B.b, 0, 0, ctx.mpf(10) ** -6),
                           lg_frobenius_basis(cont.order, 4), cont.order, pool), cont, pool, N - 5)
    ratio = pert.max_residual / base
    rec.check("genus_one.control_b00", "b_00 + 1e-6 must break the identity by at least 10 orders of magnitude",
              pert.max_residual, passed=pert.max_residual > s.tol and ratio >= CONTROL_MARGIN, started=t0,
              details={"ratio_to_baseline": ratio})
    t0 = time.perf_counter()
    flips = {}
    for r in range(4):
        for m in range(4):
            Bx = extract_b_matrix(flip_u_entry(s.U5, r, m), build_ilg(cont.order, twisted=True, mu_cap=0))
            lhs = build_continued_cy(Bx.b, lg_frobenius_basis(cont.order, 4), cont.order, pool)
            flips[(r, m)] = genus_one_forms(lg_tower, lhs, cont, pool, N - 5).max_residual
    low = min(flips[(r, m)] for r in range(2) for m in range(4))
    rec.check("genus_one.control_u_flip", "any sign flip in rows 0-1 of U must break the identity by at least 10 orders",
              low, passed=low > s.tol and low / base >= CONTROL_MARGIN, started=t0,
              details={"smallest_row01": low,
                       "largest_row23": max_magnitude(flips[(r, m)] for r in (2, 3) for m in range(4))})
    t0 = time.perf_counter()
    rec.check("genus_one.genus_zero", "tau^C = I~_1/I~_0 from b and from U(z) applied to t I^LG",
              genus_zero_consistency(cont, B, pool, N), started=t0)
    t0 = time.perf_counter()
    other = build_tower(LG, P=4, order=cont.order, mu_cap=1)
    a = loop_contribution(lg_tower, cont, pool)
    b = loop_contribution(other, cont, pool)
    n = min(a.order, b.order)
    rec.check("genus_one.loop_mu_cap_independent", "the loop term at mu = 0 does not depend on the formal mu-cap",
              (a.truncate(n) - b.truncate(n)).max_abs(), started=t0)
    t0 = time.perf_counter()
    fake = SimpleNamespace(components=(TruncSeries((0,) + tuple(c / 5 for c in rational_part(lg_tower.diag(0)).map(pool.num).coeffs), "t"),))
    lg_I0 = rational_part(lg_tower.diag(0)).map(pool.num)
    v = vertex_contribution(forms.dF_lg, fake, lg_I0)
    n = min(v.order, forms.dF_lg.order)
    rec.check("genus_one.vertex_identity_continuation", "with I~_0 = (t/5) I_0^LG the vertex term is dF_1^LG",
              (v.truncate(n) - forms.dF_lg.truncate(n)).max_abs(), started=t0)


SUITE_FUNCTIONS = {
    "constants": suite_constants,
    "series": suite_series,
    "pf": suite_pf,
    "u-matrix": suite_u_matrix,
    "birkhoff": suite_birkhoff,
    "tower": suite_tower,
    "continuation": suite_continuation,
    "genus-one": suite_genus_one,
}


def run_suite(config):
    config.validate()
    started = time.perf_counter()
    session = Session(config)
    meta = {
        "schema": SCHEMA_VERSION,
        "order": config.order,
        "precision": config.precision,
        "tolerance": format_number(session.tol),
        "mu_cap": config.mu_cap,
        "suites": [s for s in SUITES if s in config.suites],
    }
    if "continuation" in config.suites:
        T = session.transport
        meta["path"] = [format_number(p, 12) for p in T.path]
        meta["branch"] = {"log_q_start": format_number(T.ell_start, 20), "t_end": format_number(T.t_end, 20),
                          "L_branch_constant": "-1"}
    report = VerificationReport(meta)
    rec = Recorder(report, session)
    for name in SUITES:
        if name in config.suites:
            SUITE_FUNCTIONS[name](rec)
    report.meta["wall_time"] = round(time.perf_counter() - started, 3)
    report.meta["passed"] = report.passed
    return report
