import json

import pytest

from lgcy.continuation import (
    build_continued_cy,
    continued_canonical_form,
    continued_identity_residuals,
    cy_theta_vectors,
    default_path,
    path_from_json,
    pf_transport,
    polygon_loop,
    propagate_basis,
    taylor_to_theta,
    theta_to_taylor,
)
from lgcy.ifunctions import LG_PF, build_ilg, lg_frobenius_basis, pf_apply
from lgcy.tower import build_tower, m_zero_check
from lgcy.umatrix import closed_form_b, extract_b_matrix


@pytest.fixture(scope="module")
def bmat(U5):
    return extract_b_matrix(U5, build_ilg(28, twisted=True, mu_cap=0))


@pytest.fixture(scope="module")
def cont(bmat, pool):
    return build_continued_cy(bmat.b, lg_frobenius_basis(28, 4), 20, pool)


@pytest.fixture(scope="module")
def transport(pool):
    return pf_transport(pool=pool)


def test_leading_coefficient(cont, bmat):
    assert cont.components[0][0] == 0
    assert abs(cont.components[0][1] - bmat.b[0][0] / 5) == 0


def test_product_identity_fixes_branch(cont, pool):
    assert continued_identity_residuals(cont) < pool.tolerance()


def test_wrong_branch_breaks_product(bmat, pool):
    other = build_continued_cy(bmat.b, lg_frobenius_basis(28, 4), 20, pool, beta=1)
    assert continued_identity_residuals(other) > 1e-3


def test_pf_in_t(cont, pool):
    comps = [c.strip(1) for c in cont.components]
    res = pf_apply(LG_PF, comps, mu_on=False)
    assert max(r.max_abs() for r in res) < pool.tolerance()


def test_m_matrix_linear(cont, pool):
    lg = build_tower("lg", P=4, order=20, mu_cap=0)
    out = m_zero_check(lg, cont, pool, upto=12)
    assert out["upto"] == 12
    assert out["diagonal"] < pool.tolerance()
    assert out["off_diagonal"] < pool.tolerance()
    m0 = out["formulas"][0]
    direct = cont.diag(0).strip(1) / lg.diag(0).map(pool.num).truncate(cont.diag(0).order - 1) * 5
    assert (m0.truncate(12) - direct.truncate(12)).max_abs() < pool.tolerance()


def test_r1_gamma_constant(cont, pool, factors):
    from lgcy.birkhoff import r1_gamma_constant

    r1 = continued_canonical_form(cont).r1_scaled[0]
    assert abs(r1 - r1_gamma_constant(pool)) < pool.tolerance()


def test_trace_difference_literal(cont, pool, factors):
    """Gamma expression minus the (U_+) trace, compared with 3/4 as stated.

    Expected to fail: the difference is 0, and the 3/4 only appears once the
    genus-zero constant shift is added (see the next test)."""
    from lgcy.birkhoff import r1_gamma_constant

    trace = factors.u_plus_entry(0, 1) + factors.u_plus_entry(1, 2) + factors.u_plus_entry(2, 3)
    assert abs(r1_gamma_constant(pool) - trace - pool.ctx.mpf(3) / 4) < pool.tolerance()


def test_trace_shift_statement(cont, pool, factors):
    """sum_a lambda xi^a (R_1^LG underlined)_aa(0) = (R~_1(0) + 3/4) - tr = 3/4."""
    trace = factors.u_plus_entry(0, 1) + factors.u_plus_entry(1, 2) + factors.u_plus_entry(2, 3)
    r1 = continued_canonical_form(cont).r1_scaled[0]
    assert abs((r1 + pool.ctx.mpf(3) / 4 - trace) - pool.ctx.mpf(3) / 4) < pool.tolerance()


# --- numeric transport --------------------------------------------------------------

def test_theta_taylor_roundtrip(pool):
    ctx = pool.ctx
    q = ctx.mpc("0.3", "0.1")
    th = [ctx.mpf(k + 1) for k in range(5)]
    back = taylor_to_theta(theta_to_taylor(th, q, ctx), q)
    assert max(abs(a - b) for a, b in zip(th, back)) < pool.tolerance()


def test_transport_rows_closed_form(transport, pool):
    for i in range(2):
        for j in range(4):
            assert abs(transport.b[i][j] - closed_form_b(pool, i, j)) < 1e-20


def test_transport_agrees_with_u(transport, bmat):
    worst = max(abs(transport.b[i][j] - bmat.b[i][j]) for i in range(5) for j in range(5))
    assert worst < 1e-20
    assert worst <= transport.error_estimate


def test_branch_recorded(transport, pool):
    assert abs(transport.t_end - 1) == 0
    assert abs(transport.ell_start - pool.ctx.log(pool.ctx.mpf(10) ** -5)) < pool.tolerance()


def test_path_reversal(transport, pool):
    ctx = pool.ctx
    back, _ = propagate_basis(tuple(reversed(transport.path)), transport.taylor_order, pool)
    assert ctx.mnorm(back * transport.propagator - ctx.eye(5), 1) < 10 * transport.error_estimate


def test_step_halving(transport, pool):
    half = pf_transport(transport.path, transport.taylor_order, pool, step_scale=0.5)
    assert half.steps > 1.5 * transport.steps
    diff = max(abs(a - b) for ra, rb in zip(transport.b, half.b) for a, b in zip(ra, rb))
    assert diff < transport.error_estimate


def test_trivial_loop(transport, pool):
    ctx = pool.ctx
    loop = polygon_loop(ctx.mpf(1) / 1000, ctx.mpf(1) / 10000, 8, ctx)
    P, _ = propagate_basis(loop, transport.taylor_order, pool)
    assert ctx.mnorm(P - ctx.eye(5), 1) < transport.error_estimate


def test_loop_around_zero(transport, pool):
    ctx = pool.ctx
    loop = polygon_loop(ctx.mpf(0), ctx.mpf(1) / 10000, 8, ctx)
    P, _ = propagate_basis(loop, transport.taylor_order, pool)
    th = cy_theta_vectors(loop[0], ctx.log(loop[0]), pool)
    v0 = P * ctx.matrix(th[0])
    v1 = P * ctx.matrix(th[1])
    assert max(abs(v0[k] - th[0][k]) for k in range(5)) < transport.error_estimate
    assert max(abs(v1[k] - th[1][k] - pool.two_pi_i * th[0][k]) for k in range(5)) < transport.error_estimate


def test_path_too_close_to_conifold(pool):
    ctx = pool.ctx
    c = ctx.mpf(1) / 3125
    with pytest.raises(ValueError):
        pf_transport((ctx.mpf(10) ** -5, c * ctx.mpc(1, ctx.mpf("0.05")), 2 * c, ctx.mpf(1)), 40, pool)


def test_endpoints_outside_disks(pool):
    ctx = pool.ctx
    with pytest.raises(ValueError):
        pf_transport((ctx.mpf(10) ** -3, ctx.mpf(1)), 40, pool)
    with pytest.raises(ValueError):
        pf_transport((ctx.mpf(10) ** -5, ctx.mpc(0, 1) / 3125, ctx.mpf(10) ** -3), 40, pool)


def test_path_from_json(pool):
    text = json.dumps({"waypoints": [1e-5, [0.00032, 0.00016], 1], "taylor_order": 60, "precision": 256})
    pts, order, prec = path_from_json(text, pool.ctx)
    assert len(pts) == 3 and order == 60 and prec == 256
    assert abs(pts[1] - pool.ctx.mpc("0.00032", "0.00016")) < pool.tolerance()


def test_default_path(pool):
    p = default_path(pool.ctx)
    assert p[0] == pool.ctx.mpf(10) ** -5 and p[-1] == 1
    assert abs(p[1] * 3125 - pool.ctx.mpc(1, 0.5)) < pool.tolerance()
