from fractions import Fraction
from types import SimpleNamespace

import pytest

from lgcy.continuation import build_continued_cy
from lgcy.genus_one import (
    continuation_inputs,
    f1_closed_form_deriv,
    f1_r1_route,
    flip_u_entry,
    genus_one_check,
    genus_one_forms,
    genus_zero_consistency,
    loop_contribution,
    loop_from_potentials,
    perturb_b,
    vertex_contribution,
)
from lgcy.ifunctions import CY, LG, build_ilg, lg_frobenius_basis
from lgcy.series import TruncSeries
from lgcy.suites import SIDE_RADIUS
from lgcy.tower import build_tower, r1_diag_potential, rational_part
from lgcy.umatrix import extract_b_matrix

N = 12


@pytest.fixture(scope="module")
def inputs(pool, U5):
    return continuation_inputs(N, pool, u=U5)


@pytest.fixture(scope="module")
def forms(inputs, pool):
    B, cont, lg_tower = inputs
    return genus_one_forms(lg_tower, cont, cont, pool, N - 5)


def test_lg_potential_starts_at_t4():
    d = f1_closed_form_deriv(LG, 12)
    assert all(d[k] == 0 for k in range(4))
    assert d[4] != 0


def test_cy_potential_constant():
    assert f1_closed_form_deriv(CY, 8)[0] == Fraction(-25, 12)


@pytest.mark.parametrize("side", [CY, LG])
def test_r1_route_matches_closed_form(side, pool):
    tw = build_tower(side, P=4, order=N + 6, mu_cap=0)
    a = f1_r1_route(tw, pool)
    b = f1_closed_form_deriv(side, N + 6).map(pool.num)
    n = min(a.order, b.order, N)
    r = pool.num(SIDE_RADIUS[side])
    d = (a.truncate(n) - b.truncate(n)).max_abs(radius=r) / b.truncate(n).max_abs(radius=r)
    assert d < pool.tolerance()


def test_main_identity(forms, pool):
    assert forms.upto == N - 5
    assert forms.passed
    assert forms.max_residual < pool.tolerance()


def test_main_identity_higher_precision(pool320):
    out = genus_one_check(14, pool320)
    assert out.upto == 9
    assert out.max_residual < pool320.tolerance()


def test_b00_perturbation_breaks(inputs, forms, pool):
    B, cont, lg_tower = inputs
    b = perturb_b(B.b, 0, 0, pool.ctx.mpf(10) ** -6)
    lhs = build_continued_cy(b, lg_frobenius_basis(cont.order, 4), cont.order, pool)
    pert = genus_one_forms(lg_tower, lhs, cont, pool, N - 5)
    assert pert.max_residual > 1e-8
    assert pert.max_residual > 1e10 * max(forms.max_residual, pool.ctx.mpf(2) ** -512)


def _flip(inputs, pool, U5, r, m):
    B, cont, lg_tower = inputs
    Bx = extract_b_matrix(flip_u_entry(U5, r, m), build_ilg(cont.order, twisted=True, mu_cap=0))
    lhs = build_continued_cy(Bx.b, lg_frobenius_basis(cont.order, 4), cont.order, pool)
    return genus_one_forms(lg_tower, lhs, cont, pool, N - 5).max_residual


@pytest.mark.parametrize("r,m", [(0, 0), (0, 1), (0, 3), (1, 1), (1, 2)])
def test_u_flip_rows_01_break(inputs, pool, U5, r, m):
    assert _flip(inputs, pool, U5, r, m) > 1e-4


@pytest.mark.parametrize("r,m", [(2, 2), (3, 3)])
def test_u_flip_rows_23_invisible(inputs, pool, U5, r, m):
    # the check only sees I~_0 and I~_1, which come from rows 0 and 1
    assert _flip(inputs, pool, U5, r, m) < pool.tolerance()


def test_genus_zero(inputs, pool):
    B, cont, _ = inputs
    assert genus_zero_consistency(cont, B, pool, N) < pool.tolerance()


def test_vertex_with_trivial_continuation(forms, inputs, pool):
    _, _, lg_tower = inputs
    lg_I0 = rational_part(lg_tower.diag(0)).map(pool.num)
    fake = SimpleNamespace(components=(TruncSeries((0,) + tuple(c / 5 for c in lg_I0.coeffs), "t"),))
    v = vertex_contribution(forms.dF_lg, fake, lg_I0)
    n = min(v.order, forms.dF_lg.order)
    assert (v.truncate(n) - forms.dF_lg.truncate(n)).max_abs() < pool.tolerance()


def test_loop_vanishes_when_both_sides_lg(inputs, pool):
    _, _, lg_tower = inputs
    cf = r1_diag_potential(lg_tower, pool)
    assert loop_from_potentials(cf, cf).max_abs() == 0


def test_loop_independent_of_mu_cap(inputs, pool):
    _, cont, lg_tower = inputs
    other = build_tower(LG, P=4, order=cont.order, mu_cap=1)
    a = loop_contribution(lg_tower, cont, pool)
    b = loop_contribution(other, cont, pool)
    n = min(a.order, b.order)
    assert (a.truncate(n) - b.truncate(n)).max_abs() < pool.tolerance()


def test_order_guard(pool):
    with pytest.raises(ValueError):
        genus_one_check(7, pool)
