"""Flow solutions, composition laws, star products, associativity.

Closed-form oracles: the exact right/left covariant composition laws,
the Snyder and rotation-invariant three-dimensional composition laws,
and the matrix-exponential solution for momentum-linear models.
"""
from fractions import Fraction

import pytest

from ncphase.params import ParamPoly, ParamTable
from ncphase.realizations import catalog_get, epsilon
from ncphase.scalars import GaussScalar, I, ONE
from ncphase.series import (
    INF,
    MomentumSeries,
    Space,
    dot,
    expand_fn,
    identity_vector,
    one,
    variable,
    zero,
)
from ncphase.star import (
    associativity_check,
    closed_form_linear,
    composition_law,
    flow_residual,
    solve_plane_wave_flow,
    star_monomial,
    star_polys,
    x_monomial,
)


def a_dot(space, banks, bank_name, syms):
    v = identity_vector(space, banks, bank_name)
    consts = [
        MomentumSeries(space, banks, {(0,) * (space.dim * len(banks)): s}, INF)
        if not s.is_zero()
        else zero(space, banks)
        for s in syms
    ]
    return dot(space, consts, v)


def a_syms(space):
    return [ParamPoly.symbol(space.params, "a%d" % i) for i in range(space.dim)]


def test_undeformed_composition_is_addition():
    claw = composition_law(catalog_get("undeformed", dim=2, order=4))
    sp = claw.space
    kv = identity_vector(sp, ("k", "q"), "k")
    qv = identity_vector(sp, ("k", "q"), "q")
    for mu in range(2):
        assert (claw.D[mu] - (kv[mu] + qv[mu]).truncate(4)).is_zero()
    assert claw.G.is_zero()


def test_kappa_right_closed_forms():
    order = 6
    r = catalog_get("kappa-right", dim=2, order=order)
    sp = r.space
    a = a_syms(sp)
    flow = solve_plane_wave_flow(r, order)
    banks = ("k", "q")
    kv = identity_vector(sp, banks, "k")
    qv = identity_vector(sp, banks, "q")
    ak = a_dot(sp, banks, "k", a)
    # J = k (1 - e^{-a.k})/(a.k) + q e^{-a.k}
    ratio = expand_fn("expm1_over", -ak.truncate(order), order=order)
    eak = expand_fn("exp", -ak.truncate(order), order=order)
    for mu in range(2):
        want = (kv[mu] * ratio + qv[mu] * eak).truncate(order)
        assert (flow.J[mu] - want).is_zero()
    claw = composition_law(r, order, flow=flow)
    # D = k + q (1 - a.k), exact
    for mu in range(2):
        want = (kv[mu] + qv[mu] - qv[mu] * ak).truncate(order)
        assert (claw.D[mu] - want).is_zero()
    assert claw.G.is_zero()


def test_kappa_left_closed_form():
    order = 5
    r = catalog_get("kappa-left", dim=2, order=order)
    sp = r.space
    a = a_syms(sp)
    claw = composition_law(r, order)
    banks = ("k", "q")
    kv = identity_vector(sp, banks, "k")
    qv = identity_vector(sp, banks, "q")
    aq = a_dot(sp, banks, "q", a)
    # D = k (1 + a.q) + q
    for mu in range(2):
        want = (kv[mu] + kv[mu] * aq + qv[mu]).truncate(order)
        assert (claw.D[mu] - want).is_zero()
    assert claw.G.is_zero()


@pytest.mark.parametrize("name", ["kappa-right", "kappa-left", "kappa-light"])
def test_flow_matches_matrix_exponential(name):
    order = 5
    r = catalog_get(name, dim=3, order=order)
    flow = solve_plane_wave_flow(r, order)
    closed = closed_form_linear(r.linear, order)
    for mu in range(3):
        assert (flow.J[mu] - closed.J[mu]).is_zero()


@pytest.mark.parametrize("name", ["snyder", "su2", "kappa-light"])
def test_flow_residual_vanishes(name):
    dim = 3 if name == "su2" else 2
    order = 5
    r = catalog_get(name, dim=dim, order=order + 1)
    flow = solve_plane_wave_flow(r, order)
    for res in flow_residual(r.with_order(order), flow):
        assert res.truncate(order).is_zero()


def test_snyder_composition_closed_form():
    order = 6
    r = catalog_get("snyder", dim=2, order=order)
    sp = r.space
    l2 = ParamPoly.symbol(sp.params, "l") * ParamPoly.symbol(sp.params, "l")
    claw = composition_law(r, order)
    banks = ("k", "q")
    kv = identity_vector(sp, banks, "k")
    qv = identity_vector(sp, banks, "q")
    k2 = dot(sp, kv, kv).scale(l2).truncate(order)
    kq = dot(sp, kv, qv).scale(l2).truncate(order)
    root = expand_fn("sqrt1p", k2, order=order)  # sqrt(1 + l^2 k.k)
    half = GaussScalar(Fraction(1, 2))
    denom_inv = expand_fn("inv1p", -kq, order=order)  # 1/(1 - l^2 k.q)
    # 1/(1 + sqrt(1+l^2 k.k)) = inv1p((root-1)/2)/2
    shifted = (root - one(sp, banks).truncate(order)).scale(half)
    inv_1plus_root = expand_fn("inv1p", shifted, order=order).scale(half)
    for mu in range(2):
        bracket = (
            kv[mu].truncate(order)
            - (kv[mu] * kq * inv_1plus_root).truncate(order)
            + (qv[mu] * root).truncate(order)
        )
        want = (bracket * denom_inv).truncate(order)
        assert (claw.D[mu] - want).is_zero(), "component %d" % mu
    assert claw.G.is_zero()


def test_su2_composition_closed_form():
    order = 6
    r = catalog_get("su2", order=order)
    sp = r.space
    l = ParamPoly.symbol(sp.params, "l")
    l2 = l * l
    claw = composition_law(r, order)
    banks = ("k", "q")
    kv = identity_vector(sp, banks, "k")
    qv = identity_vector(sp, banks, "q")
    k2 = dot(sp, kv, kv).scale(l2).truncate(order)
    q2 = dot(sp, qv, qv).scale(l2).truncate(order)
    rk = expand_fn("sqrt1p", -k2, order=order)  # sqrt(1 - l^2 k^2)
    rq = expand_fn("sqrt1p", -q2, order=order)
    for mu in range(3):
        cross = zero(sp, banks, order)
        for jj in range(3):
            for kk in range(3):
                e = epsilon(mu, jj, kk)
                if e:
                    cross = cross + (kv[jj] * qv[kk]).truncate(order).scale(
                        GaussScalar(e)
                    )
        # D = k sqrt(1-l^2 q^2) + q sqrt(1-l^2 k^2) - l k x q; the cross
        # sign pairs with the structure constants C[i][j][k] = 2 l eps(ijk)
        want = (
            (kv[mu] * rq).truncate(order)
            + (qv[mu] * rk).truncate(order)
            - cross.scale(l)
        )
        assert (claw.D[mu] - want).is_zero(), "component %d" % mu
    assert claw.G.is_zero()


@pytest.mark.parametrize(
    "name", ["undeformed", "kappa-right", "kappa-left", "kappa-light", "su2"]
)
def test_associativity_passes_for_closing_models(name):
    dim = 3 if name == "su2" else 2
    order = 4
    claw = composition_law(catalog_get(name, dim=dim, order=order))
    res = associativity_check(claw)
    assert res.ok, res.discrepancy


def test_associativity_fails_for_snyder():
    order = 4
    claw = composition_law(catalog_get("snyder", dim=2, order=order))
    res = associativity_check(claw)
    assert not res.ok
    assert res.discrepancy is not None
    assert "l^2" in res.discrepancy.monomial


def test_star_monomials_undeformed():
    claw = composition_law(catalog_get("undeformed", dim=2, order=4))
    got = star_monomial(claw, (1, 0), (1, 0))
    want = x_monomial(claw.space, (2, 0))
    assert got == want
    got2 = star_monomial(claw, (1, 1), (1, 0))
    want2 = x_monomial(claw.space, (2, 1))
    assert got2 == want2


def test_star_commutator_kappa_right():
    order = 4
    claw = composition_law(catalog_get("kappa-right", dim=2, order=order))
    sp = claw.space
    a = a_syms(sp)
    for mu in range(2):
        for nu in range(2):
            if mu == nu:
                continue
            em = tuple(1 if j == mu else 0 for j in range(2))
            en = tuple(1 if j == nu else 0 for j in range(2))
            got = star_monomial(claw, em, en) - star_monomial(claw, en, em)
            # x_mu * x_nu - x_nu * x_mu = i (a_mu x_nu - a_nu x_mu)
            want = x_monomial(sp, en, a[mu].scale(I)) - x_monomial(
                sp, em, a[nu].scale(I)
            )
            assert got == want


def test_star_associator_snyder():
    order = 6
    claw = composition_law(catalog_get("snyder", dim=2, order=order))
    sp = claw.space
    l2 = ParamPoly.symbol(sp.params, "l") * ParamPoly.symbol(sp.params, "l")
    x0 = x_monomial(sp, (1, 0))
    x1 = x_monomial(sp, (0, 1))
    xs = [x0, x1]
    eta = sp.metric
    half_l2 = l2.scale(GaussScalar(Fraction(1, 2)))
    for mu in range(2):
        for nu in range(2):
            for rho in range(2):
                lhs = star_polys(claw, star_polys(claw, xs[mu], xs[nu]), xs[rho])
                rhs = star_polys(claw, xs[mu], star_polys(claw, xs[nu], xs[rho]))
                got = lhs - rhs
                want = (
                    xs[nu].scale(half_l2.scale(GaussScalar(eta[mu])))
                    if mu == rho
                    else x_monomial(sp, (0, 0), ParamPoly.zero(sp.params))
                )
                if nu == rho:
                    want = want - xs[mu].scale(half_l2.scale(GaussScalar(eta[nu])))
                assert got == want, (mu, nu, rho)


def test_star_requires_enough_order():
    from ncphase.errors import CompositionError

    claw = composition_law(catalog_get("snyder", dim=2, order=2))
    with pytest.raises(CompositionError):
        star_monomial(claw, (2, 0), (1, 0))
