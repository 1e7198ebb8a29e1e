"""Catalog models and the closure/Jacobi checkers."""
from fractions import Fraction

import pytest

from ncphase.params import ParamPoly, ParamTable
from ncphase.realizations import (
    CATALOG_NAMES,
    LinearRealization,
    Realization,
    catalog_get,
    closure_check,
    coordinate_operators,
    deformed_commutators,
    epsilon,
    jacobi_check,
    lie_closure_check,
)
from ncphase.scalars import GaussScalar, I, ONE
from ncphase.series import Space, identity_vector, dot, variable, zero


def a_syms(space):
    return [ParamPoly.symbol(space.params, "a%d" % i) for i in range(space.dim)]


def test_catalog_names_and_flat_limits():
    for name in CATALOG_NAMES:
        dim = 3 if name == "su2" else 2
        r = catalog_get(name, dim=dim, order=3)
        assert r.name == name
        assert r.is_flat_limit()


def test_su2_requires_dim3():
    from ncphase.errors import ModelConfigError

    with pytest.raises(ModelConfigError):
        catalog_get("su2", dim=4)


def test_kappa_right_structure():
    r = catalog_get("kappa-right", dim=3, order=4)
    sp = r.space
    a = a_syms(sp)
    dc = deformed_commutators(r, order=4)
    assert dc.ok
    eta = sp.metric
    for mu in range(3):
        for nu in range(3):
            if mu == nu:
                continue
            assert dc.d[mu][nu].is_zero()
            for al in range(3):
                # C[mu][nu][al] = a_mu eta[nu][al] - a_nu eta[mu][al]
                want = ParamPoly.zero(sp.params)
                if nu == al:
                    want = want + a[mu].scale(GaussScalar(eta[nu]))
                if mu == al:
                    want = want - a[nu].scale(GaussScalar(eta[mu]))
                got = dc.C[mu][nu][al]
                assert got.constant_poly() == want
                assert all(sum(k) == 0 for k in got.terms)


def test_kappa_structure_matches_linear_constants():
    for name in ("kappa-right", "kappa-left", "kappa-light"):
        r = catalog_get(name, dim=3, order=4)
        dc = deformed_commutators(r, order=4)
        assert dc.ok
        cs = r.linear.structure_constants()
        for mu in range(3):
            for nu in range(3):
                for al in range(3):
                    got = dc.C[mu][nu][al] if mu != nu else None
                    if got is None:
                        continue
                    assert got.constant_poly() == cs[mu][nu][al]
                    assert all(sum(k) == 0 for k in got.terms)


def test_snyder_structure_series():
    r = catalog_get("snyder", dim=3, order=4)
    sp = r.space
    l2 = ParamPoly.symbol(sp.params, "l") * ParamPoly.symbol(sp.params, "l")
    dc = deformed_commutators(r, order=4)
    assert dc.ok
    p = identity_vector(sp, ("p",), "p")
    eta = sp.metric
    for mu in range(3):
        for nu in range(3):
            if mu == nu:
                continue
            assert dc.d[mu][nu].is_zero()
            for al in range(3):
                # C[mu][nu][al] = l^2 (eta[al][mu] p_nu - eta[al][nu] p_mu)
                want = zero(sp, ("p",))
                if al == mu:
                    want = want + p[nu].scale(l2).scale(GaussScalar(eta[mu]))
                if al == nu:
                    want = want - p[mu].scale(l2).scale(GaussScalar(eta[nu]))
                got = dc.C[mu][nu][al]
                assert (got - want.truncate(got.order)).is_zero()


def test_su2_structure_constants():
    r = catalog_get("su2", order=4)
    dc = deformed_commutators(r, order=4)
    assert dc.ok
    sp = r.space
    l = ParamPoly.symbol(sp.params, "l")
    two_l = l.scale(GaussScalar(2))
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            assert dc.d[i][j].is_zero()
            for k in range(3):
                want = two_l.scale(GaussScalar(epsilon(i, j, k)))
                got = dc.C[i][j][k]
                assert got.constant_poly() == want
                assert all(key == (0, 0, 0) for key in got.terms)


def test_closure_checks():
    for name in ("undeformed", "kappa-right", "kappa-left", "kappa-light", "su2"):
        dim = 3 if name == "su2" else 3
        res = closure_check(catalog_get(name, dim=dim, order=3), order=3)
        assert res.ok, "%s: %s" % (name, res.discrepancy)
    snyder = closure_check(catalog_get("snyder", dim=3, order=3), order=3)
    assert not snyder.ok
    assert snyder.discrepancy is not None
    assert "l^2" in snyder.discrepancy.monomial


def test_kappa_snyder_does_not_close_without_null_condition():
    res = closure_check(catalog_get("kappa-snyder", dim=3, order=3), order=3)
    assert not res.ok
    light = closure_check(catalog_get("kappa-light", dim=3, order=3), order=3)
    assert light.ok


def test_lie_closure_exact_condition():
    for name in ("kappa-right", "kappa-left", "kappa-light"):
        r = catalog_get(name, dim=4, order=2)
        assert lie_closure_check(r.linear).ok
    ks = catalog_get("kappa-snyder", dim=4, order=2)
    res = lie_closure_check(ks.linear)
    assert not res.ok
    assert res.discrepancy is not None


def test_lie_closure_rejects_generic_tensor():
    t = ParamTable.vector("c", 2, cap=4)
    sp = Space.lorentzian(2, t)
    c0 = ParamPoly.symbol(t, "c0")
    z = ParamPoly.zero(t)
    K = [[[z for _ in range(2)] for _ in range(2)] for _ in range(2)]
    # K[0][0][0] = c0 alone violates the quadratic condition
    K[0][0][0] = c0
    K[1][1][1] = c0
    K[0][1][1] = c0
    lin = LinearRealization(sp, "generic", K)
    assert not lie_closure_check(lin).ok


@pytest.mark.parametrize(
    "name", ["undeformed", "snyder", "su2", "kappa-right", "kappa-left", "kappa-light"]
)
def test_jacobi(name):
    dim = 3 if name == "su2" else 2
    r = catalog_get(name, dim=dim, order=3)
    res = jacobi_check(r, order=3)
    assert res.ok, res.discrepancy


def test_with_order_rebuilds():
    r = catalog_get("su2", order=3)
    assert r.order == 3
    r5 = r.with_order(5)
    assert r5.order >= 5
    # same parameter table, so series interoperate
    assert r5.space == r.space


def test_coordinate_operators_undeformed():
    r = catalog_get("undeformed", dim=2, order=3)
    ops = coordinate_operators(r)
    sp = r.space
    from ncphase.operators import Operator, commutator

    for mu in range(2):
        want = Operator.coordinate(sp, mu).scale(GaussScalar(sp.metric[mu] * sp.metric[mu]))
        assert (ops[mu] - Operator.coordinate(sp, mu)).is_zero()
    c = commutator(ops[0], ops[1])
    assert c.is_zero()
