"""Expression language: parse/print/lower."""
import pytest

from ncphase.errors import ExprLoweringError, ExprSyntaxError
from ncphase.exprlang import ExprContext, lower, parse, to_text
from ncphase.params import ParamPoly
from ncphase.realizations import catalog_get
from ncphase.scalars import GaussScalar
from ncphase.series import expand_fn, dot, identity_vector, const
from ncphase.star import composition_law

CORPUS = [
    "eta(mu,nu)",
    "eta(mu,nu) + l^2*p[mu]*p[nu]",
    "eta(mu,nu)*(1 + dot(a,p))",
    "eta(mu,nu) - a[nu]*p[mu]",
    "eta(mu,nu)*(1 + dot(a,p)) - a[mu]*p[nu]",
    "eta(mu,nu)*sqrt1p(-l^2*dot(p,p)) + l*sum(j,epsilon(nu,mu,j)*p[j])",
    "k[mu] + q[mu]*(1 - dot(a,k))",
    "k[mu]*(1 + dot(a,q)) + q[mu]",
    "k[mu]*(1 + dot(a,q)) + q[mu]"
    " - a[mu]*(dot(k,q) + 1/2*dot(a,q)*dot(k,k))/(1 + dot(a,k))",
    "(k[mu] - l^2*dot(k,q)*k[mu]/(1 + sqrt1p(l^2*dot(k,k)))"
    " + sqrt1p(l^2*dot(k,k))*q[mu])/(1 - l^2*dot(k,q))",
    "k[mu]*sqrt1p(-l^2*dot(q,q)) + sqrt1p(-l^2*dot(k,k))*q[mu]"
    " - l*sum(j,sum(m,epsilon(mu,j,m)*k[j]*q[m]))",
    "inv1p(dot(a,p))",
    "exp(i*dot(a,p))",
]


def _ctx(name="kappa-right", dim=3, order=5, banks=("p",)):
    real = catalog_get(name, dim=dim, order=order)
    sp = real.space
    scalars, vectors = {}, {}
    if "l" in sp.params.names:
        scalars["l"] = ParamPoly.symbol(sp.params, "l")
    if "a0" in sp.params.names:
        vectors["a"] = [
            ParamPoly.symbol(sp.params, "a%d" % j) for j in range(sp.dim)
        ]
    return real, ExprContext(sp, banks, order, scalars=scalars, vectors=vectors)


def test_print_parse_fixpoint_corpus():
    for src in CORPUS:
        t = parse(src)
        assert parse(to_text(t)) == t, src


def test_print_parse_fixpoint_constructed():
    cases = [
        ("sub", ("sym", "l"), ("add", ("num", 1), ("num", 2))),
        ("neg", ("mul", ("sym", "l"), ("sym", "l"))),
        ("pow", ("add", ("num", 1), ("sym", "l")), -2),
        ("mul", ("sym", "l"), ("neg", ("sym", "l"))),
        ("div", ("num", 1), ("div", ("num", 2), ("num", 3))),
        ("sub", ("sub", ("num", 1), ("num", 2)), ("num", 3)),
    ]
    for t in cases:
        assert parse(to_text(t)) == t, to_text(t)


def test_syntax_error_positions():
    with pytest.raises(ExprSyntaxError) as e:
        parse("dot(a,")
    assert e.value.line == 1 and e.value.col == 7
    with pytest.raises(ExprSyntaxError):
        parse("1 +")
    with pytest.raises(ExprSyntaxError):
        parse("eta(mu nu)")
    with pytest.raises(ExprSyntaxError):
        parse("l ^ p")
    with pytest.raises(ExprSyntaxError):
        parse("2 @ 3")
    with pytest.raises(ExprSyntaxError) as e:
        parse("p[0]\n + eta(")
    assert e.value.line == 2


def test_arity_is_checked_at_parse():
    with pytest.raises(ExprSyntaxError):
        parse("eta(mu)")
    with pytest.raises(ExprSyntaxError):
        parse("epsilon(0,1)")
    with pytest.raises(ExprSyntaxError):
        parse("exp(1,2)")


def test_lowering_errors():
    _, ctx = _ctx()
    with pytest.raises(ExprLoweringError):
        lower(parse("w"), ctx)
    with pytest.raises(ExprLoweringError):
        lower(parse("p[mu]"), ctx)  # mu unbound
    with pytest.raises(ExprLoweringError):
        lower(parse("a"), ctx)  # vector without index
    with pytest.raises(ExprLoweringError):
        lower(parse("p[7]"), ctx)
    with pytest.raises(ExprLoweringError):
        lower(parse("dot(a,w)"), ctx)
    real, ctx4 = _ctx(dim=4)
    with pytest.raises(ExprLoweringError):
        lower(parse("epsilon(0,1,2)"), ctx4)


def test_division_constant_term_rule():
    _, ctx = _ctx()
    with pytest.raises(ExprLoweringError):
        lower(parse("1/dot(a,p)"), ctx)
    # parameter content in the constant term is rejected too
    with pytest.raises(ExprLoweringError):
        lower(parse("1/(dot(a,a) + dot(a,p))"), ctx)
    got = lower(parse("1/(1 - dot(a,p))"), ctx)
    want = lower(parse("inv1p(-dot(a,p))"), ctx)
    assert (got - want).truncate(5).is_zero()


def test_geometric_series_example():
    real, ctx = _ctx(order=4)
    sp = ctx.space
    got = lower(parse("inv1p(dot(a,p))"), ctx)
    avec = [const(sp, ("p",), v) for v in ctx.vectors["a"]]
    u = dot(sp, avec, identity_vector(sp, ("p",), "p"))
    assert (got - expand_fn("inv1p", u, 4)).truncate(4).is_zero()


def test_lower_is_homomorphic():
    _, ctx = _ctx()
    ctx = ctx.bind(mu=1)
    e1 = parse("1 + dot(a,p)")
    e2 = parse("p[mu]*p[mu]")
    both = ("add", e1, e2)
    assert lower(both, ctx) == lower(e1, ctx) + lower(e2, ctx)
    prod = ("mul", e1, e2)
    assert (lower(prod, ctx) - lower(e1, ctx) * lower(e2, ctx)).is_zero()


def test_imaginary_and_rational_literals():
    _, ctx = _ctx()
    sp = ctx.space
    got = lower(parse("i*i + 3/2"), ctx)
    from fractions import Fraction

    assert got == const(sp, ("p",), GaussScalar(Fraction(1, 2)))


def test_negative_power_is_division():
    _, ctx = _ctx()
    got = lower(parse("(1 + dot(a,p))^-1"), ctx)
    want = lower(parse("inv1p(dot(a,p))"), ctx)
    assert (got - want).truncate(5).is_zero()


def test_sum_binds_and_shadows():
    _, ctx = _ctx()
    # the ambient binding of j must not leak into the sum
    got = lower(parse("sum(j,p[j]*a[j])"), ctx.bind(j=2))
    want = lower(parse("p[0]*a[0] + p[1]*a[1] + p[2]*a[2]"), ctx)
    assert (got - want).is_zero()
    # dot() weights the plain sum by the metric signs
    weighted = lower(parse("sum(j,eta(j,j)*p[j]*a[j])"), ctx)
    assert (weighted - lower(parse("dot(a,p)"), ctx)).is_zero()


def test_eta_values():
    real, ctx = _ctx(dim=3)
    sp = ctx.space
    assert lower(parse("eta(0,0)"), ctx) == const(sp, ("p",), sp.metric[0])
    assert lower(parse("eta(0,1)"), ctx).is_zero()


def test_snyder_phi_matches_catalog():
    real, ctx = _ctx("snyder", dim=3, order=4)
    t = parse("eta(mu,nu) + l^2*p[mu]*p[nu]")
    for mu in range(3):
        for nu in range(3):
            got = lower(t, ctx.bind(mu=mu, nu=nu))
            assert (got - real.phi[mu][nu]).truncate(4).is_zero()


def test_su2_composition_law_matches_closed_form():
    real, _ = _ctx("su2", dim=3, order=5)
    sp = real.space
    law = composition_law(real)
    ctx = ExprContext(
        sp, ("k", "q"), 5, scalars={"l": ParamPoly.symbol(sp.params, "l")}
    )
    t = parse(CORPUS[10])
    for mu in range(3):
        got = lower(t, ctx.bind(mu=mu))
        assert (got - law.D[mu]).truncate(5).is_zero()


def test_kappa_right_composition_law_matches_closed_form():
    real, _ = _ctx("kappa-right", dim=3, order=5)
    sp = real.space
    law = composition_law(real)
    avec = [ParamPoly.symbol(sp.params, "a%d" % j) for j in range(3)]
    ctx = ExprContext(sp, ("k", "q"), 5, vectors={"a": avec})
    t = parse(CORPUS[6])
    for mu in range(3):
        assert (lower(t, ctx.bind(mu=mu)) - law.D[mu]).truncate(5).is_zero()
