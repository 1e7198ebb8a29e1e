"""Model config loading."""
from pathlib import Path

import pytest

from ncphase.errors import ModelConfigError
from ncphase.modelfile import build_realization, load_model, parse_model_text
from ncphase.realizations import catalog_get, closure_check, jacobi_check
from ncphase.series import INF

SNYDER = """\
format: 1
name: snyder-closed
dim: 3
metric: lorentzian
order: 4
param: l scalar
phi: eta(mu,nu) + l^2*p[mu]*p[nu]
"""


def raw_terms(series, order):
    t = series.truncate(order)
    return {k: dict(p.terms) for k, p in t.terms.items() if not p.is_zero()}


def test_snyder_config_matches_catalog():
    real = parse_model_text(SNYDER).build()
    ref = catalog_get("snyder", dim=3, order=4)
    assert real.space.metric == ref.space.metric
    for a in range(3):
        for m in range(3):
            assert raw_terms(real.phi[a][m], 4) == raw_terms(ref.phi[a][m], 4)
    assert jacobi_check(real).ok
    assert not closure_check(real).ok


def test_polynomial_entries_stay_exact():
    real = parse_model_text(SNYDER).build()
    assert real.order is INF


def test_continuation_lines_and_comments():
    text = (
        "# header comment\n"
        "format: 1\n"
        "name: folded\n"
        "dim: 2\n"
        "metric: ++\n\n"
        "param: a vector\n"
        "phi: eta(mu,nu)\n"
        "   + a[mu]*p[nu]\n"
    )
    real = parse_model_text(text).build()
    assert real.space.metric == (1, 1)
    assert real.phi[0][1].terms  # off-diagonal got the folded term


def test_linear_extraction():
    text = (
        "format: 1\nname: lin\ndim: 3\nparam: a vector\n"
        "phi: eta(mu,nu)*(1 + dot(a,p))\n"
    )
    real = parse_model_text(text).build()
    assert real.linear is not None
    assert closure_check(real).ok
    # a function-built entry cannot certify linearity even when the
    # series looks linear at low order
    text = (
        "format: 1\nname: nonpoly\ndim: 2\nmetric: ++\nparam: a vector\n"
        "order: 3\nphi: eta(mu,nu)*exp(dot(a,p))\n"
    )
    real = parse_model_text(text).build()
    assert real.linear is None


def test_null_vector_constraint():
    text = (
        "format: 1\nname: light\ndim: 3\nparam: a vector null\n"
        "phi: eta(mu,nu)*(1 + dot(a,p)) - a[mu]*p[nu]\n"
    )
    real = parse_model_text(text).build()
    tbl = real.space.params
    assert tbl.null_pivot == 0
    from ncphase.params import ParamPoly

    a = [ParamPoly.symbol(tbl, "a%d" % j) for j in range(3)]
    aa = None
    for s, c in zip(real.space.metric, a):
        t = c * c
        t = t.scale(-1) if s < 0 else t
        aa = t if aa is None else aa + t
    assert aa.is_zero()


def test_per_entry_overrides():
    text = (
        "format: 1\nname: override\ndim: 2\nmetric: ++\nparam: l scalar\n"
        "phi: eta(mu,nu)\n"
        "phi[0][1]: l*p[0]\n"
        "chi[1]: l*p[1]*p[1]\n"
    )
    real = parse_model_text(text).build()
    assert not real.phi[0][1].is_zero()
    assert real.phi[1][0].is_zero()
    assert real.chi[0].is_zero()
    assert not real.chi[1].is_zero()


def test_rebuild_at_higher_order():
    text = (
        "format: 1\nname: g\ndim: 2\nmetric: ++\nparam: a vector\norder: 3\n"
        "phi: eta(mu,nu)*inv1p(dot(a,p))\n"
    )
    real = parse_model_text(text).build()
    assert real.order == 3
    again = real.with_order(5)
    assert again.order == 5
    assert again.space.params is real.space.params  # same table on rebuild


def test_flat_limit_is_enforced():
    text = "format: 1\nname: bad\ndim: 2\nmetric: ++\nphi: 2*eta(mu,nu)\n"
    with pytest.raises(ModelConfigError):
        parse_model_text(text).build()


def test_loader_errors():
    with pytest.raises(ModelConfigError):
        parse_model_text("format: 2\nname: x\ndim: 2\nphi: eta(mu,nu)\n")
    with pytest.raises(ModelConfigError):
        parse_model_text("name: x\ndim: 2\nphi: eta(mu,nu)\n")  # no format
    with pytest.raises(ModelConfigError):
        parse_model_text("format: 1\nname: x\ndim: 2\n")  # no phi
    with pytest.raises(ModelConfigError):
        parse_model_text("format: 1\nname: x\ndim: 0\nphi: eta(mu,nu)\n")
    with pytest.raises(ModelConfigError):
        parse_model_text(
            "format: 1\nname: x\ndim: 2\nmetric: +++\nphi: eta(mu,nu)\n"
        )
    with pytest.raises(ModelConfigError):
        parse_model_text(
            "format: 1\nname: x\ndim: 2\nparam: l banana\nphi: eta(mu,nu)\n"
        )
    with pytest.raises(ModelConfigError):
        parse_model_text(
            "format: 1\nname: x\ndim: 2\nparam: l scalar null\nphi: eta(mu,nu)\n"
        )
    with pytest.raises(ModelConfigError):
        parse_model_text(
            "format: 1\nname: x\ndim: 2\nparam: mu scalar\nphi: eta(mu,nu)\n"
        )
    with pytest.raises(ModelConfigError) as e:
        parse_model_text("format: 1\nname: x\ndim: 2\nphi: dot(a,\n", source="m.model")
    assert "m.model:4" in str(e.value)
    cfg = parse_model_text(
        "format: 1\nname: x\ndim: 2\nmetric: ++\nphi: eta(mu,nu)\nphi[5][0]: p[0]\n"
    )
    with pytest.raises(ModelConfigError):
        cfg.build()
    # unbound symbol surfaces as a config error naming the model
    with pytest.raises(ModelConfigError) as e:
        parse_model_text(
            "format: 1\nname: sym\ndim: 2\nmetric: ++\nphi: eta(mu,nu) + w*p[0]\n"
        ).build()
    assert "sym" in str(e.value)


def test_shipped_model_files():
    root = Path(__file__).resolve().parents[1]
    for fname, cat, dim in [
        ("models/snyder.model", "snyder", 4),
        ("models/su2-rotations.model", "su2", 3),
        ("models/kappa-left.model", "kappa-left", 4),
        ("models/kappa-light.model", "kappa-light", 4),
    ]:
        real = load_model(root / fname, order=3)
        ref = catalog_get(cat, dim=dim, order=3)
        assert real.space.params.names == ref.space.params.names
        for a in range(dim):
            for m in range(dim):
                assert raw_terms(real.phi[a][m], 3) == raw_terms(ref.phi[a][m], 3), (
                    fname,
                    a,
                    m,
                )
