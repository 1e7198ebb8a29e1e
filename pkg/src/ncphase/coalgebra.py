"""Coproducts of momenta and the twists that generate them.

The momentum composition law D(k, q) read on tensor legs is the coproduct

    delta p_mu = D_mu(p (x) 1, 1 (x) p),    delta0 p_mu = p_mu (x) 1 + 1 (x) p_mu,

so coassociativity is the pentagon identity relabeled.  Twists are
two-slot normal-ordered operators F with delta p = F delta0 p F^{-1};
the inverse twist acts on functions through the first leg:

    m F^{-1} (act (x) 1) (x_mu (x) 1)  =  x_hat_mu.

Two constructions are provided: the exponential form
e^{-i p_a (x) x_a} e^{i pW_b (x) x_c phi_cb(p)} [e^{iG}] and a one-parameter
normal-ordered family built directly from (delta - delta0)p.  Specific
closed-form twists (Jordanian, algebroid, light-like boost type) are
built as exact exponential pairs for cross-checks.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CompositionError, ModelConfigError
from .operators import DEFAULT_XCAP, Operator, operator_exp, operator_inverse
from .realizations import _operator_discrepancy, _vector_params
from .reports import CheckResult, first_discrepancy
from .scalars import GaussScalar, I, ONE
from .series import INF, expand_fn, one, variable, zero
from .star import composition_law, pentagon_check

__all__ = [
    "TENSOR_BANKS",
    "CoproductSeries",
    "primitive_coproduct",
    "coproduct",
    "counit_check",
    "coassociativity_check",
    "deformed_shift",
    "twist_normal_ordered",
    "twist_exp_form",
    "invert_twist",
    "twist_consistency_check",
    "coproduct_conjugation_check",
    "dilatation_operator",
    "boost_operator",
    "jordanian_twist_pair",
    "left_algebroid_twist_pair",
    "linear_algebroid_twist_pair",
    "lightlike_drinfeld_twist_pair",
    "combinatorial_identity_check",
]

TENSOR_BANKS = ("p1", "p2")
TRIPLE_BANKS = ("p1", "p2", "p3")

NEG_I = -I


@dataclass
class CoproductSeries:
    space: object
    model: str
    order: object
    delta: list  # components over TENSOR_BANKS
    delta0: list  # primitive part, exact


def primitive_coproduct(space):
    return [
        variable(space, TENSOR_BANKS, "p1", mu) + variable(space, TENSOR_BANKS, "p2", mu)
        for mu in range(space.dim)
    ]


def coproduct(claw):
    """Read the composition law on tensor legs."""
    delta = [c.rename_banks({"k": "p1", "q": "p2"}) for c in claw.D]
    return CoproductSeries(claw.space, claw.model, claw.order, delta, primitive_coproduct(claw.space))


def counit_check(cop, model=None):
    """Killing either tensor leg must give back the momentum generator."""
    sp = cop.space
    name = model or cop.model
    for leg, keep in (("p2", "p1"), ("p1", "p2")):
        for mu in range(sp.dim):
            got = cop.delta[mu].restrict_zero(leg)
            want = variable(sp, (keep,), keep, mu).truncate(got.order)
            diff = got - want
            if not diff.is_zero():
                return CheckResult(
                    name,
                    "counit",
                    _order_label(cop.order),
                    ok=False,
                    discrepancy=first_discrepancy(diff, (leg, mu)),
                )
    return CheckResult(name, "counit", _order_label(cop.order), ok=True)


def coassociativity_check(claw, model=None):
    """(delta (x) id) delta p = (id (x) delta) delta p, on tensor-leg banks."""
    return pentagon_check(claw, TRIPLE_BANKS, "coassociativity", "coproduct", model)


def deformed_shift(claw):
    """(delta - delta0)p: every term carries both tensor legs."""
    prim = primitive_coproduct(claw.space)
    return [
        claw.D[mu].rename_banks({"k": "p1", "q": "p2"}) - prim[mu]
        for mu in range(claw.space.dim)
    ]


def _order_label(order):
    return "exact" if order is INF else order


def _slot_key(sp, slot, idx, slots=2):
    width = sp.dim * slots
    col = slot * sp.dim + idx
    return tuple(1 if j == col else 0 for j in range(width))


def _ordered_exp(sp, banks, contribs, order, xcap):
    """exp of sum c_j x^{K_j} s_j with all factors kept commutative.

    Coordinate keys add and series multiply without any reordering; this
    is exactly the normal-ordered exponential when each contribution is
    already normal-ordered and the series have positive valuation.
    """
    width = sp.dim * len(banks)
    unit = one(sp, banks)
    acc = {(0,) * width: unit}
    frontier = dict(acc)
    bound = (order if order is not INF else 0) + sp.params.cap + 2
    for m in range(1, bound + 1):
        inv_m = GaussScalar(Fraction(1, m))
        new = {}
        for k1, s1 in frontier.items():
            for k2, s2 in contribs:
                key = tuple(a + b for a, b in zip(k1, k2))
                if sum(key) > xcap:
                    raise CompositionError(
                        "normal-ordered exponential exceeds coordinate cap %d" % xcap
                    )
                t = (s1 * s2).truncate(order)
                if t.is_zero():
                    continue
                cur = new.get(key)
                new[key] = t if cur is None else cur + t
        new = {k: s.scale(inv_m) for k, s in new.items() if not s.is_zero()}
        if not new:
            break
        for k, s in new.items():
            cur = acc.get(k)
            s = s if cur is None else cur + s
            if s.is_zero():
                acc.pop(k, None)
            else:
                acc[k] = s
        frontier = new
    else:
        raise CompositionError(
            "normal-ordered exponential did not terminate within %d rounds" % bound
        )
    return Operator.from_terms(sp, banks, acc, xcap)


def twist_normal_ordered(claw, u, xcap=DEFAULT_XCAP):
    """Inverse twist :exp((i(1-u) x_a (x) 1 + iu 1 (x) x_a)(delta-delta0)p_a): e^{iG}.

    Contraction over a runs through the metric.  The u = 1 member
    coincides with the exponential form; u = 0 puts all coordinate
    dependence on the acting leg.
    """
    sp = claw.space
    order = claw.order
    u = Fraction(u)
    shift = deformed_shift(claw)
    contribs = []
    for al in range(sp.dim):
        s = shift[al]
        if s.is_zero():
            continue
        w = I * GaussScalar(sp.metric[al])
        if u != 1:
            contribs.append((_slot_key(sp, 0, al), s.scale(w * GaussScalar(1 - u))))
        if u != 0:
            contribs.append((_slot_key(sp, 1, al), s.scale(w * GaussScalar(u))))
    out = _ordered_exp(sp, TENSOR_BANKS, contribs, order, xcap)
    if not claw.G.is_zero():
        g = claw.G.rename_banks({"k": "p1", "q": "p2"})
        out = out * Operator.from_series(expand_fn("exp", g.scale(I), order=order), xcap)
    return out.truncate(order)


def _phi_column_operators(real, xcap):
    """x_c phi_cb(p) contracted over c, on the second tensor leg."""
    sp = real.space
    cols = []
    for b in range(sp.dim):
        acc = Operator.zero(sp, TENSOR_BANKS, xcap=xcap)
        for c in range(sp.dim):
            s = real.phi[c][b]
            if s.is_zero():
                continue
            s = s.rename_banks({"p": "p2"}).embed(TENSOR_BANKS)
            if sp.metric[c] < 0:
                s = s.scale(GaussScalar(-1))
            acc = acc + Operator.coordinate(sp, c, TENSOR_BANKS, slot=1, xcap=xcap) * s
        cols.append(acc)
    return cols


def _exp_form_exponents(real, claw, xcap):
    sp = claw.space
    e1 = Operator.zero(sp, TENSOR_BANKS, xcap=xcap)
    for al in range(sp.dim):
        s = variable(sp, TENSOR_BANKS, "p1", al)
        if sp.metric[al] < 0:
            s = s.scale(GaussScalar(-1))
        e1 = e1 + Operator.coordinate(sp, al, TENSOR_BANKS, slot=1, xcap=xcap) * s
    e1 = e1.scale(NEG_I)
    cols = _phi_column_operators(real, xcap)
    e2 = Operator.zero(sp, TENSOR_BANKS, xcap=xcap)
    for b in range(sp.dim):
        w = claw.Kinv[b].rename_banks({"k": "p1"}).embed(TENSOR_BANKS)
        if sp.metric[b] < 0:
            w = w.scale(GaussScalar(-1))
        e2 = e2 + Operator.from_series(w, xcap) * cols[b]
    e2 = e2.scale(I)
    return e1, e2


def twist_exp_form(real, claw=None, order=None, xcap=DEFAULT_XCAP):
    """Inverse twist e^{-i p_a (x) x_a} e^{i pW_b (x) x_c phi_cb(p)} [e^{iG}]."""
    if claw is None:
        claw = composition_law(real, order)
    order = claw.order
    e1, e2 = _exp_form_exponents(real, claw, xcap)
    # the product of two individually truncated exponentials is only
    # accurate through the common momentum order: cut it back there, or
    # the valuation rule would overstate accuracy of the cross terms
    out = (operator_exp(e1, order) * operator_exp(e2, order)).truncate(order)
    if not claw.G.is_zero():
        g = claw.G.rename_banks({"k": "p1", "q": "p2"})
        out = out * Operator.from_series(expand_fn("exp", g.scale(I), order=order), xcap)
    return out.truncate(order)


def invert_twist(finv, order=None):
    """Geometric inverse about the identity; works for any twist here
    since every deformation term has positive momentum valuation."""
    if order is None:
        order = finv.min_series_order()
        if order is INF:
            order = finv.space.params.cap
    return operator_inverse(finv, order)


def twist_consistency_check(real, finv, model=None):
    """m F^{-1} (act (x) 1) applied to x_mu (x) 1 must rebuild x_hat_mu.

    The first tensor leg acts on the coordinate x_mu (only the constant
    and linear momentum slices survive), the second leg multiplies from
    the right; both land in one copy of the phase space.
    """
    sp = real.space
    n = sp.dim
    name = model or real.name
    target = _coordinate_targets(real, finv.xcap)
    results = []
    for mu in range(n):
        acc = Operator.zero(sp, ("p",), xcap=finv.xcap)
        for key, s in finv.terms.items():
            a0 = key[:n]
            a1 = key[n:]
            # constant slice of the acting leg: x^{a0} s|_{p1=0} x_mu
            s00 = s.restrict_zero("p1").rename_banks({"p2": "p"})
            if not s00.is_zero():
                xkey = tuple(
                    a0[j] + a1[j] + (1 if j == mu else 0) for j in range(n)
                )
                acc = acc + Operator.from_terms(sp, ("p",), {xkey: s00}, finv.xcap)
            # linear slice: p_mu inside the acting leg eats x_mu
            s1 = s.derivative("p1", mu).restrict_zero("p1").rename_banks({"p2": "p"})
            if not s1.is_zero():
                s1 = s1.scale(NEG_I * GaussScalar(sp.metric[mu]))
                xkey = tuple(a0[j] + a1[j] for j in range(n))
                acc = acc + Operator.from_terms(sp, ("p",), {xkey: s1}, finv.xcap)
        results.append(acc)
    compare = min(
        [op.min_series_order() for op in results]
        + [op.min_series_order() for op in target]
    )
    for mu in range(n):
        diff = (results[mu] - target[mu]).truncate(compare)
        if not diff.is_zero():
            return CheckResult(
                name,
                "twist-consistency",
                _order_label(compare),
                ok=False,
                discrepancy=_operator_discrepancy(diff, (mu,)),
            )
    return CheckResult(name, "twist-consistency", _order_label(compare), ok=True)


def _coordinate_targets(real, xcap):
    from .realizations import coordinate_operators

    return coordinate_operators(real, banks=("p",), xcap=xcap)


def coproduct_conjugation_check(cop, twist, twist_inv=None, model=None):
    """delta p_mu = F delta0 p_mu F^{-1} in the two-slot operator algebra."""
    sp = cop.space
    name = model or cop.model
    if twist_inv is None:
        twist_inv = invert_twist(twist)
    orders = [twist.min_series_order(), twist_inv.min_series_order()]
    orders += [c.order for c in cop.delta]
    compare = min(orders)
    for mu in range(sp.dim):
        prim = Operator.from_series(cop.delta0[mu], twist.xcap)
        conj = twist * prim * twist_inv
        want = Operator.from_series(cop.delta[mu], twist.xcap)
        diff = (conj - want).truncate(compare)
        if not diff.is_zero():
            return CheckResult(
                name,
                "coproduct-conjugation",
                _order_label(compare),
                ok=False,
                discrepancy=_operator_discrepancy(diff, (mu,)),
            )
    return CheckResult(name, "coproduct-conjugation", _order_label(compare), ok=True)


# ---- closed-form twists used as cross-checks ----


def dilatation_operator(sp, banks=TENSOR_BANKS, slot=0, xcap=DEFAULT_XCAP):
    """x.p with the contraction through the metric, on one tensor leg."""
    acc = Operator.zero(sp, banks, xcap=xcap)
    for al in range(sp.dim):
        term = Operator.coordinate(sp, al, banks, slot=slot, xcap=xcap) * Operator.momentum(
            sp, al, banks, slot=slot, xcap=xcap
        )
        if sp.metric[al] < 0:
            term = term.scale(GaussScalar(-1))
        acc = acc + term
    return acc


def boost_operator(sp, al, be, banks=TENSOR_BANKS, slot=0, xcap=DEFAULT_XCAP):
    """x_a p_b - x_b p_a on one tensor leg."""
    xa = Operator.coordinate(sp, al, banks, slot=slot, xcap=xcap)
    xb = Operator.coordinate(sp, be, banks, slot=slot, xcap=xcap)
    pa = Operator.momentum(sp, al, banks, slot=slot, xcap=xcap)
    pb = Operator.momentum(sp, be, banks, slot=slot, xcap=xcap)
    return xa * pb - xb * pa


def _param_dot(sp, bank, avec=None):
    """a.p on one tensor leg, params contracted through the metric."""
    if avec is None:
        avec = _vector_params(sp)
    acc = zero(sp, TENSOR_BANKS)
    for mu in range(sp.dim):
        t = variable(sp, TENSOR_BANKS, bank, mu).scale(avec[mu])
        if sp.metric[mu] < 0:
            t = -t
        acc = acc + t
    return acc


def _exp_pair(exponent, order):
    return operator_exp(exponent.scale(GaussScalar(-1)), order), operator_exp(exponent, order)


def jordanian_twist_pair(sp, variant, order, xcap=DEFAULT_XCAP, avec=None):
    """(F, F^{-1}) for the solvable two-generator twists.

    variant "right": F = e^{-i ln(1-a.p) (x) D};
    variant "left":  F = e^{-i D (x) ln(1+a.p)}.
    """
    if variant == "right":
        lead = expand_fn("log1p", -_param_dot(sp, "p1", avec), order=order)
        e = Operator.from_series(lead, xcap) * dilatation_operator(sp, slot=1, xcap=xcap)
    elif variant == "left":
        tail = expand_fn("log1p", _param_dot(sp, "p2", avec), order=order)
        e = dilatation_operator(sp, slot=0, xcap=xcap) * Operator.from_series(tail, xcap)
    else:
        raise ModelConfigError("jordanian variant must be 'right' or 'left'")
    f, finv = _exp_pair(e.scale(I), order)
    return f, finv


def left_algebroid_twist_pair(claw, xcap=DEFAULT_XCAP, avec=None):
    """(F, F^{-1}) with F = e^{-i pW_b (x) x_b (a.p)} for the left
    covariant family; equals e^{-i a_a pW_b (x) x_b p_a} by contraction."""
    sp = claw.space
    order = claw.order
    adp = _param_dot(sp, "p2", avec)
    e = Operator.zero(sp, TENSOR_BANKS, xcap=xcap)
    for b in range(sp.dim):
        w = claw.Kinv[b].rename_banks({"k": "p1"}).embed(TENSOR_BANKS)
        if sp.metric[b] < 0:
            w = w.scale(GaussScalar(-1))
        term = Operator.coordinate(sp, b, TENSOR_BANKS, slot=1, xcap=xcap) * adp
        e = e + Operator.from_series(w, xcap) * term
    return _exp_pair(e.scale(I), order)


def linear_algebroid_twist_pair(linreal, claw, xcap=DEFAULT_XCAP):
    """(F, F^{-1}) with F = exp(-i KM_ba(pW) (x) x_a p_b) for a
    momentum-linear model, KM_bn(k) = K[b][m][n] k_m contracted over m."""
    sp = claw.space
    n = sp.dim
    order = claw.order
    pw = [c.rename_banks({"k": "p1"}).embed(TENSOR_BANKS) for c in claw.Kinv]
    e = Operator.zero(sp, TENSOR_BANKS, xcap=xcap)
    for be in range(n):
        for al in range(n):
            s = zero(sp, TENSOR_BANKS)
            for m in range(n):
                coeff = linreal.K[be][m][al]
                if coeff.is_zero():
                    continue
                t = pw[m].scale(coeff)
                if sp.metric[m] < 0:
                    t = -t
                s = s + t
            if s.is_zero():
                continue
            sign = sp.metric[al] * sp.metric[be]
            if sign < 0:
                s = s.scale(GaussScalar(-1))
            term = Operator.coordinate(sp, al, TENSOR_BANKS, slot=1, xcap=xcap) * Operator.momentum(
                sp, be, TENSOR_BANKS, slot=1, xcap=xcap
            )
            e = e + Operator.from_series(s, xcap) * term
    return _exp_pair(e.scale(I), order)


def lightlike_drinfeld_twist_pair(sp, order, xcap=DEFAULT_XCAP, avec=None):
    """(F, F^{-1}) with F = exp(i a_a p_b ln(1+a.p)/(a.p) (x) M_ab).

    Needs the null parameter vector (a.a = 0) to land on a Lie-closed
    model; the constructor itself does not enforce that.
    """
    if avec is None:
        avec = _vector_params(sp)
    lead = expand_fn("log1p_over", _param_dot(sp, "p1", avec), order=order)
    e = Operator.zero(sp, TENSOR_BANKS, xcap=xcap)
    for al in range(sp.dim):
        for be in range(sp.dim):
            if al == be:
                continue
            s = (lead * variable(sp, TENSOR_BANKS, "p1", be)).scale(avec[al])
            sign = sp.metric[al] * sp.metric[be]
            if sign < 0:
                s = s.scale(GaussScalar(-1))
            if s.is_zero():
                continue
            e = e + Operator.from_series(s, xcap) * boost_operator(
                sp, al, be, slot=1, xcap=xcap
            )
    return _exp_pair(e.scale(NEG_I), order)


def combinatorial_identity_check(n, space=None):
    """sum_{k+l=n} (-1)^l x^k p x^l / (k! l!) = 0 for n >= 2.

    Verified in the one-dimensional operator algebra; the alternating
    weight sits on the right block.
    """
    from math import factorial

    from .params import ParamTable
    from .series import Space
    from .operators import normal_order_word

    if space is None:
        space = Space.euclidean(1, ParamTable.empty(2))
    acc = Operator.zero(space, ("p",), xcap=n + 2)
    for k in range(n + 1):
        l = n - k
        word = [("x", 0)] * k + [("p", 0)] + [("x", 0)] * l
        w = normal_order_word(space, word, xcap=n + 2)
        coeff = GaussScalar(Fraction((-1) ** l, factorial(k) * factorial(l)))
        acc = acc + w.scale(coeff)
    ok = acc.is_zero()
    disc = None if ok else _operator_discrepancy(acc, (n,))
    return CheckResult(
        "operator-algebra",
        "combinatorial-identity",
        "exact",
        ok=ok,
        discrepancy=disc,
        details={"n": n},
    )
