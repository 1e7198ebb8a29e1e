"""Quadratic phase-space deformations driven by dilatation twists.

Coordinates here q-commute, x^_a x^_b = q_ab x^_b x^_a, with q_ab a
truncated exponential series in a constant parameter matrix a_ab rather
than a momentum-dependent structure function.  The whole module works in
Euclidean signature: the defining action D_a |> f = -i x_a df/dx_a and
the displayed commutation relations only coexist when the metric weights
are trivial (a timelike direction would shift the eigenvalue rules by
metric signs).

Two parameter modes are supported.  Antisymmetric a gives the genuinely
q-deformed family (q_aa = 1, q_ba = 1/q_ab); symmetric a makes the
coordinates commute again while keeping the star product and the pairing
with the second family y^ nontrivial.

No summation convention: every contraction in this module is written
out, since the defining relations hold index-by-index.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial

from .errors import ModelConfigError
from .operators import DEFAULT_XCAP, Operator, commutator, operator_exp
from .params import ParamPoly, ParamTable
from .realizations import _operator_discrepancy
from .reports import CheckResult, Discrepancy
from .scalars import GaussScalar, I, ONE
from .series import Space, const, variable, zero as series_zero

NEG_I = GaussScalar(0, -1)

__all__ = [
    "QDeformation",
    "param_exp",
    "dilatation_component",
    "q_relation_check",
    "momentum_relation_check",
    "y_partner_check",
    "q_star_monomial",
    "q_star",
    "q_star_action_check",
    "q_star_associativity_check",
    "q_coproduct_check",
    "q_twist_cocycle_check",
    "quadratic_first_order",
    "quadratic_commutator_check",
]

DEFAULT_ACAP = 6
TENSOR_BANKS = ("p1", "p2")


def param_exp(poly):
    """exp of a constant-free parameter polynomial, exact under the cap."""
    if not poly.constant_term().is_zero():
        raise ModelConfigError("param_exp needs a vanishing constant term")
    table = poly.table
    acc = ParamPoly.one(table)
    power = acc
    for k in range(1, table.cap + 1):
        power = power * poly
        if power.is_zero():
            break
        acc = acc + power.scale(GaussScalar(Fraction(1, factorial(k))))
    return acc


class QDeformation:
    """Constant parameter matrix a_ab plus the spaces built from it."""

    __slots__ = ("space", "mode", "A", "acap", "order", "xcap")

    def __init__(self, space, mode, A, acap, order, xcap):
        self.space = space
        self.mode = mode
        self.A = A
        self.acap = acap
        self.order = order
        self.xcap = xcap

    @classmethod
    def build(cls, dim=3, mode="antisymmetric", acap=DEFAULT_ACAP, xcap=None):
        if mode not in ("antisymmetric", "symmetric"):
            raise ModelConfigError("mode must be 'antisymmetric' or 'symmetric'")
        # independent symbols: strictly upper entries, plus the diagonal
        # in symmetric mode
        if mode == "antisymmetric":
            names = ["a%d%d" % (i, j) for i in range(dim) for j in range(i + 1, dim)]
        else:
            names = ["a%d%d" % (i, j) for i in range(dim) for j in range(i, dim)]
        table = ParamTable(tuple(names), acap)
        sp = Space.euclidean(dim, table)
        zero_p = ParamPoly.zero(table)
        A = [[zero_p for _ in range(dim)] for _ in range(dim)]
        for i in range(dim):
            for j in range(dim):
                if mode == "antisymmetric":
                    if i < j:
                        A[i][j] = ParamPoly.symbol(table, "a%d%d" % (i, j))
                    elif i > j:
                        A[i][j] = -ParamPoly.symbol(table, "a%d%d" % (j, i))
                else:
                    lo, hi = (i, j) if i <= j else (j, i)
                    A[i][j] = ParamPoly.symbol(table, "a%d%d" % (lo, hi))
        order = acap + 1
        if xcap is None:
            xcap = max(DEFAULT_XCAP, 2 * acap + 2)
        return cls(sp, mode, A, acap, order, xcap)

    # ---- derived coefficient series ----

    def q(self, al, be):
        """q_ab = exp(a_ab - a_ba); equals exp(2 a_ab) in antisymmetric mode."""
        return param_exp(self.A[al][be] - self.A[be][al])

    def c(self, al, be):
        return param_exp(self.A[al][be])

    # ---- operators on one leg ----

    def phi(self, al, banks=("p",), slot=0):
        """exp(i sum_b a_ab D_b), the momentum-side factor of x^_a."""
        return operator_exp(self._phi_exponent(al, 0, banks, slot), self.order)

    def phi_tilde(self, al, banks=("p",), slot=0):
        """exp(i sum_b a_ba D_b), the transposed-matrix partner."""
        return operator_exp(self._phi_exponent(al, 1, banks, slot), self.order)

    def _phi_exponent(self, al, transpose, banks, slot):
        sp = self.space
        e = Operator.zero(sp, banks, xcap=self.xcap)
        for be in range(sp.dim):
            coeff = self.A[be][al] if transpose else self.A[al][be]
            if coeff.is_zero():
                continue
            d = dilatation_component(sp, be, banks, slot, self.xcap)
            e = e + d.map_series(lambda s, c=coeff: s.scale(c)).scale(I)
        return e

    def xhat(self, al, banks=("p",), slot=0):
        x = Operator.coordinate(self.space, al, banks, slot=slot, xcap=self.xcap)
        return x * self.phi(al, banks, slot)

    def yhat(self, al, banks=("p",), slot=0):
        x = Operator.coordinate(self.space, al, banks, slot=slot, xcap=self.xcap)
        return x * self.phi_tilde(al, banks, slot)


def dilatation_component(sp, idx, banks=("p",), slot=0, xcap=DEFAULT_XCAP):
    """D_idx = x_idx p_idx on one leg, no summation."""
    return Operator.coordinate(sp, idx, banks, slot=slot, xcap=xcap) * Operator.momentum(
        sp, idx, banks, slot=slot, xcap=xcap
    )


def _operator_report(diff, model, check, order, indices=()):
    ok = all(s.is_zero() for s in diff.terms.values())
    return CheckResult(
        model=model,
        check=check,
        order=order,
        ok=ok,
        discrepancy=None if ok else _operator_discrepancy(diff, indices),
    )


def _q_label(Q):
    return "q-dilatation-%s" % Q.mode


def q_relation_check(Q):
    """x^_a x^_b = q_ab x^_b x^_a for all pairs, plus [D_a, x^_b] = -i d_ab x^_a.

    In symmetric mode q_ab = 1 and the first family commutes.
    """
    sp = Q.space
    xh = [Q.xhat(al) for al in range(sp.dim)]
    for al in range(sp.dim):
        for be in range(sp.dim):
            diff = xh[al] * xh[be] - (xh[be] * xh[al]).map_series(
                lambda s, q=Q.q(al, be): s.scale(q)
            )
            r = _operator_report(diff, _q_label(Q), "q-relations", Q.acap, (al, be))
            if not r.ok:
                return r
            d = dilatation_component(sp, al, xcap=Q.xcap)
            want = xh[al].scale(NEG_I) if al == be else Operator.zero(sp, ("p",), xcap=Q.xcap)
            r = _operator_report(
                commutator(d, xh[be]) - want, _q_label(Q), "q-relations", Q.acap, (al, be)
            )
            if not r.ok:
                return r
    return CheckResult(model=_q_label(Q), check="q-relations", order=Q.acap, ok=True)


def momentum_relation_check(Q):
    """p_a x^_b - e^{a_ba} x^_b p_a = -i d_ab phi_b, index by index."""
    sp = Q.space
    for al in range(sp.dim):
        p = Operator.momentum(sp, al, xcap=Q.xcap)
        for be in range(sp.dim):
            xh = Q.xhat(be)
            lhs = p * xh - (xh * p).map_series(lambda s, c=Q.c(be, al): s.scale(c))
            if al == be:
                lhs = lhs - Q.phi(be).scale(NEG_I)
            r = _operator_report(
                lhs, _q_label(Q), "momentum-relation", Q.acap, (al, be)
            )
            if not r.ok:
                return r
    return CheckResult(
        model=_q_label(Q), check="momentum-relation", order=Q.acap, ok=True
    )


def y_partner_check(Q):
    """[x^_a, y^_b] = 0 for all pairs; y^ itself q-commutes with 1/q_ab.

    Symmetric mode degenerates to y^ = x^ (both checks still hold).
    """
    sp = Q.space
    xh = [Q.xhat(al) for al in range(sp.dim)]
    yh = [Q.yhat(al) for al in range(sp.dim)]
    for al in range(sp.dim):
        for be in range(sp.dim):
            r = _operator_report(
                commutator(xh[al], yh[be]), _q_label(Q), "y-partner", Q.acap, (al, be)
            )
            if not r.ok:
                return r
            diff = yh[al] * yh[be] - (yh[be] * yh[al]).map_series(
                lambda s, q=Q.q(be, al): s.scale(q)
            )
            r = _operator_report(diff, _q_label(Q), "y-partner", Q.acap, (al, be))
            if not r.ok:
                return r
        # y^_a |> 1 = x_a
        proj = yh[al].act(Operator.identity(sp, ("p",), xcap=Q.xcap))
        want = Operator.coordinate(sp, al, xcap=Q.xcap)
        r = _operator_report(proj - want, _q_label(Q), "y-partner", Q.acap, (al,))
        if not r.ok:
            return r
    return CheckResult(model=_q_label(Q), check="y-partner", order=Q.acap, ok=True)


# ---- star product via dilatation eigenvalues ----


def q_star_monomial(Q, ja, jb):
    """Coefficient of x^(ja+jb) in x^ja * x^jb.

    The twist legs are diagonal on monomials (i D_a x^j = j_a x^j), so
    the inverse twist contributes exp(sum_ab a_ab ja_a jb_b) and nothing
    else.
    """
    sp = Q.space
    expo = ParamPoly.zero(sp.params)
    for al in range(sp.dim):
        if not ja[al]:
            continue
        for be in range(sp.dim):
            if not jb[be]:
                continue
            expo = expo + Q.A[al][be].scale(GaussScalar(ja[al] * jb[be]))
    return param_exp(expo)


def q_star(Q, f, g):
    """Star product of coordinate polynomials {exponent tuple: coeff}."""
    out = {}
    for ja, ca in f.items():
        if not isinstance(ca, ParamPoly):
            ca = ParamPoly.const(Q.space.params, ca)
        for jb, cb in g.items():
            if not isinstance(cb, ParamPoly):
                cb = ParamPoly.const(Q.space.params, cb)
            key = tuple(a + b for a, b in zip(ja, jb))
            c = ca * cb * q_star_monomial(Q, ja, jb)
            acc = out.get(key)
            c = c if acc is None else acc + c
            if c.is_zero():
                out.pop(key, None)
            else:
                out[key] = c
    return out


def q_star_action_check(Q):
    """x_a * x_b must match the operator route x^_a |> x_b for all pairs."""
    sp = Q.space
    n = sp.dim
    for al in range(n):
        xh = Q.xhat(al)
        for be in range(n):
            ea = tuple(1 if i == al else 0 for i in range(n))
            eb = tuple(1 if i == be else 0 for i in range(n))
            star = q_star(Q, {ea: ONE}, {eb: ONE})
            target = Operator.coordinate(sp, be, xcap=Q.xcap)
            acted = xh.act(target)
            want = Operator.from_terms(
                sp,
                ("p",),
                {k: const(sp, ("p",), c) for k, c in star.items()},
                xcap=Q.xcap,
            )
            r = _operator_report(
                acted - want, _q_label(Q), "star-action", Q.acap, (al, be)
            )
            if not r.ok:
                return r
    return CheckResult(model=_q_label(Q), check="star-action", order=Q.acap, ok=True)


def q_star_associativity_check(Q, trials=6, seed=3):
    """(x^A * x^B) * x^C == x^A * (x^B * x^C) on random monomials.

    Also rechecks the q-commutation x^A * x^B = q(A,B) x^B * x^A with
    the bilinear q(A, B) = exp(sum (a_ab - a_ba) A_a B_b).
    """
    import random

    rng = random.Random(seed)
    n = Q.space.dim
    for t in range(trials):
        ja = tuple(rng.randint(0, 2) for _ in range(n))
        jb = tuple(rng.randint(0, 2) for _ in range(n))
        jc = tuple(rng.randint(0, 2) for _ in range(n))
        lhs = q_star(Q, q_star(Q, {ja: ONE}, {jb: ONE}), {jc: ONE})
        rhs = q_star(Q, {ja: ONE}, q_star(Q, {jb: ONE}, {jc: ONE}))
        diff = dict(lhs)
        for k, c in rhs.items():
            acc = diff.get(k)
            c = -c if acc is None else acc - c
            if c.is_zero():
                diff.pop(k, None)
            else:
                diff[k] = c
        if diff:
            key = min(diff)
            poly = diff[key]
            pkey = min(poly.terms, key=lambda k: (sum(k), k))
            coeff = poly.terms[pkey]
            return CheckResult(
                model=_q_label(Q),
                check="star-associativity",
                order=Q.acap,
                ok=False,
                discrepancy=Discrepancy(
                    (t,), poly.monomial_str(pkey), str(coeff.re), str(coeff.im)
                ),
            )
        # commutation with the bilinear exponent
        expo = ParamPoly.zero(Q.space.params)
        for a in range(n):
            for b in range(n):
                w = ja[a] * jb[b]
                if w:
                    expo = expo + (Q.A[a][b] - Q.A[b][a]).scale(GaussScalar(w))
        lhs_c = q_star_monomial(Q, ja, jb)
        rhs_c = param_exp(expo) * q_star_monomial(Q, jb, ja)
        if not (lhs_c - rhs_c).is_zero():
            return CheckResult(
                model=_q_label(Q),
                check="star-associativity",
                order=Q.acap,
                ok=False,
            )
    return CheckResult(
        model=_q_label(Q), check="star-associativity", order=Q.acap, ok=True
    )


# ---- coproduct and cocycle ----


def _twist_exponent_two_leg(Q):
    sp = Q.space
    e = Operator.zero(sp, TENSOR_BANKS, xcap=Q.xcap)
    for al in range(sp.dim):
        for be in range(sp.dim):
            coeff = Q.A[al][be]
            if coeff.is_zero():
                continue
            t = dilatation_component(sp, al, TENSOR_BANKS, 0, Q.xcap) * dilatation_component(
                sp, be, TENSOR_BANKS, 1, Q.xcap
            )
            e = e + t.map_series(lambda s, c=coeff: s.scale(c))
    return e


def _conjugate_by_exp(expo, target, rounds):
    """exp(E) X exp(-E) as the iterated-commutator series sum ad^k(X)/k!.

    Each bracket with the twist exponent raises the parameter degree, so
    the series is finite under the cap; this stays sparse where a
    product of two full exponentials would not.
    """
    acc = target
    cur = target
    for k in range(1, rounds + 1):
        cur = commutator(expo, cur)
        if cur.is_zero():
            break
        acc = acc + cur.scale(GaussScalar(Fraction(1, factorial(k))))
    return acc


def q_coproduct_check(Q):
    """Conjugation by the dilatation twist lands on p_a (x) phi_a + phi~_a (x) p_a.

    D_a itself must stay primitive; phi_a is group-like by construction
    (the twist commutes with it), so the momentum coproduct is the whole
    content of the check.
    """
    sp = Q.space
    e = _twist_exponent_two_leg(Q)
    for al in range(sp.dim):
        prim = Operator.momentum(sp, al, TENSOR_BANKS, slot=0, xcap=Q.xcap) + Operator.momentum(
            sp, al, TENSOR_BANKS, slot=1, xcap=Q.xcap
        )
        conj = _conjugate_by_exp(e, prim, Q.acap + 1)
        want = Operator.momentum(sp, al, TENSOR_BANKS, slot=0, xcap=Q.xcap) * Q.phi(
            al, TENSOR_BANKS, slot=1
        ) + Q.phi_tilde(al, TENSOR_BANKS, slot=0) * Operator.momentum(
            sp, al, TENSOR_BANKS, slot=1, xcap=Q.xcap
        )
        r = _operator_report(
            (conj - want).truncate(Q.order),
            _q_label(Q),
            "q-coproduct",
            Q.acap,
            (al,),
        )
        if not r.ok:
            return r
        # D_a stays primitive: the twist exponent commutes with it
        dprim = dilatation_component(sp, al, TENSOR_BANKS, 0, Q.xcap) + dilatation_component(
            sp, al, TENSOR_BANKS, 1, Q.xcap
        )
        r = _operator_report(
            commutator(e, dprim), _q_label(Q), "q-coproduct", Q.acap, (al,)
        )
        if not r.ok:
            return r
    return CheckResult(model=_q_label(Q), check="q-coproduct", order=Q.acap, ok=True)


def q_twist_cocycle_check(Q):
    """Cocycle identity for the abelian twist, checked on exponents.

    All D_a commute, so both cocycle sides are exponentials of
    commuting polynomial exponents and the identity reduces to equality
    of the exponents in the three-leg commutative algebra; that holds as
    an exact polynomial statement, no truncation involved.
    """
    sp = Q.space
    banks = ("d1", "d2", "d3")

    def bilinear(b1, b2):
        acc = series_zero(sp, banks)
        for al in range(sp.dim):
            for be in range(sp.dim):
                coeff = Q.A[al][be]
                if coeff.is_zero():
                    continue
                acc = acc + (
                    variable(sp, banks, b1, al) * variable(sp, banks, b2, be)
                ).scale(coeff)
        return acc

    e12 = bilinear("d1", "d2")
    e13 = bilinear("d1", "d3")
    e23 = bilinear("d2", "d3")
    # (F (x) 1)(coproduct (x) id)F has exponent e12 + e13 + e23 either way
    lhs = e12 + (e13 + e23)
    rhs = e23 + (e12 + e13)
    diff = lhs - rhs
    ok = all(p.is_zero() for p in diff.terms.values())
    return CheckResult(
        model=_q_label(Q), check="twist-cocycle", order="exact", ok=ok
    )


# ---- first order in a general rank-4 coefficient ----


def quadratic_first_order(dim, K4, xcap=DEFAULT_XCAP):
    """Coordinates x_mu + i K_mu,c,b,a x_a x_b p_c to first order.

    K4 is a numeric rank-4 nested sequence; a single bookkeeping symbol
    of degree cap 1 multiplies it so every product is automatically cut
    after the linear term.  Returns (space, [x^_mu]).
    """
    table = ParamTable.single("k", cap=1)
    sp = Space.euclidean(dim, table)
    k = ParamPoly.symbol(table, "k")
    ops = []
    for mu in range(dim):
        acc = Operator.coordinate(sp, mu, xcap=xcap)
        for ga in range(dim):
            for be in range(dim):
                for al in range(dim):
                    c = Fraction(K4[mu][ga][be][al])
                    if not c:
                        continue
                    term = (
                        Operator.coordinate(sp, al, xcap=xcap)
                        * Operator.coordinate(sp, be, xcap=xcap)
                        * Operator.momentum(sp, ga, xcap=xcap)
                    )
                    acc = acc + term.map_series(
                        lambda s, w=k.scale(GaussScalar(c)): s.scale(w)
                    ).scale(I)
        ops.append(acc)
    return sp, ops


def quadratic_commutator_check(dim, K4, xcap=DEFAULT_XCAP):
    """[x^_mu, x^_nu] = (K_mu,nu,g,d - K_nu,mu,g,d) x_g x_d + O(K^2).

    The O(K^2) tail is killed by the degree-1 parameter cap, so the
    comparison is exact at first order.
    """
    sp, ops = quadratic_first_order(dim, K4, xcap)
    k = ParamPoly.symbol(sp.params, "k")
    for mu in range(dim):
        for nu in range(dim):
            diff = commutator(ops[mu], ops[nu])
            for ga in range(dim):
                for de in range(dim):
                    c = Fraction(K4[mu][nu][ga][de]) - Fraction(K4[nu][mu][ga][de])
                    if not c:
                        continue
                    term = Operator.coordinate(sp, ga, xcap=xcap) * Operator.coordinate(
                        sp, de, xcap=xcap
                    )
                    diff = diff - term.map_series(
                        lambda s, w=k.scale(GaussScalar(c)): s.scale(w)
                    )
            r = _operator_report(
                diff, "quadratic-first-order", "quadratic-commutator", 1, (mu, nu)
            )
            if not r.ok:
                return r
    return CheckResult(
        model="quadratic-first-order", check="quadratic-commutator", order=1, ok=True
    )
