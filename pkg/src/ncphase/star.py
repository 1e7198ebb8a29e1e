"""Plane-wave flow, momentum composition law and the star product.

Acting with a plane wave of momentum k on one of momentum q transports the
phase-space point: the transported momentum J(k, q) and phase shift h(k, q)
solve the flow

    dJ[mu]/dt = sum_contract_beta k_beta phi[mu][beta](J),   J(0) = q
    dh/dt     = sum_contract_beta k_beta chi[beta](J),       h(0) = 0

evaluated at t = 1.  Scaling k shows the t-grading is the k-grading, so the
solution is assembled degree by degree.  From J and h:

    K(k)    = J(k, 0)                the ordering map
    Kinv    = reversion of K         symmetric-ordering momenta
    D(k, q) = J(Kinv(k), q)          composition of momenta
    G(k, q) = h(Kinv(k), q) - h(Kinv(k), 0)

and the star product of two plane waves is the plane wave of momentum
D(k, q) times exp(i G(k, q)).  Monomial star products follow by coefficient
extraction from the commutative generating function
exp(i G) prod_mu exp(i x_mu Draised[mu]).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CompositionError
from .params import ParamPoly
from .reports import CheckResult, first_discrepancy
from .scalars import GaussScalar, I, ONE
from .series import (
    DEFAULT_ORDER,
    INF,
    MomentumSeries,
    Space,
    compose,
    expand_fn,
    identity_vector,
    one,
    revert,
    zero,
)

__all__ = [
    "FlowSolution",
    "CompositionLaw",
    "XPolynomial",
    "solve_plane_wave_flow",
    "flow_residual",
    "closed_form_linear",
    "composition_law",
    "star_monomial",
    "star_polys",
    "x_monomial",
    "pentagon_check",
    "associativity_check",
]

NEG_I = -I


@dataclass
class FlowSolution:
    space: Space
    model: str
    order: object
    J: list  # components over banks ("k", "q")
    h: MomentumSeries


@dataclass
class CompositionLaw:
    space: Space
    model: str
    order: object
    J: list
    h: MomentumSeries
    K: list  # over ("k",)
    Kinv: list  # over ("k",)
    D: list  # over ("k", "q")
    G: MomentumSeries


def solve_plane_wave_flow(real, order=None):
    """Integrate the transport flow grade by grade in the k-degree."""
    if order is None:
        order = real.order if real.order is not INF else DEFAULT_ORDER
    work = real.with_order(order) if order is not INF else real
    sp = work.space
    n = sp.dim
    banks = ("k", "q")
    kv = identity_vector(sp, banks, "k")
    J = [c.truncate(order) for c in identity_vector(sp, banks, "q")]

    def rhs_components(rows):
        out = []
        for mu in range(n):
            acc = zero(sp, banks, order)
            for b in range(n):
                f = rows[mu][b]
                if f.is_zero():
                    continue
                g = compose(f, {"p": J})
                term = (kv[b].truncate(order) * g).truncate(order)
                if sp.metric[b] < 0:
                    term = -term
                acc = acc + term
            out.append(acc)
        return out

    phi_rows = [[work.phi[mu][b] for b in range(n)] for mu in range(n)]
    for m in range(1, (order if order is not INF else DEFAULT_ORDER) + 1):
        rhs = rhs_components(phi_rows)
        inv_m = GaussScalar(Fraction(1, m))
        J = [J[mu] + rhs[mu].bank_degree_part("k", m).scale(inv_m) for mu in range(n)]
    h = zero(sp, banks, order)
    if any(not c.is_zero() for c in work.chi):
        g = zero(sp, banks, order)
        for b in range(n):
            cb = work.chi[b]
            if cb.is_zero():
                continue
            term = (kv[b].truncate(order) * compose(cb, {"p": J})).truncate(order)
            if sp.metric[b] < 0:
                term = -term
            g = g + term
        for m in range(1, (order if order is not INF else DEFAULT_ORDER) + 1):
            h = h + g.bank_degree_part("k", m).scale(GaussScalar(Fraction(1, m)))
    return FlowSolution(sp, real.name, order, J, h)


def flow_residual(real, flow):
    """Euler-operator residuals of the flow solution.

    The scaling identity J(t; k, q) = J(1; tk, q) turns the t-derivative
    into the plain Euler operator sum_b k_b d/dk_b, giving the
    t-free check

        sum_b k_b dJ[mu]/dk_b - sum_contract_b k_b phi[mu][b](J) = 0

    and its h analogue; returns the residual series (all zero on a
    correct solution).
    """
    sp = real.space
    n = sp.dim
    banks = ("k", "q")
    order = flow.order
    kv = identity_vector(sp, banks, "k")
    res = []
    for mu in range(n):
        euler = zero(sp, banks, order)
        for b in range(n):
            euler = euler + (kv[b] * flow.J[mu].derivative("k", b)).truncate(order)
        rhs = zero(sp, banks, order)
        for b in range(n):
            f = real.phi[mu][b]
            if f.is_zero():
                continue
            term = (kv[b].truncate(order) * compose(f, {"p": flow.J})).truncate(order)
            if sp.metric[b] < 0:
                term = -term
            rhs = rhs + term
        res.append(euler - rhs)
    euler_h = zero(sp, banks, order)
    for b in range(n):
        euler_h = euler_h + (kv[b] * flow.h.derivative("k", b)).truncate(order)
    rhs_h = zero(sp, banks, order)
    for b in range(n):
        cb = real.chi[b]
        if cb.is_zero():
            continue
        term = (kv[b].truncate(order) * compose(cb, {"p": flow.J})).truncate(order)
        if sp.metric[b] < 0:
            term = -term
        rhs_h = rhs_h + term
    res.append(euler_h - rhs_h)
    return res


def closed_form_linear(linreal, order):
    """Flow solution of a momentum-linear model through matrix series.

    With KM[l][m] = sum_contract_b k_b K[l][b][m] and matrix products
    contracted through the metric (for which the metric itself is the
    identity element),

        J = k . sum_m KM^m/(m+1)!  +  q . exp(KM)

    as row vectors; an independent cross-check of the graded integration.
    """
    sp = linreal.space
    n = sp.dim
    banks = ("k", "q")
    kv = identity_vector(sp, banks, "k")
    qv = identity_vector(sp, banks, "q")
    km = []
    for l in range(n):
        row = []
        for m in range(n):
            acc = zero(sp, banks, order)
            for b in range(n):
                coeff = linreal.K[l][b][m]
                if coeff.is_zero():
                    continue
                t = kv[b].truncate(order).scale(coeff)
                if sp.metric[b] < 0:
                    t = -t
                acc = acc + t
            row.append(acc)
        km.append(row)

    eta_mat = [
        [
            one(sp, banks, order).scale(GaussScalar(sp.metric[a])) if a == b else zero(sp, banks, order)
            for b in range(n)
        ]
        for a in range(n)
    ]

    def matmul(x, y):
        out = []
        for a in range(n):
            row = []
            for b in range(n):
                acc = zero(sp, banks, order)
                for c in range(n):
                    if x[a][c].is_zero() or y[c][b].is_zero():
                        continue
                    t = (x[a][c] * y[c][b]).truncate(order)
                    if sp.metric[c] < 0:
                        t = -t
                    acc = acc + t
                row.append(acc)
            out.append(row)
        return out

    exp_km = [[s for s in row] for row in eta_mat]
    ratio = [[s for s in row] for row in eta_mat]
    power = eta_mat
    fact = Fraction(1)
    for m in range(1, order + 1):
        power = matmul(power, km)
        if all(power[a][b].is_zero() for a in range(n) for b in range(n)):
            break
        fact *= m
        cf = GaussScalar(Fraction(1, fact))
        cr = GaussScalar(Fraction(1, fact * (m + 1)))
        exp_km = [
            [exp_km[a][b] + power[a][b].scale(cf) for b in range(n)] for a in range(n)
        ]
        ratio = [
            [ratio[a][b] + power[a][b].scale(cr) for b in range(n)] for a in range(n)
        ]
    J = []
    for mu in range(n):
        acc = zero(sp, banks, order)
        for b in range(n):
            t1 = (kv[b].truncate(order) * ratio[b][mu]).truncate(order)
            t2 = (qv[b].truncate(order) * exp_km[b][mu]).truncate(order)
            t = t1 + t2
            if sp.metric[b] < 0:
                t = -t
            acc = acc + t
        J.append(acc)
    return FlowSolution(sp, linreal.name, order, J, zero(sp, banks, order))


def composition_law(real, order=None, flow=None):
    """Momentum composition D and phase cocycle G of a realization."""
    if flow is None:
        flow = solve_plane_wave_flow(real, order)
    sp = flow.space
    order = flow.order
    n = sp.dim
    K = [c.restrict_zero("q") for c in flow.J]
    Kinv = revert(K, order)
    banks = ("k", "q")
    sub = {
        "k": [c.embed(banks) for c in Kinv],
        "q": identity_vector(sp, banks, "q"),
    }
    D = [compose(c, sub) for c in flow.J]
    if flow.h.is_zero():
        G = zero(sp, banks, order)
    else:
        hk = compose(flow.h, sub)
        G = hk - hk.restrict_zero("q").embed(banks)
    return CompositionLaw(sp, real.name, order, flow.J, flow.h, K, Kinv, D, G)


class XPolynomial:
    """Commutative polynomial in the coordinates with ParamPoly
    coefficients; the value of a star product of monomials."""

    __slots__ = ("space", "terms")

    def __init__(self, space, terms):
        self.space = space
        self.terms = {k: v for k, v in terms.items() if not v.is_zero()}

    @classmethod
    def zero(cls, space):
        return cls(space, {})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            w = out.get(k)
            w = v if w is None else w + v
            if w.is_zero():
                out.pop(k, None)
            else:
                out[k] = w
        return XPolynomial(self.space, out)

    def __sub__(self, other):
        return self + other.scale(GaussScalar(-1))

    def scale(self, value):
        if isinstance(value, GaussScalar):
            return XPolynomial(
                self.space, {k: v.scale(value) for k, v in self.terms.items()}
            )
        return XPolynomial(self.space, {k: v * value for k, v in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def first_term(self):
        if not self.terms:
            return None
        key = min(self.terms, key=lambda k: (sum(k), k))
        return key, self.terms[key]

    def monomial_str(self, key):
        parts = []
        for i, e in enumerate(key):
            if not e:
                continue
            v = "x[%d]" % i
            parts.append(v if e == 1 else "%s^%d" % (v, e))
        return "*".join(parts)

    def as_str(self):
        if not self.terms:
            return "0"
        chunks = []
        for key in sorted(self.terms, key=lambda k: (sum(k), k)):
            p = self.terms[key]
            mono = self.monomial_str(key)
            coeff = p.as_str()
            multi = len(p.terms) > 1
            if not mono:
                chunks.append("(%s)" % coeff if multi else coeff)
            elif p == ParamPoly.one(p.table):
                chunks.append(mono)
            elif multi:
                chunks.append("(%s)*%s" % (coeff, mono))
            elif coeff == "-1":
                chunks.append("-%s" % mono)
            else:
                chunks.append("%s*%s" % (coeff, mono))
        text = chunks[0]
        for c in chunks[1:]:
            text += c if c.startswith("-") else "+" + c
        return text

    def __str__(self):
        return self.as_str()

    def __repr__(self):
        return "XPolynomial(%s)" % self.as_str()

    def __eq__(self, other):
        if not isinstance(other, XPolynomial):
            return NotImplemented
        return self.space == other.space and self.terms == other.terms


def x_monomial(space, key, coeff=ONE):
    if isinstance(coeff, (int, Fraction, GaussScalar)):
        coeff = ParamPoly.const(space.params, coeff)
    return XPolynomial(space, {tuple(key): coeff})


def _factorial_of(key):
    f = 1
    for e in key:
        for j in range(2, e + 1):
            f *= j
    return f


def _enumerate_exponents(dim, max_total):
    def rec(pos, left):
        if pos == dim - 1:
            for e in range(left + 1):
                yield (e,)
            return
        for e in range(left + 1):
            for rest in rec(pos + 1, left - e):
                yield (e,) + rest

    if dim == 0:
        yield ()
        return
    yield from rec(0, max_total)


def star_monomial(claw, A, B):
    """Star product of coordinate monomials x^A * x^B.

    Extracts the coefficient of k^A q^B from the commutative generating
    function; exact whenever the composition law is accurate through
    total degree |A| + |B|.
    """
    sp = claw.space
    n = sp.dim
    A = tuple(A)
    B = tuple(B)
    L = sum(A) + sum(B)
    if claw.order is not INF and claw.order < L:
        raise CompositionError(
            "composition law order %s too low for degree-%d star product"
            % (claw.order, L)
        )
    draised = [
        claw.D[mu].truncate(L).scale(GaussScalar(sp.metric[mu]) * I) for mu in range(n)
    ]
    base = (
        one(sp, ("k", "q"), L)
        if claw.G.is_zero()
        else expand_fn("exp", claw.G.scale(I).truncate(L), order=L)
    )
    powers = [[one(sp, ("k", "q"), L)] for _ in range(n)]
    for mu in range(n):
        for _ in range(L):
            powers[mu].append((powers[mu][-1] * draised[mu]).truncate(L))
    want = A + B
    pref = ONE
    for _ in range(L):
        pref = pref * NEG_I
    # the pairing k.x is metric-contracted, so each k_mu derivative of a
    # plane wave brings down i*eta[mu][mu]*x_mu
    eta_sign = 1
    for mu in range(n):
        if sp.metric[mu] < 0 and (A[mu] + B[mu]) % 2:
            eta_sign = -eta_sign
    pref = pref * GaussScalar(eta_sign * _factorial_of(A) * _factorial_of(B))
    out = {}
    for M in _enumerate_exponents(n, L):
        prod = base
        ok = True
        for mu in range(n):
            e = M[mu]
            if not e:
                continue
            prod = (prod * powers[mu][e]).truncate(L)
            if prod.is_zero():
                ok = False
                break
        if not ok:
            continue
        coeff = prod.terms.get(want)
        if coeff is None:
            continue
        inv_mfact = GaussScalar(Fraction(1, _factorial_of(M)))
        val = coeff.scale(pref * inv_mfact)
        if not val.is_zero():
            out[M] = val
    return XPolynomial(sp, out)


def star_polys(claw, P, Q):
    """Bilinear extension of the monomial star product."""
    acc = XPolynomial.zero(claw.space)
    for A, ca in sorted(P.terms.items()):
        for B, cb in sorted(Q.terms.items()):
            piece = star_monomial(claw, A, B)
            acc = acc + piece.scale(ca * cb)
    return acc


def _vector_diff_discrepancy(lhs, rhs, tag):
    for mu, (a, b) in enumerate(zip(lhs, rhs)):
        diff = a - b
        if not diff.is_zero():
            return first_discrepancy(diff, (tag, mu))
    return None


def pentagon_check(claw, banks, check_name, tag, model=None):
    """Both bracketings of a three-argument composition must agree, and
    the phase shifts must satisfy the matching two-term condition

        G(b1,b2) + G(D(b1,b2),b3) = G(b2,b3) + G(b1,D(b2,b3)).

    The same computation read on momentum banks is associativity of the
    star product and read on tensor legs is coassociativity of the
    coproduct.
    """
    sp = claw.space
    order = claw.order
    b1, b2, b3 = banks
    d12 = [c.rename_banks({"k": b1, "q": b2}).embed(banks) for c in claw.D]
    d23 = [c.rename_banks({"k": b2, "q": b3}).embed(banks) for c in claw.D]
    v1 = identity_vector(sp, banks, b1)
    v3 = identity_vector(sp, banks, b3)
    lhs = [compose(c, {"k": d12, "q": v3}) for c in claw.D]
    rhs = [compose(c, {"k": v1, "q": d23}) for c in claw.D]
    disc = _vector_diff_discrepancy(lhs, rhs, tag)
    name = model or claw.model
    if disc is not None:
        return CheckResult(name, check_name, order, ok=False, discrepancy=disc)
    if not claw.G.is_zero():
        g12 = claw.G.rename_banks({"k": b1, "q": b2}).embed(banks)
        g23 = claw.G.rename_banks({"k": b2, "q": b3}).embed(banks)
        gl = g12 + compose(claw.G, {"k": d12, "q": v3})
        gr = g23 + compose(claw.G, {"k": v1, "q": d23})
        diff = gl - gr
        if not diff.is_zero():
            return CheckResult(
                name,
                check_name,
                order,
                ok=False,
                discrepancy=first_discrepancy(diff, ("G",)),
            )
    return CheckResult(name, check_name, order, ok=True)


def associativity_check(claw, model=None):
    """Two-sided composition of three momenta plus the phase condition."""
    return pentagon_check(claw, ("k1", "k2", "k3"), "associativity", "D", model)
