"""Truncated multivariate momentum series with exact coefficients.

A MomentumSeries lives over a Space (dimension, diagonal metric signature,
parameter table) and one or more named variable banks of ``dim`` momentum
variables each; multi-bank series are how tensor legs and composition
arguments are represented.  Coefficients are ParamPoly, so the full ring is

    Q(i)[params]/(caps)  [[ momenta ]] / (total momentum degree > order)

Truncation is by total momentum degree across all banks, which keeps every
operation (sums, products, substitution of constant-free series, bank
restriction) an exact quotient-ring map.  The one operation that is not is
differentiation, which can pull unknown high-degree information down one
degree; each series therefore carries ``order``, the degree through which
its terms are guaranteed exact.  ``order == math.inf`` marks an exact
polynomial.  Products propagate accuracy with the valuation-aware rule
min(o1 + v2, o2 + v1); derivatives decrement finite orders.

Example:

    >>> sp = Space.euclidean(1, ParamTable.empty())
    >>> k = variable(sp, ("k",), "k", 0)
    >>> geom = expand_fn("inv1p", -k, order=3)   # 1/(1-k) truncated
    >>> print(geom)
    1+k[0]+k[0]^2+k[0]^3
"""
from __future__ import annotations

import math
import operator
from fractions import Fraction

from .errors import CompositionError, IncompatibleSeriesError, ReversionError
from .params import ParamPoly, ParamTable
from .scalars import GaussScalar, ONE

_int_add = operator.add

__all__ = [
    "DEFAULT_ORDER",
    "INF",
    "Space",
    "MomentumSeries",
    "variable",
    "zero",
    "one",
    "const",
    "identity_vector",
    "dot",
    "expand_fn",
    "compose",
    "revert",
    "EXPANSIONS",
]

DEFAULT_ORDER = 6
INF = math.inf


class Space:
    """Dimension, diagonal metric signature and parameter table of a model.

    The metric is its own inverse (entries are +-1), so every contraction
    of a repeated index pair simply weights the plain sum by the signs.
    """

    __slots__ = ("dim", "metric", "params")

    def __init__(self, dim, metric, params):
        metric = tuple(metric)
        if len(metric) != dim or any(s not in (1, -1) for s in metric):
            raise ValueError("metric must be a length-dim tuple of +-1")
        self.dim = dim
        self.metric = metric
        self.params = params

    @classmethod
    def lorentzian(cls, dim, params):
        return cls(dim, (-1,) + (1,) * (dim - 1), params)

    @classmethod
    def euclidean(cls, dim, params):
        return cls(dim, (1,) * dim, params)

    def __eq__(self, other):
        if not isinstance(other, Space):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.metric == other.metric
            and self.params == other.params
        )

    def __hash__(self):
        return hash((self.dim, self.metric, self.params))

    def __repr__(self):
        return "Space(dim=%d, metric=%s, %r)" % (self.dim, self.metric, self.params)


def _min_order(*orders):
    m = min(orders)
    # restore the INF singleton: float arithmetic (inf + valuation) breeds
    # fresh inf objects and identity checks rely on the module constant
    return INF if m == math.inf else m


class MomentumSeries:
    """Immutable truncated series; build through the module constructors."""

    __slots__ = ("space", "banks", "terms", "order")

    def __init__(self, space, banks, terms, order=INF):
        self.space = space
        self.banks = tuple(banks)
        self.terms = terms  # canonical: no zero polys, degrees <= order
        self.order = order

    # ---- helpers ----

    @property
    def width(self):
        return self.space.dim * len(self.banks)

    def _bank_slice(self, bank):
        pos = self.banks.index(bank)
        d = self.space.dim
        return pos * d, (pos + 1) * d

    def _check(self, other):
        if self.space != other.space or self.banks != other.banks:
            raise IncompatibleSeriesError(
                "series over %s/%s and %s/%s cannot be combined"
                % (self.space, self.banks, other.space, other.banks)
            )

    def is_zero(self):
        return not self.terms

    def valuation(self):
        """Minimal total momentum degree present (INF for the zero series)."""
        return min((sum(k) for k in self.terms), default=INF)

    def bank_degree(self, key, bank):
        lo, hi = self._bank_slice(bank)
        return sum(key[lo:hi])

    def constant_poly(self):
        """Coefficient of the momentum-free monomial."""
        zero_key = (0,) * self.width
        return self.terms.get(zero_key, ParamPoly.zero(self.space.params))

    # ---- structural ops ----

    def truncate(self, order):
        if order >= self.order:
            # never claim more accuracy than we have
            return self
        terms = {k: p for k, p in self.terms.items() if sum(k) <= order}
        return MomentumSeries(self.space, self.banks, terms, order)

    def with_order(self, order):
        """Assert-by-construction override of the accuracy bound (trusted)."""
        return MomentumSeries(
            self.space,
            self.banks,
            {k: p for k, p in self.terms.items() if sum(k) <= order},
            order,
        )

    def map_coeffs(self, fn):
        out = {}
        for k, p in self.terms.items():
            q = fn(p)
            if not q.is_zero():
                out[k] = q
        return MomentumSeries(self.space, self.banks, out, self.order)

    def deformation_limit(self):
        """Send every deformation parameter to zero."""
        return self.map_coeffs(lambda p: p.deformation_limit())

    # ---- ring ops ----

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussScalar)):
            other = const(self.space, self.banks, other)
        self._check(other)
        order = _min_order(self.order, other.order)
        out = dict(self.terms)
        for k, p in other.terms.items():
            acc = out.get(k)
            p = p if acc is None else acc + p
            if p.is_zero():
                out.pop(k, None)
            else:
                out[k] = p
        if order is not INF:
            out = {k: p for k, p in out.items() if sum(k) <= order}
        return MomentumSeries(self.space, self.banks, out, order)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return MomentumSeries(
            self.space, self.banks, {k: -p for k, p in self.terms.items()}, self.order
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussScalar, ParamPoly)):
            return self.scale(other)
        self._check(other)
        order = _min_order(
            self.order + other.valuation(), other.order + self.valuation()
        )
        if math.isnan(order):  # inf + (-inf) never happens; guard anyway
            order = INF
        by_deg = sorted(
            ((sum(k), k, p) for k, p in other.terms.items()), key=lambda t: t[0]
        )
        raw = {}
        for k1, p1 in self.terms.items():
            rem = order - sum(k1)
            for d2, k2, p2 in by_deg:
                if d2 > rem:
                    break
                key = tuple(map(_int_add, k1, k2))
                prod = p1 * p2
                if prod.is_zero():
                    continue
                acc = raw.get(key)
                if acc is None:
                    raw[key] = prod
                else:
                    acc = acc + prod
                    if acc.is_zero():
                        del raw[key]
                    else:
                        raw[key] = acc
        return MomentumSeries(self.space, self.banks, raw, order)

    __rmul__ = __mul__

    def scale(self, value):
        if isinstance(value, ParamPoly):
            if value.is_zero():
                return zero(self.space, self.banks, self.order)
            out = {}
            for k, p in self.terms.items():
                q = p * value
                if not q.is_zero():
                    out[k] = q
            return MomentumSeries(self.space, self.banks, out, self.order)
        value = value if isinstance(value, GaussScalar) else GaussScalar(value)
        if value.is_zero():
            return zero(self.space, self.banks, self.order)
        return MomentumSeries(
            self.space,
            self.banks,
            {k: p.scale(value) for k, p in self.terms.items()},
            self.order,
        )

    # ---- calculus / bank plumbing ----

    def derivative(self, bank, idx):
        """Plain partial derivative in one bank variable (no metric weight)."""
        lo, _ = self._bank_slice(bank)
        col = lo + idx
        out = {}
        for k, p in self.terms.items():
            e = k[col]
            if not e:
                continue
            nk = k[:col] + (e - 1,) + k[col + 1 :]
            q = p.scale(GaussScalar(e))
            acc = out.get(nk)
            out[nk] = q if acc is None else acc + q
        order = self.order if self.order is INF else self.order - 1
        return MomentumSeries(self.space, self.banks, out, order)

    def restrict_zero(self, bank):
        """Set one bank's variables to zero and drop the bank."""
        lo, hi = self._bank_slice(bank)
        out = {}
        for k, p in self.terms.items():
            if any(k[lo:hi]):
                continue
            out[k[:lo] + k[hi:]] = p
        return MomentumSeries(
            self.space, tuple(b for b in self.banks if b != bank), out, self.order
        )

    def rename_banks(self, mapping):
        banks = tuple(mapping.get(b, b) for b in self.banks)
        if len(set(banks)) != len(banks):
            raise IncompatibleSeriesError("bank rename collides")
        return MomentumSeries(self.space, banks, dict(self.terms), self.order)

    def embed(self, banks):
        """View this series over a larger ordered bank tuple."""
        banks = tuple(banks)
        d = self.space.dim
        positions = []
        for b in self.banks:
            if b not in banks:
                raise IncompatibleSeriesError("bank %r missing from target" % b)
            positions.append(banks.index(b))
        out = {}
        width = d * len(banks)
        for k, p in self.terms.items():
            nk = [0] * width
            for src_pos, dst_pos in enumerate(positions):
                for i in range(d):
                    nk[dst_pos * d + i] = k[src_pos * d + i]
            out[tuple(nk)] = p
        return MomentumSeries(self.space, banks, out, self.order)

    def bank_degree_part(self, bank, deg):
        lo, hi = self._bank_slice(bank)
        out = {k: p for k, p in self.terms.items() if sum(k[lo:hi]) == deg}
        return MomentumSeries(self.space, self.banks, out, self.order)

    # ---- comparison / reporting ----

    def __eq__(self, other):
        if not isinstance(other, MomentumSeries):
            return NotImplemented
        return (
            self.space == other.space
            and self.banks == other.banks
            and self.terms == other.terms
        )

    def __hash__(self):
        raise TypeError("MomentumSeries is not hashable")

    def first_term(self):
        """Graded-lex smallest term, or None; used for discrepancy reports."""
        if not self.terms:
            return None
        key = min(self.terms, key=lambda k: (sum(k), k))
        return key, self.terms[key]

    def monomial_str(self, key):
        d = self.space.dim
        parts = []
        for pos, bank in enumerate(self.banks):
            for i in range(d):
                e = key[pos * d + i]
                if not e:
                    continue
                v = "%s[%d]" % (bank, i)
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
        o = "inf" if self.order is INF else str(self.order)
        return "MomentumSeries(%s; order=%s)" % (self.as_str(), o)


# ---- constructors ----


def zero(space, banks, order=INF):
    return MomentumSeries(space, banks, {}, order)


def const(space, banks, value, order=INF):
    if isinstance(value, ParamPoly):
        poly = value
    else:
        poly = ParamPoly.const(space.params, value)
    if poly.is_zero():
        return zero(space, banks, order)
    width = space.dim * len(banks)
    return MomentumSeries(space, banks, {(0,) * width: poly}, order)


def one(space, banks, order=INF):
    return const(space, banks, ONE, order)


def variable(space, banks, bank, idx, order=INF):
    banks = tuple(banks)
    pos = banks.index(bank)
    width = space.dim * len(banks)
    col = pos * space.dim + idx
    key = tuple(1 if j == col else 0 for j in range(width))
    return MomentumSeries(
        space, banks, {key: ParamPoly.one(space.params)}, order
    )


def identity_vector(space, banks, bank, order=INF):
    return [variable(space, banks, bank, i, order) for i in range(space.dim)]


def dot(space, vec_a, vec_b):
    """Metric contraction sum_i eta_ii a_i b_i of two component vectors.

    Components may be MomentumSeries or ParamPoly (mixed is fine as long
    as one side fixes the series type).
    """
    acc = None
    for s, a, b in zip(space.metric, vec_a, vec_b):
        term = a * b
        term = term.scale(GaussScalar(s)) if s < 0 else term
        acc = term if acc is None else acc + term
    return acc


# ---- named expansions ----


def _exp_coeffs():
    c, j = Fraction(1), 0
    while True:
        yield GaussScalar(c)
        j += 1
        c /= j


def _log1p_coeffs():
    yield GaussScalar(0)
    j = 1
    while True:
        yield GaussScalar(Fraction((-1) ** (j + 1), j))
        j += 1


def _sqrt1p_coeffs():
    # binomial(1/2, j)
    c = Fraction(1)
    j = 0
    while True:
        yield GaussScalar(c)
        c = c * (Fraction(1, 2) - j) / (j + 1)
        j += 1


def _inv1p_coeffs():
    j = 0
    while True:
        yield GaussScalar((-1) ** j)
        j += 1


def _expm1_over_coeffs():
    # (e^u - 1)/u
    c, j = Fraction(1), 1
    while True:
        yield GaussScalar(c)
        j += 1
        c /= j


def _log1p_over_coeffs():
    # ln(1+u)/u
    j = 0
    while True:
        yield GaussScalar(Fraction((-1) ** j, j + 1))
        j += 1


EXPANSIONS = {
    "exp": _exp_coeffs,
    "log1p": _log1p_coeffs,
    "ln1p": _log1p_coeffs,
    "sqrt1p": _sqrt1p_coeffs,
    "inv1p": _inv1p_coeffs,
    "expm1_over": _expm1_over_coeffs,
    "log1p_over": _log1p_over_coeffs,
}


def expand_fn(name, u, order=None):
    """Compose a named Maclaurin expansion with a constant-free series u.

    The constant term of u must vanish in the combined momentum+parameter
    grading.  ``order`` bounds the momentum degree of the result; it may be
    omitted when u's own accuracy bound is finite.
    """
    gen = EXPANSIONS.get(name)
    if gen is None:
        raise KeyError("unknown expansion %r (have %s)" % (name, sorted(EXPANSIONS)))
    if not u.constant_poly().constant_term().is_zero():
        raise CompositionError("expansion argument has a nonzero constant term")
    param_only = u.order is INF and all(sum(k) == 0 for k in u.terms)
    if order is None:
        if u.order is INF and not param_only:
            raise CompositionError(
                "expansion of an exact series needs an explicit order"
            )
        order = INF if param_only else u.order
    if u.order is not INF and not u.constant_poly().is_zero():
        raise CompositionError(
            "constant-in-momentum but parameter-dependent argument must be exact"
        )
    target = _min_order(order, u.order) if not param_only else INF
    coeffs = gen()
    acc = const(u.space, u.banks, next(coeffs), order=target)
    power = one(u.space, u.banks)
    cap = u.space.params.cap
    exact_end = False
    j = 0
    limit = (target if target is not INF else 0) + cap + 1
    while j < limit:
        power = (power * u).truncate(target)
        j += 1
        if power.is_zero():
            exact_end = True
            break
        acc = acc + power.scale(next(coeffs))
    if param_only and exact_end:
        # the sum terminated inside the parameter quotient: result is exact
        return acc.with_order(INF)
    return acc


# ---- substitution / reversion ----


def compose(f, subs):
    """Substitute every bank of f.

    subs maps each bank name of f to a list of ``dim`` series; all
    replacement series must share one space and bank tuple and must have
    no momentum-free term at all.  Returns a series over the replacement
    banks, accurate through min of all accuracy bounds.
    """
    missing = [b for b in f.banks if b not in subs]
    if missing:
        raise CompositionError("no substitution for banks %s" % (missing,))
    sample = subs[f.banks[0]][0]
    space, banks = sample.space, sample.banks
    if space != f.space:
        raise CompositionError("substitution changes the space")
    order = f.order
    for b in f.banks:
        gs = subs[b]
        if len(gs) != space.dim:
            raise CompositionError("bank %r needs %d components" % (b, space.dim))
        for g in gs:
            if g.space != space or g.banks != banks:
                raise CompositionError("replacement series disagree on banks")
            if not g.constant_poly().is_zero():
                raise CompositionError(
                    "replacement for bank %r has a momentum-free term" % b
                )
            order = _min_order(order, g.order)
    d = space.dim
    flat = []
    for b in f.banks:
        flat.extend(subs[b])
    powers = {}

    def power(col, e):
        got = powers.get((col, e))
        if got is None:
            if e == 1:
                got = flat[col].truncate(order)
            else:
                got = (power(col, e - 1) * flat[col]).truncate(order)
            powers[(col, e)] = got
        return got

    out = zero(space, banks, order)
    for key, poly in sorted(f.terms.items(), key=lambda kv: (sum(kv[0]), kv[0])):
        if sum(key) > order:
            continue
        prod = None
        for col, e in enumerate(key):
            if not e:
                continue
            fac = power(col, e)
            prod = fac if prod is None else (prod * fac).truncate(order)
            if prod.is_zero():
                break
        if prod is None:
            out = out + const(space, banks, poly, order)
        elif not prod.is_zero():
            out = out + prod.scale(poly)
    return out.truncate(order)


def revert(k_vec, order=None):
    """Invert a momentum map k -> K(k) whose linear part is the identity
    modulo parameter-positive corrections.

    Returns the unique vector X with K(X) = identity through the requested
    order (and then X is automatically a two-sided inverse).
    """
    sample = k_vec[0]
    space, banks = sample.space, sample.banks
    if len(banks) != 1:
        raise ReversionError("reversion expects a single-bank map")
    bank = banks[0]
    if order is None:
        order = min((c.order for c in k_vec), default=INF)
        if order is INF:
            raise ReversionError("reversion of an exact map needs an explicit order")
    ident = identity_vector(space, banks, bank)
    resid = []  # R = K - id, must have combined valuation >= 2
    for i, comp in enumerate(k_vec):
        r = (comp - ident[i]).truncate(order)
        if not r.constant_poly().is_zero():
            raise ReversionError("map has a momentum-free term")
        lin = r.bank_degree_part(bank, 1)
        for key, poly in lin.terms.items():
            if not poly.constant_term().is_zero():
                raise ReversionError("linear part is not the identity")
        resid.append(r)
    guess = [c.truncate(order) for c in ident]
    rounds = (order if order is not INF else 0) + space.params.cap + 2
    for _ in range(rounds):
        sub = {bank: guess}
        step = [
            (ident[i].truncate(order) - compose(resid[i], sub)).truncate(order)
            for i in range(space.dim)
        ]
        if all((step[i] - guess[i]).is_zero() for i in range(space.dim)):
            return step
        guess = step
    raise ReversionError("reversion did not stabilize (order %s)" % order)
