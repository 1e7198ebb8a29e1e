"""Normal-ordered phase-space operators, with tensor slots.

An Operator is a finite sum  sum_A  x^A s_A(p)  with every coordinate
factor written to the left of every momentum factor; s_A are
MomentumSeries.  With several slots the same container represents
elements of the tensor product algebra: x-multi-indices get one block
per slot and the series run over one momentum bank per slot, so

    terms[(A1 .. As)] = S(p_1, ..., p_s)   ~   (x^A1 ... ) (x) (x^A2 ...)

Products reorder momenta past coordinates slot by slot.  The whole
algebra is generated by the single relation [p_mu, x_nu] = -i eta_munu,
from which  s(p) x_nu = x_nu s(p) - i eta_nunu ds/dp_nu  and its
multi-index iterate with binomial weights.

Coordinate degree is hard-capped: exceeding ``xcap`` raises instead of
silently truncating, because identity checks rely on every retained
x-monomial being exact.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .errors import IncompatibleSeriesError, XDegreeCapError
from .params import ParamPoly
from .scalars import GaussScalar, I, ONE
from .series import INF, MomentumSeries, const, one, variable, zero

__all__ = ["DEFAULT_XCAP", "Operator", "normal_order_word", "commutator"]

DEFAULT_XCAP = 12

# (-i)^m cycle
_NEG_I_POW = (GaussScalar(1), GaussScalar(0, -1), GaussScalar(-1), GaussScalar(0, 1))


class Operator:
    __slots__ = ("space", "banks", "terms", "xcap")

    def __init__(self, space, banks, terms, xcap=DEFAULT_XCAP):
        self.space = space
        self.banks = tuple(banks)
        self.terms = terms  # canonical: no zero series
        self.xcap = xcap

    # ---- constructors ----

    @classmethod
    def zero(cls, space, banks=("p",), xcap=DEFAULT_XCAP):
        return cls(space, banks, {}, xcap)

    @classmethod
    def identity(cls, space, banks=("p",), xcap=DEFAULT_XCAP):
        width = space.dim * len(banks)
        return cls(
            space, banks, {(0,) * width: one(space, tuple(banks))}, xcap
        )

    @classmethod
    def from_series(cls, series, xcap=DEFAULT_XCAP):
        width = series.space.dim * len(series.banks)
        if series.is_zero():
            return cls(series.space, series.banks, {}, xcap)
        return cls(series.space, series.banks, {(0,) * width: series}, xcap)

    @classmethod
    def coordinate(cls, space, idx, banks=("p",), slot=0, xcap=DEFAULT_XCAP):
        banks = tuple(banks)
        width = space.dim * len(banks)
        col = slot * space.dim + idx
        key = tuple(1 if j == col else 0 for j in range(width))
        return cls(space, banks, {key: one(space, banks)}, xcap)

    @classmethod
    def momentum(cls, space, idx, banks=("p",), slot=0, xcap=DEFAULT_XCAP):
        banks = tuple(banks)
        width = space.dim * len(banks)
        s = variable(space, banks, banks[slot], idx)
        return cls(space, banks, {(0,) * width: s}, xcap)

    @classmethod
    def from_terms(cls, space, banks, raw, xcap=DEFAULT_XCAP):
        terms = {k: s for k, s in raw.items() if not s.is_zero()}
        return cls(space, banks, terms, xcap)

    # ---- basics ----

    @property
    def slots(self):
        return len(self.banks)

    def is_zero(self):
        return not self.terms

    def _check(self, other):
        if self.space != other.space or self.banks != other.banks:
            raise IncompatibleSeriesError("operators live on different algebras")

    def x_degree(self):
        return max((sum(k) for k in self.terms), default=0)

    def truncate(self, order):
        out = {}
        for k, s in self.terms.items():
            t = s.truncate(order)
            if not t.is_zero():
                out[k] = t
        return Operator(self.space, self.banks, out, self.xcap)

    def map_series(self, fn):
        out = {}
        for k, s in self.terms.items():
            t = fn(s)
            if not t.is_zero():
                out[k] = t
        return Operator(self.space, self.banks, out, self.xcap)

    def min_series_order(self):
        return min((s.order for s in self.terms.values()), default=INF)

    # ---- ring ops ----

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussScalar)):
            other = Operator.from_series(
                const(self.space, self.banks, other), self.xcap
            )
        self._check(other)
        out = dict(self.terms)
        for k, s in other.terms.items():
            acc = out.get(k)
            s = s if acc is None else acc + s
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return Operator(self.space, self.banks, out, self.xcap)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Operator(
            self.space, self.banks, {k: -s for k, s in self.terms.items()}, self.xcap
        )

    def scale(self, value):
        out = {}
        for k, s in self.terms.items():
            t = s.scale(value)
            if not t.is_zero():
                out[k] = t
        return Operator(self.space, self.banks, out, self.xcap)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussScalar, ParamPoly)):
            return self.scale(other)
        if isinstance(other, MomentumSeries):
            other = Operator.from_series(other, self.xcap)
        self._check(other)
        d = self.space.dim
        metric = self.space.metric
        banks = self.banks
        out = {}
        for xk2, s2 in other.terms.items():
            hot = [v for v, e in enumerate(xk2) if e]
            for xk1, s1 in self.terms.items():
                self._emit_product(out, xk1, s1, xk2, s2, hot, d, metric, banks)
        terms = {k: s for k, s in out.items() if not s.is_zero()}
        return Operator(self.space, banks, terms, self.xcap)

    __rmul__ = __mul__

    def _emit_product(self, out, xk1, s1, xk2, s2, hot, d, metric, banks):
        # all ways of commuting s1's momenta past x^{xk2}
        stack = [(0, xk2, s1, ONE)]
        while stack:
            pos, xk2_left, ds1, coeff = stack.pop()
            if pos == len(hot):
                term = (ds1 * s2).scale(coeff)
                if term.is_zero():
                    continue
                key = tuple(a + b for a, b in zip(xk1, xk2_left))
                if sum(key) > self.xcap:
                    raise XDegreeCapError(
                        "coordinate degree %d exceeds cap %d" % (sum(key), self.xcap)
                    )
                acc = out.get(key)
                out[key] = term if acc is None else acc + term
                continue
            v = hot[pos]
            e = xk2[v]
            slot, idx = divmod(v, d)
            sign = metric[idx]
            cur = ds1
            binom = 1
            for beta in range(e + 1):
                if beta:
                    binom = binom * (e - beta + 1) // beta
                    cur = cur.derivative(banks[slot], idx)
                if cur.is_zero():
                    break  # higher derivatives vanish too
                c = coeff * _NEG_I_POW[beta % 4] * GaussScalar(binom * (sign ** beta))
                nk = xk2_left[:v] + (e - beta,) + xk2_left[v + 1 :]
                stack.append((pos + 1, nk, cur, c))

    def __eq__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        return (
            self.space == other.space
            and self.banks == other.banks
            and self.terms == other.terms
        )

    def __hash__(self):
        raise TypeError("Operator is not hashable")

    # ---- actions ----

    def project_to_function(self):
        """Apply to the constant function 1: keep the momentum-free part."""
        out = {}
        for k, s in self.terms.items():
            c = s.constant_poly()
            if not c.is_zero():
                # the momentum-free coefficient is exact once order >= 0
                o = INF if s.order >= 0 else s.order
                out[k] = const(self.space, self.banks, c, order=o)
        return Operator(self.space, self.banks, out, self.xcap)

    def is_function(self):
        """True when every momentum series is momentum-free."""
        return all(
            all(sum(key) == 0 for key in s.terms) for s in self.terms.values()
        )

    def act(self, f):
        """Module action A |> f for f a coordinate polynomial (as Operator)."""
        if not f.is_function():
            raise IncompatibleSeriesError("act expects a coordinate polynomial")
        return (self * f).project_to_function()

    # ---- reporting ----

    def first_term(self):
        if not self.terms:
            return None
        key = min(self.terms, key=lambda k: (sum(k), k))
        return key, self.terms[key]

    def x_monomial_str(self, key):
        d = self.space.dim
        sections = []
        for slot in range(self.slots):
            parts = []
            for i in range(d):
                e = key[slot * d + i]
                if not e:
                    continue
                v = "x[%d]" % i
                parts.append(v if e == 1 else "%s^%d" % (v, e))
            sections.append("*".join(parts) or "1")
        return " (x) ".join(sections) if self.slots > 1 else sections[0]

    def as_str(self):
        if not self.terms:
            return "0"
        chunks = []
        for key in sorted(self.terms, key=lambda k: (sum(k), k)):
            mono = self.x_monomial_str(key)
            chunks.append("[%s] * (%s)" % (mono, self.terms[key].as_str()))
        return "  +  ".join(chunks)

    def __str__(self):
        return self.as_str()

    def __repr__(self):
        return "Operator(%s)" % self.as_str()


def commutator(a, b):
    return a * b - b * a


def operator_exp(op, order, max_terms=None):
    """exp(op) as a finite normal-ordered sum, truncating momentum degree.

    The exponent must be nilpotent under the truncation (positive combined
    momentum/parameter valuation, or coordinate degree that runs into the
    cap); otherwise this raises after a safety bound.
    """
    acc = Operator.identity(op.space, op.banks, op.xcap)
    term = acc
    bound = max_terms
    if bound is None:
        bound = (order if order is not INF else 0) + op.space.params.cap + 2
    for m in range(1, bound + 1):
        term = (term * op).truncate(order).scale(GaussScalar(Fraction(1, m)))
        if term.is_zero():
            return acc
        acc = acc + term
    raise XDegreeCapError("exponential did not terminate within %d terms" % bound)


def operator_inverse(op, order):
    """Geometric-series inverse about the identity, verified by residual."""
    ident = Operator.identity(op.space, op.banks, op.xcap)
    rest = (op - ident).truncate(order)
    acc = ident
    term = ident
    bound = (order if order is not INF else 0) + op.space.params.cap + 2
    for m in range(1, bound + 1):
        term = (term * rest).truncate(order)
        if term.is_zero():
            break
        acc = acc + term.scale(GaussScalar((-1) ** m))
    else:
        raise XDegreeCapError("inverse did not terminate within %d terms" % bound)
    resid = ((op * acc) - ident).truncate(min(order, acc.min_series_order()))
    if not resid.is_zero():
        raise XDegreeCapError("inverse residual is nonzero; operator not invertible")
    return acc


def normal_order_word(space, word, banks=("p",), xcap=DEFAULT_XCAP):
    """Canonical normal-ordered form of a word in x's and p's.

    ``word`` is a sequence of ("x", idx) / ("p", idx) pairs, read left to
    right as an operator product.  The result is independent of how the
    rewriting is associated because it is computed by the (associative)
    Operator product.
    """
    acc = Operator.identity(space, banks, xcap)
    for kind, idx in word:
        if kind == "x":
            g = Operator.coordinate(space, idx, banks, 0, xcap)
        elif kind == "p":
            g = Operator.momentum(space, idx, banks, 0, xcap)
        else:
            raise ValueError("word letters are ('x', i) or ('p', i)")
        acc = acc * g
    return acc
