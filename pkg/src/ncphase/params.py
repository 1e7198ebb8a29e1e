"""Deformation parameters: polynomial coefficients over a fixed symbol table.

Arithmetic happens in the quotient ring

    Q(i)[params] / (total degree > cap)  [ / (null relation) ]

so truncation by parameter degree is an exact ring operation, not an
approximation.  The optional null relation imposes a*a = 0 for a declared
parameter vector (light-like deformations): monomials are canonically
reduced by eliminating the squared pivot symbol, which is ordinary
division by the single quadratic a*a, hence confluent.
"""
from __future__ import annotations

import operator
from fractions import Fraction

from .errors import IncompatibleSeriesError
from .scalars import GaussScalar, ONE, ZERO

_int_add = operator.add

__all__ = ["ParamTable", "ParamPoly"]


class ParamTable:
    """Declares the parameter symbols, the degree cap and an optional null rule.

    Instances are immutable and shared by every polynomial/series of a model.
    """

    __slots__ = ("names", "cap", "null_pivot", "null_replacement")

    def __init__(self, names=(), cap=12, null_pivot=None, null_replacement=None):
        self.names = tuple(names)
        self.cap = int(cap)
        self.null_pivot = null_pivot
        # replacement for names[null_pivot]**2, as {exponent tuple: GaussScalar}
        self.null_replacement = (
            None if null_replacement is None else dict(null_replacement)
        )

    # ---- constructors ----

    @classmethod
    def empty(cls, cap=12):
        return cls((), cap)

    @classmethod
    def single(cls, name, cap=12):
        return cls((name,), cap)

    @classmethod
    def vector(cls, name, dim, cap=12, null_metric=None):
        """n symbols name0..name{n-1}; with null_metric, impose a.a = 0.

        null_metric is the diagonal signature tuple; the pivot square
        (index 0) is rewritten as -eta_00 * sum_{i>0} eta_ii a_i^2.
        """
        names = tuple("%s%d" % (name, i) for i in range(dim))
        if null_metric is None:
            return cls(names, cap)
        if len(null_metric) != dim:
            raise ValueError("null metric length mismatch")
        s0 = null_metric[0]
        repl = {}
        for i in range(1, dim):
            key = tuple(2 if j == i else 0 for j in range(dim))
            repl[key] = GaussScalar(Fraction(-null_metric[i], s0))
        return cls(names, cap, null_pivot=0, null_replacement=repl)

    @classmethod
    def matrix(cls, name, dim, cap=6):
        """dim*dim symbols name00..name{n-1}{n-1} (row-major)."""
        names = tuple(
            "%s%d%d" % (name, i, j) for i in range(dim) for j in range(dim)
        )
        return cls(names, cap)

    # ---- basics ----

    def index(self, sym):
        return self.names.index(sym)

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        if not isinstance(other, ParamTable):
            return NotImplemented
        return (
            self.names == other.names
            and self.cap == other.cap
            and self.null_pivot == other.null_pivot
            and self.null_replacement == other.null_replacement
        )

    def __hash__(self):
        return hash((self.names, self.cap, self.null_pivot))

    def __repr__(self):
        null = "" if self.null_pivot is None else ", null"
        return "ParamTable(%s, cap=%d%s)" % (",".join(self.names) or "-", self.cap, null)

    # ---- reduction ----

    def reduce_terms(self, terms):
        """Canonicalize a raw {exponents: coeff} dict in the quotient ring."""
        if self.null_pivot is None:
            out = {}
            for key, c in terms.items():
                if c.is_zero() or sum(key) > self.cap:
                    continue
                out[key] = c
            return out
        piv = self.null_pivot
        out = {}
        work = list(terms.items())
        while work:
            key, c = work.pop()
            if c.is_zero() or sum(key) > self.cap:
                continue
            if key[piv] >= 2:
                base = list(key)
                base[piv] -= 2
                for rkey, rc in self.null_replacement.items():
                    nk = tuple(b + r for b, r in zip(base, rkey))
                    work.append((nk, c * rc))
                continue
            acc = out.get(key)
            c = c if acc is None else acc + c
            if c.is_zero():
                out.pop(key, None)
            else:
                out[key] = c
        return out


class ParamPoly:
    """Polynomial in the declared parameters with GaussScalar coefficients."""

    __slots__ = ("table", "terms")

    def __init__(self, table, terms):
        self.table = table
        self.terms = terms  # trusted canonical dict; use constructors below

    # ---- constructors ----

    @classmethod
    def zero(cls, table):
        return cls(table, {})

    @classmethod
    def const(cls, table, value):
        value = _as_scalar(value)
        if value.is_zero():
            return cls(table, {})
        return cls(table, {(0,) * len(table): value})

    @classmethod
    def one(cls, table):
        return cls.const(table, ONE)

    @classmethod
    def symbol(cls, table, name, coeff=ONE):
        idx = table.index(name)
        key = tuple(1 if i == idx else 0 for i in range(len(table)))
        return cls(table, table.reduce_terms({key: _as_scalar(coeff)}))

    @classmethod
    def from_terms(cls, table, raw):
        return cls(table, table.reduce_terms(dict(raw)))

    # ---- predicates / accessors ----

    def is_zero(self):
        return not self.terms

    def constant_term(self):
        """Coefficient of the parameter-free monomial."""
        return self.terms.get((0,) * len(self.table), ZERO)

    def is_const(self):
        return not self.terms or (
            len(self.terms) == 1 and (0,) * len(self.table) in self.terms
        )

    def degree(self):
        return max((sum(k) for k in self.terms), default=0)

    def min_degree(self):
        return min((sum(k) for k in self.terms), default=0)

    def deformation_limit(self):
        """The polynomial with every parameter sent to zero."""
        return ParamPoly.const(self.table, self.constant_term())

    # ---- arithmetic ----

    def _check(self, other):
        if self.table != other.table:
            raise IncompatibleSeriesError("parameter tables differ")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussScalar)):
            other = ParamPoly.const(self.table, other)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            acc = out.get(key)
            c = c if acc is None else acc + c
            if c.is_zero():
                out.pop(key, None)
            else:
                out[key] = c
        return ParamPoly(self.table, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return ParamPoly(self.table, {k: -c for k, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussScalar)):
            return self.scale(other)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        self._check(other)
        table = self.table
        cap = table.cap
        rhs = [(k, sum(k), c) for k, c in other.terms.items()]
        raw = {}
        get = raw.get
        for k1, c1 in self.terms.items():
            d1 = sum(k1)
            for k2, d2, c2 in rhs:
                if d1 + d2 > cap:
                    continue
                key = tuple(map(_int_add, k1, k2))
                c = c1 * c2
                acc = get(key)
                raw[key] = c if acc is None else acc + c
        if table.null_pivot is not None:
            return ParamPoly(table, table.reduce_terms(raw))
        # cap already enforced above; only zero cancellations need pruning
        return ParamPoly(table, {k: c for k, c in raw.items() if not c.is_zero()})

    __rmul__ = __mul__

    def scale(self, value):
        value = _as_scalar(value)
        if value.is_zero():
            return ParamPoly.zero(self.table)
        return ParamPoly(
            self.table, {k: c * value for k, c in self.terms.items()}
        )

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussScalar)):
            other = ParamPoly.const(self.table, other)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __hash__(self):
        return hash((self.table, tuple(sorted(self.terms.items(), key=_term_key))))

    # ---- printing ----

    def monomial_str(self, key):
        parts = []
        for name, e in zip(self.table.names, key):
            if e == 0:
                continue
            parts.append(name if e == 1 else "%s^%d" % (name, e))
        return "*".join(parts)

    def as_str(self):
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms, key=_term_key):
            c = self.terms[key]
            mono = self.monomial_str(key)
            if not mono:
                parts.append(c.as_str())
            elif c.is_one():
                parts.append(mono)
            elif c == GaussScalar(-1):
                parts.append("-%s" % mono)
            else:
                parts.append("%s*%s" % (c.as_str(), mono))
        text = parts[0]
        for p in parts[1:]:
            text += p if p.startswith("-") else "+" + p
        return text

    def __repr__(self):
        return "ParamPoly(%s)" % self.as_str()


def _term_key(item):
    key = item[0] if isinstance(item, tuple) and item and isinstance(item[0], tuple) else item
    return (sum(key), key)


def _as_scalar(value):
    if isinstance(value, GaussScalar):
        return value
    if isinstance(value, (int, Fraction)):
        return GaussScalar(value)
    raise TypeError("expected a scalar, got %r" % (value,))
