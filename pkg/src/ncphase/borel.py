"""Two-generator solvable algebra: exact PBW arithmetic and the twist cocycle.

The Jordanian-type twists live in (tensor powers of) the enveloping
algebra of the two-dimensional solvable Lie algebra [D, A] = iA.  In the
PBW basis A^j D^m multiplication is a finite sum,

    (A^j1 D^m1)(A^j2 D^m2)
        = A^(j1+j2) sum_r C(m1, r) (i j2)^(m1-r) D^(r+m2),

because D^m A^j = A^j (D + ij)^m, so elements with finitely many terms
stay finitely presented and the 2-cocycle property of a twist can be
checked by literal coefficient comparison, independent of any momentum
realization.

Truncation is by total A-degree across tensor legs.  That filtration is
multiplicative and the coproduct splits A-degree without changing the
total, so the capped check equals the degree-capped slice of the exact
identity.  D-degree needs no cap: every exponent term used here carries
at least one power of A per factor, which bounds the number of factors
and with it the D-degree.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .errors import CompositionError
from .reports import CheckResult, Discrepancy
from .scalars import GaussScalar, ONE

__all__ = [
    "BorelElement",
    "borel_exp",
    "jordanian_borel_exponent",
    "jordanian_borel_twist",
    "cocycle_check_borel",
]

DEFAULT_ACAP = 6


@lru_cache(maxsize=None)
def _leg_product(j1, m1, j2, m2):
    """PBW product on one leg as a tuple of (j, m, coeff)."""
    out = []
    j = j1 + j2
    for r in range(m1 + 1):
        e = m1 - r
        val = comb(m1, r) * j2**e
        if not val:
            continue
        q = e % 4
        if q == 0:
            c = GaussScalar(val)
        elif q == 1:
            c = GaussScalar(0, val)
        elif q == 2:
            c = GaussScalar(-val)
        else:
            c = GaussScalar(0, -val)
        out.append((j, r + m2, c))
    return tuple(out)


class BorelElement:
    """Element of the 2-generator algebra on one or more tensor legs."""

    __slots__ = ("legs", "acap", "terms")

    def __init__(self, legs, acap, terms):
        self.legs = legs
        self.acap = acap
        self.terms = terms  # {((j, m), ...): GaussScalar}, trusted canonical

    # ---- constructors ----

    @classmethod
    def zero(cls, legs=2, acap=DEFAULT_ACAP):
        return cls(legs, acap, {})

    @classmethod
    def identity(cls, legs=2, acap=DEFAULT_ACAP):
        return cls(legs, acap, {((0, 0),) * legs: ONE})

    @classmethod
    def generator_a(cls, leg, legs=2, acap=DEFAULT_ACAP):
        key = tuple((1, 0) if i == leg else (0, 0) for i in range(legs))
        return cls(legs, acap, {key: ONE})

    @classmethod
    def generator_d(cls, leg, legs=2, acap=DEFAULT_ACAP):
        key = tuple((0, 1) if i == leg else (0, 0) for i in range(legs))
        return cls(legs, acap, {key: ONE})

    @classmethod
    def from_terms(cls, legs, acap, raw):
        terms = {}
        for key, c in raw.items():
            if c.is_zero() or sum(j for j, _ in key) > acap:
                continue
            acc = terms.get(key)
            c = c if acc is None else acc + c
            if c.is_zero():
                terms.pop(key, None)
            else:
                terms[key] = c
        return cls(legs, acap, terms)

    # ---- predicates ----

    def is_zero(self):
        return not self.terms

    def a_valuation(self):
        """Smallest total A-degree present (acap+1 when empty)."""
        return min(
            (sum(j for j, _ in k) for k in self.terms), default=self.acap + 1
        )

    def _check(self, other):
        if self.legs != other.legs or self.acap != other.acap:
            raise CompositionError("Borel elements live on different leg shapes")

    # ---- ring operations ----

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            acc = out.get(key)
            c = c if acc is None else acc + c
            if c.is_zero():
                out.pop(key, None)
            else:
                out[key] = c
        return BorelElement(self.legs, self.acap, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return BorelElement(
            self.legs, self.acap, {k: -c for k, c in self.terms.items()}
        )

    def scale(self, value):
        if not isinstance(value, GaussScalar):
            value = GaussScalar(value)
        if value.is_zero():
            return BorelElement.zero(self.legs, self.acap)
        return BorelElement(
            self.legs, self.acap, {k: c * value for k, c in self.terms.items()}
        )

    def __mul__(self, other):
        self._check(other)
        legs = self.legs
        acap = self.acap
        out = {}
        for k1, c1 in self.terms.items():
            a1 = sum(j for j, _ in k1)
            for k2, c2 in other.terms.items():
                if a1 + sum(j for j, _ in k2) > acap:
                    continue
                # per-leg expansions combine multiplicatively
                combos = [(k1[:0], c1 * c2)]
                for leg in range(legs):
                    j1, m1 = k1[leg]
                    j2, m2 = k2[leg]
                    expansion = _leg_product(j1, m1, j2, m2)
                    combos = [
                        (prefix + ((j, m),), c * lc)
                        for prefix, c in combos
                        for j, m, lc in expansion
                    ]
                for key, c in combos:
                    if c.is_zero():
                        continue
                    acc = out.get(key)
                    c = c if acc is None else acc + c
                    if c.is_zero():
                        out.pop(key, None)
                    else:
                        out[key] = c
        return BorelElement(legs, acap, out)

    def __eq__(self, other):
        if not isinstance(other, BorelElement):
            return NotImplemented
        return (
            self.legs == other.legs
            and self.acap == other.acap
            and self.terms == other.terms
        )

    # ---- coalgebra plumbing ----

    def coproduct_at(self, leg):
        """Apply the primitive coproduct to one leg (legs -> legs + 1).

        A and D are primitive and the two images commute leg-by-leg, so
        A^j D^m splits binomially with the total A-degree preserved.
        """
        out = {}
        for key, c in self.terms.items():
            j, m = key[leg]
            head = key[:leg]
            tail = key[leg + 1 :]
            for r in range(j + 1):
                cj = comb(j, r)
                for s in range(m + 1):
                    w = c * GaussScalar(cj * comb(m, s))
                    nk = head + ((r, s), (j - r, m - s)) + tail
                    acc = out.get(nk)
                    w = w if acc is None else acc + w
                    if w.is_zero():
                        out.pop(nk, None)
                    else:
                        out[nk] = w
        return BorelElement(self.legs + 1, self.acap, out)

    def embed(self, legs, positions):
        """View on a wider leg tuple, identity on the new slots."""
        pos = tuple(positions)
        if len(pos) != self.legs:
            raise CompositionError("embedding positions mismatch leg count")
        out = {}
        for key, c in self.terms.items():
            nk = [(0, 0)] * legs
            for p, jm in zip(pos, key):
                nk[p] = jm
            out[tuple(nk)] = c
        return BorelElement(legs, self.acap, out)

    # ---- printing ----

    @staticmethod
    def _leg_str(jm):
        j, m = jm
        if not j and not m:
            return "1"
        parts = []
        if j:
            parts.append("A" if j == 1 else "A^%d" % j)
        if m:
            parts.append("D" if m == 1 else "D^%d" % m)
        return "*".join(parts)

    def monomial_str(self, key):
        return " (x) ".join(self._leg_str(jm) for jm in key)

    def as_str(self):
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=_grade_key)
        return " + ".join(
            "%s * %s" % (self.terms[k].as_str(), self.monomial_str(k))
            for k in keys
        )

    def __repr__(self):
        return "BorelElement(%s)" % self.as_str()


def _grade_key(key):
    return (sum(j for j, _ in key), sum(m for _, m in key), key)


def borel_exp(el):
    """exp of an element with A-valuation >= 1 (a finite sum under the cap)."""
    if el.a_valuation() < 1:
        raise CompositionError("exponent needs at least one power of A per term")
    acc = BorelElement.identity(el.legs, el.acap)
    power = acc
    k = 0
    while True:
        k += 1
        power = power * el
        if power.is_zero():
            return acc
        acc = acc + power.scale(GaussScalar(Fraction(1, factorial(k))))


def jordanian_borel_exponent(variant, acap=DEFAULT_ACAP, legs=2):
    """log F with A standing in for the deformation direction.

    variant "right": log F = -i ln(1-A) (x) D = sum_j (i/j) A^j (x) D;
    variant "left":  log F = -i D (x) ln(1+A), coefficient (-1)^j i/j.
    """
    terms = {}
    for j in range(1, acap + 1):
        if variant == "right":
            key = ((j, 0), (0, 1)) + ((0, 0),) * (legs - 2)
            terms[key] = GaussScalar(0, Fraction(1, j))
        elif variant == "left":
            key = ((0, 1), (j, 0)) + ((0, 0),) * (legs - 2)
            terms[key] = GaussScalar(0, Fraction((-1) ** j, j))
        else:
            raise CompositionError("variant must be 'right' or 'left'")
    return BorelElement(legs, acap, terms)


def jordanian_borel_twist(variant, acap=DEFAULT_ACAP):
    return borel_exp(jordanian_borel_exponent(variant, acap))


def cocycle_check_borel(twist=None, variant="right", acap=DEFAULT_ACAP, name=None):
    """(F (x) 1)(coproduct (x) id)F == (1 (x) F)(id (x) coproduct)F.

    With no explicit twist the named Jordanian variant is built and
    checked; passing a 2-leg element checks that element instead.
    """
    if twist is None:
        twist = jordanian_borel_twist(variant, acap)
        label = "borel-jordanian-%s" % variant
    else:
        acap = twist.acap
        label = "borel-custom"
    if name is not None:
        label = name
    lhs = twist.embed(3, (0, 1)) * twist.coproduct_at(0)
    rhs = twist.embed(3, (1, 2)) * twist.coproduct_at(1)
    diff = lhs - rhs
    disc = None
    if not diff.is_zero():
        key = min(diff.terms, key=_grade_key)
        c = diff.terms[key]
        disc = Discrepancy(
            indices=(),
            monomial=diff.monomial_str(key),
            coeff_re=str(c.re),
            coeff_im=str(c.im),
        )
    return CheckResult(
        model=label,
        check="cocycle",
        order=acap,
        ok=diff.is_zero(),
        discrepancy=disc,
    )
