"""A small expression language for closed-form series.

Custom models and reference formulas are written as text like

    eta(mu,nu) + l^2*p[mu]*p[nu]
    k[mu] + q[mu]*(1 - dot(a,k))

and lowered to exact MomentumSeries against a binding context.  The
grammar (names in CAPS are token kinds):

    expr    := term (("+" | "-") term)*
    term    := factor (("*" | "/") factor)*
    factor  := ("-" | "+") factor | power
    power   := atom ("^" ["-"] NUM)?
    atom    := NUM | "i" | NAME ("[" index "]")* | builtin | "(" expr ")"
    builtin := "eta" "(" index "," index ")"
             | "epsilon" "(" index "," index "," index ")"
             | "dot" "(" NAME "," NAME ")"
             | "sum" "(" NAME "," expr ")"
             | ("exp" | "ln1p" | "sqrt1p" | "inv1p") "(" expr ")"
    index   := NUM | NAME

Indices are either literals or variables bound by the context (the
conventional free pair is mu, nu) or by an enclosing sum(...), which
ranges over 0..dim-1.  dot contracts two named vectors through the
metric.  Division requires a denominator whose constant term is a plain
nonzero number, so 1/(1 - dot(a,k)) is the geometric series while
1/dot(a,k) is rejected; this keeps every lowering exact.

The AST is a plain tuple tree; parse and to_text are mutually inverse
on canonical text (parse(to_text(t)) == t for every AST t).
"""
from __future__ import annotations

from fractions import Fraction

from .errors import ExprLoweringError, ExprSyntaxError
from .params import ParamPoly
from .scalars import GaussScalar, I, ONE
from .series import (
    DEFAULT_ORDER,
    const,
    dot,
    expand_fn,
    identity_vector,
    variable,
    zero,
)

__all__ = ["parse", "to_text", "lower", "ExprContext", "FUNCTION_NAMES"]

FUNCTION_NAMES = ("exp", "ln1p", "sqrt1p", "inv1p")
_FN_ALIASES = {"log1p": "ln1p"}
_BUILTIN_ARITY = {"eta": 2, "epsilon": 3, "dot": 2, "sum": 2}


# ---- tokens ----

_SINGLE = "+-*/^()[],"


def _tokens(src):
    out = []
    line, col = 1, 1
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            out.append(("num", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            out.append(("name", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in _SINGLE:
            out.append((ch, ch, line, col))
            i += 1
            col += 1
            continue
        raise ExprSyntaxError("unexpected character %r" % ch, line, col)
    out.append(("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, src):
        self.toks = _tokens(src)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def take(self, kind, expected):
        tok = self.toks[self.pos]
        if tok[0] != kind:
            self.fail(expected, tok)
        self.pos += 1
        return tok

    def fail(self, expected, tok=None):
        tok = tok or self.toks[self.pos]
        got = "end of input" if tok[0] == "eof" else "%r" % tok[1]
        raise ExprSyntaxError(
            "expected %s, got %s" % (expected, got), tok[2], tok[3]
        )

    # expr := term (("+"|"-") term)*
    def expr(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take(self.peek()[0], "operator")[0]
            rhs = self.term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.take(self.peek()[0], "operator")[0]
            rhs = self.factor()
            node = ("mul" if op == "*" else "div", node, rhs)
        return node

    def factor(self):
        kind = self.peek()[0]
        if kind == "-":
            self.take("-", "'-'")
            return ("neg", self.factor())
        if kind == "+":
            self.take("+", "'+'")
            return self.factor()
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[0] == "^":
            self.take("^", "'^'")
            sign = 1
            if self.peek()[0] == "-":
                self.take("-", "'-'")
                sign = -1
            tok = self.take("num", "an integer exponent")
            node = ("pow", node, sign * int(tok[1]))
        return node

    def index(self):
        tok = self.peek()
        if tok[0] == "num":
            self.take("num", "an index")
            return int(tok[1])
        if tok[0] == "name":
            self.take("name", "an index")
            return tok[1]
        self.fail("an index (number or name)")

    def atom(self):
        tok = self.peek()
        if tok[0] == "num":
            self.take("num", "a number")
            return ("num", int(tok[1]))
        if tok[0] == "(":
            self.take("(", "'('")
            node = self.expr()
            self.take(")", "')'")
            return node
        if tok[0] != "name":
            self.fail("a number, name or '('")
        name = self.take("name", "a name")[1]
        if name == "i":
            return ("imag",)
        if name in _BUILTIN_ARITY:
            return self.builtin(name)
        fname = _FN_ALIASES.get(name, name)
        if fname in FUNCTION_NAMES:
            self.take("(", "'(' after %s" % name)
            arg = self.expr()
            self.take(")", "')'")
            return ("fn", fname, arg)
        # plain symbol, possibly indexed
        indices = []
        while self.peek()[0] == "[" and len(indices) < 2:
            self.take("[", "'['")
            indices.append(self.index())
            self.take("]", "']'")
        if not indices:
            return ("sym", name)
        return ("item", name, tuple(indices))

    def builtin(self, name):
        self.take("(", "'(' after %s" % name)
        if name == "dot":
            u = self.take("name", "a vector name")[1]
            self.take(",", "','")
            v = self.take("name", "a vector name")[1]
            self.take(")", "')'")
            return ("dot", u, v)
        if name == "sum":
            var = self.take("name", "a summation index name")[1]
            self.take(",", "','")
            body = self.expr()
            self.take(")", "')'")
            return ("sum", var, body)
        idx = [self.index()]
        for _ in range(_BUILTIN_ARITY[name] - 1):
            self.take(",", "','")
            idx.append(self.index())
        self.take(")", "')'")
        return (name,) + tuple(idx)


def parse(src):
    """Text -> AST tuple tree; raises ExprSyntaxError with line:col."""
    p = _Parser(src)
    node = p.expr()
    p.take("eof", "end of expression")
    return node


# ---- printing ----

# precedence levels: add/sub 1, mul/div 2, unary 3, pow 4, atoms 5
_PREC = {
    "add": 1,
    "sub": 1,
    "mul": 2,
    "div": 2,
    "neg": 3,
    "pow": 4,
}


def _prec(node):
    return _PREC.get(node[0], 5)


def _wrap(node, limit):
    text = to_text(node)
    return "(" + text + ")" if _prec(node) < limit else text


def to_text(node):
    """Canonical text form; parse(to_text(t)) == t."""
    kind = node[0]
    if kind == "num":
        return str(node[1])
    if kind == "imag":
        return "i"
    if kind == "sym":
        return node[1]
    if kind == "item":
        return node[1] + "".join("[%s]" % ix for ix in node[2])
    if kind in ("eta", "epsilon"):
        return "%s(%s)" % (kind, ",".join(str(ix) for ix in node[1:]))
    if kind == "dot":
        return "dot(%s,%s)" % (node[1], node[2])
    if kind == "sum":
        return "sum(%s,%s)" % (node[1], to_text(node[2]))
    if kind == "fn":
        return "%s(%s)" % (node[1], to_text(node[2]))
    if kind == "neg":
        return "-" + _wrap(node[1], 3)
    if kind == "pow":
        return "%s^%d" % (_wrap(node[1], 5), node[2])
    if kind in ("add", "sub"):
        op = " + " if kind == "add" else " - "
        # right side needs parens at equal precedence to rebuild the
        # same left-leaning tree
        return _wrap(node[1], 1) + op + _wrap(node[2], 2)
    if kind in ("mul", "div"):
        op = "*" if kind == "mul" else "/"
        return _wrap(node[1], 2) + op + _wrap(node[2], 3)
    raise ValueError("unknown node %r" % (node,))


# ---- lowering ----


class ExprContext:
    """Binds the free names of an expression for lowering.

    scalars/vectors/matrices map symbol names to ParamPoly data; any
    bank of ``banks`` is usable as an indexed momentum symbol and as a
    dot() argument.  indices binds index variables (conventionally mu
    and nu) to concrete values.
    """

    __slots__ = ("space", "banks", "order", "scalars", "vectors", "matrices", "indices")

    def __init__(
        self,
        space,
        banks=("p",),
        order=DEFAULT_ORDER,
        scalars=None,
        vectors=None,
        matrices=None,
        indices=None,
    ):
        self.space = space
        self.banks = tuple(banks)
        self.order = order
        self.scalars = dict(scalars or {})
        self.vectors = dict(vectors or {})
        self.matrices = dict(matrices or {})
        self.indices = dict(indices or {})

    def bind(self, **indices):
        return ExprContext(
            self.space,
            self.banks,
            self.order,
            self.scalars,
            self.vectors,
            self.matrices,
            {**self.indices, **indices},
        )

    def resolve_index(self, ix):
        if isinstance(ix, str):
            if ix not in self.indices:
                raise ExprLoweringError("unbound index %r" % ix)
            ix = self.indices[ix]
        if not 0 <= ix < self.space.dim:
            raise ExprLoweringError(
                "index %d out of range for dimension %d" % (ix, self.space.dim)
            )
        return ix


def _eps3(i, j, k):
    if (i, j, k) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        return 1
    if (i, j, k) in ((0, 2, 1), (2, 1, 0), (1, 0, 2)):
        return -1
    return 0


def _vector_components(ctx, name):
    if name in ctx.vectors:
        return [const(ctx.space, ctx.banks, c) for c in ctx.vectors[name]]
    if name in ctx.banks:
        return identity_vector(ctx.space, ctx.banks, name)
    raise ExprLoweringError("%r is not a vector or momentum name" % name)


def _divide(ctx, num, den):
    c = den.constant_poly()
    cval = c.constant_term()
    if cval.is_zero() or c != ParamPoly.const(ctx.space.params, cval):
        raise ExprLoweringError(
            "denominator needs a plain nonzero constant term (got %s)"
            % (c.as_str() if not c.is_zero() else "0")
        )
    rest = (den - const(ctx.space, ctx.banks, c, order=den.order)).scale(
        ONE / cval
    )
    inv = expand_fn("inv1p", rest, ctx.order)
    return num * inv.scale(ONE / cval)


def lower(node, ctx):
    """AST -> MomentumSeries over ctx.space/ctx.banks, exact to ctx.order."""
    kind = node[0]
    sp, banks = ctx.space, ctx.banks
    if kind == "num":
        return const(sp, banks, GaussScalar(node[1]))
    if kind == "imag":
        return const(sp, banks, I)
    if kind == "sym":
        if node[1] in ctx.scalars:
            return const(sp, banks, ctx.scalars[node[1]])
        if node[1] in ctx.vectors or node[1] in ctx.matrices or node[1] in banks:
            raise ExprLoweringError("%r needs an index" % node[1])
        raise ExprLoweringError("unknown symbol %r" % node[1])
    if kind == "item":
        name, raw = node[1], node[2]
        idx = [ctx.resolve_index(ix) for ix in raw]
        if name in ctx.matrices:
            if len(idx) != 2:
                raise ExprLoweringError("%r needs two indices" % name)
            return const(sp, banks, ctx.matrices[name][idx[0]][idx[1]])
        if len(idx) != 1:
            raise ExprLoweringError("%r takes one index" % name)
        if name in ctx.vectors:
            return const(sp, banks, ctx.vectors[name][idx[0]])
        if name in banks:
            return variable(sp, banks, name, idx[0])
        raise ExprLoweringError("unknown indexed symbol %r" % name)
    if kind == "eta":
        a = ctx.resolve_index(node[1])
        b = ctx.resolve_index(node[2])
        val = sp.metric[a] if a == b else 0
        return const(sp, banks, GaussScalar(val))
    if kind == "epsilon":
        if sp.dim != 3:
            raise ExprLoweringError("epsilon needs a three dimensional space")
        idx = [ctx.resolve_index(ix) for ix in node[1:]]
        return const(sp, banks, GaussScalar(_eps3(*idx)))
    if kind == "dot":
        u = _vector_components(ctx, node[1])
        v = _vector_components(ctx, node[2])
        return dot(sp, u, v)
    if kind == "sum":
        var, body = node[1], node[2]
        acc = zero(sp, banks)
        for val in range(sp.dim):
            acc = acc + lower(body, ctx.bind(**{var: val}))
        return acc
    if kind == "add":
        return lower(node[1], ctx) + lower(node[2], ctx)
    if kind == "sub":
        return lower(node[1], ctx) - lower(node[2], ctx)
    if kind == "mul":
        return lower(node[1], ctx) * lower(node[2], ctx)
    if kind == "div":
        return _divide(ctx, lower(node[1], ctx), lower(node[2], ctx))
    if kind == "neg":
        return lower(node[1], ctx).scale(GaussScalar(-1))
    if kind == "pow":
        base = lower(node[1], ctx)
        k = node[2]
        out = const(sp, banks, ONE)
        for _ in range(abs(k)):
            out = out * base
        if k < 0:
            out = _divide(ctx, const(sp, banks, ONE), out)
        return out
    if kind == "fn":
        arg = lower(node[2], ctx)
        try:
            return expand_fn(node[1], arg, ctx.order)
        except Exception as exc:
            raise ExprLoweringError("%s: %s" % (node[1], exc)) from exc
    raise ExprLoweringError("unknown node %r" % (node,))
