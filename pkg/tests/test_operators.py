"""Normal-ordered operator algebra.

The oracle is an independent word rewriter that knows only the single
exchange rule p_i x_j = x_j p_i - i*eta[i][j] and applies it one swap at
a time; the engine's closed-form product must agree on every word.
"""
from fractions import Fraction

import pytest

from ncphase.errors import XDegreeCapError
from ncphase.operators import (
    Operator,
    commutator,
    normal_order_word,
    operator_exp,
    operator_inverse,
)
from ncphase.params import ParamPoly, ParamTable
from ncphase.scalars import GaussScalar, I, ONE
from ncphase.series import Space, one, variable, zero


def euc(dim=2, cap=6):
    return Space.euclidean(dim, ParamTable.empty(cap))


def lor(dim=2, cap=6):
    return Space.lorentzian(dim, ParamTable.empty(cap))


# ---- independent single-swap rewriter ----


def rewrite_word(space, word):
    """Normal order a letter word by adjacent swaps; returns a dict
    mapping (x-exponents, p-exponents) -> GaussScalar."""
    eta = space.metric
    n = space.dim
    out = {}
    stack = [(tuple(word), ONE)]
    while stack:
        w, coeff = stack.pop()
        swap = None
        for j in range(len(w) - 1):
            if w[j][0] == "p" and w[j + 1][0] == "x":
                swap = j
                break
        if swap is None:
            xs = [0] * n
            ps = [0] * n
            for kind, idx in w:
                (xs if kind == "x" else ps)[idx] += 1
            key = (tuple(xs), tuple(ps))
            acc = out.get(key)
            acc = coeff if acc is None else acc + coeff
            if acc.is_zero():
                out.pop(key, None)
            else:
                out[key] = acc
            continue
        i = w[swap][1]
        j = w[swap + 1][1]
        stack.append((w[: swap] + (w[swap + 1], w[swap]) + w[swap + 2 :], coeff))
        if i == j:
            rest = w[:swap] + w[swap + 2 :]
            stack.append((rest, coeff * GaussScalar(0, -eta[i])))
    return out


def engine_word_table(space, word):
    op = normal_order_word(space, word)
    table = {}
    for xkey, series in op.terms.items():
        for skey, poly in series.terms.items():
            c = poly.constant_term()
            if not c.is_zero():
                table[(tuple(xkey), tuple(skey))] = c
    return table


WORDS = [
    [("p", 0), ("x", 0)],
    [("p", 0), ("x", 1)],
    [("p", 0), ("x", 0), ("x", 0)],
    [("x", 0), ("p", 0), ("x", 0)],
    [("p", 0), ("p", 0), ("x", 0), ("x", 0)],
    [("p", 1), ("x", 1), ("p", 0), ("x", 0)],
    [("p", 0), ("x", 0), ("p", 1), ("x", 1), ("x", 0)],
    [("p", 0), ("p", 1), ("x", 0), ("x", 1), ("x", 0)],
]


@pytest.mark.parametrize("metric_fn", [euc, lor])
@pytest.mark.parametrize("word", WORDS)
def test_product_matches_swap_oracle(metric_fn, word):
    sp = metric_fn()
    assert engine_word_table(sp, word) == rewrite_word(sp, word)


def test_simple_reorder_value():
    # p0 x0 x0 = x0^2 p0 - 2 i eta00 x0
    sp = lor()
    got = engine_word_table(sp, [("p", 0), ("x", 0), ("x", 0)])
    assert got == {
        ((2, 0), (1, 0)): ONE,
        ((1, 0), (0, 0)): GaussScalar(0, -2 * sp.metric[0]),
    }


def test_canonical_commutator():
    # [p_mu, x_nu] = -i eta[mu][nu]
    sp = lor()
    for mu in range(2):
        for nu in range(2):
            c = commutator(Operator.momentum(sp, mu), Operator.coordinate(sp, nu))
            want = Operator.identity(sp).scale(
                GaussScalar(0, -sp.metric[mu] if mu == nu else 0)
            )
            assert (c - want).is_zero()


def test_function_action():
    # p_mu acting on x_nu gives -i eta[mu][nu]
    sp = lor()
    for mu in range(2):
        for nu in range(2):
            f = Operator.coordinate(sp, nu)
            got = Operator.momentum(sp, mu).act(f)
            want = Operator.identity(sp).scale(
                GaussScalar(0, -sp.metric[mu] if mu == nu else 0)
            )
            assert (got - want).is_zero()


def test_action_is_module_action():
    # (A B) acting on f equals A acting on (B acting on f)
    sp = lor()
    x0 = Operator.coordinate(sp, 0)
    x1 = Operator.coordinate(sp, 1)
    p0 = Operator.momentum(sp, 0)
    p1 = Operator.momentum(sp, 1)
    A = x0 * p1 + p0 * p0
    B = p0 * x1 + p1
    f = x0 * x0 * x1 + x1 * x1
    lhs = (A * B).act(f)
    rhs = A.act(B.act(f))
    assert (lhs - rhs).is_zero()


def test_associativity_of_product():
    sp = lor()
    x0 = Operator.coordinate(sp, 0)
    p0 = Operator.momentum(sp, 0)
    p1 = Operator.momentum(sp, 1)
    A = x0 * p0
    B = p0 * x0 + p1
    C = x0 * x0
    assert ((A * B) * C - A * (B * C)).is_zero()


def test_xcap_raises():
    sp = euc()
    x0 = Operator.coordinate(sp, 0, xcap=3)
    with pytest.raises(XDegreeCapError):
        _ = x0 * x0 * x0 * x0


def test_operator_exp_inverse_pair():
    # exp(A) exp(-A) = 1 for A with parameter valuation (powers of A die
    # at the parameter cap, so the sum terminates)
    t = ParamTable.single("l", cap=6)
    sp = Space.euclidean(2, t)
    lk = variable(sp, ("p",), "p", 0).scale(ParamPoly.symbol(t, "l"))
    A = Operator.coordinate(sp, 0, xcap=20) * Operator.from_series(
        lk.truncate(6), xcap=20
    )
    e = operator_exp(A, order=6)
    einv = operator_exp(-A, order=6)
    assert ((e * einv) - Operator.identity(sp, xcap=20)).truncate(6).is_zero()


def test_operator_inverse():
    sp = euc(2, cap=6)
    k0 = variable(sp, ("p",), "p", 0)
    A = Operator.identity(sp) + Operator.from_series((k0 * k0).truncate(6)) * Operator.coordinate(sp, 0)
    Ainv = operator_inverse(A, order=6)
    assert ((A * Ainv) - Operator.identity(sp)).truncate(6).is_zero()
    assert ((Ainv * A) - Operator.identity(sp)).truncate(6).is_zero()
