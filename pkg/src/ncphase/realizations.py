"""Deformed coordinate realizations and their algebraic checkers.

A realization packages an invertible momentum matrix ``phi`` and a shift
vector ``chi`` over a Space; the deformed coordinates are

    xhat_mu = sum_contract_alpha  x_alpha * phi[alpha][mu](p)  +  chi[mu](p)

with the repeated alpha contracted through the metric.  The catalog holds
the standard models; ``deformed_commutators`` recovers the structure
series C and central part d from

    [xhat_mu, xhat_nu] = i sum_contract_alpha xhat_alpha C[mu][nu][alpha](p)
                         + i d[mu][nu](p)

(the structure series multiply from the right of the coordinates, so the
x-linear coefficient fixes C and the remainder fixes d).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import DecompositionError, ModelConfigError
from .operators import DEFAULT_XCAP, Operator, commutator
from .params import ParamPoly, ParamTable
from .reports import CheckResult, Discrepancy, first_discrepancy
from .scalars import GaussScalar, I, ONE
from .series import (
    DEFAULT_ORDER,
    INF,
    MomentumSeries,
    Space,
    const,
    dot,
    expand_fn,
    identity_vector,
    one,
    zero,
)

__all__ = [
    "Realization",
    "LinearRealization",
    "DeformedCommutators",
    "CATALOG_NAMES",
    "catalog_get",
    "coordinate_operators",
    "deformed_commutators",
    "invert_series_matrix",
    "jacobi_check",
    "closure_check",
    "lie_closure_check",
    "epsilon",
]

NEG_I = -I


def epsilon(i, j, k):
    """Totally antisymmetric symbol on three indices."""
    return ((j - i) * (k - i) * (k - j)) // (abs(j - i) * abs(k - i) * abs(k - j)) if i != j and j != k and i != k else 0


class Realization:
    """phi/chi data of a coordinate deformation, plus a rebuild hook.

    ``phi[alpha][mu]`` and ``chi[mu]`` are single-bank ("p") series.  The
    builder, when present, reconstructs the model at any accuracy order;
    checkers use it to claim derivative headroom.
    """

    __slots__ = ("space", "name", "phi", "chi", "builder", "linear", "opts")

    def __init__(self, space, name, phi, chi=None, builder=None, linear=None, opts=None):
        n = space.dim
        if len(phi) != n or any(len(row) != n for row in phi):
            raise ModelConfigError("phi must be a %dx%d matrix of series" % (n, n))
        if chi is None:
            chi = [zero(space, ("p",)) for _ in range(n)]
        if len(chi) != n:
            raise ModelConfigError("chi must have %d components" % n)
        self.space = space
        self.name = name
        self.phi = [list(row) for row in phi]
        self.chi = list(chi)
        self.builder = builder
        self.linear = linear
        self.opts = dict(opts or {})

    @property
    def order(self):
        """Accuracy through which phi and chi are jointly guaranteed."""
        entries = [s.order for row in self.phi for s in row]
        entries += [s.order for s in self.chi]
        return min(entries)

    def with_order(self, order):
        if order <= self.order:
            return self
        if self.builder is not None:
            return self.builder(order)
        raise ModelConfigError(
            "model %r built at order %s cannot reach order %s (no builder)"
            % (self.name, self.order, order)
        )

    def is_flat_limit(self):
        """phi reduces to the metric and chi to zero with all params off."""
        sp = self.space
        for a in range(sp.dim):
            for m in range(sp.dim):
                want = const(sp, ("p",), sp.metric[a]) if a == m else zero(sp, ("p",))
                got = self.phi[a][m].deformation_limit()
                if not (got - want.truncate(got.order)).is_zero():
                    return False
        return all(c.deformation_limit().is_zero() for c in self.chi)

    def __repr__(self):
        return "Realization(%r, dim=%d, order=%s)" % (
            self.name,
            self.space.dim,
            self.order,
        )


class LinearRealization:
    """Momentum-linear deformation phi = eta + K.p given by its K tensor.

    ``K[beta][mu][alpha]`` are ParamPoly; the beta leg contracts with the
    momentum through the metric:

        phi[alpha][mu] = eta[alpha][mu] + sum_contract_beta K[beta][mu][alpha] p_beta
    """

    __slots__ = ("space", "name", "K")

    def __init__(self, space, name, K):
        n = space.dim
        if len(K) != n or any(len(r) != n for r in K) or any(
            len(c) != n for r in K for c in r
        ):
            raise ModelConfigError("K must be %dx%dx%d" % (n, n, n))
        self.space = space
        self.name = name
        self.K = K

    def phi_series(self):
        sp = self.space
        n = sp.dim
        p = identity_vector(sp, ("p",), "p")
        phi = []
        for a in range(n):
            row = []
            for m in range(n):
                acc = const(sp, ("p",), ParamPoly.const(sp.params, sp.metric[a])) if a == m else zero(sp, ("p",))
                for b in range(n):
                    kb = self.K[b][m][a]
                    if kb.is_zero():
                        continue
                    acc = acc + p[b].scale(kb).scale(GaussScalar(sp.metric[b]))
                row.append(acc)
            phi.append(row)
        return phi

    def structure_constants(self):
        """C[mu][nu][alpha] = K[mu][nu][alpha] - K[nu][mu][alpha]."""
        n = self.space.dim
        return [
            [[self.K[m][v][a] - self.K[v][m][a] for a in range(n)] for v in range(n)]
            for m in range(n)
        ]

    def as_realization(self, builder=None):
        return Realization(
            self.space, self.name, self.phi_series(), builder=builder, linear=self
        )


@dataclass
class DeformedCommutators:
    """Structure series and central parts of all coordinate commutators."""

    space: Space
    model: str
    order: object
    ok: bool
    C: Optional[list] = None  # C[mu][nu][alpha], single-bank series
    d: Optional[list] = None  # d[mu][nu], single-bank series
    raw: dict = field(default_factory=dict)  # (mu, nu) -> commutator Operator


def coordinate_operators(real, banks=("p",), slot=0, xcap=DEFAULT_XCAP):
    """Normal-ordered coordinate operators of a realization.

    ``slot``/``banks`` place the coordinates on one leg of a tensor
    product; the default is a plain single-slot operator.
    """
    sp = real.space
    banks = tuple(banks)
    ops = []
    for mu in range(sp.dim):
        acc = Operator.zero(sp, banks, xcap=xcap)
        for a in range(sp.dim):
            s = real.phi[a][mu]
            if s.is_zero():
                continue
            s = s.rename_banks({"p": banks[slot]}).embed(banks)
            if sp.metric[a] < 0:
                s = s.scale(GaussScalar(-1))
            acc = acc + Operator.coordinate(sp, a, banks, slot=slot, xcap=xcap) * Operator.from_series(s, xcap=xcap)
        c = real.chi[mu]
        if not c.is_zero():
            acc = acc + Operator.from_series(
                c.rename_banks({"p": banks[slot]}).embed(banks), xcap=xcap
            )
        ops.append(acc)
    return ops


def invert_series_matrix(mat, order):
    """Plain-matrix inverse of a series matrix whose constant part is a
    diagonal +-1 matrix (geometric tail about that constant)."""
    sp = mat[0][0].space
    banks = mat[0][0].banks
    n = sp.dim
    m0 = []
    for a in range(n):
        row = []
        for b in range(n):
            c = mat[a][b].constant_poly().constant_term()
            row.append(c)
        m0.append(row)
    for a in range(n):
        for b in range(n):
            want_abs = 1 if a == b else 0
            got = m0[a][b]
            if a == b and got * got != ONE:
                raise DecompositionError("constant part is not diagonal +-1")
            if a != b and not got.is_zero():
                raise DecompositionError("constant part is not diagonal +-1")
    # mat = M0 (I + M0^－1 Delta); Neumann sum for the tail
    delta = [
        [
            (mat[a][b] - const(sp, banks, m0[a][b])).truncate(order)
            if a == b
            else mat[a][b].truncate(order)
            for b in range(n)
        ]
        for a in range(n)
    ]
    tail = [[delta[a][b].scale(m0[a][a]) for b in range(n)] for a in range(n)]

    def matmul(x, y):
        out = []
        for a in range(n):
            row = []
            for b in range(n):
                acc = zero(sp, banks, order)
                for c in range(n):
                    if x[a][c].is_zero() or y[c][b].is_zero():
                        continue
                    acc = acc + (x[a][c] * y[c][b]).truncate(order)
                row.append(acc)
            out.append(row)
        return out

    ident = [
        [one(sp, banks, order) if a == b else zero(sp, banks, order) for b in range(n)]
        for a in range(n)
    ]
    acc = ident
    power = ident
    cap = sp.params.cap
    for _ in range((order if order is not INF else 0) + cap + 1):
        power = matmul(power, tail)
        power = [[-power[a][b] for b in range(n)] for a in range(n)]
        if all(power[a][b].is_zero() for a in range(n) for b in range(n)):
            break
        acc = [[acc[a][b] + power[a][b] for b in range(n)] for a in range(n)]
    return [[acc[a][b].scale(m0[b][b]) for b in range(n)] for a in range(n)]


def _x_unit_key(n, beta):
    return tuple(1 if j == beta else 0 for j in range(n))


def deformed_commutators(real, order=None, xcap=DEFAULT_XCAP):
    """Extract C and d from every coordinate commutator.

    Flags ``ok=False`` (keeping the raw commutators) if any commutator
    fails to be x-linear, in which case no decomposition of the assumed
    shape exists.
    """
    if order is None:
        order = real.order if real.order is not INF else DEFAULT_ORDER
    work = real.with_order(order + 1 if order is not INF else order)
    sp = real.space
    n = sp.dim
    ops = coordinate_operators(work, xcap=xcap)
    raw = {}
    for mu in range(n):
        for nu in range(mu + 1, n):
            raw[(mu, nu)] = commutator(ops[mu], ops[nu])
    if any(t.x_degree() > 1 for t in raw.values()):
        return DeformedCommutators(sp, real.name, order, ok=False, raw=raw)
    phi_inv = invert_series_matrix(work.phi, order)
    zkey = (0,) * n
    zs = zero(sp, ("p",), order)
    C = [[[zs for _ in range(n)] for _ in range(n)] for _ in range(n)]
    d = [[zs for _ in range(n)] for _ in range(n)]
    for (mu, nu), t in raw.items():
        u = [t.terms.get(_x_unit_key(n, b), zs).truncate(order) for b in range(n)]
        v = t.terms.get(zkey, zs).truncate(order)
        # x-linear part:  U_b = i sum_a' phi[b][a'] Craised[a']   (plain sums)
        w = [u[b].scale(GaussScalar(sp.metric[b]) * NEG_I) for b in range(n)]
        craised = []
        for a in range(n):
            acc = zero(sp, ("p",), order)
            for b in range(n):
                if w[b].is_zero() or phi_inv[a][b].is_zero():
                    continue
                acc = acc + (phi_inv[a][b] * w[b]).truncate(order)
            craised.append(acc)
        # x-free part:  V = i sum_a' chi[a'] Craised[a'] + i d
        dv = v.scale(NEG_I)
        for a in range(n):
            if work.chi[a].is_zero() or craised[a].is_zero():
                continue
            dv = dv - (work.chi[a].truncate(order) * craised[a]).truncate(order)
        for a in range(n):
            ca = craised[a].scale(GaussScalar(sp.metric[a]))
            C[mu][nu][a] = ca
            C[nu][mu][a] = -ca
        d[mu][nu] = dv
        d[nu][mu] = -dv
    return DeformedCommutators(sp, real.name, order, ok=True, C=C, d=d, raw=raw)


def _operator_discrepancy(op, indices):
    ft = op.first_term()
    if ft is None:
        return None
    xkey, series = ft
    sft = series.first_term()
    skey, poly = sft
    pkey = min(poly.terms, key=lambda k: (sum(k), k))
    coeff = poly.terms[pkey]
    parts = [
        poly.monomial_str(pkey),
        op.x_monomial_str(xkey),
        series.monomial_str(skey),
    ]
    mono = "*".join(p for p in parts if p) or "1"
    return Discrepancy(tuple(indices), mono, str(coeff.re), str(coeff.im))


def jacobi_check(real, order=None, xcap=DEFAULT_XCAP):
    """Cyclic triple-commutator sum over all strictly increasing triples.

    Works two orders above the target so the derivative losses inside the
    reordering product cannot eat into the verified range.
    """
    if order is None:
        order = real.order if real.order is not INF else DEFAULT_ORDER
    work = real.with_order(order + 2 if order is not INF else order)
    ops = coordinate_operators(work, xcap=xcap)
    n = real.space.dim
    target = order if order is not INF else work.order
    for mu in range(n):
        for nu in range(mu + 1, n):
            for rho in range(nu + 1, n):
                s = (
                    commutator(commutator(ops[mu], ops[nu]), ops[rho])
                    + commutator(commutator(ops[nu], ops[rho]), ops[mu])
                    + commutator(commutator(ops[rho], ops[mu]), ops[nu])
                )
                s = s.truncate(target)
                if not s.is_zero():
                    return CheckResult(
                        real.name,
                        "jacobi",
                        order,
                        ok=False,
                        discrepancy=_operator_discrepancy(s, (mu, nu, rho)),
                    )
    return CheckResult(real.name, "jacobi", order, ok=True)


def lie_closure_check(linreal):
    """Exact quadratic closure condition on a momentum-linear K tensor.

    Checks, with the repeated lambda contracted through the metric,

        K[b][m][l] K[l][v][a] - K[b][v][l] K[l][m][a]
            = (K[m][v][l] - K[v][m][l]) K[b][l][a]

    for all index choices; equivalent to the coordinate commutators
    closing on constant structure coefficients.
    """
    sp = linreal.space
    n = sp.dim
    K = linreal.K
    zero_p = ParamPoly.zero(sp.params)
    for b in range(n):
        for m in range(n):
            for v in range(n):
                for a in range(n):
                    lhs = zero_p
                    rhs = zero_p
                    for l in range(n):
                        w = sp.metric[l]
                        t1 = K[b][m][l] * K[l][v][a] - K[b][v][l] * K[l][m][a]
                        t2 = (K[m][v][l] - K[v][m][l]) * K[b][l][a]
                        if w < 0:
                            t1 = -t1
                            t2 = -t2
                        lhs = lhs + t1
                        rhs = rhs + t2
                    diff = lhs - rhs
                    if not diff.is_zero():
                        pkey = min(diff.terms, key=lambda k: (sum(k), k))
                        coeff = diff.terms[pkey]
                        return CheckResult(
                            linreal.name,
                            "closure",
                            "exact",
                            ok=False,
                            discrepancy=Discrepancy(
                                (b, m, v, a),
                                diff.monomial_str(pkey) or "1",
                                str(coeff.re),
                                str(coeff.im),
                            ),
                        )
    return CheckResult(linreal.name, "closure", "exact", ok=True)


def closure_check(real, order=None, xcap=DEFAULT_XCAP):
    """Do the deformed coordinates close on constant structure
    coefficients?  Linear models get the exact K-tensor condition as
    corroboration; every model gets the direct criterion: each C series
    momentum-free and every d zero through the working order."""
    if order is None:
        order = real.order if real.order is not INF else DEFAULT_ORDER
    dc = deformed_commutators(real, order=order, xcap=xcap)
    if not dc.ok:
        pair = min(dc.raw)
        return CheckResult(
            real.name,
            "closure",
            order,
            ok=False,
            discrepancy=_operator_discrepancy(dc.raw[pair], pair),
            details={"reason": "commutator is not linear in the coordinates"},
        )
    n = real.space.dim
    for mu in range(n):
        for nu in range(mu + 1, n):
            dseries = dc.d[mu][nu]
            if not dseries.is_zero():
                return CheckResult(
                    real.name,
                    "closure",
                    order,
                    ok=False,
                    discrepancy=first_discrepancy(dseries, (mu, nu)),
                    details={"reason": "central part d is nonzero"},
                )
            for a in range(n):
                c = dc.C[mu][nu][a]
                tail = MomentumSeries(
                    c.space,
                    c.banks,
                    {k: p for k, p in c.terms.items() if sum(k) > 0},
                    c.order,
                )
                if not tail.is_zero():
                    return CheckResult(
                        real.name,
                        "closure",
                        order,
                        ok=False,
                        discrepancy=first_discrepancy(tail, (mu, nu, a)),
                        details={"reason": "structure series depends on momentum"},
                    )
    details = {}
    if real.linear is not None:
        exact = lie_closure_check(real.linear)
        details["k_tensor_condition"] = exact.verdict
        if not exact.ok:
            exact.details.update(details)
            return exact
    return CheckResult(real.name, "closure", order, ok=True, details=details)


# ---- catalog ----

CATALOG_NAMES = (
    "undeformed",
    "snyder",
    "snyder-general",
    "su2",
    "kappa-right",
    "kappa-left",
    "kappa-light",
    "kappa-snyder",
)


def _space_for(name, dim, signature, params):
    if signature is None:
        signature = "euclidean" if name == "su2" else "lorentzian"
    if signature == "lorentzian":
        return Space.lorentzian(dim, params)
    if signature == "euclidean":
        return Space.euclidean(dim, params)
    raise ModelConfigError("unknown signature %r" % signature)


def _eta_series(sp, a, m):
    if a != m:
        return zero(sp, ("p",))
    return const(sp, ("p",), sp.metric[a])


def _vector_params(sp, name="a"):
    return [ParamPoly.symbol(sp.params, "%s%d" % (name, i)) for i in range(sp.dim)]


def _linear_K(sp, kind):
    n = sp.dim
    a = _vector_params(sp)
    eta = sp.metric
    zero_p = ParamPoly.zero(sp.params)

    def eta_p(i, j):
        return ParamPoly.const(sp.params, eta[i]) if i == j else zero_p

    K = [[[zero_p for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for b in range(n):
        for m in range(n):
            for al in range(n):
                if kind == "right":
                    K[b][m][al] = -(a[m] * eta_p(al, b))
                elif kind == "left":
                    K[b][m][al] = a[b] * eta_p(al, m)
                else:  # light / kappa-snyder shape
                    K[b][m][al] = a[b] * eta_p(al, m) - a[al] * eta_p(b, m)
    return K


def catalog_get(name, dim=None, order=DEFAULT_ORDER, signature=None, param_cap=None, **opts):
    """Build a catalog model at the requested accuracy order.

    Options: ``phi1``/``phi2`` Maclaurin coefficient tuples for
    snyder-general (in the variable l^2 p.p, leading phi1 coefficient
    must be 1).
    """
    if name not in CATALOG_NAMES:
        raise ModelConfigError(
            "unknown model %r (have %s)" % (name, ", ".join(CATALOG_NAMES))
        )
    if dim is None:
        dim = 3 if name == "su2" else 4
    if param_cap is None:
        # every catalog member is graded: parameter degree never exceeds
        # momentum degree termwise, and flows/compositions preserve that,
        # so capping at the momentum order is lossless
        param_cap = order if order is not INF else DEFAULT_ORDER + 4

    # rebuilds must reuse the same parameter table or their series would
    # live on an incompatible space
    def build(w):
        return catalog_get(
            name, dim=dim, order=w, signature=signature, param_cap=param_cap, **opts
        )

    if name == "su2" and dim != 3:
        raise ModelConfigError("su2 model is three dimensional")

    if name == "undeformed":
        sp = _space_for(name, dim, signature, ParamTable.empty(param_cap))
        phi = [[_eta_series(sp, a, m) for m in range(dim)] for a in range(dim)]
        zero_p = ParamPoly.zero(sp.params)
        K = [[[zero_p] * dim for _ in range(dim)] for _ in range(dim)]
        lin = LinearRealization(sp, name, K)
        return Realization(sp, name, phi, builder=build, linear=lin)

    if name in ("snyder", "snyder-general"):
        sp = _space_for(name, dim, signature, ParamTable.single("l", param_cap))
        l2 = ParamPoly.symbol(sp.params, "l") * ParamPoly.symbol(sp.params, "l")
        p = identity_vector(sp, ("p",), "p")
        if name == "snyder":
            phi1 = (Fraction(1),)
            phi2 = (Fraction(1),)
        else:
            phi1 = tuple(Fraction(c) for c in opts.get("phi1", (1,)))
            phi2 = tuple(Fraction(c) for c in opts.get("phi2", (1,)))
            if not phi1 or phi1[0] != 1:
                raise ModelConfigError("phi1 must start with coefficient 1")
        s = dot(sp, p, p).scale(l2)  # l^2 p.p, momentum degree 2

        def poly_in(coeffs):
            acc = zero(sp, ("p",), INF)
            power = one(sp, ("p",))
            for j, c in enumerate(coeffs):
                if j:
                    power = power * s
                if c:
                    acc = acc + power.scale(GaussScalar(c))
            return acc

        f1 = poly_in(phi1)
        f2 = poly_in(phi2)
        phi = []
        for a in range(dim):
            row = []
            for m in range(dim):
                acc = _eta_series(sp, a, m) * f1 if a == m else zero(sp, ("p",))
                extra = (p[a] * p[m]).scale(l2) * f2
                row.append((acc + extra).truncate(order))
            phi.append(row)
        return Realization(sp, name, phi, builder=build, opts=opts)

    if name == "su2":
        sp = _space_for(name, 3, signature, ParamTable.single("l", param_cap))
        if any(w != 1 for w in sp.metric):
            raise ModelConfigError("su2 model requires euclidean signature")
        lsym = ParamPoly.symbol(sp.params, "l")
        l2 = lsym * lsym
        p = identity_vector(sp, ("p",), "p")
        root = expand_fn("sqrt1p", dot(sp, p, p).scale(l2).scale(GaussScalar(-1)).truncate(order), order=order)
        phi = []
        for a in range(3):
            row = []
            for m in range(3):
                acc = root if a == m else zero(sp, ("p",), order)
                for k in range(3):
                    e = epsilon(m, a, k)
                    if e:
                        acc = acc + p[k].truncate(order).scale(lsym).scale(GaussScalar(e))
                row.append(acc)
            phi.append(row)
        return Realization(sp, name, phi, builder=build)

    # kappa family: momentum-linear, exact
    null_metric = None
    if name == "kappa-light":
        null_metric = (
            (-1,) + (1,) * (dim - 1)
            if signature in (None, "lorentzian")
            else (1,) * dim
        )
    table = ParamTable.vector("a", dim, param_cap, null_metric=null_metric)
    sp = _space_for(name, dim, signature, table)
    kind = {"kappa-right": "right", "kappa-left": "left"}.get(name, "light")
    lin = LinearRealization(sp, name, _linear_K(sp, kind))
    return lin.as_realization(builder=build)
