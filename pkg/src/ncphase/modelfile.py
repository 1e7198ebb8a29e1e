"""Model config files: a line-oriented format for user-defined realizations.

A file declares one model:

    # free-text comment
    format: 1
    name: light-closed
    dim: 4
    metric: lorentzian
    order: 6
    param: a vector null
    phi: eta(mu,nu)*(1 + dot(a,p)) - a[mu]*p[nu]
    chi: 0

Keys are ``key: value`` lines; a line starting with whitespace continues
the previous value, so long expressions can wrap.  ``param:`` lines are
repeatable and declare ``<name> scalar|vector|matrix`` symbols (vectors
expand to name0..name{dim-1}, matrices row-major to name00..); a vector
may carry the ``null`` marker, which imposes a.a = 0 in the coefficient
ring.  ``phi:``/``chi:`` give entries as expressions over the free index
pair mu (coordinate row) and nu (column); ``phi[i][j]:`` and ``chi[i]:``
override single entries.  ``metric:`` accepts euclidean, lorentzian or an
explicit sign string such as ``-+++``.  ``cap:`` bounds the parameter
degree (default order + 4).

Loading validates the flat limit: with all parameters switched off, phi
must reduce to the metric and chi to zero.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import ExprSyntaxError, ModelConfigError, NCPhaseError
from .exprlang import ExprContext, lower, parse
from .params import ParamPoly, ParamTable
from .realizations import LinearRealization, Realization
from .scalars import GaussScalar
from .series import DEFAULT_ORDER, INF, Space, zero

__all__ = ["ModelConfig", "ParamDecl", "parse_model_text", "load_model", "build_realization"]

_RESERVED = {"i", "mu", "nu", "p", "eta", "epsilon", "dot", "sum",
             "exp", "ln1p", "log1p", "sqrt1p", "inv1p"}


class ParamDecl:
    __slots__ = ("name", "kind", "null")

    def __init__(self, name, kind, null=False):
        self.name = name
        self.kind = kind
        self.null = null


class ModelConfig:
    """Parsed config; build_realization turns it into a Realization."""

    __slots__ = ("name", "dim", "metric", "order", "cap", "params",
                 "phi_default", "phi_entries", "chi_default", "chi_entries")

    def __init__(self, name, dim, metric, order, cap, params,
                 phi_default, phi_entries, chi_default, chi_entries):
        self.name = name
        self.dim = dim
        self.metric = metric
        self.order = order
        self.cap = cap
        self.params = params
        self.phi_default = phi_default
        self.phi_entries = phi_entries
        self.chi_default = chi_default
        self.chi_entries = chi_entries

    def build(self, order=None):
        return build_realization(self, order=order)


def _parse_metric(text, dim, where):
    text = text.strip()
    if text == "euclidean":
        return (1,) * dim
    if text == "lorentzian":
        return (-1,) + (1,) * (dim - 1)
    if set(text) <= {"+", "-"} and text:
        if len(text) != dim:
            raise ModelConfigError(
                "%s: metric %r has %d signs for dimension %d"
                % (where, text, len(text), dim)
            )
        return tuple(1 if c == "+" else -1 for c in text)
    raise ModelConfigError(
        "%s: metric must be euclidean, lorentzian or a +- string" % where
    )


def _parse_entry_key(key, where):
    """Split e.g. phi[0][1] -> ("phi", (0, 1)); plain keys pass through."""
    if "[" not in key:
        return key, None
    base, rest = key.split("[", 1)
    idx = []
    rest = "[" + rest
    while rest:
        if not (rest.startswith("[") and "]" in rest):
            raise ModelConfigError("%s: malformed key %r" % (where, key))
        head, rest = rest[1:].split("]", 1)
        if not head.isdigit():
            raise ModelConfigError(
                "%s: key indices must be literal integers (%r)" % (where, key)
            )
        idx.append(int(head))
    return base, tuple(idx)


def _logical_lines(text):
    """(line_number, content) pairs with continuations folded in."""
    out = []
    for ln, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.strip().startswith("#"):
            continue
        if raw[:1] in " \t":
            if not out:
                raise ModelConfigError("line %d: continuation before any key" % ln)
            prev_ln, prev = out[-1]
            out[-1] = (prev_ln, prev + " " + raw.strip())
            continue
        out.append((ln, raw.strip()))
    return out


def parse_model_text(text, source="<config>"):
    fields = {}
    params = []
    phi_entries, chi_entries = {}, {}
    phi_default = chi_default = None

    for ln, line in _logical_lines(text):
        where = "%s:%d" % (source, ln)
        if ":" not in line:
            raise ModelConfigError("%s: expected 'key: value'" % where)
        key, value = line.split(":", 1)
        key, value = key.strip(), value.strip()
        base, idx = _parse_entry_key(key, where)
        if base == "param":
            words = value.split()
            if not 2 <= len(words) <= 3:
                raise ModelConfigError(
                    "%s: param takes '<name> scalar|vector|matrix [null]'" % where
                )
            name, kind = words[0], words[1]
            null = len(words) == 3
            if null and words[2] != "null":
                raise ModelConfigError("%s: unknown marker %r" % (where, words[2]))
            if kind not in ("scalar", "vector", "matrix"):
                raise ModelConfigError("%s: unknown param kind %r" % (where, kind))
            if null and kind != "vector":
                raise ModelConfigError("%s: only a vector can be null" % where)
            if not name.isidentifier() or name in _RESERVED:
                raise ModelConfigError("%s: bad param name %r" % (where, name))
            if any(p.name == name for p in params):
                raise ModelConfigError("%s: duplicate param %r" % (where, name))
            params.append(ParamDecl(name, kind, null))
            continue
        if base in ("phi", "chi"):
            try:
                ast = parse(value)
            except ExprSyntaxError as exc:
                raise ModelConfigError("%s: %s: %s" % (where, key, exc)) from exc
            if base == "phi":
                if idx is None:
                    phi_default = ast
                elif len(idx) == 2:
                    phi_entries[idx] = ast
                else:
                    raise ModelConfigError("%s: phi override needs [i][j]" % where)
            else:
                if idx is None:
                    chi_default = ast
                elif len(idx) == 1:
                    chi_entries[idx[0]] = ast
                else:
                    raise ModelConfigError("%s: chi override needs [i]" % where)
            continue
        if idx is not None:
            raise ModelConfigError("%s: unknown key %r" % (where, key))
        if base in fields:
            raise ModelConfigError("%s: duplicate key %r" % (where, base))
        fields[base] = (ln, value)

    def need(key):
        if key not in fields:
            raise ModelConfigError("%s: missing required key %r" % (source, key))
        return fields.pop(key)[1]

    fmt = need("format")
    if fmt != "1":
        raise ModelConfigError("%s: unsupported format %r (expected 1)" % (source, fmt))
    name = need("name")
    dim_text = need("dim")
    if not dim_text.isdigit() or int(dim_text) < 1:
        raise ModelConfigError("%s: dim must be a positive integer" % source)
    dim = int(dim_text)

    order = DEFAULT_ORDER
    if "order" in fields:
        ln, v = fields.pop("order")
        if not v.isdigit() or int(v) < 1:
            raise ModelConfigError("%s:%d: order must be a positive integer" % (source, ln))
        order = int(v)

    metric = (-1,) + (1,) * (dim - 1)
    if "metric" in fields:
        ln, v = fields.pop("metric")
        metric = _parse_metric(v, dim, "%s:%d" % (source, ln))

    cap = order + 4
    if "cap" in fields:
        ln, v = fields.pop("cap")
        if not v.isdigit() or int(v) < 1:
            raise ModelConfigError("%s:%d: cap must be a positive integer" % (source, ln))
        cap = int(v)

    if fields:
        ln, _ = next(iter(fields.values()))
        raise ModelConfigError(
            "%s:%d: unknown key %r" % (source, ln, next(iter(fields)))
        )
    if phi_default is None and len(phi_entries) < dim * dim:
        raise ModelConfigError("%s: phi is not fully specified" % source)
    if sum(1 for p in params if p.null) > 1:
        raise ModelConfigError("%s: at most one null vector" % source)

    return ModelConfig(
        name, dim, metric, order, cap, params,
        phi_default, phi_entries, chi_default, chi_entries,
    )


def _build_table(cfg):
    names = []
    null_pivot = null_replacement = None
    for decl in cfg.params:
        if decl.kind == "scalar":
            names.append(decl.name)
            continue
        if decl.kind == "vector":
            offset = len(names)
            names.extend("%s%d" % (decl.name, j) for j in range(cfg.dim))
            if decl.null:
                null_pivot = offset
            continue
        names.extend(
            "%s%d%d" % (decl.name, r, c)
            for r in range(cfg.dim)
            for c in range(cfg.dim)
        )
    if null_pivot is not None:
        # a0^2 -> -(1/eta_00) sum_{j>0} eta_jj aj^2, width of the full table
        width = len(names)
        s0 = cfg.metric[0]
        null_replacement = {}
        for j in range(1, cfg.dim):
            key = tuple(
                2 if t == null_pivot + j else 0 for t in range(width)
            )
            null_replacement[key] = GaussScalar(Fraction(-cfg.metric[j], s0))
    return ParamTable(names, cfg.cap, null_pivot, null_replacement)


def _context(cfg, space, order):
    scalars, vectors, matrices = {}, {}, {}
    for decl in cfg.params:
        if decl.kind == "scalar":
            scalars[decl.name] = ParamPoly.symbol(space.params, decl.name)
        elif decl.kind == "vector":
            vectors[decl.name] = [
                ParamPoly.symbol(space.params, "%s%d" % (decl.name, j))
                for j in range(cfg.dim)
            ]
        else:
            matrices[decl.name] = [
                [
                    ParamPoly.symbol(space.params, "%s%d%d" % (decl.name, r, c))
                    for c in range(cfg.dim)
                ]
                for r in range(cfg.dim)
            ]
    return ExprContext(space, ("p",), order, scalars, vectors, matrices)


def _extract_linear(space, name, phi):
    """Recover the K tensor when phi - eta is exactly momentum-linear."""
    n = space.dim
    K = [[[ParamPoly.zero(space.params) for _ in range(n)] for _ in range(n)]
         for _ in range(n)]
    for a in range(n):
        for m in range(n):
            s = phi[a][m]
            if s.order is not INF:
                # a truncated entry cannot certify linearity
                return None
            for key, poly in s.terms.items():
                deg = sum(key)
                if deg == 0:
                    want = GaussScalar(space.metric[a]) if a == m else None
                    if want is None or poly != ParamPoly.const(space.params, want):
                        return None
                    continue
                if deg > 1:
                    return None
                b = key.index(1)
                K[b][m][a] = poly.scale(GaussScalar(space.metric[b]))
    return LinearRealization(space, name, K)


def build_realization(cfg, order=None, table=None):
    """Lower a ModelConfig to a Realization at the requested order."""
    order = cfg.order if order is None else order
    if table is None:
        table = _build_table(cfg)
    space = Space(cfg.dim, cfg.metric, table)
    ctx = _context(cfg, space, order)
    n = cfg.dim
    for key in cfg.phi_entries:
        if not all(0 <= t < n for t in key):
            raise ModelConfigError("model %r: phi override %s out of range" % (cfg.name, key))
    for key in cfg.chi_entries:
        if not 0 <= key < n:
            raise ModelConfigError("model %r: chi override [%d] out of range" % (cfg.name, key))

    def entry(ast, **indices):
        try:
            return lower(ast, ctx.bind(**indices))
        except NCPhaseError as exc:
            raise ModelConfigError("model %r: %s" % (cfg.name, exc)) from exc

    # entries keep the order their lowering earned: polynomial forms stay
    # exact, only fn/division forms are pinned to the truncation order
    phi = []
    for mu in range(n):
        row = []
        for nu in range(n):
            ast = cfg.phi_entries.get((mu, nu), cfg.phi_default)
            row.append(entry(ast, mu=mu, nu=nu))
        phi.append(row)
    chi = []
    for mu in range(n):
        ast = cfg.chi_entries.get(mu, cfg.chi_default)
        if ast is None:
            chi.append(zero(space, ("p",)))
        else:
            chi.append(entry(ast, mu=mu))

    def rebuild(w):
        return build_realization(cfg, order=w, table=table)

    linear = None
    if all(c.is_zero() for c in chi):
        linear = _extract_linear(space, cfg.name, phi)
    real = Realization(space, cfg.name, phi, chi, builder=rebuild, linear=linear)
    if not real.is_flat_limit():
        raise ModelConfigError(
            "model %r: phi must reduce to the metric (and chi to zero) "
            "with all parameters off" % cfg.name
        )
    return real


def load_model(path, order=None):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    cfg = parse_model_text(text, source=str(path))
    return cfg.build(order=order)
