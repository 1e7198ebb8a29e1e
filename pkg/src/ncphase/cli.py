"""Command line front end.

Subcommands:

    catalog    list the built-in models
    check      run one verification: jacobi, closure, assoc, coassoc,
               twist, cocycle, qdeform
    dmu        momentum composition law components D_mu(k, q)
    coproduct  deformed coproduct components on tensor legs p1, p2
    star       star product of two coordinate monomials
    solve-j    transport-flow solution J(k, q) plus the scalar phase h
    batch      every catalog model x the full check battery

Models come either from the catalog (``--model``) or from a model
description file (``--config``, see the modelfile module for the
format).  Exit status is 0 when every requested check passes, 1 when
at least one verdict is ``fail``, 2 on usage or configuration errors.
Output is deterministic: identical invocations print identical bytes
(wall times are reported as 0 unless ``--timings`` is given).
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .borel import cocycle_check_borel
from .coalgebra import (
    coassociativity_check,
    coproduct,
    coproduct_conjugation_check,
    invert_twist,
    twist_consistency_check,
    twist_normal_ordered,
)
from .errors import NCPhaseError
from .modelfile import load_model
from .qdeform import (
    QDeformation,
    momentum_relation_check,
    q_coproduct_check,
    q_relation_check,
    q_star_action_check,
    q_star_associativity_check,
    q_twist_cocycle_check,
    y_partner_check,
)
from .realizations import (
    CATALOG_NAMES,
    DEFAULT_ORDER,
    catalog_get,
    closure_check,
    jacobi_check,
)
from .reports import render_json, render_text, result_dict
from .series import INF
from .star import (
    associativity_check,
    composition_law,
    flow_residual,
    solve_plane_wave_flow,
    star_monomial,
)

CHECK_NAMES = ("jacobi", "closure", "assoc", "coassoc", "twist", "cocycle", "qdeform")
BATCH_CHECKS = ("jacobi", "closure", "assoc", "coassoc", "twist", "conj")

# quadratic exchange models live outside the realization catalog; they
# are reachable from check qdeform / check cocycle only
Q_MODES = {"q-antisymmetric": "antisymmetric", "q-symmetric": "symmetric"}

# name, dim, signature, parameters, note
CATALOG_ROWS = (
    ("undeformed", 4, "lorentzian", "-", "flat reference, identity phi"),
    ("snyder", 4, "lorentzian", "l", "phi = eta + l^2 p p"),
    ("snyder-general", 4, "lorentzian", "l", "two Maclaurin series in l^2 p.p"),
    ("su2", 3, "euclidean", "l", "rotation-algebra coordinates"),
    ("kappa-right", 4, "lorentzian", "a (vector)", "momentum-linear, right covariant"),
    ("kappa-left", 4, "lorentzian", "a (vector)", "momentum-linear, left covariant"),
    ("kappa-light", 4, "lorentzian", "a (null vector)", "momentum-linear, light-like"),
    ("kappa-snyder", 4, "lorentzian", "a (vector)", "momentum-linear, mixed shape"),
    ("q-antisymmetric", 3, "euclidean", "a (antisymmetric matrix)", "exchange relations; check qdeform/cocycle"),
    ("q-symmetric", 3, "euclidean", "a (symmetric matrix)", "commuting mode; check qdeform/cocycle"),
)


class UsageError(Exception):
    pass


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("not a rational number: %r" % text)


def _exponent_tuple(text):
    try:
        exps = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("not a comma-separated exponent list: %r" % text)
    if any(e < 0 for e in exps):
        raise argparse.ArgumentTypeError("exponents must be non-negative: %r" % text)
    return exps


def _order_label(order):
    return "exact" if order is INF else int(order)


def _load_realization(args):
    if args.config is not None:
        return load_model(args.config, order=args.order)
    if args.model in Q_MODES:
        raise UsageError(
            "%s is a quadratic exchange model; use check qdeform or check cocycle" % args.model
        )
    return catalog_get(args.model, order=args.order)


def _emit(args, text):
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _render_results(args, results):
    if args.format == "json":
        return render_json(results if len(results) != 1 else results[0])
    return "\n\n".join(render_text(r) for r in results)


def _exit_for(results):
    return 0 if all(r.ok for r in results) else 1


def _timed(args, fn):
    t0 = time.perf_counter()
    result = fn()
    ms = int((time.perf_counter() - t0) * 1000)
    if getattr(args, "timings", False):
        result.ms = ms
    return result


def _single_check(kind, real, order, u):
    if kind == "jacobi":
        return jacobi_check(real, order=order)
    if kind == "closure":
        return closure_check(real, order=order)
    claw = composition_law(real, order=order)
    if kind == "assoc":
        return associativity_check(claw, model=real.name)
    if kind == "coassoc":
        return coassociativity_check(claw, model=real.name)
    if kind == "twist":
        finv = twist_normal_ordered(claw, u)
        return twist_consistency_check(real, finv, model=real.name)
    if kind == "conj":
        finv = twist_normal_ordered(claw, u)
        return coproduct_conjugation_check(
            coproduct(claw), invert_twist(finv), finv, model=real.name
        )
    raise UsageError("unknown check %r" % kind)


def _qdeformation(name, order):
    return QDeformation.build(mode=Q_MODES[name], acap=order)


def _cocycle_check(args):
    name = args.model
    if args.config is not None:
        raise UsageError("check cocycle needs --model, not --config")
    if name == "kappa-right":
        return cocycle_check_borel(variant="right", acap=args.order)
    if name == "kappa-left":
        return cocycle_check_borel(variant="left", acap=args.order)
    if name in Q_MODES:
        return q_twist_cocycle_check(_qdeformation(name, args.order))
    raise UsageError(
        "cocycle check supports kappa-right, kappa-left, q-antisymmetric, q-symmetric"
    )


def _qdeform_battery(args):
    if args.config is not None:
        raise UsageError("check qdeform needs --model, not --config")
    if args.model not in Q_MODES:
        raise UsageError("check qdeform supports q-antisymmetric and q-symmetric")
    Q = _qdeformation(args.model, args.order)
    return [
        q_relation_check(Q),
        momentum_relation_check(Q),
        y_partner_check(Q),
        q_star_action_check(Q),
        q_star_associativity_check(Q),
        q_coproduct_check(Q),
    ]


def _cmd_check(args):
    if args.kind == "cocycle":
        results = [_timed(args, lambda: _cocycle_check(args))]
    elif args.kind == "qdeform":
        results = _timed_list(args, lambda: _qdeform_battery(args))
    else:
        real = _load_realization(args)
        results = [_timed(args, lambda: _single_check(args.kind, real, args.order, args.u))]
    _emit(args, _render_results(args, results))
    return _exit_for(results)


def _timed_list(args, fn):
    t0 = time.perf_counter()
    results = fn()
    ms = int((time.perf_counter() - t0) * 1000)
    if getattr(args, "timings", False) and results:
        results[0].ms = ms
    return results


def _series_payload(args, real, label, components, extra=None):
    payload = {
        "model": real.name,
        "order": _order_label(args.order),
        "components": {"%s[%d]" % (label, i): s for i, s in enumerate(components)},
    }
    if extra:
        payload.update(extra)
    if args.format == "json":
        return json.dumps(payload, indent=2)
    lines = ["model : %s" % payload["model"], "order : %s" % payload["order"]]
    for key, value in payload["components"].items():
        lines.append("%s : %s" % (key, value))
    if extra:
        for key in extra:
            lines.append("%s : %s" % (key, payload[key]))
    return "\n".join(lines)


def _cmd_dmu(args):
    real = _load_realization(args)
    claw = composition_law(real, order=args.order)
    comps = [s.as_str() for s in claw.D]
    extra = {}
    if not claw.G.is_zero():
        extra["G"] = claw.G.as_str()
    _emit(args, _series_payload(args, real, "D", comps, extra))
    return 0


def _cmd_coproduct(args):
    real = _load_realization(args)
    cop = coproduct(composition_law(real, order=args.order))
    comps = [s.as_str() for s in cop.delta]
    _emit(args, _series_payload(args, real, "Delta", comps))
    return 0


def _cmd_solve_j(args):
    real = _load_realization(args)
    flow = solve_plane_wave_flow(real, order=args.order)
    residuals = flow_residual(real, flow)
    verdict = "zero" if all(r.is_zero() for r in residuals) else "nonzero"
    extra = {}
    if not flow.h.is_zero():
        extra["h"] = flow.h.as_str()
    extra["residual"] = verdict
    comps = [s.as_str() for s in flow.J]
    _emit(args, _series_payload(args, real, "J", comps, extra))
    return 0 if verdict == "zero" else 1


def _cmd_star(args):
    real = _load_realization(args)
    n = real.space.dim
    for name, exps in (("left", args.left), ("right", args.right)):
        if len(exps) != n:
            raise UsageError(
                "%s exponent tuple has %d entries, model is %d dimensional"
                % (name, len(exps), n)
            )
    degree = sum(args.left) + sum(args.right)
    order = max(args.order, degree)
    claw = composition_law(real, order=order)
    prod = star_monomial(claw, args.left, args.right)
    payload = {
        "model": real.name,
        "order": _order_label(order),
        "left": list(args.left),
        "right": list(args.right),
        "product": prod.as_str(),
    }
    if args.format == "json":
        _emit(args, json.dumps(payload, indent=2))
    else:
        lines = [
            "model   : %s" % payload["model"],
            "order   : %s" % payload["order"],
            "left    : x^%s" % (tuple(args.left),),
            "right   : x^%s" % (tuple(args.right),),
            "product : %s" % payload["product"],
        ]
        _emit(args, "\n".join(lines))
    return 0


def _cmd_catalog(args):
    if args.format == "json":
        payload = [
            {"name": n, "dim": d, "signature": s, "parameters": p, "note": t}
            for n, d, s, p, t in CATALOG_ROWS
        ]
        _emit(args, json.dumps(payload, indent=2))
        return 0
    widths = [max(len(str(row[i])) for row in CATALOG_ROWS + (("name", "dim", "signature", "parameters", "note"),)) for i in range(5)]
    header = ("name", "dim", "signature", "parameters", "note")
    lines = ["  ".join(str(v).ljust(w) for v, w in zip(header, widths)).rstrip()]
    for row in CATALOG_ROWS:
        lines.append("  ".join(str(v).ljust(w) for v, w in zip(row, widths)).rstrip())
    _emit(args, "\n".join(lines))
    return 0


def _batch_worker(item):
    name, kind, order, u, timings = item
    t0 = time.perf_counter()
    real = catalog_get(name, order=order)
    result = _single_check(kind, real, order, u)
    if timings:
        result.ms = int((time.perf_counter() - t0) * 1000)
    return result


def _cmd_batch(args):
    items = [
        (name, kind, args.order, args.u, args.timings)
        for name in CATALOG_NAMES
        for kind in BATCH_CHECKS
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_batch_worker, items))
    else:
        results = [_batch_worker(item) for item in items]
    if args.format == "json":
        text = json.dumps([result_dict(r) for r in results], indent=2)
    else:
        text = "\n".join(
            "%-14s %-22s %s" % (r.model, r.check, r.verdict) for r in results
        )
    _emit(args, text)
    return _exit_for(results)


def _add_model_flags(p, require=True):
    group = p.add_mutually_exclusive_group(required=require)
    group.add_argument("--model", help="catalog model name")
    group.add_argument("--config", help="model description file")


def _add_common_flags(p):
    p.add_argument("--order", type=int, default=DEFAULT_ORDER, help="truncation order (default %d)" % DEFAULT_ORDER)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", help="write the report to this file instead of stdout")
    p.add_argument("--timings", action="store_true", help="report measured wall times (non-deterministic output)")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="ncphase",
        description="exact-arithmetic engine for deformed quantum phase spaces",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list built-in models")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_catalog)

    p = sub.add_parser("check", help="run one verification")
    p.add_argument("kind", choices=CHECK_NAMES)
    _add_model_flags(p)
    _add_common_flags(p)
    p.add_argument("--u", type=_fraction, default=Fraction(0), help="normal-ordering parameter for the twist (rational, default 0)")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("dmu", help="momentum composition law")
    _add_model_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=_cmd_dmu)

    p = sub.add_parser("coproduct", help="deformed coproduct")
    _add_model_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=_cmd_coproduct)

    p = sub.add_parser("star", help="star product of coordinate monomials")
    p.add_argument("left", type=_exponent_tuple, help="exponents of the left monomial, e.g. 1,0,0,0")
    p.add_argument("right", type=_exponent_tuple, help="exponents of the right monomial")
    _add_model_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=_cmd_star)

    p = sub.add_parser("solve-j", help="transport-flow solution and residual")
    _add_model_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=_cmd_solve_j)

    p = sub.add_parser("batch", help="full catalog x check battery")
    _add_common_flags(p)
    p.add_argument("--u", type=_fraction, default=Fraction(0))
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1, sequential)")
    p.set_defaults(func=_cmd_batch)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except NCPhaseError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
