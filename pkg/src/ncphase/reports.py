"""Check results and their deterministic text/JSON renderings."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

__all__ = ["Discrepancy", "CheckResult", "render_text", "render_json", "first_discrepancy"]


@dataclass(frozen=True)
class Discrepancy:
    """First offending term of a failed identity, in canonical order."""

    indices: tuple
    monomial: str
    coeff_re: str
    coeff_im: str

    def as_dict(self):
        return {
            "indices": list(self.indices),
            "monomial": self.monomial,
            "coeff_re": self.coeff_re,
            "coeff_im": self.coeff_im,
        }


@dataclass
class CheckResult:
    model: str
    check: str
    order: object  # int, or "exact" for finite closed-form comparisons
    ok: bool
    discrepancy: Optional[Discrepancy] = None
    ms: int = 0
    details: dict = field(default_factory=dict)

    @property
    def verdict(self):
        return "pass" if self.ok else "fail"


def first_discrepancy(diff_series, indices):
    """Build a Discrepancy from the graded-lex first term of a nonzero diff."""
    ft = diff_series.first_term()
    if ft is None:
        return None
    key, poly = ft
    mono = diff_series.monomial_str(key)
    pkey = min(poly.terms, key=lambda k: (sum(k), k))
    pmono = poly.monomial_str(pkey)
    coeff = poly.terms[pkey]
    full = "*".join(p for p in (pmono, mono) if p) or "1"
    return Discrepancy(
        indices=tuple(indices),
        monomial=full,
        coeff_re=str(coeff.re),
        coeff_im=str(coeff.im),
    )


def render_text(result):
    lines = [
        "model      : %s" % result.model,
        "check      : %s" % result.check,
        "order      : %s" % result.order,
        "verdict    : %s" % result.verdict,
    ]
    if result.discrepancy is not None:
        d = result.discrepancy
        lines.append(
            "discrepancy: indices=%s  %s * (%s + %s*i)"
            % (list(d.indices), d.monomial, d.coeff_re, d.coeff_im)
        )
    for k in sorted(result.details):
        lines.append("%-11s: %s" % (k, result.details[k]))
    lines.append("ms         : %d" % result.ms)
    return "\n".join(lines)


def result_dict(result):
    out = {
        "model": result.model,
        "check": result.check,
        "order": "exact" if result.order == "exact" or result.order == float("inf") else int(result.order),
        "verdict": result.verdict,
        "discrepancy": None
        if result.discrepancy is None
        else result.discrepancy.as_dict(),
        "ms": int(result.ms),
    }
    if result.details:
        out["details"] = {k: result.details[k] for k in sorted(result.details)}
    return out


def render_json(results):
    if isinstance(results, CheckResult):
        payload = result_dict(results)
    else:
        payload = [result_dict(r) for r in results]
    return json.dumps(payload, indent=2, sort_keys=False)
