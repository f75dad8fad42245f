"""Angular-momentum operators acting exactly on :class:`TrigExpr` (hbar = 1).

The ladder operators here are the hbar-divided ones,

    M'+ = exp(+i phi) (d/dtheta + i cot(theta) d/dphi)
    M'- = exp(-i phi) (d/dtheta - i cot(theta) d/dphi)

Outputs that contain ``cot(k theta)`` with ``k > 1`` fall outside the
single-angle family, so anomalous ladder results are certified through the
cleared identity ``R * sin * U_{k-1}(cos) = scale * T_k(cos) * Y`` instead of
being represented directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Union

from .harmonics import QuantumNumbers, make_harmonic
from .kinds import OperatorKind
from .symtrig import (
    GaussianRational,
    HalfInteger,
    TrigExpr,
    chebyshev_T,
    canonicalize,
    chebyshev_U_shifted,
    dphi_terms,
    dtheta_terms,
    format_fraction,
)

__all__ = [
    "OperatorKind",
    "apply",
    "m2_from_components",
    "EigenCheck",
    "eigen_check",
    "Annihilated",
    "Proportional",
    "Anomalous",
    "Other",
    "LadderOutcome",
    "ladder_apply",
    "ladder_classify",
    "ladder_report",
    "ladder_constant_expected",
    "merzbacher_double_step",
    "commutator_check",
]

_I = GaussianRational(0, 1)
_MINUS_I = GaussianRational(0, -1)
_HALF = Fraction(1, 2)

_SIN = TrigExpr.monomial(1, 1)

# Each operator is a list of (factor, sin2 shift, cos shift, phi2 shift, source), where
# source is the theta derivative "t", the phi derivative "p", or their second
# derivatives "tt" and "pp".  With sin(phi) = (e^{i phi} - e^{-i phi}) / 2i and
# cos(phi) = (e^{i phi} + e^{-i phi}) / 2:
#   Mx = -i(-sin(phi) d_t - cot cos(phi) d_p) = (e+ - e-)/2 d_t + i(e+ + e-)/2 cot d_p
#   My = -i(cos(phi) d_t - cot sin(phi) d_p)  = -i(e+ + e-)/2 d_t + (e+ - e-)/2 cot d_p
#   M2 = -(d_tt + cot d_t + sin^-2 d_pp)
_H = GaussianRational(_HALF)
_IH = GaussianRational(0, _HALF)
_STENCILS = {
    OperatorKind.Mz: [(_MINUS_I, 0, 0, 0, "p")],
    OperatorKind.M2: [(-1, 0, 0, 0, "tt"), (-1, -2, 1, 0, "t"), (-1, -4, 0, 0, "pp")],
    OperatorKind.Mx: [(_H, 0, 0, 2, "t"), (-_H, 0, 0, -2, "t"), (_IH, -2, 1, 2, "p"), (_IH, -2, 1, -2, "p")],
    OperatorKind.My: [(-_IH, 0, 0, 2, "t"), (-_IH, 0, 0, -2, "t"), (_H, -2, 1, 2, "p"), (-_H, -2, 1, -2, "p")],
    OperatorKind.MplusPrime: [(1, 0, 0, 2, "t"), (_I, -2, 1, 2, "p")],
    OperatorKind.MminusPrime: [(1, 0, 0, -2, "t"), (_MINUS_I, -2, 1, -2, "p")],
}


def apply(kind: OperatorKind, e: TrigExpr) -> TrigExpr:
    try:
        stencil = _STENCILS[kind]
    except KeyError:
        raise ValueError(f"unsupported operator {kind!r}") from None
    derivs = {"t": dtheta_terms(e.terms), "p": dphi_terms(e.terms)}
    if kind is OperatorKind.M2:
        derivs["tt"] = dtheta_terms(derivs["t"])
        derivs["pp"] = dphi_terms(derivs["p"])
    raw = [
        (factor * c, s + ds, q + dc, p + dp)
        for factor, ds, dc, dp, src in stencil
        for c, s, q, p in derivs[src]
    ]
    return canonicalize(raw)


def m2_from_components(e: TrigExpr) -> TrigExpr:
    """``Mx(Mx e) + My(My e) + Mz(Mz e)``; must agree with ``apply(M2, e)``."""
    total = TrigExpr.zero()
    for k in (OperatorKind.Mx, OperatorKind.My, OperatorKind.Mz):
        total = total + apply(k, apply(k, e))
    return total


class EigenCheck(NamedTuple):
    eigenvalue: Optional[GaussianRational]
    residual: TrigExpr


def eigen_check(e: TrigExpr, kind: OperatorKind) -> EigenCheck:
    """Exact test of ``apply(kind, e) == lambda * e``.

    ``lambda`` is read off the leading canonical term of ``e`` and then
    certified by exact subtraction.  On failure the eigenvalue is ``None`` and
    the residual ``apply(kind, e) - lambda * e`` is nonzero.
    """
    if e.is_zero():
        raise ValueError("eigen_check needs a nonzero expression")
    out = apply(kind, e)
    lead = e.leading()
    lam = out.coefficient(lead.sin2, lead.cos, lead.phi2) / lead.coeff
    residual = out - lam * e
    if residual.is_zero():
        return EigenCheck(lam, residual)
    return EigenCheck(None, residual)


@dataclass(frozen=True)
class Annihilated:
    outcome = "annihilated"


@dataclass(frozen=True)
class Proportional:
    constant: GaussianRational
    target: QuantumNumbers
    outcome = "proportional"


@dataclass(frozen=True)
class Anomalous:
    """Result equals ``scale * cot(k theta) * Y(target)``."""

    k: int
    scale: Fraction
    target: QuantumNumbers
    outcome = "anomalous"


@dataclass(frozen=True)
class Other:
    residual: TrigExpr
    outcome = "other"


LadderOutcome = Union[Annihilated, Proportional, Anomalous, Other]

_LADDER = {"up": OperatorKind.MplusPrime, "down": OperatorKind.MminusPrime}


def _direction(direction: str) -> OperatorKind:
    try:
        return _LADDER[direction]
    except KeyError:
        raise ValueError(f"direction must be 'up' or 'down', not {direction!r}") from None


def ladder_apply(qn: QuantumNumbers, direction: str) -> TrigExpr:
    return apply(_direction(direction), make_harmonic(qn).expr)


def _ratio_at_lead(num: TrigExpr, den: TrigExpr) -> GaussianRational:
    lead = den.leading()
    return num.coefficient(lead.sin2, lead.cos, lead.phi2) / lead.coeff


def ladder_classify(qn: QuantumNumbers, direction: str) -> LadderOutcome:
    result = ladder_apply(qn, direction)
    if result.is_zero():
        return Annihilated()

    m2 = qn.m.twice + (2 if direction == "up" else -2)
    if abs(m2) > qn.l.twice:
        return Other(result)
    target = QuantumNumbers(qn.l, HalfInteger(m2))
    y = make_harmonic(target).expr

    c = _ratio_at_lead(result, y)
    if c and (result - c * y).is_zero():
        return Proportional(c, target)

    if not qn.l.is_integer():
        k = (qn.l.twice + 1) // 2
        cleared = result * _SIN * chebyshev_U_shifted(k)
        base = chebyshev_T(k) * y
        s = _ratio_at_lead(cleared, base)
        if s and s.is_real() and (cleared - s * base).is_zero():
            return Anomalous(k, s.re, target)

    return Other(result)


def ladder_report(qn: QuantumNumbers, direction: str, outcome: Optional[LadderOutcome] = None) -> dict:
    """JSON-ready classification record."""
    if outcome is None:
        outcome = ladder_classify(qn, direction)
    rec = {"l2": qn.l.twice, "m2": qn.m.twice, "dir": direction, "outcome": outcome.outcome}
    if isinstance(outcome, Proportional):
        rec["constant"] = str(outcome.constant)
    elif isinstance(outcome, Anomalous):
        rec["k"] = outcome.k
        rec["scale"] = format_fraction(outcome.scale)
    rec["residualNonzero"] = isinstance(outcome, Other)
    return rec


def ladder_constant_expected(l, m, direction: str) -> float:
    """Normalized-state ladder factor ``sqrt((l -+ m)(l +- m + 1))``; reporting only.

    The harmonics built here are unnormalized, so their ladder constants are
    not expected to match this value.
    """
    l, m = HalfInteger.of(l).value, HalfInteger.of(m).value
    _direction(direction)
    if direction == "up":
        sq = (l - m) * (l + m + 1)
    else:
        sq = (l + m) * (l - m + 1)
    return math.sqrt(sq) if sq > 0 else 0.0


def merzbacher_double_step(l) -> TrigExpr:
    """``(M'-)^2`` applied to ``Y(l, 1/2)`` for half-odd-integer ``l``."""
    l = HalfInteger.of(l)
    if l.is_integer():
        raise ValueError("l must be a half-odd integer")
    once = ladder_apply(QuantumNumbers(l, HalfInteger(1)), "down")
    return apply(OperatorKind.MminusPrime, once)


def commutator_check(f: TrigExpr) -> dict:
    """Exact residuals of the angular-momentum commutation relations on ``f``.

    Every value in the returned mapping is zero when the relations hold.
    """
    Mx, My, Mz, M2 = OperatorKind.Mx, OperatorKind.My, OperatorKind.Mz, OperatorKind.M2
    x, y, z = apply(Mx, f), apply(My, f), apply(Mz, f)

    def comm(a, b, fa, fb):
        return apply(a, fb) - apply(b, fa)

    return {
        "[Mx,My]-iMz": comm(Mx, My, x, y) - _I * z,
        "[My,Mz]-iMx": comm(My, Mz, y, z) - _I * x,
        "[Mz,Mx]-iMy": comm(Mz, Mx, z, x) - _I * y,
        "[M2,Mz]": comm(M2, Mz, apply(M2, f), z),
    }
