"""Floating-point oracle for the exact kernel.

Nothing here differentiates symbolically: operators are applied with
fourth-order central differences on :func:`eval_expr` samples, and squared
norms come from Gaussian quadrature rules that are exact for the integrands
that arise.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np

from .harmonics import QuantumNumbers, make_harmonic
from .kinds import OperatorKind
from .symtrig import TrigExpr, eval_expr

__all__ = [
    "GridSpec",
    "OracleReport",
    "DoubleValuedReport",
    "default_grid",
    "fd_apply",
    "oracle_compare",
    "quadrature_nodes_required",
    "quadrature_norm",
    "gauss_chebyshev_u",
    "double_valued_check",
]

POLE_MARGIN = 0.05
REL_FLOOR = 1e-10


@dataclass(frozen=True)
class GridSpec:
    theta_min: float
    theta_max: float
    n_theta: int
    phi_points: tuple
    h: float = 1e-4

    def __post_init__(self):
        if not (POLE_MARGIN <= self.theta_min < self.theta_max <= math.pi - POLE_MARGIN):
            raise ValueError(
                f"theta range [{self.theta_min}, {self.theta_max}] must lie in "
                f"[{POLE_MARGIN}, pi - {POLE_MARGIN}]"
            )
        if self.n_theta < 1 or not self.phi_points:
            raise ValueError("grid needs at least one theta and one phi")
        if not 1e-6 <= self.h <= 1e-2:
            raise ValueError(f"step h={self.h} outside [1e-6, 1e-2]")
        object.__setattr__(self, "phi_points", tuple(float(p) for p in self.phi_points))

    def thetas(self) -> np.ndarray:
        if self.n_theta == 1:
            return np.array([0.5 * (self.theta_min + self.theta_max)])
        return np.linspace(self.theta_min, self.theta_max, self.n_theta)

    def points(self):
        for t in self.thetas():
            for p in self.phi_points:
                yield float(t), p


def default_grid(h: float = 1e-4) -> GridSpec:
    # even theta count keeps pi/2 (a node of every odd polar polynomial) off the grid;
    # phi samples avoid multiples of pi/2, where Mx, My of m = 0 states vanish identically
    return GridSpec(0.4, math.pi - 0.4, 10, (0.3, 1.1, 1.9, 3.3, 5.1), h)


@dataclass(frozen=True)
class OracleReport:
    max_rel_error: float
    worst_point: tuple
    samples: int

    def to_json(self, op: str, qn: QuantumNumbers, h: float) -> dict:
        return {
            "op": op,
            "l2": qn.l.twice,
            "m2": qn.m.twice,
            "maxRelError": self.max_rel_error,
            "worstTheta": self.worst_point[0],
            "worstPhi": self.worst_point[1],
            "samples": self.samples,
            "h": h,
        }


def _d1(f: Callable[[float], complex], x: float, h: float) -> complex:
    # paired differences first: a phi-independent sample row gives exactly zero
    return ((f(x - 2 * h) - f(x + 2 * h)) + 8 * (f(x + h) - f(x - h))) / (12 * h)


def _d2(f: Callable[[float], complex], x: float, h: float) -> complex:
    return (16 * (f(x + h) + f(x - h)) - (f(x + 2 * h) + f(x - 2 * h)) - 30 * f(x)) / (12 * h * h)


def fd_apply(kind: OperatorKind, e: TrigExpr, theta: float, phi: float, h: float = 1e-4) -> complex:
    """Apply ``kind`` to ``e`` at one point using central differences (hbar = 1)."""
    if not 2 * h < theta < math.pi - 2 * h:
        raise ValueError(f"theta={theta} too close to a pole for step h={h}")

    def along_theta(t):
        return eval_expr(e, t, phi)

    def along_phi(p):
        return eval_expr(e, theta, p)

    cot = math.cos(theta) / math.sin(theta)
    if kind is OperatorKind.Mz:
        return -1j * _d1(along_phi, phi, h)
    if kind is OperatorKind.M2:
        s = math.sin(theta)
        return -(_d2(along_theta, theta, h) + cot * _d1(along_theta, theta, h) + _d2(along_phi, phi, h) / (s * s))

    dt = _d1(along_theta, theta, h)
    dp = _d1(along_phi, phi, h)
    if kind is OperatorKind.Mx:
        return -1j * (-math.sin(phi) * dt - cot * math.cos(phi) * dp)
    if kind is OperatorKind.My:
        return -1j * (math.cos(phi) * dt - cot * math.sin(phi) * dp)
    if kind is OperatorKind.MplusPrime:
        return cmath.exp(1j * phi) * (dt + 1j * cot * dp)
    if kind is OperatorKind.MminusPrime:
        return cmath.exp(-1j * phi) * (dt - 1j * cot * dp)
    raise ValueError(f"unsupported operator {kind!r}")


Reference = Union[TrigExpr, Callable[[float, float], complex]]


def oracle_compare(kind: OperatorKind, e: TrigExpr, grid: GridSpec, reference: Reference) -> OracleReport:
    """Max relative gap between ``fd_apply(kind, e)`` and ``reference`` over ``grid``.

    ``reference`` is the claimed exact result, either as an expression or as
    a callable ``(theta, phi) -> complex`` for closed forms outside the
    family (e.g. ``k cot(k theta) Y``).  Relative errors use
    ``max(|exact|, 1e-10)`` as denominator.
    """
    if isinstance(reference, TrigExpr):
        expr = reference

        def reference(t, p):
            return eval_expr(expr, t, p)

    worst, where, n = 0.0, (math.nan, math.nan), 0
    for theta, phi in grid.points():
        exact = reference(theta, phi)
        approx = fd_apply(kind, e, theta, phi, grid.h)
        err = abs(approx - exact) / max(abs(exact), REL_FLOOR)
        n += 1
        if err > worst or n == 1:
            worst, where = err, (theta, phi)
    return OracleReport(worst, where, n)


def quadrature_nodes_required(qn: QuantumNumbers) -> int:
    """Smallest accepted node count, ``ceil(n + |m| + 2)``."""
    return -(-(qn.order * 2 + qn.abs_m.twice + 4) // 2)


def gauss_chebyshev_u(nodes: int):
    """Nodes and weights for ``integral_{-1}^{1} sqrt(1 - x^2) f(x) dx``."""
    i = np.arange(1, nodes + 1)
    ang = i * np.pi / (nodes + 1)
    return np.cos(ang), np.pi / (nodes + 1) * np.sin(ang) ** 2


def _poly_at(coeffs, x: float) -> float:
    # exact Horner at the (exactly representable) node avoids cancellation in high-order P
    xq = Fraction(x)
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * xq + c
    return float(acc)


def quadrature_norm(qn: QuantumNumbers, nodes: int) -> float:
    """``Phi * integral_0^pi |Y|^2 sin dtheta`` by a quadrature exact for the integrand.

    With ``x = cos theta`` the integrand is ``(1 - x^2)^|m| P(x)^2``: a
    polynomial for integer ``m`` (Gauss-Legendre), and ``sqrt(1 - x^2)`` times
    a polynomial for half-odd ``m`` (Gauss-Chebyshev of the second kind).
    """
    need = quadrature_nodes_required(qn)
    if nodes < need:
        raise ValueError(f"{nodes} nodes cannot integrate {qn} exactly; need at least {need}")
    coeffs = make_harmonic(qn).poly.coeffs
    if qn.m.is_integer():
        x, w = np.polynomial.legendre.leggauss(nodes)
        power = qn.abs_m.twice // 2
        period = 2 * math.pi
    else:
        x, w = gauss_chebyshev_u(nodes)
        power = (qn.abs_m.twice - 1) // 2
        period = 4 * math.pi
    vals = np.array([_poly_at(coeffs, float(xi)) for xi in x])
    integrand = (1.0 - x * x) ** power * vals * vals
    return period * math.fsum(w * integrand)


@dataclass
class DoubleValuedReport:
    qn: QuantumNumbers
    ratio_2pi: list = field(default_factory=list)
    ratio_4pi: list = field(default_factory=list)
    prob_spread: float = 0.0
    passed: bool = True

    def to_json(self) -> dict:
        return {
            "l2": self.qn.l.twice,
            "m2": self.qn.m.twice,
            "ratio2pi": [[r.real, r.imag] for r in self.ratio_2pi],
            "ratio4pi": [[r.real, r.imag] for r in self.ratio_4pi],
            "probSpread": self.prob_spread,
            "passed": self.passed,
        }


def _condition(e: TrigExpr, theta: float) -> float:
    """Sum of term magnitudes over the magnitude of the sum (phi-independent for one frequency)."""
    s, c = math.sin(theta), math.cos(theta)
    mags = [abs(complex(t.coeff)) * s ** (t.sin2 / 2) * abs(c) ** t.cos for t in e.terms]
    total = abs(eval_expr(e, theta, 0.0))
    return math.inf if total == 0.0 else math.fsum(mags) / total


def double_valued_check(
    qn: QuantumNumbers,
    thetas: Sequence[float] = (0.3, 0.9, 1.3, 2.2, 2.8),
    phis: Sequence[float] = (0.0, 0.4, 1.7, 3.0, 4.6, 6.0),
    tol: float = 1e-12,
    max_condition: float = 1e3,
) -> DoubleValuedReport:
    """Sign of ``Y`` after one and two turns in ``phi``, and phi-independence of ``|Y|^2``.

    Sample colatitudes where evaluating ``Y`` loses more than
    ``log10(max_condition)`` digits to cancellation (near nodes of the polar
    polynomial) are skipped; at least one must survive.
    """
    e = make_harmonic(qn).expr
    want_2pi = 1.0 if qn.m.is_integer() else -1.0
    rep = DoubleValuedReport(qn)
    for theta in thetas:
        if _condition(e, theta) > max_condition:
            continue
        base = [eval_expr(e, theta, p) for p in phis]
        for p, y0 in zip(phis, base):
            r2 = eval_expr(e, theta, p + 2 * math.pi) / y0
            r4 = eval_expr(e, theta, p + 4 * math.pi) / y0
            rep.ratio_2pi.append(r2)
            rep.ratio_4pi.append(r4)
            if abs(r2 - want_2pi) > tol or abs(r4 - 1.0) > tol:
                rep.passed = False
        prob = [abs(v) ** 2 for v in base]
        spread = (max(prob) - min(prob)) / max(prob)
        rep.prob_spread = max(rep.prob_spread, spread)
    if rep.prob_spread > tol or not rep.ratio_2pi:
        rep.passed = False
    return rep
