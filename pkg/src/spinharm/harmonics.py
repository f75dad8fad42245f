"""Unnormalized spherical harmonics for integer and half-odd-integer l, m.

``Y(l, m) = exp(i m phi) * sin^|m|(theta) * P(cos theta)`` where ``P`` has
degree ``n = l - |m|`` and parity ``n``.  ``P`` comes from the power series
of the polar equation ``M^2 Y = l(l+1) Y``:

    a[k+2] = a[k] * ((k+|m|)(k+|m|+1) - l(l+1)) / ((k+1)(k+2))

seeded with ``a[n % 2] = 1``.  The series stops at ``k = n`` because the
numerator vanishes there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .symtrig import ExactValue, HalfInteger, TrigExpr, expr_to_json, format_fraction

__all__ = [
    "QuantumNumbers",
    "LegendrePoly",
    "Harmonic",
    "legendre_poly",
    "series_step",
    "make_harmonic",
    "all_states",
    "wallis",
    "norm_squared_integral",
    "normalization_constant",
    "phi_period",
    "harmonic_record",
]


@dataclass(frozen=True, order=True)
class QuantumNumbers:
    l: HalfInteger
    m: HalfInteger

    def __post_init__(self):
        l, m = HalfInteger.of(self.l), HalfInteger.of(self.m)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "m", m)
        if l.twice < 0:
            raise ValueError(f"l={l} must be nonnegative")
        if abs(m.twice) > l.twice:
            raise ValueError(f"|m|={abs(m)} exceeds l={l}")
        if (l.twice - m.twice) % 2:
            raise ValueError(f"l={l} and m={m} must differ by an integer")

    @classmethod
    def of(cls, l, m) -> "QuantumNumbers":
        return cls(HalfInteger.of(l), HalfInteger.of(m))

    @property
    def abs_m(self) -> HalfInteger:
        return abs(self.m)

    @property
    def order(self) -> int:
        """Degree ``l - |m|`` of the polar polynomial."""
        return (self.l.twice - abs(self.m.twice)) // 2

    def is_fermion(self) -> bool:
        return not self.l.is_integer()

    def __str__(self):
        return f"({self.l}, {self.m})"


@dataclass(frozen=True)
class LegendrePoly:
    """Coefficients of ``x^k`` (``x = cos theta``), lowest degree first."""

    coeffs: tuple
    order: int

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> tuple:
        return tuple(k * c for k, c in enumerate(self.coeffs))[1:]


def series_step(l: HalfInteger, abs_m: HalfInteger, k: int) -> Fraction:
    """Ratio ``a[k+2] / a[k]`` of the polar series."""
    lv, mv = l.value, abs_m.value
    return ((k + mv) * (k + mv + 1) - lv * (lv + 1)) / Fraction((k + 1) * (k + 2))


def legendre_poly(l, abs_m) -> LegendrePoly:
    l, abs_m = HalfInteger.of(l), HalfInteger.of(abs_m)
    if abs_m.twice < 0:
        raise ValueError(f"|m|={abs_m} must be nonnegative")
    d = l.twice - abs_m.twice
    if d < 0 or d % 2:
        raise ValueError(f"l - |m| = {HalfInteger(d)} is not a nonnegative integer")
    n = d // 2
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n % 2] = Fraction(1)
    for k in range(n % 2, n - 1, 2):
        coeffs[k + 2] = coeffs[k] * series_step(l, abs_m, k)
    return LegendrePoly(tuple(coeffs), n)


@dataclass(frozen=True)
class Harmonic:
    qn: QuantumNumbers
    expr: TrigExpr
    poly: LegendrePoly


@lru_cache(maxsize=None)
def _harmonic(l2: int, m2: int) -> Harmonic:
    qn = QuantumNumbers(HalfInteger(l2), HalfInteger(m2))
    poly = legendre_poly(qn.l, qn.abs_m)
    expr = TrigExpr.cos_poly(poly.coeffs, sin_pow=qn.abs_m, phi_freq=qn.m)
    return Harmonic(qn, expr, poly)


def make_harmonic(qn: QuantumNumbers) -> Harmonic:
    return _harmonic(qn.l.twice, qn.m.twice)


def all_states(l_max, *, integer: bool = True, fermion: bool = True) -> Iterator[QuantumNumbers]:
    """Every valid ``(l, m)`` with ``l <= l_max``, ordered by ``l`` then ``m``."""
    top = HalfInteger.of(l_max).twice
    for l2 in range(0, top + 1):
        if l2 % 2 == 0 and not integer:
            continue
        if l2 % 2 == 1 and not fermion:
            continue
        for m2 in range(-l2, l2 + 1, 2):
            yield QuantumNumbers(HalfInteger(l2), HalfInteger(m2))


def phi_period(qn: QuantumNumbers) -> ExactValue:
    """Length of the phase domain: 2*pi for integer m, 4*pi for half-odd m."""
    return ExactValue(pi=2 if qn.m.is_integer() else 4)


@lru_cache(maxsize=None)
def wallis(a: int, b: int) -> ExactValue:
    """Exact ``integral_0^pi sin^a cos^b dtheta`` for integers ``a, b >= 0``."""
    if a < 0 or b < 0:
        raise ValueError("exponents must be nonnegative")
    if b % 2:
        return ExactValue()
    if b == 0:
        if a == 0:
            return ExactValue(pi=1)
        if a == 1:
            return ExactValue(rational=2)
        return wallis(a - 2, 0).scaled(Fraction(a - 1, a))
    return wallis(a, b - 2).scaled(Fraction(b - 1, a + b))


def norm_squared_integral(qn: QuantumNumbers) -> ExactValue:
    """Exact ``Phi * integral_0^pi |sin^|m| P(cos)|^2 sin dtheta``."""
    coeffs = make_harmonic(qn).poly.coeffs
    sq = [Fraction(0)] * (2 * len(coeffs) - 1)
    for i, a in enumerate(coeffs):
        for j, b in enumerate(coeffs):
            sq[i + j] += a * b
    a = qn.abs_m.twice + 1
    inner = ExactValue()
    for b, c in enumerate(sq):
        if c and b % 2 == 0:
            inner = inner + wallis(a, b).scaled(c)
    return inner.times_pi().scaled(2 if qn.m.is_integer() else 4)


def normalization_constant(qn: QuantumNumbers) -> float:
    return 1.0 / math.sqrt(float(norm_squared_integral(qn)))


def harmonic_record(qn: QuantumNumbers) -> dict:
    h = make_harmonic(qn)
    return {
        "l2": qn.l.twice,
        "m2": qn.m.twice,
        "poly": [format_fraction(c) for c in h.poly.coeffs],
        "exprJSON": expr_to_json(h.expr),
        "normSq": norm_squared_integral(qn).to_json(),
    }
