"""Exact algebra for sums of terms ``c * sin^p(theta) * cos^q(theta) * exp(i mu phi)``.

Coefficients are Gaussian rationals, the sine power ``p`` and the phase
frequency ``mu`` are half-integers (``p`` may be negative), and the cosine
power ``q`` is a nonnegative integer.  The family is closed under addition,
multiplication and differentiation in either angle, which is all the
angular-momentum operators need.

Every :class:`TrigExpr` is kept in canonical form, so two expressions are
equal as functions on ``(0, pi) x R`` exactly when their term tuples match.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Iterator, NamedTuple

from gmpy2 import mpq

_MPQ = type(mpq(0))
_MPQ_ZERO = mpq(0)

__all__ = [
    "HalfInteger",
    "GaussianRational",
    "TrigTerm",
    "TrigExpr",
    "ExactValue",
    "canonicalize",
    "add",
    "mul",
    "scale",
    "d_dtheta",
    "d_dphi",
    "dtheta_terms",
    "dphi_terms",
    "chebyshev_T",
    "chebyshev_U_shifted",
    "eval_expr",
    "expr_to_json",
    "expr_from_json",
    "format_fraction",
    "parse_fraction",
]


def format_fraction(q) -> str:
    """Render a rational as ``"p/q"`` (``"p/1"`` for integers)."""
    if not isinstance(q, (Fraction, _MPQ)):
        q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())


@total_ordering
@dataclass(frozen=True)
class HalfInteger:
    """An exact multiple of one half, stored as twice its value."""

    twice: int

    def __post_init__(self):
        if not isinstance(self.twice, int) or isinstance(self.twice, bool):
            raise TypeError(f"twice must be an int, got {self.twice!r}")

    @classmethod
    def of(cls, value) -> "HalfInteger":
        """Build from an int, a Fraction with denominator 1 or 2, or a string like ``"5/2"`` or ``"2.5"``."""
        if isinstance(value, HalfInteger):
            return value
        if isinstance(value, str):
            value = Fraction(value.strip())
        elif isinstance(value, float):
            value = Fraction(value)
        t = Fraction(value) * 2
        if t.denominator != 1:
            raise ValueError(f"{value} is not a multiple of 1/2")
        return cls(int(t))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __abs__(self):
        return HalfInteger(abs(self.twice))

    def __neg__(self):
        return HalfInteger(-self.twice)

    def __add__(self, other):
        other = _as_half(other)
        if other is None:
            return NotImplemented
        return HalfInteger(self.twice + other.twice)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_half(other)
        if other is None:
            return NotImplemented
        return HalfInteger(self.twice - other.twice)

    def __rsub__(self, other):
        other = _as_half(other)
        if other is None:
            return NotImplemented
        return HalfInteger(other.twice - self.twice)

    def __eq__(self, other):
        other = _as_half(other)
        if other is None:
            return NotImplemented
        return self.twice == other.twice

    def __lt__(self, other):
        other = _as_half(other)
        if other is None:
            return NotImplemented
        return self.twice < other.twice

    def __hash__(self):
        return hash(self.value)

    def __float__(self):
        return self.twice / 2

    def __str__(self):
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def __repr__(self):
        return f"HalfInteger({self})"


def _as_half(x):
    if isinstance(x, HalfInteger):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return HalfInteger(2 * x)
    if isinstance(x, Fraction) and (2 * x).denominator == 1:
        return HalfInteger(int(2 * x))
    return None


class GaussianRational:
    """Exact complex number ``re + im*i`` with rational parts.

    Parts are held as ``gmpy2.mpq`` for speed and exposed as ``Fraction``.
    """

    __slots__ = ("_re", "_im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "_re", re if type(re) is mpq else mpq(re))
        object.__setattr__(self, "_im", im if type(im) is mpq else mpq(im))

    @classmethod
    def _raw(cls, re, im):
        self = object.__new__(cls)
        object.__setattr__(self, "_re", re)
        object.__setattr__(self, "_im", im)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @property
    def re(self) -> Fraction:
        return Fraction(int(self._re.numerator), int(self._re.denominator))

    @property
    def im(self) -> Fraction:
        return Fraction(int(self._im.numerator), int(self._im.denominator))

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction, _MPQ)):
            return cls(x)
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        raise TypeError(f"cannot convert {type(x).__name__} to GaussianRational")

    @staticmethod
    def _other(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction, _MPQ)):
            return GaussianRational(x)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return GaussianRational._raw(self._re + o._re, self._im + o._im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return GaussianRational._raw(self._re - o._re, self._im - o._im)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if type(other) is int:
            return GaussianRational._raw(self._re * other, self._im * other)
        o = self._other(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self._re, self._im, o._re, o._im
        if not b and not d:
            return GaussianRational._raw(a * c, _MPQ_ZERO)
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        d = o._re * o._re + o._im * o._im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        n = self * o.conjugate()
        return GaussianRational._raw(n._re / d, n._im / d)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational._raw(-self._re, -self._im)

    def __pos__(self):
        return self

    def conjugate(self):
        return GaussianRational._raw(self._re, -self._im)

    def __bool__(self):
        return bool(self._re) or bool(self._im)

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self._re == o._re and self._im == o._im

    def __hash__(self):
        if not self._im:
            return hash(self._re)
        return hash((self._re, self._im))

    def __complex__(self):
        return complex(float(self._re), float(self._im))

    def is_real(self) -> bool:
        return not self._im

    def __repr__(self):
        return f"GaussianRational({format_fraction(self._re)}, {format_fraction(self._im)})"

    def __str__(self):
        if not self._im:
            return format_fraction(self._re)
        sign = "-" if self._im < 0 else "+"
        return f"{format_fraction(self._re)}{sign}{format_fraction(abs(self._im))}i"

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Inverse of ``str``: ``"p/q"`` or ``"p/q+r/si"``."""
        text = text.strip()
        if not text.endswith("i"):
            return cls(Fraction(text))
        body = text[:-1]
        # split at the sign that separates the two parts (never the leading one)
        for pos in range(len(body) - 1, 0, -1):
            if body[pos] in "+-":
                return cls(Fraction(body[:pos]), Fraction(body[pos:]))
        return cls(0, Fraction(body))


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


class TrigTerm(NamedTuple):
    """One term ``coeff * sin^(sin2/2) * cos^cos * exp(i * phi2/2 * phi)``.

    Powers are stored doubled so that all bookkeeping stays in integers.
    """

    coeff: GaussianRational
    sin2: int
    cos: int
    phi2: int

    @property
    def sin_pow(self) -> HalfInteger:
        return HalfInteger(self.sin2)

    @property
    def cos_pow(self) -> int:
        return self.cos

    @property
    def phi_freq(self) -> HalfInteger:
        return HalfInteger(self.phi2)

    def key(self):
        return (self.phi2, self.sin2 % 4, self.sin2, self.cos)


def _sort_key(key):
    phi2, sin2, cos = key
    return (phi2, sin2 % 4, sin2, cos)


def _divide_sin2(poly: list) -> list:
    """Divide a dense polynomial in ``x = cos`` by ``1 - x^2``; caller checks divisibility."""
    # q(x) * (1 - x^2) = p(x): the x^k coefficient gives q_{k-2} = q_k - p_k, solved top down
    n = len(poly) - 1
    q = [_MPQ_ZERO] * (n - 1)
    for k in range(n, 1, -1):
        q[k - 2] = (q[k] if k < n - 1 else _MPQ_ZERO) - poly[k]
    return q


def _divisible_by_sin2(re: list, im: list) -> bool:
    # p(1) = even + odd, p(-1) = even - odd; both vanish iff both partial sums do
    return not (sum(re[0::2]) or sum(re[1::2]) or sum(im[0::2]) or sum(im[1::2]))


def _trim(re: list, im: list) -> None:
    while re and not re[-1] and not im[-1]:
        re.pop()
        im.pop()


def canonicalize(terms: Iterable) -> "TrigExpr":
    """Reduce raw terms to the canonical form.

    ``terms`` yields :class:`TrigTerm` or plain ``(coeff, sin2, cos, phi2)``
    tuples.  Terms are grouped by phase frequency and by ``sin2 mod 4``
    (``sin^2 = 1 - cos^2`` only links sine powers that differ by an even
    integer).  Each group is rewritten over its lowest sine power as a
    polynomial in ``cos``; factors of ``1 - cos^2`` are then divided back out
    so the sine power is as high as possible.  This makes the form unique.
    """
    groups: dict = {}
    for t in terms:
        coeff, sin2, cos, phi2 = t
        if cos < 0:
            raise ValueError(f"negative cosine power {cos} is outside the family")
        if not isinstance(coeff, GaussianRational):
            coeff = GaussianRational.coerce(coeff)
        if not coeff:
            continue
        groups.setdefault((phi2, sin2 % 4), []).append((coeff, sin2, cos))

    out = []
    for (phi2, _), members in groups.items():
        base = min(s for _, s, _ in members)
        degree = max(c + (s - base) // 2 for _, s, c in members)
        re = [_MPQ_ZERO] * (degree + 1)
        im = [_MPQ_ZERO] * (degree + 1)
        for coeff, sin2, cos in members:
            cr, ci = coeff._re, coeff._im
            j = (sin2 - base) // 4
            # sin^(base + 4j/2) = sin^base * (1 - x^2)^j
            for r in range(j + 1):
                b = math.comb(j, r)
                if r % 2:
                    b = -b
                k = cos + 2 * r
                re[k] += cr * b
                im[k] += ci * b
        _trim(re, im)
        if not re:
            continue
        while len(re) >= 3 and _divisible_by_sin2(re, im):
            re, im = _divide_sin2(re), _divide_sin2(im)
            base += 4
            _trim(re, im)
        for cos, (cr, ci) in enumerate(zip(re, im)):
            if cr or ci:
                out.append(TrigTerm(GaussianRational._raw(cr, ci), base, cos, phi2))
    out.sort(key=TrigTerm.key)
    return TrigExpr._from_canonical(tuple(out))


class TrigExpr:
    """An immutable, canonical finite sum of :class:`TrigTerm`."""

    __slots__ = ("terms", "_index", "_hash")

    def __init__(self, terms: Iterable = ()):
        canon = canonicalize(terms)
        object.__setattr__(self, "terms", canon.terms)
        object.__setattr__(self, "_index", None)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _from_canonical(cls, terms: tuple) -> "TrigExpr":
        self = object.__new__(cls)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_index", None)
        object.__setattr__(self, "_hash", None)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("TrigExpr is immutable")

    # constructors

    @classmethod
    def zero(cls) -> "TrigExpr":
        return cls._from_canonical(())

    @classmethod
    def constant(cls, c) -> "TrigExpr":
        return cls([(GaussianRational.coerce(c), 0, 0, 0)])

    @classmethod
    def monomial(cls, coeff=1, sin_pow=0, cos_pow: int = 0, phi_freq=0) -> "TrigExpr":
        """``coeff * sin^sin_pow * cos^cos_pow * exp(i phi_freq phi)``; powers may be HalfInteger, int, Fraction or str."""
        s = HalfInteger.of(sin_pow).twice
        p = HalfInteger.of(phi_freq).twice
        return cls([(GaussianRational.coerce(coeff), s, cos_pow, p)])

    @classmethod
    def cos_poly(cls, coeffs, sin_pow=0, phi_freq=0) -> "TrigExpr":
        """``sin^sin_pow * exp(i phi_freq phi) * sum_k coeffs[k] cos^k``."""
        s = HalfInteger.of(sin_pow).twice
        p = HalfInteger.of(phi_freq).twice
        return cls((GaussianRational.coerce(c), s, k, p) for k, c in enumerate(coeffs))

    # queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[TrigTerm]:
        return iter(self.terms)

    def coefficient(self, sin2: int, cos: int, phi2: int) -> GaussianRational:
        if self._index is None:
            object.__setattr__(self, "_index", {(t.sin2, t.cos, t.phi2): t.coeff for t in self.terms})
        return self._index.get((sin2, cos, phi2), ZERO)

    def leading(self) -> TrigTerm:
        if not self.terms:
            raise ValueError("zero expression has no leading term")
        return self.terms[0]

    def phi_freqs(self) -> list:
        return sorted({t.phi2 for t in self.terms})

    # arithmetic

    def __add__(self, other):
        if not isinstance(other, TrigExpr):
            try:
                other = TrigExpr.constant(other)
            except TypeError:
                return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return TrigExpr._from_canonical(tuple(t._replace(coeff=-t.coeff) for t in self.terms))

    def __sub__(self, other):
        if not isinstance(other, TrigExpr):
            try:
                other = TrigExpr.constant(other)
            except TypeError:
                return NotImplemented
        return add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TrigExpr):
            return mul(self, other)
        try:
            return scale(other, self)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return scale(other, self)
        except TypeError:
            return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, TrigExpr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(
                self, "_hash", hash(tuple((t.coeff, t.sin2, t.cos, t.phi2) for t in self.terms))
            )
        return self._hash

    def __repr__(self):
        return f"TrigExpr({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for t in self.terms:
            bits = [f"({t.coeff})"]
            if t.sin2:
                bits.append(f"sin^{HalfInteger(t.sin2)}")
            if t.cos:
                bits.append(f"cos^{t.cos}")
            if t.phi2:
                bits.append(f"e^(i*{HalfInteger(t.phi2)}*phi)")
            parts.append("*".join(bits))
        return " + ".join(parts)


def add(a: TrigExpr, b: TrigExpr) -> TrigExpr:
    return canonicalize(a.terms + b.terms)


def mul(a: TrigExpr, b: TrigExpr) -> TrigExpr:
    return canonicalize(
        (x.coeff * y.coeff, x.sin2 + y.sin2, x.cos + y.cos, x.phi2 + y.phi2)
        for x in a.terms
        for y in b.terms
    )


def scale(c, a: TrigExpr) -> TrigExpr:
    c = GaussianRational.coerce(c)
    if not c:
        return TrigExpr.zero()
    return TrigExpr._from_canonical(tuple(t._replace(coeff=c * t.coeff) for t in a.terms))


def dtheta_terms(terms: Iterable) -> list:
    """Uncanonicalized theta-derivative of raw ``(coeff, sin2, cos, phi2)`` terms."""
    raw = []
    for coeff, sin2, cos, phi2 in terms:
        if sin2:
            raw.append((coeff * mpq(sin2, 2), sin2 - 2, cos + 1, phi2))
        if cos:
            raw.append((coeff * -cos, sin2 + 2, cos - 1, phi2))
    return raw


def dphi_terms(terms: Iterable) -> list:
    """Uncanonicalized phi-derivative of raw terms."""
    return [
        (coeff * GaussianRational._raw(_MPQ_ZERO, mpq(phi2, 2)), sin2, cos, phi2)
        for coeff, sin2, cos, phi2 in terms
        if phi2
    ]


def d_dtheta(e: TrigExpr) -> TrigExpr:
    """``d/dtheta [sin^p cos^q] = p sin^(p-1) cos^(q+1) - q sin^(p+1) cos^(q-1)``."""
    return canonicalize(dtheta_terms(e.terms))


def d_dphi(e: TrigExpr) -> TrigExpr:
    return canonicalize(dphi_terms(e.terms))


def _chebyshev(k: int, first: list, second: list) -> list:
    # p_{j+1} = 2x p_j - p_{j-1}
    if k == 0:
        return first
    prev, cur = first, second
    for _ in range(k - 1):
        nxt = [0] * (len(cur) + 1)
        for i, c in enumerate(cur):
            nxt[i + 1] += 2 * c
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return cur


def chebyshev_T(k: int) -> TrigExpr:
    """``cos(k theta)`` as a polynomial in ``cos theta``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return TrigExpr.cos_poly(_chebyshev(k, [1], [0, 1]))


def chebyshev_U_shifted(k: int) -> TrigExpr:
    """``sin(k theta) / sin theta`` as a polynomial in ``cos theta`` (zero for ``k = 0``)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return TrigExpr.cos_poly(_chebyshev(k, [0], [1]))


def eval_expr(e: TrigExpr, theta: float, phi: float) -> complex:
    """Evaluate numerically at ``theta`` in the open interval ``(0, pi)``.

    Within each (phase, sine power) group the cosine polynomial is summed
    exactly at the binary value of ``cos(theta)`` and rounded once, so
    high-degree polynomials do not lose digits to cancellation.
    """
    if not 0.0 < theta < math.pi:
        raise ValueError(f"theta={theta} outside (0, pi)")
    s = math.sin(theta)
    if s <= 0.0:
        raise ValueError(f"sin(theta) vanishes at theta={theta}")
    x = mpq(math.cos(theta))
    total = 0j
    terms = e.terms
    i, n = 0, len(terms)
    while i < n:
        sin2, phi2 = terms[i].sin2, terms[i].phi2
        re = im = _MPQ_ZERO
        while i < n and terms[i].sin2 == sin2 and terms[i].phi2 == phi2:
            t = terms[i]
            xk = x**t.cos
            re += t.coeff._re * xk
            im += t.coeff._im * xk
            i += 1
        total += complex(float(re), float(im)) * s ** (sin2 / 2) * cmath.exp(0.5j * phi2 * phi)
    return total


def expr_to_json(e: TrigExpr) -> list:
    return [
        {
            "coeff": {"re": format_fraction(t.coeff._re), "im": format_fraction(t.coeff._im)},
            "sin2": t.sin2,
            "cos": t.cos,
            "phi2": t.phi2,
        }
        for t in e.terms
    ]


def expr_from_json(data: list) -> TrigExpr:
    return canonicalize(
        (
            GaussianRational(Fraction(d["coeff"]["re"]), Fraction(d["coeff"]["im"])),
            int(d["sin2"]),
            int(d["cos"]),
            int(d["phi2"]),
        )
        for d in data
    )


@dataclass(frozen=True)
class ExactValue:
    """``rational + pi_coeff * pi + pi2_coeff * pi**2`` with rational parts.

    Squared norms of half-odd-integer harmonics carry ``pi**2`` (one factor
    from the theta integral, one from the 4*pi phase period), so the ``pi**2``
    slot is needed alongside the rational and ``pi`` parts.
    """

    rational: Fraction = Fraction(0)
    pi: Fraction = Fraction(0)
    pi2: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("rational", "pi", "pi2"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    def __add__(self, other):
        if not isinstance(other, ExactValue):
            return NotImplemented
        return ExactValue(self.rational + other.rational, self.pi + other.pi, self.pi2 + other.pi2)

    def scaled(self, c) -> "ExactValue":
        c = Fraction(c)
        return ExactValue(self.rational * c, self.pi * c, self.pi2 * c)

    def times_pi(self) -> "ExactValue":
        if self.pi2:
            raise ValueError("pi**3 terms are not representable")
        return ExactValue(0, self.rational, self.pi)

    def is_zero(self) -> bool:
        return not (self.rational or self.pi or self.pi2)

    def __float__(self):
        return float(self.rational) + float(self.pi) * math.pi + float(self.pi2) * math.pi**2

    def __str__(self):
        parts = []
        if self.rational:
            parts.append(format_fraction(self.rational))
        if self.pi:
            parts.append(f"{format_fraction(self.pi)}*pi")
        if self.pi2:
            parts.append(f"{format_fraction(self.pi2)}*pi^2")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {
            "rat": format_fraction(self.rational),
            "pi": format_fraction(self.pi),
            "pi2": format_fraction(self.pi2),
        }

    @classmethod
    def from_json(cls, d: dict) -> "ExactValue":
        return cls(Fraction(d["rat"]), Fraction(d["pi"]), Fraction(d.get("pi2", "0")))
