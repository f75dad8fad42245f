import cmath
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from spinharm.symtrig import (
    ExactValue,
    GaussianRational,
    HalfInteger,
    TrigExpr,
    TrigTerm,
    canonicalize,
    chebyshev_T,
    chebyshev_U_shifted,
    d_dphi,
    d_dtheta,
    eval_expr,
    expr_from_json,
    expr_to_json,
    scale,
)

T = TrigExpr


def mono(c=1, s=0, q=0, p=0):
    return T.monomial(c, s, q, p)


# -- HalfInteger / GaussianRational ------------------------------------------


def test_half_integer_parsing_and_parity():
    assert HalfInteger.of("5/2") == HalfInteger.of("2.5") == HalfInteger(5)
    assert HalfInteger.of(3).is_integer()
    assert not HalfInteger.of("1/2").is_integer()
    assert str(HalfInteger(-3)) == "-3/2"
    assert HalfInteger(3) + HalfInteger(1) == 2
    assert HalfInteger(1) < HalfInteger(2)
    with pytest.raises(ValueError):
        HalfInteger.of("1/3")


def test_gaussian_rational_field_ops():
    i = GaussianRational(0, 1)
    assert i * i == -1
    a = GaussianRational(F(1, 2), F(-3, 4))
    b = GaussianRational(2, 5)
    assert (a / b) * b == a
    assert GaussianRational.parse(str(a)) == a
    assert GaussianRational.parse("7/1") == 7
    with pytest.raises(ZeroDivisionError):
        a / GaussianRational(0)


# -- canonicalize ------------------------------------------------------------


def test_pythagorean_identity_collapses_to_one():
    assert mono(1, 2) + mono(1, 0, 2) == T.constant(1)


def test_half_power_rewrite_cancels():
    e = mono(1, F(3, 2)) - mono(1, F(-1, 2)) + mono(1, F(-1, 2), 2)
    assert e.is_zero()


def test_divides_out_sin_squared():
    # (1 - cos^2) / sin^(3/2) == sin^(1/2)
    e = canonicalize([(1, -3, 0, 0), (-1, -3, 2, 0)])
    assert e.terms == (TrigTerm(GaussianRational(1), 1, 0, 0),)


def test_canonicalize_rejects_negative_cos_power():
    with pytest.raises(ValueError):
        canonicalize([(1, 0, -1, 0)])


def test_canonicalize_is_idempotent_and_ordered():
    e = mono(2, 3, 1, -1) + mono(1, 1, 0, 1) + mono(5, 0, 4, -1) + mono(1, F(1, 2), 0, -1)
    assert canonicalize(e.terms) == e
    keys = [t.key() for t in e.terms]
    assert keys == sorted(keys)
    assert all(t.coeff for t in e.terms)


def test_groups_share_one_sine_power():
    e = mono(1, 4, 0, 1) + mono(1, 2, 3, 1) + mono(1, 1, 0, 1)
    for phi2, cls in {(t.phi2, t.sin2 % 4) for t in e.terms}:
        powers = {t.sin2 for t in e.terms if (t.phi2, t.sin2 % 4) == (phi2, cls)}
        assert len(powers) == 1


# -- ring operations ---------------------------------------------------------


def test_scale_by_zero():
    assert scale(0, mono(3, 1, 2, 1)).is_zero()


def test_product_of_conjugate_half_phases():
    a = mono(1, F(1, 2), 0, F(1, 2))
    b = mono(1, F(1, 2), 0, F(-1, 2))
    assert a * b == mono(1, 1)


def test_cos_squared_plus_sin_squared():
    c = mono(1, 0, 1)
    assert c * c + mono(1, 2) == T.constant(1)


# -- differentiation ---------------------------------------------------------


def test_d_dtheta_examples():
    assert d_dtheta(mono(1, 0, 1)) == mono(-1, 1)
    assert d_dtheta(mono(1, F(1, 2))) == mono(F(1, 2), F(-1, 2), 1)


def test_d_dtheta_of_sine_power_times_polynomial():
    # d/dtheta [sin^a P(cos)] = sin^a (a cot P + dP/dtheta), with dP/dtheta = -sin P'(cos)
    a = F(3, 2)
    P = T.cos_poly([1, 0, -4])
    lhs = d_dtheta(mono(1, a) * P)
    dP = d_dtheta(P)
    assert dP == mono(1, 1) * T.cos_poly([0, 8])
    rhs = mono(1, a) * (mono(a, -1, 1) * P + dP)
    assert lhs == rhs


def test_d_dphi_examples():
    i = GaussianRational(0, 1)
    assert d_dphi(mono(1, 0, 0, F(1, 2))) == mono(i * F(1, 2), 0, 0, F(1, 2))
    assert d_dphi(T.constant(7)).is_zero()
    assert d_dphi(mono(1, 0, 0, F(-3, 2))) == mono(i * F(-3, 2), 0, 0, F(-3, 2))


# -- Chebyshev ---------------------------------------------------------------


def test_chebyshev_examples():
    assert chebyshev_T(2) == T.cos_poly([-1, 0, 2])
    assert chebyshev_T(3) == T.cos_poly([0, -3, 0, 4])
    assert chebyshev_U_shifted(1) == T.constant(1)
    assert chebyshev_U_shifted(0).is_zero()
    assert chebyshev_T(0) == T.constant(1)


@pytest.mark.parametrize("k", range(14))
def test_chebyshev_multiple_angles(k):
    for theta in (0.13, 0.7, 1.4, 2.2, 3.0):
        assert abs(eval_expr(chebyshev_T(k), theta, 0.0) - math.cos(k * theta)) < 1e-12
        s = math.sin(theta) * eval_expr(chebyshev_U_shifted(k), theta, 0.0)
        assert abs(s - math.sin(k * theta)) < 1e-12


# -- evaluation --------------------------------------------------------------


def test_eval_examples():
    assert eval_expr(T.constant(1), 1.1, 2.3) == 1 + 0j
    y = mono(1, F(1, 2), 0, F(1, 2))
    assert abs(eval_expr(y, math.pi / 2, 0.0) - 1) < 1e-15
    assert abs(eval_expr(mono(1, F(-1, 2), 1), math.pi / 2, 0.3)) < 1e-15


@pytest.mark.parametrize("theta", [0.0, math.pi, -0.1, 3.5])
def test_eval_rejects_poles(theta):
    with pytest.raises(ValueError):
        eval_expr(T.constant(1), theta, 0.0)


def test_json_round_trip():
    e = mono(GaussianRational(F(1, 3), F(-2, 5)), F(-1, 2), 3, F(5, 2)) + mono(2, 1, 0, 0)
    data = expr_to_json(e)
    assert data[0]["coeff"]["re"].count("/") == 1
    assert expr_from_json(data) == e


def test_exact_value_arithmetic():
    a = ExactValue(F(1, 2), 3)
    b = ExactValue(pi=-3, pi2=F(1, 4))
    s = a + b
    assert s == ExactValue(F(1, 2), 0, F(1, 4))
    assert ExactValue().is_zero()
    assert math.isclose(float(s), 0.5 + math.pi**2 / 4)
    assert ExactValue.from_json(s.to_json()) == s


# -- properties --------------------------------------------------------------

coeffs = st.sampled_from(
    [GaussianRational(c) for c in (1, -1, 2, F(1, 2), F(-2, 3))] + [GaussianRational(0, 1), GaussianRational(1, -1)]
)
terms = st.tuples(coeffs, st.integers(-3, 5), st.integers(0, 3), st.integers(-3, 3))
members = st.lists(terms, min_size=1, max_size=4).map(TrigExpr)


@settings(max_examples=60, deadline=None)
@given(members, members, members)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()


@settings(max_examples=120, deadline=None)
@given(members, members)
def test_d_dtheta_is_a_derivation(a, b):
    assert d_dtheta(a * b) == d_dtheta(a) * b + a * d_dtheta(b)


@settings(max_examples=60, deadline=None)
@given(members)
def test_mixed_partials_commute(e):
    assert d_dtheta(d_dphi(e)) == d_dphi(d_dtheta(e))


@settings(max_examples=60, deadline=None)
@given(members, st.floats(0.1, math.pi - 0.1), st.floats(-7, 7))
def test_eval_matches_direct_formula(e, theta, phi):
    direct = 0j
    for t in e.terms:
        c = complex(float(t.coeff.re), float(t.coeff.im))
        direct += c * math.sin(theta) ** (t.sin2 / 2) * math.cos(theta) ** t.cos * cmath.exp(1j * t.phi2 / 2 * phi)
    got = eval_expr(e, theta, phi)
    scale_ = sum(
        abs(complex(t.coeff)) * math.sin(theta) ** (t.sin2 / 2) * abs(math.cos(theta)) ** t.cos for t in e.terms
    )
    assert abs(got - direct) <= 1e-12 * max(abs(direct), scale_)


@settings(max_examples=60, deadline=None)
@given(members, st.floats(0.2, math.pi - 0.2), st.floats(-3, 3))
def test_canonical_form_preserves_value(e, theta, phi):
    # rebuild the same function by multiplying every term by sin^2 + cos^2
    raw = []
    for t in e.terms:
        raw.append((t.coeff, t.sin2 + 4, t.cos, t.phi2))
        raw.append((t.coeff, t.sin2, t.cos + 2, t.phi2))
    assert canonicalize(raw) == e
    assert cmath.isclose(eval_expr(canonicalize(raw), theta, phi), eval_expr(e, theta, phi), abs_tol=1e-9)
