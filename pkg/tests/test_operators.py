import cmath
import math
import random
from fractions import Fraction as F

import pytest

from spinharm.harmonics import QuantumNumbers, all_states, make_harmonic
from spinharm.kinds import OperatorKind as K
from spinharm.operators import (
    Annihilated,
    Anomalous,
    Other,
    Proportional,
    apply,
    commutator_check,
    eigen_check,
    ladder_apply,
    ladder_classify,
    ladder_constant_expected,
    ladder_report,
    m2_from_components,
    merzbacher_double_step,
)
from spinharm.symtrig import GaussianRational as G, TrigExpr, chebyshev_T, chebyshev_U_shifted, eval_expr
from spinharm.verify import random_member

Q = QuantumNumbers.of
I = G(0, 1)


def Y(l, m):
    return make_harmonic(Q(l, m)).expr


# -- apply / eigen_check -----------------------------------------------------


def test_apply_examples():
    assert apply(K.Mz, Y("3/2", "-1/2")) == F(-1, 2) * Y("3/2", "-1/2")
    assert apply(K.M2, Y("1/2", "1/2")) == F(3, 4) * Y("1/2", "1/2")


@pytest.mark.parametrize("m", ["-3/2", "-1/2", "1/2", 2, 0])
def test_raising_on_bare_phase(m):
    m = F(m)
    got = apply(K.MplusPrime, TrigExpr.monomial(1, 0, 0, m))
    assert got == TrigExpr.monomial(-m, -1, 1, m + 1)


def test_ladder_operators_from_cartesian_components():
    for qn in all_states("7/2"):
        e = make_harmonic(qn).expr
        assert apply(K.MplusPrime, e) == apply(K.Mx, e) + I * apply(K.My, e)
        # the lowering operator here carries the opposite overall sign
        assert apply(K.MminusPrime, e) == -(apply(K.Mx, e) - I * apply(K.My, e))


def test_operator_kind_parsing():
    assert K.parse("M+'") is K.MplusPrime
    assert K.parse("MminusPrime") is K.MminusPrime
    with pytest.raises(ValueError):
        K.parse("Mq")


@pytest.mark.parametrize(
    "lm, kind, value",
    [(("5/2", "1/2"), K.M2, F(35, 4)), (("3/2", "3/2"), K.Mz, F(3, 2)), (("1/2", "1/2"), K.M2, F(3, 4))],
)
def test_eigen_check_examples(lm, kind, value):
    res = eigen_check(Y(*lm), kind)
    assert res.eigenvalue == value
    assert res.residual.is_zero()


def test_mx_has_no_eigenvalue_on_top_state():
    res = eigen_check(Y("1/2", "1/2"), K.Mx)
    assert res.eigenvalue is None
    assert not res.residual.is_zero()


def test_eigen_check_rejects_zero():
    with pytest.raises(ValueError):
        eigen_check(TrigExpr.zero(), K.Mz)


@pytest.mark.parametrize(
    "lm, value",
    [(("1/2", "1/2"), "3/4"), (("3/2", "3/2"), "15/4"), (("3/2", "1/2"), "15/4"),
     (("5/2", "5/2"), "35/4"), (("5/2", "3/2"), "35/4"), (("5/2", "1/2"), "35/4")],
)
def test_six_m2_cases(lm, value):
    assert eigen_check(Y(*lm), K.M2).eigenvalue == F(value)


# -- ladder ------------------------------------------------------------------


@pytest.mark.parametrize(
    "lm, direction, constant, target",
    [
        (("3/2", "3/2"), "down", 3, ("3/2", "1/2")),
        (("5/2", "1/2"), "up", 8, ("5/2", "3/2")),
        (("3/2", "1/2"), "up", -1, ("3/2", "3/2")),
        (("5/2", "5/2"), "down", 5, ("5/2", "3/2")),
        (("5/2", "3/2"), "down", -1, ("5/2", "1/2")),
    ],
)
def test_proportional_examples(lm, direction, constant, target):
    assert ladder_classify(Q(*lm), direction) == Proportional(G(constant), Q(*target))


@pytest.mark.parametrize(
    "lm, direction, k, target",
    [
        (("1/2", "1/2"), "down", 1, ("1/2", "-1/2")),
        (("1/2", "-1/2"), "up", 1, ("1/2", "1/2")),
        (("3/2", "-1/2"), "up", 2, ("3/2", "1/2")),
        (("5/2", "1/2"), "down", 3, ("5/2", "-1/2")),
    ],
)
def test_anomalous_examples(lm, direction, k, target):
    assert ladder_classify(Q(*lm), direction) == Anomalous(k, F(k), Q(*target))


def test_anomalous_identity_directly():
    # M'- Y(1/2,1/2) = cot(theta) Y(1/2,-1/2)
    assert ladder_apply(Q("1/2", "1/2"), "down") == TrigExpr.monomial(1, -1, 1) * Y("1/2", "-1/2")
    # M'+ Y(3/2,-1/2) * sin * U_2 == 2 T_2 Y(3/2,1/2)
    lhs = ladder_apply(Q("3/2", "-1/2"), "up") * TrigExpr.monomial(1, 1) * chebyshev_U_shifted(2)
    assert lhs == 2 * chebyshev_T(2) * Y("3/2", "1/2")


@pytest.mark.parametrize("lm, direction", [(("5/2", "5/2"), "up"), ((2, -2), "down"), ((0, 0), "up"), ((0, 0), "down")])
def test_annihilated_examples(lm, direction):
    assert ladder_classify(Q(*lm), direction) == Annihilated()


def test_bad_direction_rejected():
    with pytest.raises(ValueError):
        ladder_classify(Q(1, 0), "sideways")


def test_ladder_report_fields():
    rec = ladder_report(Q("5/2", "1/2"), "down")
    assert rec == {"l2": 5, "m2": 1, "dir": "down", "outcome": "anomalous", "k": 3, "scale": "3/1", "residualNonzero": False}
    rec = ladder_report(Q("3/2", "1/2"), "up")
    assert rec["constant"] == "-1/1" and rec["outcome"] == "proportional"


@pytest.mark.parametrize(
    "args, value",
    [((1, 1, "down"), math.sqrt(2)), (("1/2", "1/2", "down"), 1.0), (("5/2", "1/2", "up"), math.sqrt(8)), ((1, 1, "up"), 0.0)],
)
def test_ladder_constant_expected(args, value):
    assert ladder_constant_expected(*args) == pytest.approx(value, rel=1e-15)


def test_sign_symmetry_of_constants():
    for qn in all_states("11/2"):
        mirror = QuantumNumbers(qn.l, -qn.m)
        a, b = ladder_classify(qn, "up"), ladder_classify(mirror, "down")
        assert type(a) is type(b)
        if isinstance(a, Proportional):
            assert a.constant == b.constant and a.target.m == -b.target.m
        if isinstance(a, Anomalous):
            assert (a.k, a.scale) == (b.k, b.scale)


def test_integer_ladder_never_anomalous():
    for qn in all_states(6, fermion=False):
        for direction in ("up", "down"):
            out = ladder_classify(qn, direction)
            assert not isinstance(out, (Anomalous, Other))


# -- double lowering step ----------------------------------------------------


def _fd_lower(f, h=1e-3):
    """Numerical M'- on a callable f(theta, phi) with a 4th-order stencil."""

    def d(g, x):
        return (8 * (g(x + h) - g(x - h)) - (g(x + 2 * h) - g(x - 2 * h))) / (12 * h)

    def out(theta, phi):
        dt = d(lambda t: f(t, phi), theta)
        dp = d(lambda p: f(theta, p), phi)
        return cmath.exp(-1j * phi) * (dt - 1j * math.cos(theta) / math.sin(theta) * dp)

    return out


@pytest.mark.parametrize("l", ["1/2", "3/2"])
def test_double_lowering_step_nonzero_and_matches_fd(l):
    got = merzbacher_double_step(l)
    assert not got.is_zero()
    y = Y(l, "1/2")
    twice = _fd_lower(_fd_lower(lambda t, p: eval_expr(y, t, p)))
    for theta, phi in [(0.7, 0.3), (1.3, 2.0), (2.1, 4.4)]:
        exact = eval_expr(got, theta, phi)
        assert abs(twice(theta, phi) - exact) < 1e-6 * abs(exact)


def test_double_lowering_closed_form_and_contrast():
    assert merzbacher_double_step("1/2") == TrigExpr.monomial(-1, "-3/2", 0, "-3/2")
    assert ladder_classify(Q("1/2", "-1/2"), "down") == Annihilated()
    with pytest.raises(ValueError):
        merzbacher_double_step(1)


# -- commutators -------------------------------------------------------------


@pytest.mark.parametrize("f", [Y("1/2", "1/2"), Y("5/2", "-3/2"), TrigExpr.constant(1)], ids=["Y1/2", "Y5/2", "const"])
def test_commutator_examples(f):
    res = commutator_check(f)
    assert set(res) == {"[Mx,My]-iMz", "[My,Mz]-iMx", "[Mz,Mx]-iMy", "[M2,Mz]"}
    assert all(r.is_zero() for r in res.values())


def test_m2_equals_sum_of_component_squares_on_random_members():
    rng = random.Random(2024)
    for _ in range(100):
        e = random_member(rng)
        assert apply(K.M2, e) == m2_from_components(e)


def test_commutators_on_random_members():
    rng = random.Random(7)
    for _ in range(30):
        assert all(r.is_zero() for r in commutator_check(random_member(rng)).values())


def test_operators_are_linear():
    rng = random.Random(3)
    for kind in K:
        a, b = random_member(rng), random_member(rng)
        c = G(F(2, 3), -1)
        assert apply(kind, a + c * b) == apply(kind, a) + c * apply(kind, b)
