"""Verification sweeps shared by the command line and the acceptance tests."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .harmonics import QuantumNumbers, all_states, make_harmonic, norm_squared_integral
from .kinds import OperatorKind
from .numeric import (
    GridSpec,
    default_grid,
    double_valued_check,
    oracle_compare,
    quadrature_nodes_required,
    quadrature_norm,
)
from .operators import (
    Annihilated,
    Anomalous,
    LadderOutcome,
    Proportional,
    apply,
    eigen_check,
    ladder_classify,
    ladder_report,
    commutator_check,
    m2_from_components,
)
from .symtrig import GaussianRational, HalfInteger, TrigExpr, eval_expr

SUITES = ("eigen", "ladder", "commutators", "oracle", "doublevalue")

# (l2, m2, direction) -> expected outcome for l = 1/2, 3/2, 5/2, all 24 steps
GOLDEN_LADDER = {
    (1, 1, "up"): ("annihilated",),
    (1, -1, "down"): ("annihilated",),
    (1, 1, "down"): ("anomalous", 1, Fraction(1)),
    (1, -1, "up"): ("anomalous", 1, Fraction(1)),
    (3, 3, "up"): ("annihilated",),
    (3, -3, "down"): ("annihilated",),
    (3, 3, "down"): ("proportional", 3),
    (3, -3, "up"): ("proportional", 3),
    (3, 1, "up"): ("proportional", -1),
    (3, -1, "down"): ("proportional", -1),
    (3, 1, "down"): ("anomalous", 2, Fraction(2)),
    (3, -1, "up"): ("anomalous", 2, Fraction(2)),
    (5, 5, "up"): ("annihilated",),
    (5, -5, "down"): ("annihilated",),
    (5, 5, "down"): ("proportional", 5),
    (5, -5, "up"): ("proportional", 5),
    (5, 3, "up"): ("proportional", -1),
    (5, -3, "down"): ("proportional", -1),
    (5, 3, "down"): ("proportional", -1),
    (5, -3, "up"): ("proportional", -1),
    (5, 1, "up"): ("proportional", 8),
    (5, -1, "down"): ("proportional", 8),
    (5, 1, "down"): ("anomalous", 3, Fraction(3)),
    (5, -1, "up"): ("anomalous", 3, Fraction(3)),
}


@dataclass
class SectionResult:
    name: str
    total: int = 0
    failures: int = 0
    records: list = field(default_factory=list)

    def check(self, ok: bool, **info) -> bool:
        self.total += 1
        if not ok:
            self.failures += 1
        self.records.append({**info, "pass": bool(ok)})
        return ok

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass
class VerificationSummary:
    total_checks: int
    failures: int
    sections: list

    @classmethod
    def from_sections(cls, results, paths=None) -> "VerificationSummary":
        paths = paths or {}
        return cls(
            sum(r.total for r in results),
            sum(r.failures for r in results),
            [{"name": r.name, "pass": r.passed, "details": paths.get(r.name)} for r in results],
        )

    def to_json(self) -> dict:
        return {"totalChecks": self.total_checks, "failures": self.failures, "sections": self.sections}


_POOL = [
    GaussianRational(1),
    GaussianRational(-1),
    GaussianRational(2),
    GaussianRational(Fraction(-1, 2)),
    GaussianRational(Fraction(1, 3)),
    GaussianRational(Fraction(3, 2)),
    GaussianRational(0, 1),
    GaussianRational(0, Fraction(-1, 2)),
    GaussianRational(1, 1),
]


def random_member(rng: random.Random, max_terms: int = 4) -> TrigExpr:
    """Random nonzero family member with small rational coefficients."""
    while True:
        terms = [
            (rng.choice(_POOL), rng.randint(-3, 5), rng.randint(0, 3), rng.randint(-3, 3))
            for _ in range(rng.randint(1, max_terms))
        ]
        e = TrigExpr(terms)
        if e:
            return e


def expected_ladder(qn: QuantumNumbers, direction: str) -> tuple:
    """Outcome predicted by the ladder table: annihilation at the ends,
    ``(l+1/2) cot((l+1/2) theta)`` at the sign-flip step of half-odd ``l``,
    a constant multiple everywhere else."""
    l2, m2 = qn.l.twice, qn.m.twice
    if (direction == "up" and m2 == l2) or (direction == "down" and m2 == -l2):
        return ("annihilated",)
    if l2 % 2 and ((direction == "down" and m2 == 1) or (direction == "up" and m2 == -1)):
        k = (l2 + 1) // 2
        return ("anomalous", k, Fraction(k))
    return ("proportional",)


def outcome_signature(outcome: LadderOutcome) -> tuple:
    if isinstance(outcome, Annihilated):
        return ("annihilated",)
    if isinstance(outcome, Proportional):
        return ("proportional", outcome.constant)
    if isinstance(outcome, Anomalous):
        return ("anomalous", outcome.k, outcome.scale)
    return ("other",)


def matches(signature: tuple, expected: tuple) -> bool:
    if signature[0] != expected[0]:
        return False
    return all(a == b for a, b in zip(signature[1:], expected[1:]))


def run_eigen(l_max) -> SectionResult:
    res = SectionResult("eigen")
    for qn in all_states(l_max):
        e = make_harmonic(qn).expr
        lv = qn.l.value
        for kind, want in ((OperatorKind.Mz, qn.m.value), (OperatorKind.M2, lv * (lv + 1))):
            got = eigen_check(e, kind).eigenvalue
            res.check(
                got is not None and got == want,
                l2=qn.l.twice,
                m2=qn.m.twice,
                op=kind.name,
                eigenvalue=None if got is None else str(got),
                expected=str(GaussianRational(want)),
            )
    return res


def run_ladder(l_max) -> SectionResult:
    res = SectionResult("ladder")
    outcomes = {}
    for qn in all_states(l_max):
        for direction in ("up", "down"):
            out = ladder_classify(qn, direction)
            outcomes[(qn.l.twice, qn.m.twice, direction)] = out
            sig = outcome_signature(out)
            rec = ladder_report(qn, direction, out)
            res.check(matches(sig, expected_ladder(qn, direction)), check="table", **rec)
            golden = GOLDEN_LADDER.get((qn.l.twice, qn.m.twice, direction))
            if golden is not None:
                res.check(matches(sig, golden), check="golden", **rec)
            if qn.l.is_integer() and qn.l.twice >= 2 and abs(qn.m.twice) == qn.l.twice:
                inward = "down" if qn.m.twice > 0 else "up"
                if direction == inward:
                    res.check(sig == ("proportional", GaussianRational(2 * qn.l.value)), check="2l", **rec)
    for (l2, m2, direction), out in outcomes.items():
        if direction != "up":
            continue
        mirror = outcomes[(l2, -m2, "down")]
        res.check(
            outcome_signature(out) == outcome_signature(mirror),
            check="mirror",
            l2=l2,
            m2=m2,
        )
    return res


def run_commutators(l_max, n_random: int = 100, seed: int = 0) -> SectionResult:
    res = SectionResult("commutators")
    cases = [(f"Y{qn}", make_harmonic(qn).expr) for qn in all_states(l_max)]
    rng = random.Random(seed)
    randoms = [(f"random#{i}", random_member(rng)) for i in range(n_random)]
    for label, f in cases + randoms:
        residuals = commutator_check(f)
        for name, r in residuals.items():
            res.check(r.is_zero(), case=label, identity=name)
    for label, f in randoms:
        res.check(apply(OperatorKind.M2, f) == m2_from_components(f), case=label, identity="M2=Mx2+My2+Mz2")
    return res


def _cot_reference(out: Anomalous):
    y = make_harmonic(out.target).expr
    k, s = out.k, float(out.scale)

    def ref(theta, phi):
        return s * math.cos(k * theta) / math.sin(k * theta) * eval_expr(y, theta, phi)

    return ref


def run_oracle(l_max, grid: Optional[GridSpec] = None, nodes: Optional[int] = None, tol: float = 1e-6) -> SectionResult:
    grid = grid or default_grid()
    res = SectionResult("oracle")
    for qn in all_states(l_max):
        e = make_harmonic(qn).expr
        for kind in OperatorKind:
            rep = oracle_compare(kind, e, grid, apply(kind, e))
            res.check(rep.max_rel_error < tol, check="fd", **rep.to_json(kind.name, qn, grid.h))
        for direction, kind in (("up", OperatorKind.MplusPrime), ("down", OperatorKind.MminusPrime)):
            out = ladder_classify(qn, direction)
            if isinstance(out, Anomalous):
                rep = oracle_compare(kind, e, grid, _cot_reference(out))
                res.check(rep.max_rel_error < tol, check="fd-cot", **rep.to_json(kind.name, qn, grid.h))
        exact = norm_squared_integral(qn)
        n = max(nodes or 0, quadrature_nodes_required(qn))
        quad = quadrature_norm(qn, n)
        rel = abs(quad - float(exact)) / float(exact)
        res.check(rel < 1e-12, check="norm", l2=qn.l.twice, m2=qn.m.twice, exact=exact.to_json(), quadrature=quad, relError=rel)
    return res


def run_doublevalue(l_max) -> SectionResult:
    res = SectionResult("doublevalue")
    for qn in all_states(l_max):
        rep = double_valued_check(qn)
        res.check(rep.passed, l2=qn.l.twice, m2=qn.m.twice, probSpread=rep.prob_spread, samples=len(rep.ratio_2pi))
    return res


def run_suite(name: str, l_max, *, h: float = 1e-4, nodes: Optional[int] = None, seed: int = 0) -> SectionResult:
    l_max = HalfInteger.of(l_max)
    if name == "eigen":
        return run_eigen(l_max)
    if name == "ladder":
        return run_ladder(l_max)
    if name == "commutators":
        return run_commutators(l_max, seed=seed)
    if name == "oracle":
        return run_oracle(l_max, grid=default_grid(h), nodes=nodes)
    if name == "doublevalue":
        return run_doublevalue(l_max)
    raise ValueError(f"unknown suite {name!r}")
