"""Command-line front end: ``spinharm {table,verify,eval,plotdata}``.

Exit status is 0 on success, 1 when a verification sweep finds failures and
2 on usage errors (bad arguments, values outside their domain).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from pathlib import Path

from .harmonics import (
    QuantumNumbers,
    all_states,
    harmonic_record,
    make_harmonic,
    norm_squared_integral,
)
from .symtrig import HalfInteger, eval_expr
from .verify import SUITES, VerificationSummary, run_suite

log = logging.getLogger("spinharm")

DEFAULT_CAP = HalfInteger(25)
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

PHI_PERIOD_NOTE = (
    "normalization integrates phi over 4*pi for half-odd-integer m "
    "(the phase returns to itself only after two turns) and 2*pi for integer m"
)


class UsageError(Exception):
    pass


def _half(text: str) -> HalfInteger:
    try:
        return HalfInteger.of(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer or half-integer") from exc


def _cap() -> HalfInteger:
    env = os.environ.get("SPINHARM_CAP")
    if not env:
        return DEFAULT_CAP
    try:
        return HalfInteger.of(env)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"SPINHARM_CAP={env!r} is not a half-integer") from None


def _check_lmax(l_max: HalfInteger) -> HalfInteger:
    if l_max.twice < 0:
        raise UsageError("--lmax must be nonnegative")
    cap = _cap()
    if l_max > cap:
        raise UsageError(f"--lmax {l_max} exceeds the cap {cap} (set SPINHARM_CAP to raise it)")
    return l_max


def _qn(l, m) -> QuantumNumbers:
    try:
        return QuantumNumbers(l, m)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(text: str, out: Path | None, name: str) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text, encoding="utf-8")
    log.info("wrote %s", out / name)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def table_records(l_max: HalfInteger) -> list:
    rows = []
    for qn in all_states(l_max):
        rec = harmonic_record(qn)
        rec["normConst"] = 1.0 / math.sqrt(float(norm_squared_integral(qn)))
        rec["phiPeriod"] = "2pi" if qn.m.is_integer() else "4pi"
        rows.append(rec)
    return rows


def cmd_table(args) -> int:
    l_max = _check_lmax(args.lmax)
    rows = table_records(l_max)
    log.info(PHI_PERIOD_NOTE)
    if args.format == "json":
        _emit(_json(rows), args.out, "table.json")
        return EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["l", "m", "poly", "expr", "normSq_rat", "normSq_pi", "normSq_pi2", "normConst", "phiPeriod"])
    for r in rows:
        w.writerow(
            [
                str(HalfInteger(r["l2"])),
                str(HalfInteger(r["m2"])),
                " ".join(r["poly"]),
                json.dumps(r["exprJSON"], separators=(",", ":")),
                r["normSq"]["rat"],
                r["normSq"]["pi"],
                r["normSq"]["pi2"],
                repr(r["normConst"]),
                r["phiPeriod"],
            ]
        )
    _emit(buf.getvalue(), args.out, "table.csv")
    return EXIT_OK


def cmd_verify(args) -> int:
    l_max = _check_lmax(args.lmax)
    if not 1e-6 <= args.h <= 1e-2:
        raise UsageError("--h must lie in [1e-6, 1e-2]")
    names = SUITES if args.suite == "all" else (args.suite,)
    results, paths = [], {}
    for name in names:
        res = run_suite(name, l_max, h=args.h, nodes=args.nodes, seed=args.seed)
        results.append(res)
        if args.out is not None:
            fname = f"verify_{name}.json"
            _emit(_json({"suite": name, "lmax": str(l_max), "records": res.records}), args.out, fname)
            paths[name] = fname
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {name}: {res.total - res.failures}/{res.total} checks passed")
    summary = VerificationSummary.from_sections(results, paths)
    print(f"total {summary.total_checks} checks, {summary.failures} failures")
    if args.out is not None:
        _emit(_json(summary.to_json()), args.out, "summary.json")
    return EXIT_OK if summary.failures == 0 else EXIT_FAIL


def _fmt_complex(z: complex) -> str:
    return f"{z.real!r}{'+' if z.imag >= 0 else '-'}{abs(z.imag)!r}i"


def cmd_eval(args) -> int:
    qn = _qn(args.l, args.m)
    if not 0.0 < args.theta < math.pi:
        raise UsageError(f"theta={args.theta} must lie strictly between 0 and pi")
    raw = eval_expr(make_harmonic(qn).expr, args.theta, args.phi)
    norm = raw / math.sqrt(float(norm_squared_integral(qn)))
    print(f"raw {_fmt_complex(raw)}")
    print(f"normalized {_fmt_complex(norm)}")
    return EXIT_OK


def plot_rows(qn: QuantumNumbers, n_theta: int, n_phi: int) -> list:
    """Normalized samples on an interior theta grid and a full phase period."""
    e = make_harmonic(qn).expr
    c = 1.0 / math.sqrt(float(norm_squared_integral(qn)))
    period = 2 * math.pi if qn.m.is_integer() else 4 * math.pi
    rows = []
    for i in range(n_theta):
        theta = math.pi * (i + 1) / (n_theta + 1)
        for j in range(n_phi):
            phi = period * j / n_phi
            y = c * eval_expr(e, theta, phi)
            rows.append((theta, phi, y.real, y.imag, abs(y) ** 2))
    return rows


def cmd_plotdata(args) -> int:
    qn = _qn(args.l, args.m)
    if args.ntheta < 1 or args.nphi < 1:
        raise UsageError("--ntheta and --nphi must be positive")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta", "phi", "re", "im", "abs2"])
    for row in plot_rows(qn, args.ntheta, args.nphi):
        w.writerow([repr(v) for v in row])
    _emit(buf.getvalue(), args.out, f"plot_l{qn.l.twice}_m{qn.m.twice}.csv")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spinharm", description="Integer and half-odd-integer spherical harmonics.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table", help="tabulate harmonics up to --lmax")
    t.add_argument("--lmax", type=_half, default=HalfInteger(5))
    t.add_argument("--format", choices=("csv", "json"), default="json")
    t.add_argument("--out", type=Path)
    t.set_defaults(func=cmd_table)

    v = sub.add_parser("verify", help="run verification sweeps")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--lmax", type=_half, default=DEFAULT_CAP)
    v.add_argument("--out", type=Path)
    v.add_argument("--h", type=float, default=1e-4)
    v.add_argument("--nodes", type=int)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("eval", help="evaluate one harmonic at (theta, phi)")
    e.add_argument("l", type=_half)
    e.add_argument("m", type=_half)
    e.add_argument("theta", type=float)
    e.add_argument("phi", type=float)
    e.set_defaults(func=cmd_eval)

    d = sub.add_parser("plotdata", help="CSV samples over theta and a full phase period")
    d.add_argument("l", type=_half)
    d.add_argument("m", type=_half)
    d.add_argument("--ntheta", type=int, default=19)
    d.add_argument("--nphi", type=int, default=36)
    d.add_argument("--out", type=Path)
    d.set_defaults(func=cmd_plotdata)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"spinharm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
