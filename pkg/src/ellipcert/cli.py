"""Command-line driver: certificates, coefficient tables, perimeter reports.

Exit codes: 0 success, 1 a verification failed, 2 bad arguments (including
domain and tolerance-floor violations).  Diagnostics go to stderr; results
go to stdout.  Exact rationals print as "numerator/denominator"; reals
print with 20 significant digits.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from mpmath import mp

from .bounds import (
    THETA_LOWER,
    _verdict_between,
    containment_check,
    delta_e_bounds,
    error_report,
    scaled_theta_upper,
    theta_upper,
)
from .engine import (
    WORKING_DPS,
    Ellipse,
    QuadratureBudgetError,
    eval_B,
    ivory_integral,
    lambda_from_eccentricity,
    theta_of_lambda,
)
from .lemma import verify_fundamental_lemma
from .series_kernel import a_coeffs_upto, b_coeffs_upto, delta_coeffs_upto

__all__ = ["cli_main", "main"]


def _fmt(v, digits: int = 20) -> str:
    with mp.workdps(WORKING_DPS):
        if isinstance(v, Fraction):
            v = mp.mpf(v.numerator) / v.denominator
        return mp.nstr(mp.mpf(v), digits)


def _rat(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _enc_str(enc) -> str:
    return f"[{_fmt(enc.lo)}, {_fmt(enc.hi)}]  width {_fmt(enc.width, 6)}"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ellipcert",
        description="Certified ellipse perimeters and error bounds for "
        "Ramanujan's approximation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser(
        "verify-lemma",
        help="exact coefficient inequality sweep, emits a JSON certificate",
    )
    v.add_argument("--max-n", type=int, required=True, help="sweep A_n vs B_n up to this n (>= 7)")
    v.add_argument("--json", metavar="PATH", default=None, help="also write the certificate to PATH")

    c = sub.add_parser("coeffs", help="exact table of A_n, B_n, delta_n")
    c.add_argument("--n", type=int, required=True, help="highest index to tabulate")
    c.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("perimeter", help="perimeter enclosure and error report for one ellipse")
    p.add_argument("--a", type=float, required=True, help="first semi-axis")
    p.add_argument("--b", type=float, required=True, help="second semi-axis")
    p.add_argument("--tol", type=float, default=None, help="perimeter enclosure width target")
    p.add_argument("--json", action="store_true", help="emit the report as JSON")

    b = sub.add_parser("bounds", help="theta/delta bound constants, optional containment check")
    grp = b.add_mutually_exclusive_group()
    grp.add_argument("--e", type=float, default=None, help="eccentricity in [0, 1]")
    grp.add_argument("--lambda", dest="lam", type=float, default=None, help="shape parameter in [0, 1]")

    iv = sub.add_parser("ivory-check", help="quadrature vs series residual at one x")
    iv.add_argument("--x", type=float, required=True, help="series argument in [0, 1]")
    iv.add_argument("--tol", type=float, default=1e-12, help="quadrature tolerance")

    return parser


def _cmd_verify_lemma(args) -> int:
    cert = verify_fundamental_lemma(args.max_n)
    text = cert.to_json()
    print(text)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if cert.all_ok():
        print(f"all checks passed up to n = {cert.n_max}", file=sys.stderr)
        return 0
    print(f"verification FAILED: {cert.first_counterexample}", file=sys.stderr)
    return 1


def _cmd_coeffs(args) -> int:
    n = args.n
    if n < 0:
        raise ValueError("--n must be >= 0")
    a = a_coeffs_upto(n)
    b = b_coeffs_upto(n)
    d = delta_coeffs_upto(n)
    if args.format == "json":
        rows = [
            {"n": i, "A": _rat(a[i]), "B": _rat(b[i]), "delta": _rat(d[i])}
            for i in range(n + 1)
        ]
        print(json.dumps({"rows": rows}, indent=2))
    else:
        print("n,A,B,delta")
        for i in range(n + 1):
            print(f"{i},{_rat(a[i])},{_rat(b[i])},{_rat(d[i])}")
    return 0


def _cmd_perimeter(args) -> int:
    ell = Ellipse(args.a, args.b)
    report = error_report(ell, args.tol)
    verdicts = containment_check(report)
    if args.json:
        payload = report.to_json_dict()
        payload["containment"] = verdicts
        print(json.dumps(payload, indent=2))
    else:
        print(f"a = {_fmt(report.a)}   b = {_fmt(report.b)}")
        print(f"lambda = {_fmt(report.lam)}   eccentricity = {_fmt(report.ecc)}")
        print(f"p        in {_enc_str(report.p_enclosure)}")
        print(f"p_R      =  {_fmt(report.p_R)}")
        print(f"epsilon  in {_enc_str(report.epsilon_enclosure)}")
        print(f"lower bound = {_fmt(report.lower_bound)}   upper bound = {_fmt(report.upper_bound)}")
        print(f"theta    in {_enc_str(report.theta)}")
        print(f"delta_e  in {_enc_str(report.delta_e)}")
        print(f"ramanujan estimate = {_fmt(report.ramanujan_estimate)}")
        print(f"note: {report.bound_form_note}")
        print(f"containment: {verdicts}")
    if not verdicts["ok"]:
        print("containment check FAILED", file=sys.stderr)
        return 1
    if any(v == "inconclusive" for v in verdicts.values() if isinstance(v, str)):
        print("warning: containment inconclusive at this tolerance", file=sys.stderr)
    return 0


def _cmd_bounds(args) -> int:
    lo, up = THETA_LOWER, theta_upper()
    pi_up = scaled_theta_upper()
    de_lo, de_up = delta_e_bounds()
    with mp.workdps(WORKING_DPS):
        identity_gap = abs(pi_up - mp.pi * up)
    print(f"theta lower (exact)   = {_rat(lo)} = {_fmt(Fraction(lo))}")
    print(f"theta upper           = {_fmt(up)}   (4/pi - 14/11)")
    print(f"pi*theta upper        = {_fmt(pi_up)}   ((14/11)*(22/7 - pi))")
    print(f"identity gap          = {_fmt(identity_gap, 6)}")
    print(f"delta_e lower         = {_fmt(de_lo)}   (3*pi/2^36)")
    print(f"delta_e upper         = {_fmt(de_up)}   ((7/11)*(22/7 - pi)/2^18)")

    lam = args.lam
    if lam is None and args.e is not None:
        lam = lambda_from_eccentricity(args.e)
    if lam is None:
        return 0
    with mp.workdps(WORKING_DPS):
        lam_m = mp.mpf(lam)
        if not 0 <= lam_m <= 1:
            raise ValueError("lambda must lie in [0, 1]")
        if lam_m == 0:
            print("lambda = 0: theta takes its limit value 3/2^17; nothing to check")
            return 0
    enc = theta_of_lambda(lam_m)
    with mp.workdps(WORKING_DPS):
        lo_m = mp.mpf(lo.numerator) / lo.denominator
        low_v, up_v = _verdict_between(
            enc.mid, enc.width, lo_m, up, attained_upper=(lam_m == 1), margin=10.0
        )
        delta_lo = enc.lo * mp.pi / 2**19
        delta_hi = enc.hi * mp.pi / 2**19
    print(f"theta({_fmt(lam_m, 8)}) in {_enc_str(enc)}")
    print(f"delta_e value in [{_fmt(delta_lo)}, {_fmt(delta_hi)}]")
    print(f"containment: lower {low_v}, upper {up_v}")
    if low_v == "fail" or up_v == "fail":
        print("containment check FAILED", file=sys.stderr)
        return 1
    if "inconclusive" in (low_v, up_v):
        print("warning: containment inconclusive at this tolerance", file=sys.stderr)
    return 0


def _cmd_ivory_check(args) -> int:
    x = args.x
    quad = ivory_integral(x, args.tol)
    series_tol = max(args.tol, 5e-9 if x > 0.999 else 1e-12)
    enc = eval_B(x, series_tol)
    with mp.workdps(WORKING_DPS):
        residual = mp.mpf(quad) - enc.mid
        combined = mp.mpf(args.tol) + enc.width / 2
    print(f"quadrature = {quad!r}")
    print(f"series     in {_enc_str(enc)}")
    print(f"residual   = {_fmt(residual, 6)}   (combined tolerance {_fmt(combined, 6)})")
    if abs(residual) <= combined:
        return 0
    print("quadrature/series residual exceeds combined tolerance", file=sys.stderr)
    return 1


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify-lemma":
            return _cmd_verify_lemma(args)
        if args.command == "coeffs":
            return _cmd_coeffs(args)
        if args.command == "perimeter":
            return _cmd_perimeter(args)
        if args.command == "bounds":
            return _cmd_bounds(args)
        if args.command == "ivory-check":
            return _cmd_ivory_check(args)
        raise ValueError(f"unknown command {args.command!r}")
    except ValueError as exc:  # domain errors and tolerance floors
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QuadratureBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
