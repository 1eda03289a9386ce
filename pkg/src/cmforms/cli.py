"""Command-line front end.

Exit codes: 0 on success/verified, 1 on a verification mismatch, 2 on bad
arguments.  All outputs are deterministic for fixed inputs; the thread
count never changes file contents.
"""

import argparse
import json
import sys
from fractions import Fraction
from math import log

from ._version import __version__
from . import analytic, boundary, classgroup, conductor, qform, tables

USAGE_ERROR = 2
MISMATCH_ERROR = 1

_SUITES = ("lemma41", "thm12", "lemma51", "lemma52", "analytic")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _split_short_eq(argv):
    """Allow '-d=-23' style tokens: split single-dash '-X=v' into '-X', 'v'."""
    out = []
    for tok in argv:
        if len(tok) > 2 and tok[0] == "-" and tok[1] != "-" and tok[2] == "=":
            out.append(tok[:2])
            out.append(tok[3:])
        else:
            out.append(tok)
    return out


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="cmforms",
        description="Class groups of imaginary quadratic orders via binary quadratic forms",
    )
    ap.add_argument("--version", action="version", version=f"cmforms {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classgroup", help="class group of one discriminant")
    p.add_argument("-d", "--discriminant", type=int, required=True)
    p.add_argument("--format", choices=("plain", "csv", "json"), default="plain")

    p = sub.add_parser("tables", help="discriminants with class group of exponent E")
    p.add_argument("-E", "--exponent", type=int, required=True)
    p.add_argument("--scan-bound", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None, help="base path; writes .csv and .json")
    p.add_argument("--verify", action="store_true", help="diff against bundled reference")
    p.add_argument("--format", choices=("plain", "csv", "json"), default="csv")

    p = sub.add_parser("equidist", help="boundary-count equidistribution report")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--bins", type=int, default=10)
    p.add_argument("--k", type=_fraction, default=Fraction(5), help="upper endpoint of the t-interval")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("plain", "csv", "json"), default="csv")

    p = sub.add_parser("boundary-count", help="count CM points on the boundary pieces")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--x-lo", type=_fraction, default=None)
    p.add_argument("--x-hi", type=_fraction, default=None)
    p.add_argument("--format", choices=("plain", "csv", "json"), default="plain")

    p = sub.add_parser("conductors", help="conductor candidates for a fundamental discriminant")
    p.add_argument("--d0", type=int, required=True)
    p.add_argument("-E", "--exponent", type=int, required=True)
    p.add_argument("--format", choices=("plain", "csv", "json"), default="plain")

    p = sub.add_parser("verify", help="run a named exhaustive sweep")
    p.add_argument("suite", choices=_SUITES)
    p.add_argument("--bound", type=int, default=10**4)
    p.add_argument("--threads", type=int, default=1)
    return ap


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    ap = _build_parser()
    args = ap.parse_args(_split_short_eq(argv))
    handler = {
        "classgroup": _cmd_classgroup,
        "tables": _cmd_tables,
        "equidist": _cmd_equidist,
        "boundary-count": _cmd_boundary_count,
        "conductors": _cmd_conductors,
        "verify": _cmd_verify,
    }[args.command]
    try:
        return handler(args)
    except BrokenPipeError:
        import os

        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


def _fmt_float(x: float) -> str:
    return f"{x:.12g}"


def _cmd_classgroup(args) -> int:
    D = args.discriminant
    try:
        qform.validate_discriminant(D)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    summary = classgroup.group_structure(D)
    forms = qform.enumerate_reduced(D)
    locs = [boundary.classify_location(g) for g in forms]
    label = tables.group_label(summary.elementary_divisors)
    if args.format == "json":
        payload = {
            "discriminant": D,
            "h": summary.h,
            "exponent": summary.exponent,
            "group": label,
            "forms": [
                {"a": g.a, "b": g.b, "c": g.c, "location": loc.value}
                for g, loc in zip(forms, locs)
            ],
        }
        print(json.dumps(payload, indent=1))
    elif args.format == "csv":
        print("a,b,c,location")
        for g, loc in zip(forms, locs):
            print(f"{g.a},{g.b},{g.c},{loc.value}")
    else:
        print(f"D = {D}")
        print(f"h = {summary.h}")
        print(f"exponent = {summary.exponent}")
        print(f"group = {label}")
        for g, loc in zip(forms, locs):
            print(f"  [{g.a},{g.b},{g.c}]  {loc.value}")
    return 0


def _cmd_tables(args) -> int:
    E = args.exponent
    if not 1 <= E <= 8:
        print(f"error: exponent {E} out of supported range 1..8", file=sys.stderr)
        return USAGE_ERROR
    if args.threads < 1:
        print("error: threads must be >= 1", file=sys.stderr)
        return USAGE_ERROR
    table = tables.discriminants_with_exponent(
        E, scan_bound=args.scan_bound, threads=args.threads
    )
    if args.out:
        base = args.out
        if base.endswith(".csv"):
            base = base[:-4]
        tables.write_table_csv(table, base + ".csv")
        tables.write_table_json(table, base + ".json")
    else:
        if args.format == "json":
            print(
                json.dumps(
                    {
                        "exponent": table.E,
                        "scan_bound": table.scan_bound,
                        "tool_version": __version__,
                        "count": table.count,
                        "max_abs": table.max_abs,
                        "entries": [
                            {
                                "discriminant": e.D,
                                "d0": e.d0,
                                "f": e.f,
                                "h": e.h,
                                "exponent": e.exponent,
                                "group": e.label,
                            }
                            for e in table.entries
                        ],
                    },
                    indent=1,
                )
            )
        else:
            print("discriminant,d0,f,h,exponent,group")
            for e in table.entries:
                print(f"{e.D},{e.d0},{e.f},{e.h},{e.exponent},{e.label}")
    if args.verify:
        report = tables.diff_against_reference(E, table)
        if not report.ok:
            for d in report.missing:
                print(f"missing: {d}", file=sys.stderr)
            for d in report.extra:
                print(f"extra: {d}", file=sys.stderr)
            for d, got, want in report.label_mismatches:
                print(f"label mismatch at {d}: computed {got}, reference {want}", file=sys.stderr)
            for s in report.summary_mismatches:
                print(f"summary mismatch: {s}", file=sys.stderr)
            return MISMATCH_ERROR
        print(f"verified: exponent {E}, {table.count} discriminants, max |D| = {table.max_abs}")
    return 0


def _cmd_equidist(args) -> int:
    if args.delta < 3 or args.bins < 1 or args.k <= Fraction(1, 2):
        print("error: need delta >= 3, bins >= 1, k > 1/2", file=sys.stderr)
        return USAGE_ERROR
    rows = boundary.equidistribution_report(args.delta, args.bins, args.k)
    lines = ["x_lo,x_hi,exact,predicted,rel_error"]
    for r in rows:
        rel = (r.exact - r.predicted) / r.predicted if r.predicted else float("nan")
        lines.append(
            f"{float(r.x_lo):.12g},{float(r.x_hi):.12g},{r.exact},"
            f"{_fmt_float(r.predicted)},{_fmt_float(rel)}"
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_boundary_count(args) -> int:
    if args.delta < 3:
        print("error: delta must be >= 3", file=sys.stderr)
        return USAGE_ERROR
    left = boundary.count_left_boundary(args.delta)
    arc = boundary.count_lower_arc(args.delta)
    combined = left + arc - 1  # the corner form lies on both pieces
    rows = [("left_boundary", left), ("lower_arc", arc), ("boundary_total", combined)]
    interval = None
    if args.x_lo is not None or args.x_hi is not None:
        if args.x_lo is None or args.x_hi is None:
            print("error: provide both --x-lo and --x-hi", file=sys.stderr)
            return USAGE_ERROR
        interval = boundary.count_R_interval(args.delta, args.x_lo, args.x_hi)
    if args.format == "json":
        payload = {"delta": args.delta, **{k: v for k, v in rows}}
        if interval:
            payload["interval"] = {
                "x_lo": str(interval.x_lo),
                "x_hi": str(interval.x_hi),
                "exact": interval.exact,
                "predicted": interval.predicted,
            }
        print(json.dumps(payload, indent=1))
    elif args.format == "csv":
        print("segment,count")
        for k, v in rows:
            print(f"{k},{v}")
        if interval:
            print(f"interval[{interval.x_lo};{interval.x_hi}],{interval.exact}")
    else:
        for k, v in rows:
            print(f"{k}: {v}")
        if interval:
            print(
                f"interval [{interval.x_lo}, {interval.x_hi}]: exact {interval.exact}, "
                f"predicted {_fmt_float(interval.predicted)}"
            )
    return 0


def _cmd_conductors(args) -> int:
    d0 = args.d0
    E = args.exponent
    if not qform.is_fundamental(d0):
        print(f"error: {d0} is not a fundamental discriminant", file=sys.stderr)
        return USAGE_ERROR
    if E < 1:
        print("error: exponent must be >= 1", file=sys.stderr)
        return USAGE_ERROR
    bound = conductor.conductor_divisibility_bound(d0, E)
    cands = [
        conductor.ConductorCandidate(d0, f, conductor.L_of(d0, f), bound)
        for f in conductor.candidate_conductors(d0, E)
    ]
    if args.format == "json":
        print(
            json.dumps(
                {
                    "d0": d0,
                    "exponent": E,
                    "bound": bound,
                    "candidates": [{"f": c.f, "L": c.L_value} for c in cands],
                },
                indent=1,
            )
        )
    elif args.format == "csv":
        print("d0,f,L,bound")
        for c in cands:
            print(f"{c.d0},{c.f},{c.L_value},{c.bound}")
    else:
        print(f"d0 = {d0}, exponent = {E}, bound = 12*|units|*E = {bound}")
        print(f"{len(cands)} candidate conductors:")
        for c in cands:
            print(f"  f = {c.f}  (L = {c.L_value})")
    return 0


def _cmd_verify(args) -> int:
    bound = args.bound
    if bound < 4 or args.threads < 1:
        print("error: need bound >= 4 and threads >= 1", file=sys.stderr)
        return USAGE_ERROR
    runner = {
        "lemma41": _verify_boundary_order2,
        "thm12": _verify_all_on_boundary,
        "lemma51": _verify_conductor_bound,
        "lemma52": _verify_theta_inversion,
        "analytic": _verify_analytic,
    }[args.suite]
    return runner(bound, args.threads)


def _iter_discriminants(bound):
    for n in range(3, bound + 1):
        if n % 4 in (0, 3):
            yield -n


def _verify_boundary_order2(bound, threads=1) -> int:
    for D in _iter_discriminants(bound):
        if not boundary.boundary_matches_two_torsion(D):
            print(f"FAIL: boundary/order-2 mismatch at D = {D}")
            return MISMATCH_ERROR
    print(f"PASS: boundary classes = order-2 classes for all |D| <= {bound}")
    return 0


def _verify_all_on_boundary(bound, threads=1) -> int:
    matches = []
    for D in _iter_discriminants(bound):
        geometric = boundary.all_on_boundary(D)
        algebraic = classgroup.exponent_divides(D, 2) and (D % 2 != 0 or D == -4)
        if geometric != algebraic:
            print(f"FAIL: boundary criterion mismatch at D = {D}")
            return MISMATCH_ERROR
        if geometric:
            matches.append(D)
    print(f"PASS: {len(matches)} discriminants with every class on the boundary (|D| <= {bound})")
    for D in matches:
        print(D)
    return 0


def _verify_conductor_bound(bound, threads=1) -> int:
    # batch exponent computation; same predicate as conductor.check_conductor_bound
    survey = classgroup.exponent_survey(bound, threads=threads)
    for n, (_h, e) in survey.items():
        d0, f = qform.factor_discriminant(-n)
        if (12 * conductor.unit_count(d0) * e) % conductor.L_of(d0, f) != 0:
            print(f"FAIL: conductor divisibility bound violated at D = {-n}")
            return MISMATCH_ERROR
    print(f"PASS: L(f) | 12*|units|*exponent for all |D| <= {bound}")
    return 0


_THETA_SAMPLE_D0 = (-3, -4, -7, -8, -163)


def _verify_theta_inversion(bound, threads=1) -> int:
    for d0 in _THETA_SAMPLE_D0:
        for f in range(1, bound + 1):
            L = conductor.L_of(d0, f)
            if conductor.theta(d0, L) % f != 0:
                print(f"FAIL: f does not divide theta(L(f)) at d0 = {d0}, f = {f}")
                return MISMATCH_ERROR
    print(f"PASS: f | theta(L(f)) for f <= {bound}, d0 in {list(_THETA_SAMPLE_D0)}")
    return 0


def _verify_analytic(bound, threads=1) -> int:
    # envelope constants match the calibrated values used by the test suite
    ladder = [10**k for k in range(3, 7) if 10**k <= bound]
    if not ladder:
        ladder = [bound]
    checks = []
    for T in ladder:
        exact, est = analytic.coprime_count(T, 30)
        checks.append(("coprime count (a=30)", analytic.AsymptoticCheck(T, exact, est, 4 * 30**0.25)))
        exact, est = analytic.totient_sum(T)
        checks.append(("totient sum", analytic.AsymptoticCheck(T, exact, est, 2 * T * log(T))))
        exact, est = analytic.totient_over_square_sum(T)
        checks.append(("totient/square sum", analytic.AsymptoticCheck(T, exact, est, 12 * log(T) / T)))
    bad = [(name, c) for name, c in checks if not c.ok]
    for name, c in bad:
        print(f"FAIL: {name} envelope at T = {c.T}: |{c.exact} - {c.estimate}| > {c.error_bound}")
    if bad:
        return MISMATCH_ERROR
    print(f"PASS: summatory estimates within calibrated envelopes up to T = {max(ladder)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
