"""Command-line surface.

Exit codes: 0 = PASS/success, 1 = mathematical FAIL, 2 = usage/IO error.
All symbolic output uses the system-file expression grammar; numeric output
is printed with explicit precision.  Identical invocations produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import sys

from .algebra.poly import MonomialOrder, auto_weights
from .algebra.series import XSeries
from .catalog import (VerifyConfig, load_catalog, reports_to_json,
                      verify_catalog)
from .groebner import BudgetExceededError, Ideal, buchberger
from .isochrony import c_algorithm, urabe_series, zero_urabe_check
from .lienard import NotReducibleError, XPoly
from .linearize import harmonic_identity_check, linearizing_chart, potential_series
from .sysfile import SysFileError, format_param_poly, parse_ideal, parse_system
from .verify import (IntegrationError, NoReturnError, OrbitEscapeError,
                     isochronicity_probe, reversible_any_axis,
                     reversible_x_axis)

PASS, FAIL, USAGE = 0, 1, 2


def format_xpoly(p: XPoly, var: str = "x") -> str:
    bits = []
    for k, c in enumerate(p.coeffs):
        if c.is_zero:
            continue
        cs = format_param_poly(c, parens_if_sum=True)
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono:
            if cs == "1":
                term = mono
            elif cs == "-1":
                term = f"-{mono}"
            else:
                term = f"{cs}*{mono}"
        else:
            term = cs
        bits.append(term)
    if not bits:
        return "0"
    out = bits[0]
    for b in bits[1:]:
        out += ("+" + b) if not b.startswith("-") else b
    return out


def format_series(s: XSeries, var: str = "x") -> str:
    poly = XPoly(s.vars, list(s.coeffs))
    body = format_xpoly(poly, var)
    return f"{body} + O({var}^{s.order + 1})"


def format_ratfunc(rf) -> str:
    num = format_xpoly(rf.num)
    if rf.den.degree() == 0 and rf.den.coeff(0).constant_value() == 1:
        return num
    return f"({num})/({format_xpoly(rf.den)})"


def _load_system(path: str):
    try:
        return parse_system(path)
    except FileNotFoundError:
        print(f"error: no such file: {path}", file=sys.stderr)
        raise SystemExit(USAGE)
    except SysFileError as e:
        print(f"error: {e}", file=sys.stderr)
        raise SystemExit(USAGE)


def _reduce_or_fail(ps):
    cs = ps.to_cherkas()
    conds = cs.residual_conditions()
    if conds:
        print("not reducible; residual coefficient conditions:")
        for i, c in enumerate(conds, start=1):
            print(f"  r{i} = {format_param_poly(c)}")
        raise SystemExit(FAIL)
    return cs.to_lienard()


def cmd_reduce(args) -> int:
    ps = _load_system(args.file)
    cs = ps.to_cherkas()
    conds = cs.residual_conditions()
    if conds:
        print("not reducible; residual coefficient conditions:")
        for i, c in enumerate(conds, start=1):
            print(f"  r{i} = {format_param_poly(c)}")
        return FAIL
    lp = cs.to_lienard()
    print(f"f = {format_ratfunc(lp.f)}")
    print(f"g = {format_ratfunc(lp.g)}")
    return PASS


def cmd_conditions(args) -> int:
    ps = _load_system(args.file)
    lp = _reduce_or_fail(ps)
    cset = c_algorithm(lp, args.k)
    for i, c in enumerate(cset.conditions, start=1):
        print(f"c{i} = {format_param_poly(c)}")
    return PASS if cset.all_zero() else FAIL


def cmd_groebner(args) -> int:
    try:
        idf = parse_ideal(args.file)
    except FileNotFoundError:
        print(f"error: no such file: {args.file}", file=sys.stderr)
        return USAGE
    except SysFileError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    kind = args.order
    if args.weights is not None:
        if args.weights == "auto":
            weights = auto_weights(idf.vars)
        else:
            weights = tuple(int(w) for w in args.weights.split(","))
        order = MonomialOrder(f"weighted-{kind}", weights)
    else:
        order = MonomialOrder(kind)
    try:
        gb = buchberger(Ideal(idf.polys, order), pair_budget=args.budget)
    except BudgetExceededError as e:
        print(f"FAIL: {e}")
        return FAIL
    for g in gb.elements:
        print(format_param_poly(g))
    return PASS


def cmd_urabe(args) -> int:
    ps = _load_system(args.file)
    lp = _reduce_or_fail(ps)
    us = urabe_series(lp, args.n)
    print(f"h = {format_series(us.odd_part(), 'xi')}")
    even = us.even_part()
    if even.is_zero:
        print(f"even part: 0 (necessary conditions hold to order {args.n})")
        return PASS
    k = next(k for k in range(even.order + 1) if not even.coeff(k).is_zero)
    print(f"even part: first nonzero coefficient at xi^{k}: "
          f"{format_param_poly(even.coeff(k))}")
    return FAIL


def cmd_zero_urabe(args) -> int:
    ps = _load_system(args.file)
    lp = _reduce_or_fail(ps)
    ok = zero_urabe_check(lp)
    print(f"g' + f*g = 1: {'holds' if ok else 'fails'} (exact)")
    return PASS if ok else FAIL


def cmd_linearize(args) -> int:
    ps = _load_system(args.file)
    lp = _reduce_or_fail(ps)
    chart = linearizing_chart(lp, args.n)
    print(f"q(x) = {format_series(chart.q_of_x)}")
    print(f"e^F  = {format_series(chart.expF)}")
    pot = potential_series(lp, min(args.n, 24))
    print(f"U(q) = {format_series(pot.u, 'q')}")
    ok, bad = harmonic_identity_check(lp, args.n)
    if ok:
        print(f"harmonic identity g e^F = int e^F holds to order {args.n}")
        return PASS
    print(f"harmonic identity fails first at order {bad}")
    return FAIL


def cmd_period(args) -> int:
    ps = _load_system(args.file)
    values = {}
    if ps.vars:
        print("error: instantiate parameters before numeric work "
              f"(free: {', '.join(ps.vars)})", file=sys.stderr)
        return USAGE
    try:
        nsys = ps.to_numeric(values)
        threshold = args.max_dev if args.max_dev is not None else 10 * args.tol
        report = isochronicity_probe(nsys, args.x0, args.tol, threshold)
    except (OrbitEscapeError, NoReturnError, IntegrationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return FAIL
    for line in report.lines():
        print(line)
    return PASS if report.passed else FAIL


def cmd_reversible(args) -> int:
    ps = _load_system(args.file)
    if args.any:
        if ps.vars:
            print("error: axis search needs instantiated parameters",
                  file=sys.stderr)
            return USAGE
        got = reversible_any_axis(ps.xdot, ps.ydot)
        print(f"symmetry axis through the origin exists: "
              f"{'yes' if got else 'no'}")
    else:
        got = reversible_x_axis(ps.xdot, ps.ydot)
        print(f"time-reversible about the x-axis: {'yes' if got else 'no'}")
    return PASS if got else FAIL


def cmd_catalog(args) -> int:
    entries = load_catalog()
    if args.action == "list":
        for e in entries:
            params = ("-" if e.is_float or not e.system.vars
                      else ",".join(e.system.vars))
            print(f"{e.id:<12} {e.theorem:<22} {e.status:<12} {params}")
        return PASS
    # verify
    if args.id:
        wanted = set(args.id)
        entries = [e for e in entries if e.id in wanted]
        missing = wanted - {e.id for e in entries}
        if missing:
            print(f"error: unknown ids: {', '.join(sorted(missing))}",
                  file=sys.stderr)
            return USAGE
    config = VerifyConfig(k=args.k, n_urabe=args.n_urabe,
                          n_linearize=args.n_linearize)
    reports = verify_catalog(entries, config, jobs=args.jobs)
    for r in reports:
        print(r.line())
        if args.verbose:
            for c in r.checks:
                print(f"    {c.name:<16} {c.status:<6} {c.detail}")
    n_pass = sum(1 for r in reports if r.status == "PASS")
    print(f"{n_pass}/{len(reports)} entries PASS")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(reports_to_json(reports))
    return PASS if n_pass == len(reports) else FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="isokit",
        description="Symbolic-numeric toolkit for isochronous centers of "
                    "planar polynomial systems")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="reduce a system to Lienard type")
    p.add_argument("file")
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("conditions", help="necessary isochronicity conditions")
    p.add_argument("--k", type=int, default=15)
    p.add_argument("file")
    p.set_defaults(fn=cmd_conditions)

    p = sub.add_parser("groebner", help="reduced Groebner basis of an ideal file")
    p.add_argument("--order", choices=("lex", "grevlex"), default="grevlex")
    p.add_argument("--weights", default=None,
                   help="'auto' (coefficient-symbol weights) or w1,w2,...")
    p.add_argument("--budget", type=int, default=20000)
    p.add_argument("file")
    p.set_defaults(fn=cmd_groebner)

    p = sub.add_parser("urabe", help="Urabe function series")
    p.add_argument("--n", type=int, default=20)
    p.add_argument("file")
    p.set_defaults(fn=cmd_urabe)

    p = sub.add_parser("zero-urabe", help="exact g' + f*g = 1 test")
    p.add_argument("file")
    p.set_defaults(fn=cmd_zero_urabe)

    p = sub.add_parser("linearize", help="linearizing chart and potential")
    p.add_argument("--n", type=int, default=30)
    p.add_argument("file")
    p.set_defaults(fn=cmd_linearize)

    p = sub.add_parser("period", help="measure return periods numerically")
    p.add_argument("--x0", type=float, action="append",
                   help="amplitude (repeatable); default 0.05 0.1 0.2 0.3")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-dev", type=float, default=None,
                   help="PASS threshold on |T - 2pi| (default 10*tol)")
    p.add_argument("file")
    p.set_defaults(fn=cmd_period)

    p = sub.add_parser("reversible", help="time-reversibility tests")
    p.add_argument("--any", action="store_true",
                   help="search all axes through the origin")
    p.add_argument("file")
    p.set_defaults(fn=cmd_reversible)

    p = sub.add_parser("catalog", help="bundled family catalog")
    p.add_argument("action", choices=("verify", "list"))
    p.add_argument("--id", action="append", help="restrict to entry id")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--k", type=int, default=15)
    p.add_argument("--n-urabe", type=int, default=20)
    p.add_argument("--n-linearize", type=int, default=30)
    p.add_argument("--json", default=None, help="write structured report")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(fn=cmd_catalog)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "x0", None) is not None and not args.x0:
        args.x0 = None
    if hasattr(args, "x0") and args.x0 is None:
        args.x0 = [0.05, 0.1, 0.2, 0.3]
    try:
        return args.fn(args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else USAGE
    except BrokenPipeError:
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
