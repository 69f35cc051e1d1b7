"""Command-line interface: ``macfrac {list,reconstruct,sweep,validate}``.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 numerical failure,
4 validation failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from . import report as report_mod
from .errors import DomainError, MacfracError, NumericalError, RangeError
from .kernel import M_MAX
from .mpnum import DEFAULT_DIGITS, MIN_DIGITS, precision
from .operator import reconstruct_point
from .report import DEFAULT_INTERVALS, DEFAULT_POINTS
from .spectra import BUILTIN_FAMILIES, builtin_spectrum
from .validation import run_checks

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_NUMERICAL = 3
EXIT_VALIDATION = 4

DIGITS_ENV = "MACFRAC_DIGITS"
TABLE_DIGITS = 15


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _digits_type(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid digit count {text!r}") from None
    if value < MIN_DIGITS:
        raise argparse.ArgumentTypeError(f"digits must be >= {MIN_DIGITS}")
    return value


def _corrections_type(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid correction order {text!r}") from None
    if not 0 <= value <= M_MAX:
        raise argparse.ArgumentTypeError(f"corrections must be in 0..{M_MAX}")
    return value


def _points_type(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid point count {text!r}") from None
    if value < 2:
        raise argparse.ArgumentTypeError("points must be >= 2")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="macfrac",
        description="Continuous-order Maclaurin transform with Euler-Maclaurin corrections.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("list", help="list built-in order spectra")

    def common(p):
        p.add_argument("--function", "-f", required=True,
                       help="spectrum name (exp, geom, sin, expsq, gauss, besselj0, monomial:k)")
        p.add_argument("--digits", type=_digits_type, default=None,
                       help=f"working precision in decimal digits (default ${DIGITS_ENV} or {DEFAULT_DIGITS})")
        p.add_argument("--corrections", "-m", type=_corrections_type, default=2,
                       help=f"highest correction index m, 0..{M_MAX} (default 2)")

    p = sub.add_parser("reconstruct", help="reconstruct f at a single point")
    common(p)
    p.add_argument("--x", required=True, help="evaluation point (decimal string)")
    p.add_argument("--format", choices=("table", "csv"), default="table")
    p.add_argument("--output", "-o", help="output file (default stdout)")

    p = sub.add_parser("sweep", help="reconstruct f on a uniform grid and report MAEs")
    common(p)
    p.add_argument("--xmin", help="left end of the interval (default: per-family)")
    p.add_argument("--xmax", help="right end of the interval (default: per-family)")
    p.add_argument("--points", type=_points_type, default=DEFAULT_POINTS,
                   help=f"number of grid points (default {DEFAULT_POINTS})")
    p.add_argument("--format", choices=("table", "csv", "svg"), default="table")
    p.add_argument("--output", "-o", help="output file (required for svg)")

    p = sub.add_parser("validate", help="run the built-in oracle checks")
    p.add_argument("--digits", type=_digits_type, default=None)
    return parser


def resolve_digits(flag: Optional[int], environ=os.environ) -> int:
    """Explicit ``--digits`` wins over ``$MACFRAC_DIGITS``, which wins over the default."""
    if flag is not None:
        return flag
    text = environ.get(DIGITS_ENV)
    if text is None or text.strip() == "":
        return DEFAULT_DIGITS
    try:
        return _digits_type(text.strip())
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"${DIGITS_ENV}: {exc}") from None


def _fmt(value, digits=TABLE_DIGITS) -> str:
    import mpmath

    return mpmath.nstr(value, digits)


def cmd_list(out) -> int:
    rows = []
    for name in BUILTIN_FAMILIES:
        s = builtin_spectrum(name)
        lo, hi = s.x_domain
        dom = f"({lo:g},{'inf' if hi == float('inf') else format(hi, 'g')})"
        corr = "closed-form E1,E2" if s.has_closed_corrections else "numeric"
        rows.append((name, dom, f"corrections: {corr}"))
    rows.append(("monomial:k", "(0,inf)", "corrections: n/a (atomic)"))
    width = max(len(r[0]) for r in rows)
    for name, dom, corr in rows:
        print(f"{name:<{width}}  domain {dom:<10}  {corr}", file=out)
    return EXIT_OK


def cmd_reconstruct(args, ctx, out) -> int:
    s = builtin_spectrum(args.function)
    res = reconstruct_point(s, args.x, args.corrections, ctx)
    if args.format == "csv":
        rep = report_mod.GridReport(
            spectrum_name=s.name, interval=(res.x, res.x), npoints=1, m=res.m,
            rows=(res,), mae_raw=abs(res.residual_raw), mae_corrected=abs(res.residual_corrected),
            digits=ctx.digits,
        )
        report_mod.write_csv(rep, args.output or out)
        return EXIT_OK
    lines = [
        ("function", s.name),
        ("digits", str(ctx.digits)),
        ("x", _fmt(res.x)),
        ("transform", _fmt(res.transform)),
    ]
    lines += [(f"E{i}", _fmt(e)) for i, e in enumerate(res.corrections)]
    if not res.corrections:
        lines.append(("corrections", "n/a (atomic spectrum)"))
    lines += [
        ("corrected", _fmt(res.corrected)),
        ("truth", _fmt(res.truth)),
        ("resid_raw", _fmt(res.residual_raw)),
        ("resid_corrected", _fmt(res.residual_corrected)),
    ]
    text = "".join(f"{k:<16}{v}\n" for k, v in lines)
    if args.output:
        report_mod._write_text(text, args.output)
    else:
        out.write(text)
    return EXIT_OK


def _interval(args, s):
    if (args.xmin is None) != (args.xmax is None):
        raise UsageError("give both --xmin and --xmax, or neither")
    if args.xmin is not None:
        return args.xmin, args.xmax
    try:
        return DEFAULT_INTERVALS[s.name]
    except KeyError:
        raise UsageError(f"no default interval for {s.name}; pass --xmin/--xmax") from None


def cmd_sweep(args, ctx, out) -> int:
    s = builtin_spectrum(args.function)
    if args.format == "svg" and not args.output:
        raise UsageError("--format svg requires --output")
    a, b = _interval(args, s)
    rep = report_mod.sweep_grid(s, a, b, args.points, args.corrections, ctx)
    if args.format == "csv":
        report_mod.write_csv(rep, args.output or out)
    elif args.format == "svg":
        report_mod.write_svg(rep, args.output)
    else:
        cols = ("x", "truth", "transform", "corrected", "resid_raw", "resid_corrected")
        out.write("  ".join(f"{c:>22}" for c in cols) + "\n")
        for r in rep.rows:
            vals = (r.x, r.truth, r.transform, r.corrected, r.residual_raw, r.residual_corrected)
            out.write("  ".join(f"{_fmt(v):>22}" for v in vals) + "\n")
    if args.format != "csv" or args.output:
        out.write(f"mae_raw={_fmt(rep.mae_raw)} mae_corrected={_fmt(rep.mae_corrected)}\n")
    return EXIT_OK


def cmd_validate(ctx, out) -> int:
    results = run_checks(ctx)
    for r in results:
        out.write(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.detail}\n")
    failed = sum(not r.passed for r in results)
    out.write(f"{len(results) - failed}/{len(results)} checks passed at {ctx.digits} digits\n")
    return EXIT_OK if failed == 0 else EXIT_VALIDATION


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "list":
            return cmd_list(out)
        ctx = precision(resolve_digits(args.digits))
        if args.command == "validate":
            return cmd_validate(ctx, out)
        if args.command == "reconstruct":
            return cmd_reconstruct(args, ctx, out)
        return cmd_sweep(args, ctx, out)
    except (UsageError, KeyError) as exc:
        msg = exc.args[0] if exc.args else exc
        print(f"macfrac: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, RangeError) as exc:
        print(f"macfrac: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except report_mod.ReportIOError as exc:
        print(f"macfrac: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, MacfracError) as exc:
        print(f"macfrac: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def run() -> None:
    sys.exit(main())
