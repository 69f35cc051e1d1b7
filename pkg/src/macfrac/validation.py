"""Built-in oracle suite run by ``macfrac validate``.

Each check compares two independent routes to the same number, with
tolerances that scale with the working precision, so the suite passes at
any ``digits >= 20``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from .errors import MacfracError
from .mpnum import PrecisionContext
from .operator import correction_term, maclaurin_sum, reconstruct_point, transform
from .spectra import builtin_spectrum

__all__ = ["CheckResult", "run_checks"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _fixtures(ctx: PrecisionContext):
    mp = ctx.mp
    return {
        "exp": [ctx.mpf("0.3"), mp.one, +mp.e, ctx.mpf("2.5")],
        "sin": [ctx.mpf("0.3"), mp.one, +mp.e, ctx.mpf("2.5")],
        "geom": [ctx.mpf("0.2"), ctx.mpf("0.5"), mp.exp(-1), ctx.mpf("0.8")],
    }


def _label(ctx, x) -> str:
    return ctx.mp.nstr(x, 8)


def check_correction_paths(ctx: PrecisionContext) -> Iterator[CheckResult]:
    """Closed-form vs numerically differentiated E_1, E_2."""
    mp = ctx.mp
    tol = mp.mpf(10) ** (5 - mp.mpf(ctx.digits) / 2)
    for name, xs in _fixtures(ctx).items():
        s = builtin_spectrum(name)
        for x in xs:
            for n in (1, 2):
                closed = correction_term(s, x, n, ctx, method="closed")
                numeric = correction_term(s, x, n, ctx, method="numeric")
                diff = abs(closed - numeric)
                yield CheckResult(
                    f"E_{n} closed vs numeric [{name} @ x={_label(ctx, x)}]",
                    diff <= tol,
                    f"|diff|={mp.nstr(diff, 3)} tol={mp.nstr(tol, 3)}",
                )


def check_geom_transform(ctx: PrecisionContext) -> Iterator[CheckResult]:
    """∫_0^∞ x^r dr = -1/ln x."""
    mp = ctx.mp
    tol = mp.mpf(10) ** (20 - ctx.digits)
    s = builtin_spectrum("geom")
    for x in (ctx.mpf("0.2"), ctx.mpf("0.5"), mp.exp(-1), ctx.mpf("0.9")):
        diff = abs(transform(s, x, ctx) + 1 / mp.log(x))
        yield CheckResult(
            f"geom transform = -1/ln x [x={_label(ctx, x)}]",
            diff <= tol,
            f"|diff|={mp.nstr(diff, 3)} tol={mp.nstr(tol, 3)}",
        )


def check_monomials(ctx: PrecisionContext) -> Iterator[CheckResult]:
    mp = ctx.mp
    tol = 10 * ctx.eps
    for k in range(6):
        s = builtin_spectrum("monomial", k)
        for x in ("0.5", "1", "2"):
            res = reconstruct_point(s, x, 0, ctx)
            err = abs(res.residual_corrected)
            yield CheckResult(
                f"monomial exactness [k={k} x={x}]",
                err <= tol,
                f"|residual|={mp.nstr(err, 3)} tol={mp.nstr(tol, 3)}",
            )


def check_euler_maclaurin(ctx: PrecisionContext) -> Iterator[CheckResult]:
    """Sum minus integral against E_0 + E_1 + E_2 for the geometric kernel."""
    mp = ctx.mp
    s = builtin_spectrum("geom")
    fixtures = [
        (ctx.mpf("0.2"), mp.mpf("1e-3")),
        (ctx.mpf("0.5"), mp.mpf("1e-3")),
        (mp.exp(-1), mp.mpf("1e-4")),
        (ctx.mpf("0.8"), mp.mpf("1e-3")),
    ]
    for x, bound in fixtures:
        gap = maclaurin_sum(s, x, ctx) - transform(s, x, ctx)
        em = mp.fsum(correction_term(s, x, n, ctx) for n in range(3))
        rem = abs(gap - em)
        yield CheckResult(
            f"Euler-Maclaurin consistency [geom x={_label(ctx, x)}]",
            rem <= bound,
            f"sum-integral={mp.nstr(gap, 8)} E0+E1+E2={mp.nstr(em, 8)} |remainder|={mp.nstr(rem, 3)}",
        )


CHECKS: tuple[Callable[[PrecisionContext], Iterator[CheckResult]], ...] = (
    check_correction_paths,
    check_geom_transform,
    check_monomials,
    check_euler_maclaurin,
)


def run_checks(ctx: PrecisionContext) -> list[CheckResult]:
    """Run every check; a check that raises is recorded as a failure."""
    results = []
    for check in CHECKS:
        try:
            results.extend(check(ctx))
        except (MacfracError, ArithmeticError, ValueError, KeyError) as exc:
            results.append(CheckResult(check.__name__, False, f"raised {type(exc).__name__}: {exc}"))
    return results
