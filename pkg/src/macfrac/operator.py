"""The continuous-order transform, its Euler-Maclaurin corrections, and reconstruction.

For fixed x > 0 the transform is the order integral of the kernel,

    T[f](x) = ∫_0^∞ D^r f(0) x^r / Γ(r+1) dr  (+ Σ atoms  w x^ρ / Γ(ρ+1)),

and the corrections are E_0 = k(0; x)/2 and
E_n = -B_{2n}/(2n)! ∂^{2n-1}k/∂r^{2n-1}(0; x) for n >= 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import mpnum
from .errors import DivergenceError, DomainError, RangeError, UnsupportedError
from .kernel import (
    M_MAX,
    KernelSlice,
    closed_form_kernel_derivative,
    kernel_derivative_at_zero,
    kernel_eval,
)
from .mpnum import PrecisionContext
from .quadrature import QuadratureResult, integrate_semi_infinite
from .spectra import OrderSpectrum, domain_check, reference_value, spectrum_eval

__all__ = [
    "ReconstructionResult",
    "transform",
    "transform_quadrature",
    "correction_term",
    "correction_series",
    "maclaurin_sum",
    "reconstruct_point",
    "M_MAX",
]

CORRECTION_METHODS = ("auto", "closed", "numeric")


@dataclass(frozen=True)
class ReconstructionResult:
    x: object
    transform: object
    corrections: tuple
    corrected: object
    truth: object
    residual_raw: object
    residual_corrected: object
    #: None for atomic spectra, where corrections do not apply
    m: Optional[int]


def _check_domain(s: OrderSpectrum, x, ctx: PrecisionContext):
    x = ctx.mpf(x)
    if not domain_check(s, x):
        raise DomainError(
            f"x = {ctx.mp.nstr(x, 15)} is outside the domain {s.x_domain} of {s.name}"
        )
    return x


def _check_m(m: int, m_max: int = M_MAX):
    if isinstance(m, bool) or not isinstance(m, int) or m < 0:
        raise ValueError(f"correction order must be a non-negative integer, got {m!r}")
    if m > m_max:
        raise RangeError(f"correction order {m} exceeds m_max = {m_max}")


def transform_quadrature(s: OrderSpectrum, x, ctx: PrecisionContext) -> QuadratureResult:
    """The quadrature of the continuous part alone (diagnostics: error, radius, panels)."""
    x = _check_domain(s, x, ctx)
    if s.is_atomic:
        raise UnsupportedError(f"spectrum {s.name!r} has no continuous part")
    ks = KernelSlice(s, x)
    return integrate_semi_infinite(lambda r: kernel_eval(ks, r, ctx), ctx)


def transform(s: OrderSpectrum, x, ctx: PrecisionContext):
    """T[f](x): quadrature of the continuous part plus the atomic contributions."""
    x = _check_domain(s, x, ctx)
    mp = ctx.mp
    total = mp.zero
    if not s.is_atomic:
        total += transform_quadrature(s, x, ctx).value
    for atom in s.atoms:
        order = ctx.mpf(atom.order)
        total += ctx.mpf(atom.weight) * mp.power(x, order) * mpnum.recip_gamma(order + 1, ctx)
    return total


def correction_term(
    s: OrderSpectrum,
    x,
    n: int,
    ctx: PrecisionContext,
    method: str = "auto",
):
    """E_n[f](x).

    ``method="auto"`` uses the closed-form kernel derivatives for the
    families that have them (n <= 2) and numerical differentiation
    otherwise; ``"numeric"`` and ``"closed"`` force one path.
    """
    if method not in CORRECTION_METHODS:
        raise ValueError(f"method must be one of {CORRECTION_METHODS}, got {method!r}")
    _check_m(n)
    x = _check_domain(s, x, ctx)
    if s.is_atomic:
        raise UnsupportedError(
            f"spectrum {s.name!r} is atomic; Euler-Maclaurin corrections do not apply"
        )
    ks = KernelSlice(s, x)
    if n == 0:
        return kernel_eval(ks, 0, ctx) / 2
    d = 2 * n - 1
    closed_ok = s.has_closed_corrections and n <= 2
    if method == "closed" and not closed_ok:
        raise UnsupportedError(f"no closed-form E_{n} for {s.name!r}")
    if method == "closed" or (method == "auto" and closed_ok):
        deriv = closed_form_kernel_derivative(s.name, x, d, ctx)
    else:
        deriv = kernel_derivative_at_zero(ks, d, ctx)
    coeff = mpnum.bernoulli_even(n, ctx) / math.factorial(2 * n)
    return -coeff * deriv


def correction_series(s: OrderSpectrum, x, m: int, ctx: PrecisionContext, method: str = "auto") -> list:
    """[E_0, ..., E_m]."""
    _check_m(m)
    return [correction_term(s, x, n, ctx, method) for n in range(m + 1)]


def maclaurin_sum(
    s: OrderSpectrum,
    x,
    ctx: PrecisionContext,
    quiet_terms: int = 30,
    growth_window: int = 10,
    max_terms: int = 100_000,
):
    """Σ_n D^n f(0) x^n / n! from the spectrum sampled at integer orders.

    Stops after ``quiet_terms`` consecutive terms below
    ``eps * max(1, |sum|)``. Raises :class:`DivergenceError` when the
    nonzero terms grow with a non-decreasing ratio for ``growth_window``
    consecutive steps (geometric or faster growth).

    The sum is carried with 10 guard digits; if the largest term exceeds
    the result by more than that (alternating cancellation, e.g. J0 or
    e^{-x^2} at large x), it is repeated with enough extra digits.
    """
    x = ctx.mpf(x)
    if s.is_atomic:
        mp = ctx.mp
        total = mp.zero
        for atom in s.atoms:
            if not mp.isint(atom.order):
                raise UnsupportedError("maclaurin_sum needs atoms at integer orders")
            total += ctx.mpf(atom.weight) * x ** int(atom.order) / mp.factorial(int(atom.order))
        return total
    guard = 10
    while True:
        hi = ctx.elevated(ctx.digits + guard)
        total, biggest = _maclaurin_pass(
            s, hi.mpf(x), hi, ctx.eps, quiet_terms, growth_window, max_terms
        )
        lost = 0
        if biggest > 0:
            scale = max(abs(total), ctx.eps)
            lost = max(0, int(hi.mp.ceil(hi.mp.log10(biggest / scale))))
        if lost + 5 <= guard:
            return ctx.mpf(total)
        guard = lost + 10


def _maclaurin_pass(s, x, ctx, eps, quiet_terms, growth_window, max_terms):
    mp = ctx.mp
    eps = ctx.mpf(eps)
    total = mp.zero
    biggest = mp.zero
    quiet = 0
    growth = 0
    prev_mag = None
    prev_ratio = None
    power = mp.one
    fact = mp.one
    for n in range(max_terms):
        if n:
            power *= x
            fact *= n
        term = spectrum_eval(s, n, ctx) * power / fact
        total += term
        mag = abs(term)
        biggest = max(biggest, mag)
        if mag < eps * max(1, abs(total)):
            quiet += 1
            if quiet >= quiet_terms:
                return total, biggest
            continue
        quiet = 0
        if prev_mag is not None:
            ratio = mag / prev_mag
            if ratio > 1 and (prev_ratio is None or ratio >= prev_ratio * (1 - mp.mpf(10) ** -6)):
                growth += 1
                if growth >= growth_window:
                    raise DivergenceError(
                        f"Maclaurin terms of {s.name} grow geometrically at x = {mp.nstr(x, 15)}"
                    )
            else:
                growth = 0
            prev_ratio = ratio
        prev_mag = mag
    raise DivergenceError(f"Maclaurin series of {s.name} did not settle within {max_terms} terms")


def reconstruct_point(s: OrderSpectrum, x, m: int, ctx: PrecisionContext, method: str = "auto") -> ReconstructionResult:
    """T[f](x) plus E_0..E_m, compared against the family's ground truth."""
    _check_m(m)
    x = _check_domain(s, x, ctx)
    t = transform(s, x, ctx)
    if s.is_atomic:
        corrections = ()
        m_used = None
    else:
        corrections = tuple(correction_series(s, x, m, ctx, method))
        m_used = m
    corrected = t + ctx.mp.fsum(corrections)
    truth = reference_value(s, x, ctx)
    return ReconstructionResult(
        x=x,
        transform=t,
        corrections=corrections,
        corrected=corrected,
        truth=truth,
        residual_raw=truth - t,
        residual_corrected=truth - corrected,
        m=m_used,
    )
