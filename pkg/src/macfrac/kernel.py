"""The kernel k(r; x) = D^r f(0) x^r / Γ(r+1) and its order-derivatives at r = 0."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

from . import mpnum
from .errors import DomainError, RangeError, UnsupportedError
from .mpnum import PrecisionContext
from .spectra import OrderSpectrum, domain_check, spectrum_eval

__all__ = [
    "KernelSlice",
    "M_MAX",
    "kernel_eval",
    "kernel_derivative_at_zero",
    "closed_form_kernel_derivative",
    "central_difference_weights",
    "CLOSED_FORM_FAMILIES",
]

M_MAX = 5
CLOSED_FORM_FAMILIES = ("exp", "geom", "sin")


@dataclass(frozen=True)
class KernelSlice:
    """The kernel of ``spectrum`` viewed as a function of order at fixed ``x``."""

    spectrum: OrderSpectrum
    x: object

    def __post_init__(self):
        if not domain_check(self.spectrum, self.x):
            raise DomainError(
                f"x = {self.x} is outside the domain {self.spectrum.x_domain} of {self.spectrum.name}"
            )


def kernel_eval(ks: KernelSlice, r, ctx: PrecisionContext):
    """k(r; x) at the working precision of ``ctx``."""
    s = ks.spectrum
    mp = ctx.mp
    r = ctx.mpf(r)
    x = ctx.mpf(ks.x)
    if s.is_atomic:
        raise UnsupportedError(f"spectrum {s.name!r} is purely atomic; its kernel is a sum of point masses")
    if r < s.r_min:
        raise DomainError(f"order r = {mp.nstr(r, 15)} is below r_min = {s.r_min}")
    if s.order_weight is not None:
        return s.order_weight(r, ctx) * mp.power(x, r)
    return spectrum_eval(s, r, ctx) * mp.power(x, r) * mpnum.recip_gamma(r + 1, ctx)


def _stencil_order(d: int) -> int:
    # smallest even accuracy order >= d + 4
    p = d + 4
    return p + (p % 2)


@functools.lru_cache(maxsize=None)
def central_difference_weights(d: int, order: int | None = None) -> tuple[Fraction, ...]:
    """Exact weights w_j, j = -s..s, with f^(d)(0) ≈ Σ w_j f(j h) / h^d.

    ``order`` is the (even) accuracy order of the centered stencil; the
    default is the smallest even order >= d + 4. Weights come from
    Fornberg's recursion carried out in rational arithmetic.
    """
    if d < 1:
        raise ValueError(f"derivative order must be positive, got {d}")
    order = _stencil_order(d) if order is None else order
    if order < 2 or order % 2:
        raise ValueError(f"centered stencils have even accuracy order, got {order}")
    s = (order + d - 1) // 2
    nodes = range(-s, s + 1)
    n = len(nodes) - 1
    # c[j][k]: weight of node j in the k-th derivative using nodes[0..i]
    c = [[Fraction(0)] * (d + 1) for _ in range(n + 1)]
    c[0][0] = Fraction(1)
    c1 = Fraction(1)
    c4 = Fraction(nodes[0])
    for i in range(1, n + 1):
        top = min(i, d)
        c2 = Fraction(1)
        c5 = c4
        c4 = Fraction(nodes[i])
        for j in range(i):
            c3 = Fraction(nodes[i] - nodes[j])
            c2 *= c3
            if j == i - 1:
                for k in range(top, 0, -1):
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2
            for k in range(top, 0, -1):
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3
            c[j][0] = c4 * c[j][0] / c3
        c1 = c2
    return tuple(row[d] for row in c)


def kernel_derivative_at_zero(ks: KernelSlice, d: int, ctx: PrecisionContext, m_max: int = M_MAX):
    """∂^d k(r; x)/∂r^d at r = 0 by a centered finite difference.

    Step h = 10**(-digits/4), accuracy order >= d + 4, kernel sampled at
    3 * digits so that the cancellation in the stencil stays far below
    ``ctx.diff_tol``. Requires the spectrum to extend below r = 0.
    """
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise ValueError(f"derivative order must be a positive integer, got {d!r}")
    if d > 2 * m_max - 1:
        raise RangeError(f"derivative order {d} exceeds 2*m_max - 1 = {2 * m_max - 1}")
    if ks.spectrum.is_atomic:
        raise UnsupportedError(
            f"spectrum {ks.spectrum.name!r} is atomic; Euler-Maclaurin corrections do not apply"
        )
    hi = ctx.elevated(3 * ctx.digits)
    mp = hi.mp
    h = mp.mpf(10) ** (-mp.mpf(ctx.digits) / 4)
    weights = central_difference_weights(d)
    s = len(weights) // 2
    if s * h > -ks.spectrum.r_min:
        raise DomainError("stencil reaches below the spectrum's r_min")
    acc = mp.zero
    for j, w in zip(range(-s, s + 1), weights):
        if w:
            acc += hi.mpf(w) * kernel_eval(ks, j * h, hi)
    return ctx.mpf(acc / h**d)


def closed_form_kernel_derivative(name, x, d: int, ctx: PrecisionContext):
    """Analytic ∂^d k/∂r^d at r = 0 for the exp, geom and sin families, d in {1, 3}.

    With L = ln x and a = L + γ:

    ========  ===========  =====================================
    family    d = 1        d = 3
    ========  ===========  =====================================
    geom      L            L^3
    exp       a            a^3 - (π²/2) a + 2 ζ(3)
    sin       π/2          (3π/8) (4 a² - π²)
    ========  ===========  =====================================

    The exp entries are the first and third moments of exp(a r - ζ(2) r²/2
    + ζ(3) r³/3 - ...), i.e. x^r/Γ(r+1); sin follows from Leibniz' rule
    with sin(πr/2) = (π/2) r - (π/2)³ r³/6 + O(r⁵).
    """
    name = getattr(name, "name", name)
    if name not in CLOSED_FORM_FAMILIES:
        raise UnsupportedError(f"no closed-form kernel derivatives for {name!r}")
    if d not in (1, 3):
        raise UnsupportedError(f"closed forms exist for d in {{1, 3}}, got {d!r}")
    mp = ctx.mp
    x = ctx.mpf(x)
    if not x > 0:
        raise DomainError("closed forms require x > 0")
    L = mp.log(x)
    if name == "geom":
        return L**d
    a = L + mp.euler
    pi = mp.pi
    if name == "exp":
        if d == 1:
            return a
        return a**3 - pi**2 / 2 * a + 2 * mp.zeta(3)
    if d == 1:
        return pi / 2
    return 3 * pi / 8 * (4 * a**2 - pi**2)
