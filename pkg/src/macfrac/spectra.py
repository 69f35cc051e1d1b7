"""Order spectra r -> D^r f(0) for the built-in function families.

A spectrum is prescribed data: a smooth continuous part, a list of atoms
(point masses in order), the open interval of valid evaluation points, and a
ground-truth evaluator for f itself. The continuous part of every built-in
extends analytically below r = 0, which lets the kernel be differentiated
with centered stencils at the boundary.

Spectra may also carry ``order_weight``, an algebraically simplified form of
D^r f(0)/Γ(r+1). The kernel prefers it so that, e.g., the geometric family
evaluates exactly x^r instead of Γ(r+1)·x^r/Γ(r+1).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Callable, Optional

from . import mpnum
from .errors import DomainError, UnsupportedError
from .mpnum import PrecisionContext

__all__ = [
    "Atom",
    "OrderSpectrum",
    "BUILTIN_FAMILIES",
    "builtin_spectrum",
    "builtin_names",
    "spectrum_eval",
    "domain_check",
    "reference_value",
]

SpectrumFn = Callable[[object, PrecisionContext], object]

DEFAULT_R_MIN = -0.5


@dataclass(frozen=True)
class Atom:
    """Point mass ``weight`` at derivative order ``order``."""

    order: Real
    weight: Real

    def __post_init__(self):
        if not self.order >= 0:
            raise ValueError(f"atom order must be >= 0, got {self.order!r}")
        if self.weight == 0 or not math.isfinite(float(self.weight)):
            raise ValueError(f"atom weight must be finite and nonzero, got {self.weight!r}")


@dataclass(frozen=True)
class OrderSpectrum:
    name: str
    reference_eval: SpectrumFn
    continuous_part: Optional[SpectrumFn] = None
    atoms: tuple[Atom, ...] = ()
    r_min: float = DEFAULT_R_MIN
    #: open interval (lo, hi); hi may be math.inf
    x_domain: tuple[float, float] = (0.0, math.inf)
    has_closed_corrections: bool = False
    order_weight: Optional[SpectrumFn] = field(default=None, repr=False)
    #: x values where reference_eval is singular (poles)
    poles: tuple[float, ...] = ()

    def __post_init__(self):
        if self.continuous_part is None and not self.atoms:
            raise ValueError(f"spectrum {self.name!r} has neither a continuous part nor atoms")
        if not self.r_min < 0:
            raise ValueError(f"r_min must be negative, got {self.r_min!r}")
        lo, hi = self.x_domain
        if lo < 0 or not lo < hi:
            raise ValueError(f"x_domain must satisfy 0 <= lo < hi, got {self.x_domain!r}")
        object.__setattr__(self, "atoms", tuple(self.atoms))

    @property
    def is_atomic(self) -> bool:
        """True when the spectrum has no continuous part."""
        return self.continuous_part is None


def _exp() -> OrderSpectrum:
    return OrderSpectrum(
        name="exp",
        continuous_part=lambda r, ctx: ctx.mp.one,
        order_weight=lambda r, ctx: ctx.mp.rgamma(r + 1),
        reference_eval=lambda x, ctx: ctx.mp.exp(x),
        has_closed_corrections=True,
    )


def _geom() -> OrderSpectrum:
    return OrderSpectrum(
        name="geom",
        continuous_part=lambda r, ctx: ctx.mp.gamma(r + 1),
        order_weight=lambda r, ctx: ctx.mp.one,
        reference_eval=_geom_reference,
        x_domain=(0.0, 1.0),
        has_closed_corrections=True,
        poles=(1.0,),
    )


def _geom_reference(x, ctx):
    if x == 1:
        raise DomainError("1/(1-x) has a pole at x = 1")
    return 1 / (1 - x)


def _sin() -> OrderSpectrum:
    return OrderSpectrum(
        name="sin",
        continuous_part=lambda r, ctx: ctx.mp.sinpi(r / 2),
        order_weight=lambda r, ctx: ctx.mp.sinpi(r / 2) * ctx.mp.rgamma(r + 1),
        reference_eval=lambda x, ctx: ctx.mp.sin(x),
        has_closed_corrections=True,
    )


def _expsq() -> OrderSpectrum:
    # cos^2 enforces even parity; the gamma ratio interpolates (2n)!/n!
    return OrderSpectrum(
        name="expsq",
        continuous_part=lambda r, ctx: (
            ctx.mp.gamma(r + 1) * ctx.mp.rgamma(r / 2 + 1) * ctx.mp.cospi(r / 2) ** 2
        ),
        order_weight=lambda r, ctx: ctx.mp.cospi(r / 2) ** 2 * ctx.mp.rgamma(r / 2 + 1),
        reference_eval=lambda x, ctx: ctx.mp.exp(x * x),
    )


def _gauss() -> OrderSpectrum:
    return OrderSpectrum(
        name="gauss",
        continuous_part=lambda r, ctx: (
            ctx.mp.gamma(r + 1) * ctx.mp.rgamma(r / 2 + 1) * ctx.mp.cospi(r / 2)
        ),
        order_weight=lambda r, ctx: ctx.mp.cospi(r / 2) * ctx.mp.rgamma(r / 2 + 1),
        reference_eval=lambda x, ctx: ctx.mp.exp(-x * x),
    )


def _besselj0() -> OrderSpectrum:
    return OrderSpectrum(
        name="besselj0",
        continuous_part=lambda r, ctx: (
            ctx.mp.gamma(r + 1) * ctx.mp.rgamma(r / 2 + 1) ** 2 * ctx.mp.cospi(r / 2)
            / ctx.mp.power(2, r)
        ),
        order_weight=lambda r, ctx: (
            ctx.mp.cospi(r / 2) * ctx.mp.rgamma(r / 2 + 1) ** 2 / ctx.mp.power(2, r)
        ),
        reference_eval=lambda x, ctx: mpnum.bessel_j0(x, ctx),
    )


def _monomial(k: int) -> OrderSpectrum:
    if isinstance(k, bool) or not isinstance(k, int) or k < 0:
        raise DomainError(f"monomial degree must be a non-negative integer, got {k!r}")
    return OrderSpectrum(
        name=f"monomial:{k}",
        atoms=(Atom(k, math.factorial(k)),),
        reference_eval=lambda x, ctx: x**k,
    )


#: name -> zero-argument factory; monomials are parameterized separately
BUILTIN_FAMILIES: dict[str, Callable[[], OrderSpectrum]] = {
    "exp": _exp,
    "geom": _geom,
    "sin": _sin,
    "expsq": _expsq,
    "gauss": _gauss,
    "besselj0": _besselj0,
}

_MONOMIAL = re.compile(r"monomial[:(]\s*(-?\d+)\s*\)?")


def builtin_names() -> list[str]:
    """Registered family names, with the parameterized monomial last."""
    return list(BUILTIN_FAMILIES) + ["monomial:k"]


def builtin_spectrum(name: str, k: Optional[int] = None) -> OrderSpectrum:
    """Look up a built-in spectrum.

    Monomials are requested as ``builtin_spectrum("monomial", 3)`` or by the
    names ``"monomial:3"`` / ``"monomial(3)"``.
    """
    if name == "monomial":
        if k is None:
            raise DomainError("monomial requires a degree k")
        return _monomial(k)
    match = _MONOMIAL.fullmatch(name)
    if match:
        return _monomial(int(match.group(1)))
    try:
        factory = BUILTIN_FAMILIES[name]
    except KeyError:
        raise KeyError(f"unknown spectrum {name!r}; expected one of {builtin_names()}") from None
    return factory()


def spectrum_eval(s: OrderSpectrum, r, ctx: PrecisionContext):
    """Value of the continuous part of ``s`` at order ``r``."""
    if s.is_atomic:
        raise UnsupportedError(f"spectrum {s.name!r} is purely atomic")
    r = ctx.mpf(r)
    if r < s.r_min:
        raise DomainError(f"order r = {ctx.mp.nstr(r, 15)} is below r_min = {s.r_min}")
    return s.continuous_part(r, ctx)


def domain_check(s: OrderSpectrum, x) -> bool:
    """True iff x lies in the open interval ``s.x_domain`` (always excluding x <= 0)."""
    lo, hi = s.x_domain
    if isinstance(x, str):
        try:
            x = Fraction(x)
        except ValueError:
            return False
    try:
        return max(lo, 0) < x < hi
    except TypeError:
        return False


def reference_value(s: OrderSpectrum, x, ctx: PrecisionContext):
    """Ground truth f(x); defined for any real x except the family's poles."""
    x = ctx.mpf(x)
    if any(x == p for p in s.poles):
        raise DomainError(f"{s.name} has a pole at x = {ctx.mp.nstr(x, 15)}")
    return s.reference_eval(x, ctx)
