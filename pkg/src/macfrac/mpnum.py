"""Arbitrary-precision substrate: precision contexts, special functions, constants.

Every context owns an independent :class:`mpmath.ctx_mp.MPContext`, so two
computations at different precisions never share mutable state. Values are
``mpf`` instances of the owning context; convert foreign values with
``ctx.mpf(value)`` before mixing.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath.ctx_mp import MPContext

from .errors import DomainError, RangeError

__all__ = [
    "DEFAULT_DIGITS",
    "MIN_DIGITS",
    "PrecisionContext",
    "precision",
    "gamma",
    "recip_gamma",
    "digamma",
    "bessel_j0",
    "bernoulli_even",
    "bernoulli_even_exact",
    "constant",
]

DEFAULT_DIGITS = 100
MIN_DIGITS = 20
BESSEL_J0_MAX_ABS_X = 50
BERNOULLI_MAX_INDEX = 32


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision in decimal digits plus the tolerances derived from it.

    ``eps = 10**(1 - digits)``, ``quad_tol = 10**(10 - digits)`` and
    ``diff_tol = 10**(-digits/2)``.
    """

    digits: int = DEFAULT_DIGITS
    mp: MPContext = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if isinstance(self.digits, bool) or not isinstance(self.digits, int):
            raise TypeError(f"digits must be an int, got {self.digits!r}")
        if self.digits < MIN_DIGITS:
            raise ValueError(f"digits must be >= {MIN_DIGITS}, got {self.digits}")
        ctx = MPContext()
        ctx.dps = self.digits
        object.__setattr__(self, "mp", ctx)

    @property
    def eps(self):
        return self.mp.mpf(10) ** (1 - self.digits)

    @property
    def quad_tol(self):
        return self.mp.mpf(10) ** (10 - self.digits)

    @property
    def diff_tol(self):
        return self.mp.mpf(10) ** (-self.mp.mpf(self.digits) / 2)

    def mpf(self, value):
        """Convert ``value`` (int, str, float, Fraction, foreign mpf) into this context."""
        if isinstance(value, Fraction):
            return self.mp.mpf(value.numerator) / value.denominator
        return self.mp.mpf(value)

    def elevated(self, digits: int) -> PrecisionContext:
        """A context with ``digits`` of precision (never lower than this one)."""
        return precision(max(digits, self.digits))


@functools.lru_cache(maxsize=None)
def precision(digits: int = DEFAULT_DIGITS) -> PrecisionContext:
    """Shared, cached :class:`PrecisionContext` for ``digits``."""
    return PrecisionContext(digits)


def _is_nonpositive_integer(ctx: PrecisionContext, x) -> bool:
    return x <= 0 and ctx.mp.isint(x)


def gamma(x, ctx: PrecisionContext):
    """Γ(x) for x > 0."""
    x = ctx.mpf(x)
    if x <= 0:
        raise DomainError(f"gamma requires x > 0, got {ctx.mp.nstr(x, 15)}; use recip_gamma")
    return ctx.mp.gamma(x)


def recip_gamma(x, ctx: PrecisionContext):
    """1/Γ(x), entire; exactly zero at the poles of Γ."""
    x = ctx.mpf(x)
    if _is_nonpositive_integer(ctx, x):
        return ctx.mp.zero
    return ctx.mp.rgamma(x)


def digamma(x, ctx: PrecisionContext):
    """ψ(x) = Γ'(x)/Γ(x) for x > 0."""
    x = ctx.mpf(x)
    if x <= 0:
        raise DomainError(f"digamma requires x > 0, got {ctx.mp.nstr(x, 15)}")
    return ctx.mp.digamma(x)


def bessel_j0(x, ctx: PrecisionContext, max_abs_x=BESSEL_J0_MAX_ABS_X):
    """J₀(x) from its Maclaurin series, Σ (-1)^n (x/2)^(2n) / (n!)^2.

    The alternating terms peak near exp(|x|) in magnitude, so the sum is
    carried out with ``ceil(|x| log10 e)`` extra guard digits.
    """
    x = ctx.mpf(x)
    if abs(x) > max_abs_x:
        raise RangeError(f"bessel_j0 supports |x| <= {max_abs_x}, got {ctx.mp.nstr(x, 15)}")
    guard = math.ceil(float(abs(x)) * math.log10(math.e)) + 10
    hi = precision(ctx.digits + guard)
    mp = hi.mp
    q = -(hi.mpf(x) / 2) ** 2
    term = mp.one
    total = mp.one
    cutoff = mp.mpf(10) ** (-hi.digits)
    n = 0
    while True:
        n += 1
        term = term * q / (n * n)
        total += term
        # terms decrease monotonically once n^2 > |q|
        if n * n > abs(q) and abs(term) < cutoff:
            break
    return ctx.mpf(total)


@functools.lru_cache(maxsize=None)
def _bernoulli_table(m: int) -> tuple[Fraction, ...]:
    """B_0..B_m by B_j = -1/(j+1) Σ_{k<j} C(j+1, k) B_k (convention B_1 = -1/2)."""
    table = [Fraction(1)]
    for j in range(1, m + 1):
        acc = sum(math.comb(j + 1, k) * table[k] for k in range(j))
        table.append(-acc / (j + 1))
    return tuple(table)


def bernoulli_even_exact(n: int, max_index: int = BERNOULLI_MAX_INDEX) -> Fraction:
    """B_{2n} as an exact fraction."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise DomainError(f"bernoulli_even requires a non-negative integer, got {n!r}")
    if n > max_index:
        raise RangeError(f"bernoulli_even supports n <= {max_index}, got {n}")
    return _bernoulli_table(2 * max_index)[2 * n]


def bernoulli_even(n: int, ctx: PrecisionContext, max_index: int = BERNOULLI_MAX_INDEX):
    """B_{2n} rendered at the working precision of ``ctx``."""
    return ctx.mpf(bernoulli_even_exact(n, max_index))


_CONSTANTS = {
    "pi": lambda mp: +mp.pi,
    "euler_gamma": lambda mp: +mp.euler,
    "zeta3": lambda mp: mp.zeta(3),
    "e": lambda mp: +mp.e,
}


def constant(name: str, ctx: PrecisionContext):
    """One of ``pi``, ``euler_gamma``, ``zeta3`` (Apéry) or ``e``."""
    try:
        make = _CONSTANTS[name]
    except KeyError:
        raise KeyError(f"unknown constant {name!r}; expected one of {sorted(_CONSTANTS)}") from None
    return make(ctx.mp)
