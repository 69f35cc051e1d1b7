"""Adaptive integration over finite panels and over [0, inf).

Finite panels use the tanh-sinh (double exponential) rule. Level k has step
h = 2**-k; every level reuses the previous level's nodes, and the difference
between consecutive levels is the error estimate. The half-line is covered by
the panels [0, w], [w, 2w], [2w, 4w], ... and the tail is truncated once two
consecutive panels are negligible.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Callable

from .errors import ConvergenceError, TruncationError
from .mpnum import PrecisionContext, precision

__all__ = [
    "QuadratureResult",
    "integrate_segment",
    "integrate_semi_infinite",
    "MAX_LEVELS",
    "MAX_RADIUS",
]

MAX_LEVELS = 12
MIN_LEVELS = 3
MAX_RADIUS = 2**16


@dataclass(frozen=True)
class QuadratureResult:
    value: object
    error_estimate: object
    truncation_radius: object
    segments_used: int


@functools.lru_cache(maxsize=None)
def _level_nodes(digits: int, level: int) -> tuple:
    """Nodes added at ``level`` as (delta, weight) pairs on [-1, 1].

    ``delta = 1 - |t|`` is the distance from the nearest endpoint, computed
    without cancellation; each pair is used at both -1 + delta and 1 - delta.
    Level 0 holds t = 0 (delta = 1) once. Weights exclude the step h.
    """
    mp = precision(digits).mp
    half_pi = mp.pi / 2
    h = mp.ldexp(1, -level)
    tiny = mp.mpf(10) ** (-digits - 10)
    nodes = []
    if level == 0:
        nodes.append((mp.one, half_pi, True))
        step, j = 1, 1
    else:
        step, j = 2, 1
    while True:
        t = j * h
        u = half_pi * mp.sinh(t)
        e2u = mp.exp(2 * u)
        delta = 2 / (e2u + 1)
        weight = half_pi * mp.cosh(t) * 4 * e2u / (e2u + 1) ** 2
        if weight < tiny or delta < tiny:
            break
        nodes.append((delta, weight, False))
        j += step
    return tuple(nodes)


def _level_sum(f, a, b, digits, level):
    half = (b - a) / 2
    acc = 0
    for delta, weight, center in _level_nodes(digits, level):
        off = half * delta
        if center:
            acc += weight * f(a + off)
        else:
            acc += weight * (f(a + off) + f(b - off))
    return acc * half


def integrate_segment(
    f: Callable,
    a,
    b,
    ctx: PrecisionContext,
    tol=None,
    max_levels: int = MAX_LEVELS,
):
    """Integrate ``f`` over [a, b] to ``tol * max(1, |value|)``.

    Returns ``(value, error_estimate)``. ``tol`` defaults to ``ctx.quad_tol``.
    Raises :class:`ConvergenceError` if ``max_levels`` refinements do not
    reach the tolerance.
    """
    mp = ctx.mp
    a, b = ctx.mpf(a), ctx.mpf(b)
    if not b > a:
        raise ValueError(f"integrate_segment requires b > a, got [{a}, {b}]")
    tol = ctx.quad_tol if tol is None else ctx.mpf(tol)

    # level k sums h_k * (all nodes up to level k); h_k = 2**-k
    raw = _level_sum(f, a, b, ctx.digits, 0)
    previous = raw
    err = mp.inf
    for level in range(1, max_levels + 1):
        raw += _level_sum(f, a, b, ctx.digits, level)
        current = mp.ldexp(raw, -level)
        err = abs(current - previous)
        if level >= MIN_LEVELS and err <= tol * max(1, abs(current)):
            return current, err
        previous = current
    raise ConvergenceError(
        f"tanh-sinh stagnated on [{mp.nstr(a, 10)}, {mp.nstr(b, 10)}]: "
        f"estimate {mp.nstr(err, 5)} after {max_levels} levels"
    )


def integrate_semi_infinite(
    f: Callable,
    ctx: PrecisionContext,
    initial_width=1,
    max_radius=MAX_RADIUS,
    max_levels: int = MAX_LEVELS,
) -> QuadratureResult:
    """Integrate ``f`` over [0, inf) by doubling panels.

    Panels are [0, w], [w, 2w], [2w, 4w], ... with ``w = initial_width``.
    Summation stops once two consecutive panel contributions are each below
    ``quad_tol * max(1, |accumulated|)``; the right end of the last panel is
    reported as ``truncation_radius``.
    """
    mp = ctx.mp
    tol = ctx.quad_tol
    width = ctx.mpf(initial_width)
    if not width > 0:
        raise ValueError("initial_width must be positive")
    total = mp.zero
    err_total = mp.zero
    left, right = mp.zero, width
    segments = 0
    small_run = 0
    while True:
        value, err = integrate_segment(f, left, right, ctx, tol=tol, max_levels=max_levels)
        total += value
        err_total += err
        segments += 1
        if abs(value) < tol * max(1, abs(total)):
            small_run += 1
        else:
            small_run = 0
        if small_run >= 2 and right >= 1:
            return QuadratureResult(total, err_total, right, segments)
        if right >= max_radius:
            raise TruncationError(
                f"tail not negligible by r = {mp.nstr(right, 8)} "
                f"(last panel {mp.nstr(value, 5)})"
            )
        left, right = right, (right * 2 if left > 0 else right + width)
