"""Scaling ratios for the one-big-jump asymptotics and default thresholds.

The three ratios

    r1 = n x^-a,    r2 = r1 / c^(2a),    r3 = r1 / (b^2 c^(a-2))

must all tend to zero along a parameter sequence. ``default_cb`` ties
``c = b = r1^(1/(4a))`` so that ``r2 = r1^(1/2)`` and ``r3 = r1^(3/4)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

from .events import EventParams

DEFAULT_THRESHOLD = 0.2
C_MAX = 0.9


class RegimeError(ValueError):
    """Raised when a parameter point is outside the large-deviation regime (r1 >= 1)."""


@dataclass(frozen=True)
class RegimeRatios:
    r1: float
    r2: float
    r3: float

    def valid(self, threshold: float = DEFAULT_THRESHOLD) -> bool:
        return max(self.r1, self.r2, self.r3) < threshold

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.r1, self.r2, self.r3)


def large_deviation_ratio(alpha: float, n: int, x: float) -> float:
    return n * x**-alpha


def ratios(alpha: float, params: EventParams) -> RegimeRatios:
    r1 = large_deviation_ratio(alpha, params.n, params.x)
    c, b = params.c, params.b
    return RegimeRatios(
        r1=r1,
        r2=r1 / c ** (2.0 * alpha),
        r3=r1 / (b * b * c ** (alpha - 2.0)),
    )


def default_cb(alpha: float, n: int, x: float) -> tuple[float, float]:
    """``c = b = min(r1^(1/(4 alpha)), 0.9)``; requires ``r1 < 1``."""
    r1 = large_deviation_ratio(alpha, n, x)
    if not r1 < 1.0:
        raise RegimeError(f"n * x^-alpha = {r1:.6g} >= 1: not a large-deviation point (n={n}, x={x})")
    c = min(r1 ** (1.0 / (4.0 * alpha)), C_MAX)
    return c, c


NRule = Union[int, Callable[[float], int]]


def sequence(
    alpha: float,
    n: NRule,
    x_grid: Sequence[float],
    c: Optional[float] = None,
    b: Optional[float] = None,
) -> list[tuple[EventParams, RegimeRatios]]:
    """Build parameter points along an increasing ``x`` grid.

    ``n`` is either fixed or a function of ``x``. ``c`` and ``b`` default to
    :func:`default_cb` at each point.
    """
    xs = [float(v) for v in x_grid]
    if not xs:
        raise ValueError("x_grid is empty")
    if any(b_ <= a_ for a_, b_ in zip(xs, xs[1:])):
        raise ValueError("x_grid must be strictly increasing")
    out = []
    for xv in xs:
        nv = n(xv) if callable(n) else n
        r1 = large_deviation_ratio(alpha, nv, xv)
        if not r1 < 1.0:
            raise RegimeError(f"grid point n={nv}, x={xv:g} has n * x^-alpha = {r1:.6g} >= 1")
        dc, db = default_cb(alpha, nv, xv)
        params = EventParams(nv, xv, dc if c is None else c, db if b is None else b)
        out.append((params, ratios(alpha, params)))
    return out
