"""Symmetric power-law distributions with closed-form tails.

Two exact families are provided, both with density ``f(u) ~ const * |u|**(-1-alpha)``:

* ``PurePareto``: ``f(u) = (alpha/2) * u0**alpha * |u|**(-1-alpha)`` for ``|u| >= u0``.
* ``SmoothPareto``: ``f(u) = (alpha/2) * u0**alpha * (u0 + |u|)**(-1-alpha)`` on the whole line.

Every sampler works by inversion, so a draw is a pure function of the
uniforms consumed from the generator.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate


class Variant(str, enum.Enum):
    PURE = "PurePareto"
    SMOOTH = "SmoothPareto"


@dataclass(frozen=True)
class TailModel:
    """Symmetric heavy-tailed law with tail index ``alpha`` in (0, 2)."""

    alpha: float
    u0: float = 1.0
    variant: Variant = Variant.PURE

    def __post_init__(self):
        if not (0.0 < self.alpha < 2.0):
            raise ValueError(f"alpha must lie in (0, 2), got {self.alpha!r}")
        if not (self.u0 > 0.0 and math.isfinite(self.u0)):
            raise ValueError(f"u0 must be a positive finite number, got {self.u0!r}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "u0", float(self.u0))
        object.__setattr__(self, "variant", Variant(self.variant))

    @property
    def tail_constant(self) -> float:
        """Limit of ``tail(u) * u**alpha`` as ``u -> inf``."""
        return 0.5 * self.u0**self.alpha

    @property
    def support_min(self) -> float:
        """Smallest ``|u|`` carrying density."""
        return self.u0 if self.variant is Variant.PURE else 0.0


def pdf(model: TailModel, u):
    """Density of ``model`` at ``u`` (scalar or array)."""
    a, u0 = model.alpha, model.u0
    au = np.abs(np.asarray(u, dtype=float))
    if model.variant is Variant.PURE:
        with np.errstate(divide="ignore"):
            out = np.where(au >= u0, 0.5 * a * u0**a * au ** (-1.0 - a), 0.0)
    else:
        out = 0.5 * a * u0**a * (u0 + au) ** (-1.0 - a)
    return out[()] if out.ndim == 0 else out


def _upper_tail(model: TailModel, u):
    # P(X > u) for u >= 0
    a, u0 = model.alpha, model.u0
    if model.variant is Variant.PURE:
        with np.errstate(divide="ignore"):
            return np.where(u >= u0, 0.5 * (np.maximum(u, u0) / u0) ** (-a), 0.5)
    return 0.5 * (u0 / (u0 + u)) ** a


def tail(model: TailModel, u):
    """Survival function ``P(X > u)``."""
    u = np.asarray(u, dtype=float)
    au = np.abs(u)
    up = _upper_tail(model, au)
    out = np.where(u >= 0, up, 1.0 - up)
    return out[()] if out.ndim == 0 else out


def cdf(model: TailModel, u):
    """``P(X <= u)``; equals ``tail(-u)`` by symmetry."""
    return tail(model, -np.asarray(u, dtype=float))


def quantile_tail(model: TailModel, p):
    """Inverse of :func:`tail` on (0, 1/2]: returns ``u >= 0`` with ``tail(u) == p``.

    Raises ``ValueError`` if any ``p`` falls outside (0, 0.5].
    """
    p = np.asarray(p, dtype=float)
    if np.any(~((p > 0.0) & (p <= 0.5))):
        raise ValueError("tail probability must lie in (0, 0.5]")
    out = _quantile_tail(model, p)
    return out[()] if out.ndim == 0 else out


def _quantile_tail(model: TailModel, p):
    # unchecked inverse, p in (0, 0.5]
    a, u0 = model.alpha, model.u0
    if model.variant is Variant.PURE:
        return u0 * (2.0 * p) ** (-1.0 / a)
    # (2p)**(-1/a) - 1 without cancellation near p = 1/2
    return u0 * np.expm1(-np.log(2.0 * p) / a)


def sample(model: TailModel, rng: np.random.Generator, count) -> np.ndarray:
    """Draw ``count`` i.i.d. variates (``count`` may be an int or a shape).

    One uniform ``w`` is consumed per variate: ``w >= 1/2`` gives
    ``+quantile_tail(1 - w)`` and ``w < 1/2`` gives ``-quantile_tail(1/2 - w)``.
    """
    w = rng.random(count)
    pos = w >= 0.5
    p = np.where(pos, 1.0 - w, 0.5 - w)
    # 0.5 - w is in (0, 0.5] for w in [0, 0.5)
    mag = _quantile_tail(model, p)
    return np.where(pos, mag, -mag)


def sample_tail_conditional(model: TailModel, t: float, rng: np.random.Generator, count) -> np.ndarray:
    """Draw from the law of ``X`` given ``X > t``.

    ``t`` must lie in the positive support (``t >= u0`` for PurePareto,
    ``t >= 0`` for SmoothPareto).
    """
    if not t >= model.support_min:
        raise ValueError(f"conditioning level {t!r} is below the support start {model.support_min!r}")
    v = 1.0 - rng.random(count)  # (0, 1]
    return _quantile_tail(model, v * float(_upper_tail(model, t)))


def sample_abs_stratum(model: TailModel, lo: float, hi: float, rng: np.random.Generator, count) -> np.ndarray:
    """Draw from the law of ``X`` given ``lo < |X| <= hi`` (random symmetric sign).

    Consumes two uniforms per variate: the magnitude first, then the sign.
    """
    if not (0.0 <= lo < hi):
        raise ValueError(f"need 0 <= lo < hi, got lo={lo!r}, hi={hi!r}")
    t_lo = float(_upper_tail(model, lo))
    t_hi = float(_upper_tail(model, hi))
    if not t_lo > t_hi:
        raise ValueError("stratum carries no probability mass")
    v = rng.random(count)
    # tail value uniform on (t_hi, t_lo]
    mag = _quantile_tail(model, t_lo - v * (t_lo - t_hi))
    sign = rng.random(count) < 0.5
    return np.where(sign, -mag, mag)


def abs_stratum_probability(model: TailModel, lo: float, hi: float) -> float:
    """``P(lo < |X| <= hi)`` for ``0 <= lo <= hi``."""
    return 2.0 * float(_upper_tail(model, lo) - _upper_tail(model, hi))


def _powm1_over(s, k):
    # (s**k - 1) / k, continuous at k = 0
    ls = math.log(s)
    if k == 0.0:
        return ls
    return math.expm1(k * ls) / k


def truncated_second_moment(model: TailModel, T: float) -> float:
    """``E[X**2 ; |X| <= T]`` in closed form.

    SmoothPareto uses the antiderivative of ``(t-1)**2 * t**(-1-alpha)``; for
    ``T < u0/10`` that expression loses digits to cancellation, so adaptive
    quadrature is used there instead.
    """
    if T < 0:
        raise ValueError("truncation level must be nonnegative")
    a, u0 = model.alpha, model.u0
    if model.variant is Variant.PURE:
        if T <= u0:
            return 0.0
        return a * u0**a * u0 ** (2.0 - a) * _powm1_over(T / u0, 2.0 - a)
    if T == 0:
        return 0.0
    if T < 0.1 * u0:
        return truncated_second_moment_quad(model, T)
    s = 1.0 + T / u0
    j = _powm1_over(s, 2.0 - a) - 2.0 * _powm1_over(s, 1.0 - a) + _powm1_over(s, -a)
    return a * u0 * u0 * j


def truncated_second_moment_quad(model: TailModel, T: float, epsrel: float = 1e-12) -> float:
    """Quadrature value of ``2 * int_0^T u**2 f(u) du`` (reference path)."""
    lo = model.support_min
    if T <= lo:
        return 0.0
    val, _ = integrate.quad(lambda u: u * u * pdf(model, u), lo, T, epsabs=0.0, epsrel=epsrel, limit=200)
    return 2.0 * val
