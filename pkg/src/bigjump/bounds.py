"""Computable upper and lower bounds for the decomposition terms.

Each function evaluates the explicit side of a second-moment (Chebyshev) or
pairwise union bound, with the suppressed constants made concrete by the
model. Truncated moments come from :func:`bigjump.dist.truncated_second_moment`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate

from . import dist
from .dist import TailModel, Variant
from .events import EventParams

QUAD_EPSREL = 1e-8


def _quad_log(f, lo, hi, epsrel):
    # int_lo^hi f(u) du with u = exp(t); lo > 0
    if hi <= lo:
        return 0.0
    a, b = math.log(lo), math.log(hi)
    return integrate.quad(lambda t: f(math.exp(t)) * math.exp(t), a, b, epsabs=0.0, epsrel=epsrel, limit=200)[0]


def _quad_gap(f, x, lo, hi, epsrel):
    # int_lo^hi f(u) du over u < x, in the variable d = x - u (log-spaced when d stays away from 0)
    if hi <= lo:
        return 0.0
    dlo, dhi = x - hi, x - lo
    if dlo > 0:
        return _quad_log(lambda d: f(x - d), dlo, dhi, epsrel)
    return integrate.quad(lambda d: f(x - d), 0.0, dhi, epsabs=0.0, epsrel=epsrel, limit=200)[0]


def feller_lower_bound(model: TailModel, n: int, x: float) -> float:
    """``(1 - exp(-2 n P(X > x))) / 4``, a lower bound on ``P(S_n > x)`` for symmetric summands."""
    if n < 1 or not x > 0:
        raise ValueError("need n >= 1 and x > 0")
    return -0.25 * math.expm1(-2.0 * n * float(dist.tail(model, x)))


def _chebyshev(terms: int, model: TailModel, params: EventParams, level: float) -> float:
    # min(1, terms * E[Y^2] / level^2), Y = X 1(|X| <= c x)
    if terms <= 0:
        return 0.0
    return min(1.0, terms * dist.truncated_second_moment(model, params.cx) / level**2)


def p0_chebyshev_bound(model: TailModel, params: EventParams) -> float:
    """``p0 <= P(T_n > x) <= n E[Y^2] / x^2``."""
    return _chebyshev(params.n, model, params, params.x)


def pge2_bound(model: TailModel, params: EventParams) -> float:
    """``p_ge2 <= C(n, 2) * P(|X| > c x)^2``."""
    n = params.n
    if n < 2:
        return 0.0
    q = 2.0 * float(dist.tail(model, params.cx))
    return min(1.0, math.comb(n, 2) * q * q)


def p11m_bound(model: TailModel, params: EventParams) -> float:
    """``p11- <= n P(X < -x) * P(T_n - Y_1 > x)`` with Chebyshev on the second factor."""
    if params.n < 2:
        return 0.0
    return min(1.0, params.n * float(dist.tail(model, params.x)) * _chebyshev(params.n - 1, model, params, params.x))


def diff_bound(model: TailModel, params: EventParams) -> float:
    """Bound on ``p11+`` minus the refined probability: ``n P(X > x) P(|T_n - Y_1| > b x)``."""
    if params.n < 2:
        return 0.0
    return min(1.0, params.n * float(dist.tail(model, params.x)) * _chebyshev(params.n - 1, model, params, params.bx))


def p11p_trivial_bound(model: TailModel, params: EventParams) -> float:
    """``p11+ <= n P(X > x)``."""
    return min(1.0, params.n * float(dist.tail(model, params.x)))


@dataclass(frozen=True)
class P10Integral:
    """Pieces of ``I = int_{cx}^{x} g(u) du`` split at ``x/2`` and ``u_x``.

    The ``*_relaxed`` fields hold the closed-form majorants obtained by
    extending each piece as in the order estimates (e.g. integrating the
    middle piece from minus infinity); they are reported, not summed.
    """

    u_x: float
    I1: float
    I2: float
    I3: float
    I: float
    degenerate: bool  # u_x <= x/2: the middle piece is empty
    I1_relaxed: float
    I2_relaxed: float
    I3_relaxed: float


def g_integrand(model: TailModel, params: EventParams):
    """``g(u) = n u^(-1-a) min(1, n (cx)^(2-a) / (x-u)^2)``."""
    n, a, x, cx = params.n, model.alpha, params.x, params.cx
    scale = n * cx ** (2.0 - a)

    def g(u):
        d = x - u
        w = 1.0 if d * d <= scale else scale / (d * d)
        return n * u ** (-1.0 - a) * w

    return g


def u_x(model: TailModel, params: EventParams) -> float:
    a = model.alpha
    return params.x - math.sqrt(params.n) * params.cx ** (1.0 - a / 2.0)


def p10_integral(model: TailModel, params: EventParams, epsrel: float = QUAD_EPSREL) -> P10Integral:
    """Adaptive quadrature of ``g`` over ``[cx, x/2]``, ``[x/2, u_x]``, ``[u_x, x]``.

    If ``u_x <= x/2`` the middle piece is empty and the last one starts at
    ``x/2``; if ``c >= 1/2`` the first piece is empty. The pieces always
    cover ``[cx, x]`` exactly.
    """
    n, a, x, cx = params.n, model.alpha, params.x, params.cx
    ux = u_x(model, params)
    g = g_integrand(model, params)
    s1 = max(cx, x / 2.0)
    s2 = max(s1, min(ux, x))

    I1 = _quad_log(g, cx, s1, epsrel)
    I2 = _quad_gap(g, x, s1, s2, epsrel)
    I3 = _quad_gap(g, x, s2, x, epsrel)
    spread = n * cx ** (2.0 - a)
    I1_rel = n * spread * cx**-a / a / (x / 2.0) ** 2
    I2_rel = n * (x / 2.0) ** (-1.0 - a) * spread / (x - ux)
    I3_rel = (x - ux) * n * ux ** (-1.0 - a) if ux > 0 else math.inf
    return P10Integral(
        u_x=ux,
        I1=I1,
        I2=I2,
        I3=I3,
        I=I1 + I2 + I3,
        degenerate=ux <= x / 2.0,
        I1_relaxed=I1_rel,
        I2_relaxed=I2_rel,
        I3_relaxed=I3_rel,
    )


def p10_explicit_bound(model: TailModel, params: EventParams, epsrel: float = QUAD_EPSREL) -> float:
    """Constant-explicit version of the p10 chain.

    ``p10 <= n * E[ 1(cx < |X_1| <= x) * min(1, (n-1) E[Y^2] / (x - X_1)^2) ]``,
    i.e. Chebyshev applied to ``Y_2 + ... + Y_n > x - X_1``, integrated
    against the true density on both signs of ``X_1``.
    """
    n, x, cx = params.n, params.x, params.cx
    if n < 2:
        return 0.0
    var = (n - 1) * dist.truncated_second_moment(model, cx)
    if var == 0.0:
        return 0.0
    switch = x - math.sqrt(var)  # min(...) is 1 on [switch, x]

    def h(u):
        d = x - u
        return float(dist.pdf(model, u)) * min(1.0, var / (d * d))

    lo = max(cx, model.support_min)
    if not lo < x:
        return 0.0
    mid = min(max(switch, lo), x)
    half = max(lo, min(x / 2.0, mid))
    total = _quad_log(h, lo, half, epsrel) + _quad_gap(h, x, half, mid, epsrel) + _quad_gap(h, x, mid, x, epsrel)
    total += _quad_log(lambda v: h(-v), lo, x, epsrel)
    return min(1.0, n * total)


@dataclass(frozen=True)
class TermBounds:
    feller_lower: float
    p0_upper: float
    pge2_upper: float
    p10_upper_I: P10Integral
    p10_explicit_upper: float
    p11m_upper: float
    p11p_upper: float
    diff_upper: float


def term_bounds(model: TailModel, params: EventParams) -> TermBounds:
    return TermBounds(
        feller_lower=feller_lower_bound(model, params.n, params.x),
        p0_upper=p0_chebyshev_bound(model, params),
        pge2_upper=pge2_bound(model, params),
        p10_upper_I=p10_integral(model, params),
        p10_explicit_upper=p10_explicit_bound(model, params),
        p11m_upper=p11m_bound(model, params),
        p11p_upper=p11p_trivial_bound(model, params),
        diff_upper=diff_bound(model, params),
    )


def convolution_oracle(model: TailModel, n: int, x: float, epsrel: float = QUAD_EPSREL) -> float:
    """Exact ``P(S_n > x)`` for ``n`` in {1, 2}.

    For ``n = 2`` this integrates ``f(u) * P(X > x - u)`` over the line by
    adaptive quadrature, splitting at the kinks of the integrand.
    """
    if n == 1:
        return float(dist.tail(model, x))
    if n != 2:
        raise NotImplementedError("convolution oracle supports n in {1, 2} only")
    u0 = model.u0

    def h(u):
        return float(dist.pdf(model, u)) * float(dist.tail(model, x - u))

    if model.variant is Variant.PURE:
        kinks = {-u0, u0, x - u0, x + u0}
        # density vanishes on (-u0, u0)
        segments_lo = [(-math.inf, -u0), (u0, math.inf)]
    else:
        kinks = {0.0, x}
        segments_lo = [(-math.inf, math.inf)]
    total = 0.0
    for lo, hi in segments_lo:
        cuts = sorted(k for k in kinks if lo < k < hi)
        edges = [lo, *cuts, hi]
        for a_, b_ in zip(edges[:-1], edges[1:]):
            total += integrate.quad(h, a_, b_, epsabs=0.0, epsrel=epsrel * 1e-2, limit=500)[0]
    return total
