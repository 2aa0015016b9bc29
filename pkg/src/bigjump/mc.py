"""Monte Carlo estimators for ``P(S_n > x)`` and its one-big-jump decomposition.

All estimators accumulate integer hit counts over fixed chunks (see
:mod:`bigjump.streams`) and convert to floating point once, so results are
bit-identical for any worker count.

The conditional estimators rely on two facts: coordinates are exchangeable,
and for ``c < 1`` at most one coordinate can be the single exceedance. Hence
each single-exceedance term equals ``n`` times the probability that the
first coordinate is the exceedance, which is sampled directly from its
conditional law and reweighted by that law's probability.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from statistics import NormalDist

import numpy as np

from . import dist
from .dist import TailModel
from .events import TERM_NAMES, EventKind, EventParams, count_batch
from .streams import StreamTag, map_chunks, stream

MIN_SAMPLES = 1000
DEFAULT_CI_LEVEL = 0.99


class Method(str, enum.Enum):
    CRUDE = "Crude"
    DECOMPOSITION = "Decomposition"
    BIG_JUMP = "ConditionalBigJump"
    MID = "ConditionalMid"


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    ci_lo: float
    ci_hi: float
    samples: int
    seed: int
    method: Method
    target: str
    hits: int  # raw indicator count
    weight: float = 1.0  # value == weight * hits / samples
    degenerate: bool = False  # no hits, or nothing to sample

    @property
    def relative_error(self) -> float:
        return self.stderr / self.value if self.value > 0 else math.inf


def wilson_interval(hits: int, samples: int, level: float = DEFAULT_CI_LEVEL) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    With zero hits the lower end is 0 and the upper end is the one-sided
    Wilson bound at ``level``.
    """
    if not 0.0 < level < 1.0:
        raise ValueError(f"confidence level must lie in (0, 1), got {level}")
    if samples <= 0:
        raise ValueError("need at least one sample")
    if hits == 0:
        z = NormalDist().inv_cdf(level)
        return 0.0, z * z / (samples + z * z)
    z = NormalDist().inv_cdf(0.5 + level / 2.0)
    p = hits / samples
    z2n = z * z / samples
    denom = 1.0 + z2n
    center = (p + z2n / 2.0) / denom
    half = z / denom * math.sqrt(p * (1.0 - p) / samples + z2n / (4.0 * samples))
    lo, hi = max(0.0, center - half), min(1.0, center + half)
    # guard the containment invariant against last-bit rounding
    return min(lo, p), max(hi, p)


def _make(hits, samples, seed, method, target, weight=1.0, ci_level=DEFAULT_CI_LEVEL, degenerate=False):
    p = hits / samples
    lo, hi = wilson_interval(hits, samples, ci_level)
    return Estimate(
        value=weight * p,
        stderr=weight * math.sqrt(p * (1.0 - p) / samples),
        ci_lo=weight * lo,
        ci_hi=weight * hi,
        samples=int(samples),
        seed=int(seed),
        method=method,
        target=target,
        hits=int(hits),
        weight=float(weight),
        degenerate=degenerate or hits == 0,
    )


def exact_sum(estimates) -> float:
    """Sum of estimates computed exactly from their integer counts, rounded once."""
    total = sum(Fraction(e.weight) * Fraction(e.hits, e.samples) for e in estimates)
    return float(total)


def _check(samples):
    if samples < MIN_SAMPLES:
        raise ValueError(f"samples must be at least {MIN_SAMPLES}, got {samples}")


def _plain_counts(model, params, samples, seed, workers):
    def run(k, m):
        rng = stream(seed, StreamTag.PLAIN, k)
        X = dist.sample(model, rng, (m, params.n))
        return count_batch(X, params)

    exceed, refined = 0, 0
    by_kind = {kind: 0 for kind in EventKind}
    for c in map_chunks(run, samples, workers):
        exceed += c.exceed
        refined += c.refined
        for kind in EventKind:
            by_kind[kind] += c.by_kind[kind]
    return exceed, by_kind, refined


def estimate_crude(
    model: TailModel, params: EventParams, samples: int, seed: int, *, ci_level=DEFAULT_CI_LEVEL, workers=1
) -> Estimate:
    """Plain indicator mean of ``1(S_n > x)``."""
    _check(samples)

    def run(k, m):
        X = dist.sample(model, stream(seed, StreamTag.PLAIN, k), (m, params.n))
        return int((X.sum(axis=1) > params.x).sum())

    hits = sum(map_chunks(run, samples, workers))
    return _make(hits, samples, seed, Method.CRUDE, "total", ci_level=ci_level)


@dataclass(frozen=True)
class Decomposition:
    terms: dict  # EventKind -> Estimate
    total: Estimate
    refined: Estimate  # refined event intersected with S_n > x, same batch

    def __getitem__(self, kind) -> Estimate:
        return self.terms[EventKind(kind)]

    def term_sum(self) -> float:
        return exact_sum(self.terms.values())


def estimate_decomposition(
    model: TailModel, params: EventParams, samples: int, seed: int, *, ci_level=DEFAULT_CI_LEVEL, workers=1
) -> Decomposition:
    """Classify one shared batch; uses the same draws as :func:`estimate_crude` for equal seeds."""
    _check(samples)
    exceed, by_kind, refined = _plain_counts(model, params, samples, seed, workers)
    m = Method.DECOMPOSITION
    terms = {kind: _make(by_kind[kind], samples, seed, m, TERM_NAMES[kind], ci_level=ci_level) for kind in EventKind}
    return Decomposition(
        terms=terms,
        total=_make(exceed, samples, seed, m, "total", ci_level=ci_level),
        refined=_make(refined, samples, seed, m, "refined", ci_level=ci_level),
    )


def _conditional_counts(model, params, samples, seed, tag, draw_first, workers):
    # returns (#{S>x, rest small}, #{S>x, rest small, |S - X1| <= bx})
    n, x, cx, bx = params.n, params.x, params.cx, params.bx

    def run(k, m):
        rng = stream(seed, tag, k)
        x1 = draw_first(rng, m)
        rest = dist.sample(model, rng, (m, n - 1))
        S = x1 + rest.sum(axis=1)
        ok = S > x
        if n > 1:
            ok &= np.abs(rest).max(axis=1) <= cx
        fine = ok & (np.abs(S - x1) <= bx)
        return int(ok.sum()), int(fine.sum())

    hits = fine = 0
    for h, f in map_chunks(run, samples, workers):
        hits += h
        fine += f
    return hits, fine


def _big_jump_counts(model, params, sign, samples, seed, workers):
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    t = max(params.x, model.support_min)
    if sign == "+":
        tag = StreamTag.BIG_POS

        def draw(rng, m):
            return dist.sample_tail_conditional(model, t, rng, m)

    else:
        tag = StreamTag.BIG_NEG

        def draw(rng, m):
            return -dist.sample_tail_conditional(model, t, rng, m)

    weight = params.n * float(dist.tail(model, params.x))
    if not weight > 0:
        raise ArithmeticError(f"tail probability underflows at x={params.x}")
    hits, fine = _conditional_counts(model, params, samples, seed, tag, draw, workers)
    return weight, hits, fine


def estimate_one_big(
    model: TailModel,
    params: EventParams,
    sign: str,
    samples: int,
    seed: int,
    *,
    ci_level=DEFAULT_CI_LEVEL,
    workers=1,
) -> Estimate:
    """Conditional estimator of p11+ (``sign='+'``) or p11- (``sign='-'``).

    ``X_1`` is drawn given ``X_1 > x`` (negated for ``'-'``), the rest from the
    model, and the indicator ``1(S_n > x, max_{j>=2} |X_j| <= c*x)`` is
    averaged with weight ``n * P(X > x)``.
    """
    _check(samples)
    weight, hits, _ = _big_jump_counts(model, params, sign, samples, seed, workers)
    target = "p11_plus" if sign == "+" else "p11_minus"
    return _make(hits, samples, seed, Method.BIG_JUMP, target, weight, ci_level)


def estimate_refined(
    model: TailModel, params: EventParams, samples: int, seed: int, *, ci_level=DEFAULT_CI_LEVEL, workers=1
) -> Estimate:
    """Conditional estimator of the one-big-jump event with residual sum ``|S_n - X_i| <= b*x``.

    Uses the same conditional batch as ``estimate_one_big(sign='+')`` for an equal seed.
    """
    _check(samples)
    weight, _, fine = _big_jump_counts(model, params, "+", samples, seed, workers)
    return _make(fine, samples, seed, Method.BIG_JUMP, "refined", weight, ci_level)


def estimate_one_big_and_refined(
    model: TailModel, params: EventParams, samples: int, seed: int, *, ci_level=DEFAULT_CI_LEVEL, workers=1
) -> tuple[Estimate, Estimate]:
    """``(p11+, refined)`` from one conditional batch; same values as the separate calls."""
    _check(samples)
    weight, hits, fine = _big_jump_counts(model, params, "+", samples, seed, workers)
    return (
        _make(hits, samples, seed, Method.BIG_JUMP, "p11_plus", weight, ci_level),
        _make(fine, samples, seed, Method.BIG_JUMP, "refined", weight, ci_level),
    )


def estimate_one_mid(
    model: TailModel, params: EventParams, samples: int, seed: int, *, ci_level=DEFAULT_CI_LEVEL, workers=1
) -> Estimate:
    """Conditional estimator of p10 with ``X_1`` drawn given ``c*x < |X_1| <= x``."""
    _check(samples)
    lo, hi = params.cx, params.x
    weight = params.n * dist.abs_stratum_probability(model, lo, hi)
    if not weight > 0:
        return _make(0, samples, seed, Method.MID, "p10", 0.0, ci_level, degenerate=True)

    def draw(rng, m):
        return dist.sample_abs_stratum(model, lo, hi, rng, m)

    hits, _ = _conditional_counts(model, params, samples, seed, StreamTag.MID, draw, workers)
    return _make(hits, samples, seed, Method.MID, "p10", weight, ci_level)


def combined_stderr(*estimates: Estimate) -> float:
    return math.sqrt(sum(e.stderr**2 for e in estimates))
