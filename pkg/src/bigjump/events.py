"""Five-way classification of sample vectors by how many coordinates exceed ``c*x``.

For ``k = #{j : |X_j| > c*x}`` the classes are

* ``ZERO_BIG``   k = 0
* ``MULTI_BIG``  k >= 2
* ``ONE_MID``    k = 1 and ``c*x < |X_i| <= x``
* ``ONE_NEG_BIG`` k = 1 and ``X_i < -x``
* ``ONE_POS_BIG`` k = 1 and ``X_i > x``

Restricted to ``{S_n > x}`` these give the terms p0, p_ge2, p10, p11-, p11+
whose sum is ``P(S_n > x)``. The refined flag marks a ONE_POS_BIG vector
whose remaining coordinates sum to at most ``b*x`` in absolute value.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np


class EventKind(enum.IntEnum):
    ZERO_BIG = 0
    MULTI_BIG = 1
    ONE_MID = 2
    ONE_NEG_BIG = 3
    ONE_POS_BIG = 4


#: Short names of the probability terms, indexed like :class:`EventKind`.
TERM_NAMES = {
    EventKind.ZERO_BIG: "p0",
    EventKind.MULTI_BIG: "p_ge2",
    EventKind.ONE_MID: "p10",
    EventKind.ONE_NEG_BIG: "p11_minus",
    EventKind.ONE_POS_BIG: "p11_plus",
}


@dataclass(frozen=True)
class EventParams:
    """Deviation level ``x`` for a sum of ``n`` terms, with thresholds ``c*x`` and ``b*x``."""

    n: int
    x: float
    c: float
    b: float

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not (self.x > 0 and math.isfinite(self.x)):
            raise ValueError(f"x must be positive and finite, got {self.x!r}")
        if not (0.0 < self.c < 1.0):
            raise ValueError(f"c must lie in (0, 1), got {self.c!r}")
        if not (0.0 < self.b < 1.0):
            raise ValueError(f"b must lie in (0, 1), got {self.b!r}")
        object.__setattr__(self, "n", int(self.n))
        for name in ("x", "c", "b"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @property
    def cx(self) -> float:
        return self.c * self.x

    @property
    def bx(self) -> float:
        return self.b * self.x


@dataclass(frozen=True)
class EventClass:
    kind: EventKind
    big_index: Optional[int] = None  # 1-based, set for the single-exceedance kinds
    refined: Optional[bool] = None  # set only for ONE_POS_BIG


@dataclass
class BatchClassification:
    """Vectorized result of :func:`classify_batch` (one entry per row)."""

    kind: np.ndarray  # int8 EventKind codes
    big_index: np.ndarray  # 0-based column, -1 where undefined
    refined: np.ndarray  # bool, False unless kind == ONE_POS_BIG and refined
    exceeds: np.ndarray  # bool, S_n > x
    total: np.ndarray  # row sums


def classify_batch(samples: np.ndarray, params: EventParams) -> BatchClassification:
    """Classify every row of an ``(m, n)`` array."""
    X = np.asarray(samples, dtype=float)
    if X.ndim != 2 or X.shape[1] != params.n:
        raise ValueError(f"expected an (m, {params.n}) array, got shape {X.shape}")
    m = X.shape[0]
    x, cx = params.x, params.cx
    big = np.abs(X) > cx
    k = big.sum(axis=1)
    idx = np.argmax(big, axis=1)
    xi = X[np.arange(m), idx]
    S = X.sum(axis=1)

    kind = np.full(m, EventKind.ONE_MID, dtype=np.int8)
    kind[xi > x] = EventKind.ONE_POS_BIG
    kind[xi < -x] = EventKind.ONE_NEG_BIG
    kind[k == 0] = EventKind.ZERO_BIG
    kind[k >= 2] = EventKind.MULTI_BIG

    single = k == 1
    refined = (kind == EventKind.ONE_POS_BIG) & (np.abs(S - xi) <= params.bx)
    return BatchClassification(
        kind=kind,
        big_index=np.where(single, idx, -1),
        refined=refined,
        exceeds=S > x,
        total=S,
    )


def classify(sample, params: EventParams) -> EventClass:
    """Classify a single vector of length ``n``; ``big_index`` is 1-based."""
    row = np.asarray(sample, dtype=float)
    if row.shape != (params.n,):
        raise ValueError(f"sample length {row.size} does not match n={params.n}")
    res = classify_batch(row[None, :], params)
    kind = EventKind(int(res.kind[0]))
    if kind in (EventKind.ZERO_BIG, EventKind.MULTI_BIG):
        return EventClass(kind)
    i = int(res.big_index[0]) + 1
    if kind is EventKind.ONE_POS_BIG:
        return EventClass(kind, i, bool(res.refined[0]))
    return EventClass(kind, i)


def refined_ok(sample, params: EventParams, big_index: int) -> bool:
    """Whether ``|S_n - X_i| <= b*x`` for the big coordinate ``i`` (1-based).

    Only defined for vectors classified ONE_POS_BIG at ``big_index``.
    """
    cls = classify(sample, params)
    if cls.kind is not EventKind.ONE_POS_BIG or cls.big_index != big_index:
        raise ValueError(f"sample is not a one-big-positive vector at index {big_index}: {cls}")
    return bool(cls.refined)


@dataclass(frozen=True)
class PartitionCounts:
    """Counts of ``{S_n > x}`` split by event kind."""

    exceed: int
    by_kind: dict
    refined: int
    size: int

    def __getitem__(self, kind: EventKind) -> int:
        return self.by_kind[EventKind(kind)]


def count_batch(samples: np.ndarray, params: EventParams) -> PartitionCounts:
    res = classify_batch(samples, params)
    hit = res.exceeds
    per = np.bincount(res.kind[hit], minlength=len(EventKind))
    return PartitionCounts(
        exceed=int(hit.sum()),
        by_kind={kind: int(per[kind]) for kind in EventKind},
        refined=int((res.refined & hit).sum()),
        size=int(res.kind.size),
    )


def partition_check(batch, params: EventParams) -> PartitionCounts:
    """Per-class counts restricted to ``S_n > x``; the class counts sum to ``exceed``."""
    X = np.asarray(batch, dtype=float)
    if X.size == 0:
        raise ValueError("batch is empty")
    if X.ndim == 1:
        X = X[None, :]
    counts = count_batch(X, params)
    assert sum(counts.by_kind.values()) == counts.exceed
    return counts
