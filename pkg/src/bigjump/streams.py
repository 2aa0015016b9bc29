"""Reproducible random streams for chunked Monte Carlo.

A replication index space ``[0, samples)`` is cut into fixed-size chunks of
``CHUNK`` replications. Chunk ``k`` of a run with seed ``s`` draws from

    Generator(Philox(SeedSequence(entropy=s, spawn_key=(tag, k))))

where ``tag`` names the sampling scheme. Philox is counter-based, so streams
for different ``(tag, k)`` are independent and a chunk's draws depend only on
``(s, tag, k)``. The chunk size is fixed and never depends on the worker count.
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterator, TypeVar

import numpy as np

CHUNK = 1 << 16

T = TypeVar("T")


class StreamTag(enum.IntEnum):
    PLAIN = 0  # i.i.d. sample vectors (crude and decomposition)
    BIG_POS = 1  # first coordinate conditioned on X > x (one-big and refined)
    BIG_NEG = 2
    MID = 3  # first coordinate conditioned on c*x < |X| <= x


def stream(seed: int, tag: int, chunk: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(tag), int(chunk)))
    return np.random.Generator(np.random.Philox(ss))


def chunk_sizes(samples: int, chunk: int = CHUNK) -> list[int]:
    full, rest = divmod(int(samples), chunk)
    return [chunk] * full + ([rest] if rest else [])


def resolve_workers(workers) -> int:
    if workers in (None, "auto", 0):
        return os.cpu_count() or 1
    workers = int(workers)
    if workers < 1:
        raise ValueError(f"workers must be >= 1 or 'auto', got {workers}")
    return workers


def map_chunks(fn: Callable[[int, int], T], samples: int, workers=1) -> Iterator[T]:
    """Apply ``fn(chunk_index, chunk_size)`` to every chunk, yielding results in chunk order."""
    sizes = chunk_sizes(samples)
    workers = min(resolve_workers(workers), max(len(sizes), 1))
    if workers == 1:
        for k, m in enumerate(sizes):
            yield fn(k, m)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(fn, range(len(sizes)), sizes)
