"""Replica-parallel map over per-index random streams."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from planar_local_time.rng import make_stream

THREADS_ENV = "PLANAR_LT_THREADS"


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        threads = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if threads < 1:
        raise ValueError(f"{THREADS_ENV} must be positive")
    return threads


def run_replicas(task, replicas: int, master_seed: int, threads: int = 1, key: tuple = ()) -> list:
    """Evaluate ``task(i, stream_i)`` for every replica index, results in index order.

    Streams depend only on ``(master_seed, i, *key)``; the compiled kernels
    release the GIL, so threads give real parallelism without changing any
    result.
    """
    if replicas < 1:
        raise ValueError("replicas must be positive")
    if threads < 1:
        raise ValueError("threads must be positive")

    def chunk(indices):
        return [task(i, make_stream(master_seed, i, *key)) for i in indices]

    if threads == 1:
        return chunk(range(replicas))
    bounds = [replicas * j // threads for j in range(threads + 1)]
    pieces = [range(bounds[j], bounds[j + 1]) for j in range(threads)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(chunk, pieces))
    return [r for part in parts for r in part]
