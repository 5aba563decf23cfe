"""Seeded, splittable random streams.

Every replica draws from its own Philox (counter-based) generator keyed by
``(master_seed, index)``, so aggregated results never depend on how replicas
are scheduled across workers.
"""

from __future__ import annotations

import numpy as np

MAX_SEED = 2**64 - 1


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def make_stream(master_seed: int, *key: int) -> np.random.Generator:
    """Return the generator for the sub-stream identified by ``key``.

    ``make_stream(seed, i)`` is the stream of replica ``i``; extra key entries
    separate independent uses of the same replica index.
    """
    ss = np.random.SeedSequence(check_seed(master_seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))
