"""Planar simple random walk: origin returns, excursions and hitting times."""

from __future__ import annotations

from dataclasses import dataclass
from math import hypot
from typing import NamedTuple

import numpy as np

from planar_local_time import _kernels

METHODS = ("skip", "stepwise")


class LatticePoint(NamedTuple):
    x: int
    y: int

    @property
    def l1(self) -> int:
        return abs(self.x) + abs(self.y)

    @property
    def norm(self) -> float:
        return hypot(self.x, self.y)


@dataclass(frozen=True)
class ReturnRecord:
    """Horizon ``n`` and the ascending times ``k <= n`` with ``S_k = 0``."""

    horizon: int
    returns: np.ndarray

    def __post_init__(self):
        returns = np.asarray(self.returns, dtype=np.int64)
        object.__setattr__(self, "returns", returns)
        if self.horizon < 1:
            raise ValueError("horizon must be positive")
        if returns.ndim != 1:
            raise ValueError("returns must be one-dimensional")
        if returns.size:
            if np.any(np.diff(returns) <= 0):
                raise ValueError("return times must be strictly increasing")
            if np.any(returns % 2):
                raise ValueError("return times must be even")
            if returns[0] < 2 or returns[-1] > self.horizon:
                raise ValueError("return times must lie in [2, horizon]")

    def local_time(self, k):
        """N_k, the number of returns up to time ``k`` (vectorised over ``k``)."""
        return np.searchsorted(self.returns, k, side="right")

    @property
    def count(self) -> int:
        return int(self.returns.size)


@dataclass(frozen=True)
class ExcursionStats:
    lengths: np.ndarray
    last_return: int
    ongoing: int
    max_interior: int


@dataclass(frozen=True)
class HittingOutcome:
    start: LatticePoint
    cap: int
    tau: int | None

    @property
    def censored(self) -> bool:
        return self.tau is None


def _check_method(method):
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")


def simulate_walk(n: int, stream: np.random.Generator, probe: int = 0, method: str = "skip"):
    """Simulate ``n`` steps from the origin.

    Returns the :class:`ReturnRecord` and the position at time ``probe``
    (the origin when ``probe`` is 0). Only return times are stored.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    probe = int(probe)
    if not 0 <= probe <= n:
        raise ValueError("probe time must lie in [0, n]")
    _check_method(method)
    kernel = _kernels.returns_skip if method == "skip" else _kernels.returns_stepwise
    returns, x, y = kernel(n, stream, probe)
    return ReturnRecord(n, returns), LatticePoint(int(x), int(y))


def simulate_walk_returns(n: int, stream: np.random.Generator, method: str = "skip") -> ReturnRecord:
    return simulate_walk(n, stream, method=method)[0]


def simulate_hitting_time(v, cap: int, stream: np.random.Generator, method: str = "skip") -> HittingOutcome:
    """Run the walk from ``v`` until it first hits the origin or ``cap`` steps elapse."""
    v = LatticePoint(int(v[0]), int(v[1]))
    if v.l1 == 0:
        raise ValueError("start point must differ from the origin")
    cap = int(cap)
    if cap < v.l1:
        raise ValueError("cap must be at least the L1 distance to the origin")
    _check_method(method)
    kernel = _kernels.hitting_skip if method == "skip" else _kernels.hitting_stepwise
    tau = int(kernel(v.x, v.y, cap, stream))
    return HittingOutcome(v, cap, tau if tau > 0 else None)


def excursion_stats(rec: ReturnRecord) -> ExcursionStats:
    lengths = np.diff(rec.returns, prepend=0)
    last = int(rec.returns[-1]) if rec.returns.size else 0
    return ExcursionStats(
        lengths=lengths,
        last_return=last,
        ongoing=rec.horizon - last,
        max_interior=int(lengths.max()) if lengths.size else 0,
    )


def first_return_after(rec: ReturnRecord, m: int) -> int | None:
    """Smallest return time strictly greater than ``m``, or None."""
    if m > rec.horizon:
        raise ValueError("m must not exceed the horizon")
    i = np.searchsorted(rec.returns, m, side="right")
    return int(rec.returns[i]) if i < rec.returns.size else None
