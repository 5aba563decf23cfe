"""Samplers for the pure-jump limit process J.

J has independent increments, ``J(0) = 0``, and over ``(s, t]`` the increment
is 0 with probability ``s / t`` and otherwise exponential with mean
``t / pi``. The grid sampler is exact in law on any finite grid. The
event-driven sampler produces jump *times* only, since sizes of individual
jumps are not determined by the increment laws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LimitGridSample:
    grid: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class JumpTimeSequence:
    epsilon: float
    times: np.ndarray


def _check_grid(grid) -> np.ndarray:
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a nonempty 1-d sequence")
    if np.any(np.diff(grid) < 0):
        raise ValueError("grid must be ascending")
    if grid[0] <= 0 or grid[-1] > 1:
        raise ValueError("grid must lie in (0, 1]")
    return grid


def sample_grid_many(grid, size: int, stream: np.random.Generator) -> np.ndarray:
    """``size`` independent copies of ``(J(t_1), ..., J(t_m))``, shape (size, m)."""
    grid = _check_grid(grid)
    prev = np.concatenate(([0.0], grid[:-1]))
    # jump with probability 1 - prev/t; exponential draws by inverse CDF
    coin = stream.random((size, grid.size))
    u = stream.random((size, grid.size))
    sizes = -(grid / math.pi) * np.log1p(-u)
    increments = np.where(coin * grid >= prev, sizes, 0.0)
    return np.cumsum(increments, axis=1)


def sample_grid(grid, stream: np.random.Generator) -> LimitGridSample:
    grid = _check_grid(grid)
    return LimitGridSample(grid, sample_grid_many(grid, 1, stream)[0])


def conditional_jump_time(t, u):
    """Inverse CDF of the first jump after ``t`` given that one occurs before 1.

    The conditional law on ``[t, 1]`` has density ``t / ((1 - t) x**2)``, so
    ``F(x) = (1 - t/x) / (1 - t)`` and ``x = t / (1 - (1 - t) u)``.
    """
    t = np.asarray(t, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    return t / (1.0 - (1.0 - t) * u)


def first_jump_after(t: float, u: float) -> float | None:
    """First jump of J after time ``t`` driven by a single uniform ``u``.

    ``u < t`` (probability ``t``) means J is constant on ``[t, 1]``; otherwise
    ``(u - t) / (1 - t)`` is a fresh conditional uniform.
    """
    if not 0 < t <= 1:
        raise ValueError("t must lie in (0, 1]")
    if not 0 <= u < 1:
        raise ValueError("u must lie in [0, 1)")
    if u < t:
        return None
    return float(t / (1.0 + t - u))


def sample_jump_times(epsilon: float, stream: np.random.Generator) -> JumpTimeSequence:
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    times = []
    t = epsilon
    while True:
        x = first_jump_after(t, stream.random())
        if x is None:
            break
        times.append(x)
        t = x
    return JumpTimeSequence(epsilon, np.array(times))


def sample_jump_times_many(epsilon: float, size: int, stream: np.random.Generator) -> list[np.ndarray]:
    """Vectorised :func:`sample_jump_times` over ``size`` independent copies."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    base = np.full(size, float(epsilon))
    active = np.arange(size)
    out: list[list[float]] = [[] for _ in range(size)]
    while active.size:
        u = stream.random(active.size)
        jumped = u >= base[active]
        active = active[jumped]
        x = base[active] / (1.0 + base[active] - u[jumped])
        for i, xi in zip(active.tolist(), x.tolist()):
            out[i].append(xi)
        base[active] = x
    return [np.array(times) for times in out]


def last_jump_time(stream: np.random.Generator, size=None):
    """Time of the last jump of J on [0, 1]: uniform on [0, 1]."""
    return stream.random(size)


def increment_cdf(s: float, t: float, x):
    """P(J(t) - J(s) <= x) = s/t + (1 - s/t)(1 - exp(-pi x / t)) for x >= 0."""
    if t <= 0:
        raise ValueError("t must be positive")
    if not 0 <= s <= t <= 1:
        raise ValueError("need 0 <= s <= t <= 1")
    x = np.asarray(x, dtype=np.float64)
    p0 = s / t
    out = np.where(x < 0, 0.0, p0 + (1 - p0) * -np.expm1(-math.pi * np.maximum(x, 0.0) / t))
    return float(out) if out.ndim == 0 else out
