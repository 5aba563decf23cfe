"""Local time with logarithmically rescaled time.

``L_n(log k / log n) = N_k / log n`` for ``1 <= k <= n``, linear in between.
Only the breakpoints where the slope can change are stored: ``k = 1``,
``k = n`` and the pair ``(r - 1, r)`` around every return time ``r``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from planar_local_time.walk import ReturnRecord


@dataclass(frozen=True)
class RescaledPath:
    horizon: int
    t: np.ndarray
    v: np.ndarray

    def __call__(self, t):
        return eval_path(self, t)

    @property
    def final_value(self) -> float:
        return float(self.v[-1])


def floor_power(n: int, s: float) -> int:
    """``floor(n ** s)``, robust to the rounding of exact integer powers."""
    return int(math.floor(n**s * (1 + 1e-12)))


def build_rescaled_path(rec: ReturnRecord) -> RescaledPath:
    n = rec.horizon
    if n < 2:
        raise ValueError("horizon must be at least 2")
    r = rec.returns
    ks = np.concatenate(([1], np.column_stack((r - 1, r)).ravel(), [n]))
    counts = np.concatenate(([0], np.column_stack((np.arange(r.size), np.arange(1, r.size + 1))).ravel(), [r.size]))
    # duplicates only arise from r = 2 (r - 1 = 1) and r = n
    keep = np.concatenate((np.diff(ks) > 0, [True]))
    ks, counts = ks[keep], counts[keep]
    log_n = math.log(n)
    return RescaledPath(n, np.log(ks) / log_n, counts / log_n)


def eval_path(path: RescaledPath, t):
    t_arr = np.asarray(t, dtype=np.float64)
    if np.any((t_arr < 0) | (t_arr > 1)) or np.any(np.isnan(t_arr)):
        raise ValueError("t must lie in [0, 1]")
    out = np.interp(t_arr, path.t, path.v)
    return float(out) if out.ndim == 0 else out


def path_increment(path: RescaledPath, s: float, t: float) -> float:
    if s > t:
        raise ValueError("need s <= t")
    return max(0.0, eval_path(path, t) - eval_path(path, s))


def no_return_in_window(rec: ReturnRecord, s: float, t: float) -> bool:
    """True when no return falls in the integer window ``(floor(n^s), floor(n^t)]``.

    This is the event ``L_n(t) = L_n(s)`` as used for distributional tests;
    the interpolated increment can be slightly positive even when it holds.
    """
    if s > t:
        raise ValueError("need s <= t")
    lo = floor_power(rec.horizon, s)
    hi = floor_power(rec.horizon, t)
    return int(rec.local_time(hi)) == int(rec.local_time(lo))


def sample_on_grid(path, points: int = 201):
    """(t, value) rows on a uniform grid, for plotting."""
    grid = np.linspace(0.0, 1.0, points)
    return np.column_stack((grid, eval_path(path, grid)))
