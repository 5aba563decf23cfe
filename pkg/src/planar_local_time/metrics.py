"""Skorokhod-type distances between nondecreasing paths on [0, 1].

The M1 distance of two monotone paths is computed as the Frechet distance
between their completed graphs (the graph with vertical segments filling each
jump), using the max-norm in the (time, value) plane. The Frechet distance is
approximated by the discrete (vertex coupling) version on densified
polylines; the densification step is reported as the error bound. J1 is only
bounded from below, by comparing the largest increments over short windows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import singledispatch

import numpy as np
from numba import njit

from planar_local_time.limit import LimitGridSample
from planar_local_time.scaling import RescaledPath

KINDS = ("M1-approx", "J1-lower-bound", "uniform")
DEFAULT_MAX_VERTICES = 50_000


class MetricResourceError(RuntimeError):
    """Densification would exceed the configured vertex limit."""


@dataclass(frozen=True)
class Polyline:
    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 2:
            raise ValueError("a polyline needs at least two planar vertices")
        object.__setattr__(self, "vertices", v)

    @property
    def times(self) -> np.ndarray:
        return self.vertices[:, 0]

    @property
    def values(self) -> np.ndarray:
        return self.vertices[:, 1]


@dataclass(frozen=True)
class StepFunction:
    """Cadlag step function on [0, 1]: ``start`` plus the jumps up to time t."""

    jump_times: np.ndarray
    jump_sizes: np.ndarray
    start: float = 0.0

    def __post_init__(self):
        times = np.asarray(self.jump_times, dtype=np.float64).ravel()
        sizes = np.asarray(self.jump_sizes, dtype=np.float64).ravel()
        if times.shape != sizes.shape:
            raise ValueError("jump_times and jump_sizes must have equal length")
        if np.any((times < 0) | (times > 1)):
            raise ValueError("jump times must lie in [0, 1]")
        order = np.argsort(times, kind="stable")
        object.__setattr__(self, "jump_times", times[order])
        object.__setattr__(self, "jump_sizes", sizes[order])


@dataclass(frozen=True)
class MetricReport:
    value: float
    error_bound: float
    kind: str
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown metric kind {self.kind!r}")

    def to_dict(self) -> dict:
        return {"value": self.value, "error_bound": self.error_bound, "kind": self.kind, **self.details}


def unit_step(at: float, height: float = 1.0) -> StepFunction:
    return StepFunction([at], [height])


def staircase(start: float, width: float, m: int, height: float = 1.0) -> StepFunction:
    """``m`` equal jumps climbing 0 -> ``height``, at ``start + j*width/m``, j = 1..m."""
    if m < 1:
        raise ValueError("m must be positive")
    times = start + width * np.arange(1, m + 1) / m
    return StepFunction(times, np.full(m, height / m))


def _monotone_polyline(vertices) -> Polyline:
    v = np.asarray(vertices, dtype=np.float64)
    if np.any(np.diff(v[:, 0]) < 0) or np.any(np.diff(v[:, 1]) < 0):
        raise ValueError("completed graphs are only defined here for nondecreasing paths")
    keep = np.concatenate(([True], np.any(np.diff(v, axis=0) != 0, axis=1)))
    v = v[keep]
    if v.shape[0] == 1:
        v = np.vstack((v, v))
    return Polyline(v)


@singledispatch
def completed_graph(path) -> Polyline:
    raise TypeError(f"no completed graph for {type(path).__name__}")


@completed_graph.register
def _(path: Polyline) -> Polyline:
    return _monotone_polyline(path.vertices)


@completed_graph.register
def _(path: RescaledPath) -> Polyline:
    return _monotone_polyline(np.column_stack((path.t, path.v)))


@completed_graph.register
def _(path: StepFunction) -> Polyline:
    if np.any(path.jump_sizes < 0):
        raise ValueError("completed graphs are only defined here for nondecreasing paths")
    moving = path.jump_sizes > 0
    times, sizes = path.jump_times[moving], path.jump_sizes[moving]
    levels = path.start + np.cumsum(sizes)
    before = np.concatenate(([path.start], levels[:-1]))
    pts = [(0.0, path.start)]
    pts += [p for a, lo, hi in zip(times, before, levels) for p in ((a, lo), (a, hi))]
    pts.append((1.0, levels[-1] if levels.size else path.start))
    return _monotone_polyline(pts)


@completed_graph.register
def _(path: LimitGridSample) -> Polyline:
    increments = np.diff(path.values, prepend=0.0)
    return completed_graph(StepFunction(path.grid, increments))


def evaluate(path, t):
    """Right-continuous value of a monotone path at ``t``."""
    g = completed_graph(path)
    times, values = g.times, g.values
    t = np.asarray(t, dtype=np.float64)
    # first vertex strictly after t; the one before it is at or before t
    hi = np.minimum(np.searchsorted(times, t, side="right"), times.size - 1)
    lo = hi - 1
    out = np.where(t >= times[-1], values[-1], _lerp(times, values, lo, hi, t))
    return float(out) if out.ndim == 0 else out


def evaluate_left(path, t):
    """Left limit of a monotone path at ``t`` (the initial value at t = 0)."""
    g = completed_graph(path)
    times, values = g.times, g.values
    t = np.asarray(t, dtype=np.float64)
    # first vertex at or after t; the one before it is strictly before t
    hi = np.clip(np.searchsorted(times, t, side="left"), 1, times.size - 1)
    lo = hi - 1
    out = np.where(t <= times[0], values[0], _lerp(times, values, lo, hi, t))
    return float(out) if out.ndim == 0 else out


def _lerp(times, values, lo, hi, t):
    span = times[hi] - times[lo]
    with np.errstate(invalid="ignore", divide="ignore"):
        frac = np.clip(np.where(span > 0, (t - times[lo]) / span, 1.0), 0.0, 1.0)
    return values[lo] + frac * (values[hi] - values[lo])


def _densify(poly: Polyline, resolution: float) -> np.ndarray:
    v = poly.vertices
    seg = np.diff(v, axis=0)
    lengths = np.max(np.abs(seg), axis=1)
    pieces = np.maximum(1, np.ceil(lengths / resolution).astype(np.int64))
    parts = [v[i] + np.outer(np.arange(p) / p, seg[i]) for i, p in enumerate(pieces)]
    parts.append(v[-1:])
    return np.vstack(parts)


def _densified_size(poly: Polyline, resolution: float) -> int:
    lengths = np.max(np.abs(np.diff(poly.vertices, axis=0)), axis=1)
    return int(np.maximum(1, np.ceil(lengths / resolution)).sum()) + 1


@njit(cache=True, nogil=True)
def _discrete_frechet(p, q):
    # Eiter-Mannila recursion with one rolling row, Chebyshev ground metric
    m = q.shape[0]
    row = np.empty(m)
    for j in range(m):
        d = max(abs(p[0, 0] - q[j, 0]), abs(p[0, 1] - q[j, 1]))
        row[j] = d if j == 0 else max(row[j - 1], d)
    for i in range(1, p.shape[0]):
        diag = row[0]
        row[0] = max(row[0], max(abs(p[i, 0] - q[0, 0]), abs(p[i, 1] - q[0, 1])))
        for j in range(1, m):
            d = max(abs(p[i, 0] - q[j, 0]), abs(p[i, 1] - q[j, 1]))
            best = min(diag, row[j], row[j - 1])
            diag = row[j]
            row[j] = max(best, d)
    return row[m - 1]


def frechet_distance(p: Polyline, q: Polyline, resolution: float, max_vertices: int = DEFAULT_MAX_VERTICES) -> MetricReport:
    """Discrete Frechet distance between ``p`` and ``q`` densified to ``resolution``.

    Every edge is split so no piece is longer than ``resolution`` in the
    max-norm; the continuous Frechet distance then lies within
    ``resolution`` of the returned value.
    """
    if not resolution > 0:
        raise ValueError("resolution must be positive")
    sizes = (_densified_size(p, resolution), _densified_size(q, resolution))
    if max(sizes) > max_vertices:
        raise MetricResourceError(
            f"densified polylines need {max(sizes)} vertices, above the limit of {max_vertices}; "
            "raise the resolution or the limit"
        )
    dp, dq = _densify(p, resolution), _densify(q, resolution)
    value = float(_discrete_frechet(dp, dq))
    return MetricReport(value, float(resolution), "M1-approx", {"vertices": [dp.shape[0], dq.shape[0]]})


def m1_distance(f, g, resolution: float, max_vertices: int = DEFAULT_MAX_VERTICES) -> MetricReport:
    return frechet_distance(completed_graph(f), completed_graph(g), resolution, max_vertices)


def max_increment(path, mesh: float) -> float:
    """Largest ``h(a + mesh) - h(a-)`` over windows inside [0, 1]."""
    if not mesh > 0:
        raise ValueError("mesh must be positive")
    g = completed_graph(path)
    width = min(mesh, 1.0)
    hi = 1.0 - width
    cand = np.unique(np.clip(np.concatenate((g.times, g.times - width, [0.0, hi])), 0.0, hi))
    gains = evaluate(g, np.minimum(cand + width, 1.0)) - evaluate_left(g, cand)
    return float(np.max(gains))


def j1_jump_gap_lower_bound(f, g, mesh: float) -> MetricReport:
    """Half the gap between the largest short-window increments of ``f`` and ``g``.

    A J1 time change moves jumps but cannot merge or split them, so two paths
    whose largest jumps differ by ``c`` are at J1 distance at least ``c/2``.
    """
    jf = max_increment(f, mesh)
    jg = max_increment(g, mesh)
    return MetricReport(abs(jg - jf) / 2, 0.0, "J1-lower-bound", {"max_increment": [jf, jg], "mesh": mesh})


def uniform_distance(f, g, grid) -> MetricReport:
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size == 0:
        raise ValueError("grid must be nonempty")
    value = float(np.max(np.abs(evaluate(f, grid) - evaluate(g, grid))))
    return MetricReport(value, 0.0, "uniform", {"grid_points": int(grid.size)})


def polyline_rows(poly: Polyline) -> list[tuple[float, float]]:
    return [(float(t), float(v)) for t, v in poly.vertices]


def polyline_from_rows(rows) -> Polyline:
    return Polyline(np.array([(float(t), float(v)) for t, v in rows]))

