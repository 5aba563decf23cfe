"""ECDFs, Kolmogorov-Smirnov tests and the reference limit laws."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

BAND95 = 1.36


@dataclass(frozen=True)
class ReferenceLaw:
    """A continuous reference distribution identified by tag and parameters.

    Supported tags: ``exp_mean`` (``mean``), ``uniform01``,
    ``reciprocal_uniform`` (law of 1/U, CDF ``1 - 1/x`` on ``[1, inf)``) and
    ``increment_mixture`` (``s``, ``t``; atom ``s/t`` at zero plus an
    exponential of mean ``t/pi``).
    """

    tag: str
    params: tuple = ()

    def __post_init__(self):
        arity = {"exp_mean": 1, "uniform01": 0, "reciprocal_uniform": 0, "increment_mixture": 2}
        if self.tag not in arity:
            raise ValueError(f"unknown law {self.tag!r}")
        if len(self.params) != arity[self.tag]:
            raise ValueError(f"{self.tag} takes {arity[self.tag]} parameter(s)")

    @classmethod
    def exp_mean(cls, mean: float) -> ReferenceLaw:
        if mean <= 0:
            raise ValueError("mean must be positive")
        return cls("exp_mean", (float(mean),))

    @classmethod
    def uniform01(cls) -> ReferenceLaw:
        return cls("uniform01")

    @classmethod
    def reciprocal_uniform(cls) -> ReferenceLaw:
        return cls("reciprocal_uniform")

    @classmethod
    def increment_mixture(cls, s: float, t: float) -> ReferenceLaw:
        if not 0 <= s <= t <= 1 or t == 0:
            raise ValueError("need 0 <= s <= t <= 1, t > 0")
        return cls("increment_mixture", (float(s), float(t)))

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        if self.tag == "exp_mean":
            out = np.where(x <= 0, 0.0, -np.expm1(-np.maximum(x, 0) / self.params[0]))
        elif self.tag == "uniform01":
            out = np.clip(x, 0.0, 1.0)
        elif self.tag == "reciprocal_uniform":
            out = np.where(x <= 1, 0.0, 1.0 - 1.0 / np.maximum(x, 1.0))
        else:
            from planar_local_time.limit import increment_cdf

            out = np.asarray(increment_cdf(*self.params, x))
        return float(out) if out.ndim == 0 else out

    def cdf_left(self, x):
        """Left limit ``P(X < x)``; differs from :meth:`cdf` only at the zero atom."""
        if self.tag != "increment_mixture":
            return self.cdf(x)
        x = np.asarray(x, dtype=np.float64)
        out = np.where(x <= 0, 0.0, self.cdf(x))
        return float(out) if out.ndim == 0 else out

    def sample(self, size: int, stream: np.random.Generator) -> np.ndarray:
        u = stream.random(size)
        if self.tag == "exp_mean":
            return -self.params[0] * np.log1p(-u)
        if self.tag == "uniform01":
            return u
        if self.tag == "reciprocal_uniform":
            return 1.0 / (1.0 - u)
        s, t = self.params
        sizes = -(t / math.pi) * np.log1p(-stream.random(size))
        return np.where(u * t < s, 0.0, sizes)

    def describe(self) -> str:
        return f"{self.tag}({', '.join(f'{p:.6g}' for p in self.params)})"


@dataclass(frozen=True)
class KSReport:
    statistic: float
    sample_size: int
    p_value: float
    band95: float
    second_size: int | None = None
    censored_fraction: float | None = None
    law: str | None = None
    extra: dict = field(default_factory=dict)

    @property
    def within_band(self) -> bool:
        return self.statistic <= self.band95

    def to_dict(self) -> dict:
        out = {
            "statistic": self.statistic,
            "sample_size": self.sample_size,
            "p_value": self.p_value,
            "band95": self.band95,
        }
        if self.second_size is not None:
            out["second_size"] = self.second_size
        if self.censored_fraction is not None:
            out["censored_fraction"] = self.censored_fraction
        if self.law is not None:
            out["law"] = self.law
        out.update(self.extra)
        return out


class ECDF:
    """Right-continuous empirical distribution function."""

    def __init__(self, samples):
        xs = np.sort(np.asarray(samples, dtype=np.float64).ravel())
        if xs.size == 0:
            raise ValueError("ECDF of an empty sample")
        self.x = xs
        self.n = xs.size

    def __call__(self, x):
        out = np.searchsorted(self.x, x, side="right") / self.n
        return float(out) if np.ndim(out) == 0 else out

    def left(self, x):
        """Left limit ``P(X < x)``."""
        out = np.searchsorted(self.x, x, side="left") / self.n
        return float(out) if np.ndim(out) == 0 else out


def ecdf(samples) -> ECDF:
    return ECDF(samples)


def kolmogorov_sf(lam: float) -> float:
    """P(K > lam) for the Kolmogorov distribution, series cut at terms < 1e-10."""
    if lam <= 0.05:
        return 1.0
    total = 0.0
    k = 1
    while True:
        term = math.exp(-2.0 * k * k * lam * lam)
        total += term if k % 2 else -term
        if term < 1e-10 or k > 10_000:
            break
        k += 1
    return min(1.0, max(0.0, 2.0 * total))


def _as_samples(samples) -> np.ndarray:
    xs = np.asarray(samples, dtype=np.float64).ravel()
    if xs.size == 0:
        raise ValueError("empty sample")
    return xs


def ks_one_sample(samples, law: ReferenceLaw) -> KSReport:
    xs = np.sort(_as_samples(samples))
    n = xs.size
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - law.cdf(xs))
    d_minus = np.max(law.cdf_left(xs) - (i - 1) / n)
    d = float(max(d_plus, d_minus, 0.0))
    return KSReport(d, n, kolmogorov_sf(math.sqrt(n) * d), BAND95 / math.sqrt(n), law=law.describe())


def ks_statistic_by_evaluation(samples, law: ReferenceLaw) -> float:
    """D from ECDF values and left limits at the distinct sample points.

    Independent of the order-statistic formula in :func:`ks_one_sample`.
    """
    xs = _as_samples(samples)
    f = ECDF(xs)
    pts = np.unique(xs)
    return float(max(np.max(np.abs(f(pts) - law.cdf(pts))), np.max(np.abs(f.left(pts) - law.cdf_left(pts)))))


def ks_two_sample(a, b) -> KSReport:
    a = np.sort(_as_samples(a))
    b = np.sort(_as_samples(b))
    pts = np.concatenate((a, b))
    d = float(np.max(np.abs(np.searchsorted(a, pts, side="right") / a.size - np.searchsorted(b, pts, side="right") / b.size)))
    n_eff = a.size * b.size / (a.size + b.size)
    return KSReport(
        d,
        a.size,
        kolmogorov_sf(math.sqrt(n_eff) * d),
        BAND95 / math.sqrt(n_eff),
        second_size=b.size,
    )


def ks_censored(observed, total: int, law: ReferenceLaw, upper: float) -> KSReport:
    """KS distance on ``(-inf, upper]`` when samples above ``upper`` are censored.

    ``observed`` holds the uncensored values (all ``<= upper``) out of
    ``total`` draws. The ECDF is the uncensored ECDF scaled by the uncensored
    fraction, i.e. ``#{X_i <= x} / total``, compared with the law's CDF up
    to ``upper``.
    """
    xs = np.sort(np.asarray(observed, dtype=np.float64).ravel())
    if total <= 0:
        raise ValueError("total must be positive")
    if xs.size > total:
        raise ValueError("more observations than draws")
    if xs.size and xs[-1] > upper:
        raise ValueError("observed values must not exceed the censoring level")
    i = np.arange(1, xs.size + 1)
    gaps = [abs(xs.size / total - law.cdf(upper))]
    if xs.size:
        gaps += [np.max(np.abs(i / total - law.cdf(xs))), np.max(np.abs(law.cdf_left(xs) - (i - 1) / total))]
    d = float(max(gaps))
    return KSReport(
        d,
        total,
        kolmogorov_sf(math.sqrt(total) * d),
        BAND95 / math.sqrt(total),
        censored_fraction=1.0 - xs.size / total,
        law=law.describe(),
        extra={"upper": float(upper)},
    )
