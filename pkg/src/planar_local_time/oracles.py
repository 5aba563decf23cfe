"""Exact oracles for the local time of the planar simple random walk."""

from __future__ import annotations

from fractions import Fraction
from math import comb

import numpy as np

MAX_ENUMERATION_N = 12

# (dx, dy) for the four step directions
_STEPS = np.array([(1, 0), (-1, 0), (0, 1), (0, -1)], dtype=np.int8)


def exact_return_probability(m: int) -> Fraction:
    """P(S_{2m} = 0) as an exact fraction, ``(C(2m, m) / 4**m) ** 2``.

    The closed form rests on the rotation ``(x + y, x - y)`` that splits the
    walk into two independent one-dimensional walks; it is cross-checked
    against :func:`enumerate_local_time_distribution` in the test-suite.
    """
    m = int(m)
    if m < 0:
        raise ValueError("m must be nonnegative")
    return Fraction(comb(2 * m, m), 4**m) ** 2


def return_probabilities(m_max: int) -> np.ndarray:
    """Float array ``p[m] = P(S_{2m} = 0)`` for ``m = 0..m_max``.

    Uses the ratio ``p[m] / p[m-1] = ((2m - 1) / (2m))**2``, which stays
    accurate in double precision far beyond the exact-fraction range.
    """
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    m = np.arange(1, m_max + 1, dtype=np.float64)
    ratios = ((2 * m - 1) / (2 * m)) ** 2
    return np.concatenate(([1.0], np.cumprod(ratios)))


def exact_expected_local_time(n: int) -> Fraction:
    """E[N_n] as an exact fraction.

    Terms share the denominator ``16**(n // 2)``, so the numerator is
    accumulated in integers by Horner's rule instead of adding fractions.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    top = n // 2
    acc, c = 0, 1
    for m in range(1, top + 1):
        c = c * 2 * (2 * m - 1) // m
        acc = (acc << 4) + c * c
    return Fraction(acc, 16**top)


def expected_local_time(n: int) -> float:
    """E[N_n] = sum of P(S_{2m} = 0) over 1 <= m <= n // 2."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return float(return_probabilities(n // 2)[1:].sum())


def enumerate_local_time_distribution(n: int) -> dict[int, Fraction]:
    """Exact pmf of N_n by walking all ``4**n`` paths.

    Paths are expanded breadth-first as flat int8 arrays, so the largest
    case (n = 12, about 1.7e7 paths) needs roughly 50 MB.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_ENUMERATION_N:
        raise ValueError(f"enumeration is limited to n <= {MAX_ENUMERATION_N}")
    x = np.zeros(1, dtype=np.int8)
    y = np.zeros(1, dtype=np.int8)
    visits = np.zeros(1, dtype=np.int8)
    for _ in range(n):
        x = (x[:, None] + _STEPS[None, :, 0]).ravel()
        y = (y[:, None] + _STEPS[None, :, 1]).ravel()
        visits = np.repeat(visits, 4)
        visits += (x == 0) & (y == 0)
    counts = np.bincount(visits, minlength=n // 2 + 1)
    total = 4**n
    return {k: Fraction(int(c), total) for k, c in enumerate(counts)}


MAX_RENEWAL_N = 1 << 22


def no_return_probabilities(n_max: int) -> np.ndarray:
    """``q[k] = P(N_k = 0)`` for ``k = 0..n_max``.

    Renewal identity: with ``U(z) = sum_k P(S_k = 0) z^k`` the first-return
    generating function is ``1 - 1/U(z)``. ``1/U`` is computed by Newton
    iteration on truncated power series with FFT products.
    """
    from scipy.signal import fftconvolve

    n_max = int(n_max)
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    if n_max > MAX_RENEWAL_N:
        raise ValueError(f"renewal series are limited to n <= {MAX_RENEWAL_N}")
    size = n_max + 1
    u = np.zeros(size)
    u[0::2] = return_probabilities(n_max // 2)
    inv = np.array([1.0])
    k = 1
    while k < size:
        k = min(2 * k, size)
        correction = -fftconvolve(u[:k], inv)[:k]
        correction[0] += 2.0
        inv = fftconvolve(inv, correction)[:k]
    first_return = -inv
    first_return[0] = 0.0
    return 1.0 - np.cumsum(first_return)


def window_no_return_probability(n: int, m: int, q: np.ndarray | None = None) -> float:
    """P(no return to the origin in ``(m, n]``), by the last visit at or before ``m``."""
    if not 0 <= m <= n:
        raise ValueError("need 0 <= m <= n")
    if q is None:
        q = no_return_probabilities(n)
    j = np.arange(0, m + 1, 2)
    return float(np.sum(return_probabilities(m // 2) * q[n - j]))
