"""Compiled walk kernels.

Two interchangeable engines are provided. The stepwise engine draws two
random bits per step. The skip engine uses the rotated coordinates
``u = x + y`` and ``w = x - y``, which are independent one-dimensional
+-1 walks, and advances by ``d = |x| + |y| = max(|u|, |w|)`` steps at once:
the origin cannot be visited strictly before step ``d``, so one binomial draw
per coordinate gives the exact law of the position at the only time a visit
is possible. Cost drops from ``O(n)`` to roughly ``O(sqrt(n))`` draws.
"""

import numpy as np
from numba import njit

_BITS_PER_WORD = 62


@njit(nogil=True, cache=True)
def _push(buf, count, value):
    if count == buf.shape[0]:
        grown = np.empty(2 * buf.shape[0], dtype=np.int64)
        grown[:count] = buf[:count]
        buf = grown
    buf[count] = value
    return buf


@njit(nogil=True, cache=True)
def returns_skip(n, rng, probe):
    """Return times in [1, n] and the position ``(x, y)`` at time ``probe``."""
    buf = np.empty(16, dtype=np.int64)
    count = 0
    u = 0
    w = 0
    t = 0
    pu = 0
    pw = 0
    while t < n:
        d = max(abs(u), abs(w))
        k = d if d > 0 else 2
        if k > n - t:
            k = n - t
        if 0 < probe - t < k:
            k = probe - t
        u += 2 * rng.binomial(k, 0.5) - k
        w += 2 * rng.binomial(k, 0.5) - k
        t += k
        if t == probe:
            pu = u
            pw = w
        if u == 0 and w == 0:
            buf = _push(buf, count, t)
            count += 1
    return buf[:count].copy(), (pu + pw) // 2, (pu - pw) // 2


@njit(nogil=True, cache=True)
def returns_stepwise(n, rng, probe):
    buf = np.empty(16, dtype=np.int64)
    count = 0
    x = 0
    y = 0
    px = 0
    py = 0
    bits = 0
    left = 0
    for t in range(1, n + 1):
        if left == 0:
            bits = rng.integers(0, 1 << _BITS_PER_WORD)
            left = _BITS_PER_WORD // 2
        code = bits & 3
        bits >>= 2
        left -= 1
        if code == 0:
            x += 1
        elif code == 1:
            x -= 1
        elif code == 2:
            y += 1
        else:
            y -= 1
        if t == probe:
            px = x
            py = y
        if x == 0 and y == 0:
            buf = _push(buf, count, t)
            count += 1
    return buf[:count].copy(), px, py


@njit(nogil=True, cache=True)
def hitting_skip(x0, y0, cap, rng):
    """First time in [1, cap] the walk from (x0, y0) sits at the origin, else -1."""
    u = x0 + y0
    w = x0 - y0
    t = 0
    while t < cap:
        k = max(abs(u), abs(w))
        if k > cap - t:
            k = cap - t
        u += 2 * rng.binomial(k, 0.5) - k
        w += 2 * rng.binomial(k, 0.5) - k
        t += k
        if u == 0 and w == 0:
            return t
    return -1


@njit(nogil=True, cache=True)
def hitting_stepwise(x0, y0, cap, rng):
    x = x0
    y = y0
    bits = 0
    left = 0
    for t in range(1, cap + 1):
        if left == 0:
            bits = rng.integers(0, 1 << _BITS_PER_WORD)
            left = _BITS_PER_WORD // 2
        code = bits & 3
        bits >>= 2
        left -= 1
        if code == 0:
            x += 1
        elif code == 1:
            x -= 1
        elif code == 2:
            y += 1
        else:
            y -= 1
        if x == 0 and y == 0:
            return t
    return -1
