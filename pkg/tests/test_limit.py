import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from planar_local_time.limit import (
    conditional_jump_time,
    first_jump_after,
    increment_cdf,
    last_jump_time,
    sample_grid,
    sample_grid_many,
    sample_jump_times,
    sample_jump_times_many,
)
from planar_local_time.rng import make_stream
from planar_local_time.stats import ReferenceLaw, ks_one_sample, ks_two_sample

N = 100_000


def test_unit_grid_is_theorem_a_law():
    values = sample_grid_many([1.0], N, make_stream(1))[:, 0]
    assert ks_one_sample(values, ReferenceLaw.exp_mean(1 / math.pi)).within_band


def test_repeated_grid_point_has_zero_increment():
    values = sample_grid_many([0.3, 0.6, 0.6, 1.0], 1000, make_stream(2))
    np.testing.assert_array_equal(values[:, 1], values[:, 2])


def test_single_sample_api():
    sample = sample_grid([0.2, 0.5, 1.0], make_stream(3))
    assert sample.values.shape == (3,) and np.all(np.diff(sample.values) >= 0)


@pytest.mark.parametrize("grid", [[0.5, 0.4], [0.0, 0.5], [0.5, 1.2], []])
def test_grid_validation(grid):
    with pytest.raises(ValueError):
        sample_grid(grid, make_stream(0))


def test_grid_values_nondecreasing():
    values = sample_grid_many(np.linspace(0.05, 1, 20), 2000, make_stream(4))
    assert np.all(np.diff(values, axis=1) >= 0)


@pytest.mark.parametrize("t", [0.1, 0.37, 0.8, 1.0])
def test_marginals_are_exponential(t):
    grid = sorted({0.05, 0.1, 0.37, 0.8, 1.0})
    values = sample_grid_many(grid, N, make_stream(5))
    col = grid.index(t)
    assert ks_one_sample(values[:, col], ReferenceLaw.exp_mean(t / math.pi)).within_band


def test_increments_uncorrelated():
    values = sample_grid_many([0.2, 0.5, 0.9], N, make_stream(6))
    inc = np.diff(values, axis=1, prepend=0.0)
    corr = np.corrcoef(inc.T)
    off = corr[np.triu_indices(3, 1)]
    assert np.all(np.abs(off) < 4 / math.sqrt(N))


def test_refined_grid_sums_like_direct_increment():
    s, t = 0.3, 0.9
    coarse = sample_grid_many([s, t], N, make_stream(7))
    fine = sample_grid_many(np.linspace(s, t, 13), N, make_stream(8))
    a = coarse[:, 1] - coarse[:, 0]
    b = fine[:, -1] - fine[:, 0]
    assert ks_two_sample(a, b).p_value > 0.01
    assert ks_one_sample(a, ReferenceLaw.increment_mixture(s, t)).within_band


def test_first_jump_examples():
    assert first_jump_after(1.0, 0.999) is None
    # a conditional draw of 0.5 at t = 0.5 is the raw uniform 0.75
    assert first_jump_after(0.5, 0.75) == pytest.approx(2 / 3)
    assert conditional_jump_time(0.5, 0.5) == pytest.approx(2 / 3)
    assert first_jump_after(0.5, 0.49) is None
    with pytest.raises(ValueError):
        first_jump_after(0.0, 0.5)
    with pytest.raises(ValueError):
        first_jump_after(1.2, 0.5)


@given(t=st.floats(0.001, 0.999), u=st.floats(0, 1, exclude_max=True))
def test_inverse_cdf_identity(t, u):
    x = float(conditional_jump_time(t, u))
    assert t <= x <= 1
    assert (1 - t / x) / (1 - t) == pytest.approx(u, abs=1e-9)


@given(t=st.floats(0.001, 0.999), v=st.floats(0, 1, exclude_max=True))
def test_single_uniform_form_matches_conditional_form(t, v):
    u = t + (1 - t) * v
    if u < 1:
        x = first_jump_after(t, u)
        assert x == pytest.approx(float(conditional_jump_time(t, v)), rel=1e-9)


@pytest.mark.parametrize("t", [0.1, 0.5, 0.9])
def test_constant_with_probability_t(t):
    u = make_stream(9).random(N)
    none = np.mean([first_jump_after(t, ui) is None for ui in u[:20_000]])
    assert abs(none - t) < 4 * math.sqrt(t * (1 - t) / 20_000)


def test_jump_times_mean_count():
    eps = 0.01
    counts = np.array([len(x) for x in sample_jump_times_many(eps, N, make_stream(10))])
    se = counts.std(ddof=1) / math.sqrt(N)
    assert abs(counts.mean() - math.log(1 / eps)) < 3 * se


def test_jump_times_structure():
    seq = sample_jump_times(0.05, make_stream(11))
    assert np.all(np.diff(seq.times) > 0)
    assert np.all((seq.times > 0.05) & (seq.times <= 1))
    with pytest.raises(ValueError):
        sample_jump_times(1.0, make_stream(0))


def test_scalar_and_vectorised_jump_samplers_agree():
    a = [len(sample_jump_times(0.1, make_stream(12, i)).times) for i in range(5000)]
    b = [len(x) for x in sample_jump_times_many(0.1, 5000, make_stream(13))]
    assert ks_two_sample(a, b).p_value > 0.01


def test_near_one_truncation_is_mostly_empty():
    empty = np.mean([len(x) == 0 for x in sample_jump_times_many(0.99, 10_000, make_stream(14))])
    assert empty > 0.98


def test_last_jump_uniform():
    u = last_jump_time(make_stream(15), N)
    assert ks_one_sample(u, ReferenceLaw.uniform01()).within_band
    assert abs(u.mean() - 0.5) < 3 * math.sqrt(1 / 12 / N)


def test_last_jump_agrees_with_event_driven_maximum():
    eps = 1e-3
    last = np.array([x[-1] for x in sample_jump_times_many(eps, N, make_stream(16)) if x.size])
    ref = last_jump_time(make_stream(17), N)
    assert ks_two_sample(last, ref[ref > eps]).p_value > 0.01


def test_increment_cdf_examples():
    assert increment_cdf(0.4, 0.4, 0.0) == 1
    assert increment_cdf(0.4, 0.4, 3.0) == 1
    assert increment_cdf(0.0, 1.0, 0.7) == pytest.approx(1 - math.exp(-math.pi * 0.7))
    assert increment_cdf(0.3, 0.6, 0.0) == pytest.approx(0.5)
    assert increment_cdf(0.3, 0.6, -1.0) == 0
    with pytest.raises(ValueError):
        increment_cdf(0.0, 0.0, 1.0)
    x = np.linspace(0, 5, 200)
    assert np.all(np.diff(increment_cdf(0.2, 0.7, x)) >= 0)
