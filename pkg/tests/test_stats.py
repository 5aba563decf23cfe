import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as sps

from planar_local_time.rng import make_stream
from planar_local_time.stats import (
    ReferenceLaw,
    ecdf,
    kolmogorov_sf,
    ks_censored,
    ks_one_sample,
    ks_statistic_by_evaluation,
    ks_two_sample,
)

LAWS = [
    ReferenceLaw.exp_mean(1 / math.pi),
    ReferenceLaw.uniform01(),
    ReferenceLaw.reciprocal_uniform(),
    ReferenceLaw.increment_mixture(0.3, 0.8),
]


def test_ecdf_examples():
    f = ecdf([5])
    assert f(4.99) == 0 and f(5) == 1
    g = ecdf([2, 1])
    assert (g(0.5), g(1), g(1.5), g(2)) == (0, 0.5, 0.5, 1)
    rng = np.random.default_rng(0)
    x = rng.random(50)
    pts = np.linspace(-0.1, 1.1, 77)
    np.testing.assert_array_equal(ecdf(x)(pts), ecdf(np.sort(x))(pts))
    with pytest.raises(ValueError):
        ecdf([])


@pytest.mark.parametrize("law", LAWS, ids=lambda l: l.tag)
def test_laws_are_valid_cdfs(law):
    x = np.linspace(-1, 1000, 50_000)
    F = law.cdf(x)
    assert np.all(np.diff(F) >= 0) and F[0] == 0 and F[-1] > 0.99


@pytest.mark.parametrize("law", LAWS, ids=lambda l: l.tag)
def test_self_test_at_large_n(law):
    x = law.sample(100_000, make_stream(1))
    assert ks_one_sample(x, law).within_band


@pytest.mark.parametrize("law", LAWS, ids=lambda l: l.tag)
def test_calibration_rejection_rate(law):
    rejections = sum(ks_one_sample(law.sample(1000, make_stream(2, i)), law).p_value < 0.05 for i in range(200))
    assert rejections / 200 <= 0.07


def test_gross_mismatch_detected():
    u = ReferenceLaw.uniform01().sample(100_000, make_stream(3))
    # sup |u - (1 - e^{-u})| over [0, 1] is e^{-1} at u = 1
    assert ks_one_sample(u, ReferenceLaw.exp_mean(1.0)).statistic > 0.3


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32), size=st.integers(1, 300))
def test_two_computations_of_d_agree(seed, size):
    rng = np.random.default_rng(seed)
    law = LAWS[seed % len(LAWS)]
    x = law.sample(size, rng)
    if seed % 3 == 0:
        x = np.round(x, 1)  # ties
    assert ks_one_sample(x, law).statistic == pytest.approx(ks_statistic_by_evaluation(x, law), abs=1e-12)


def test_d_invariant_under_log_transform():
    x = ReferenceLaw.reciprocal_uniform().sample(5000, make_stream(4))
    d = ks_one_sample(x, ReferenceLaw.reciprocal_uniform()).statistic
    # log(1/U) is exponential with mean 1
    d_log = ks_one_sample(np.log(x), ReferenceLaw.exp_mean(1.0)).statistic
    assert d == pytest.approx(d_log, abs=1e-12)


def test_matches_scipy():
    x = ReferenceLaw.exp_mean(2.0).sample(3000, make_stream(5))
    ref = sps.kstest(x, sps.expon(scale=2.0).cdf, method="asymp")
    rep = ks_one_sample(x, ReferenceLaw.exp_mean(2.0))
    assert rep.statistic == pytest.approx(ref.statistic, abs=1e-12)
    assert rep.p_value == pytest.approx(sps.kstwobign.sf(math.sqrt(3000) * rep.statistic), abs=1e-8)


@pytest.mark.parametrize("lam", [0.2, 0.5, 0.8, 1.0, 1.36, 2.0, 3.0])
def test_kolmogorov_series(lam):
    assert kolmogorov_sf(lam) == pytest.approx(sps.kstwobign.sf(lam), abs=1e-9)


def test_two_sample_examples():
    a = np.arange(10.0)
    rep = ks_two_sample(a, a)
    assert rep.statistic == 0 and rep.p_value == 1
    assert ks_two_sample([1, 2, 3], [7, 8]).statistic == 1
    x, y = make_stream(6).random(400), make_stream(7).random(300)
    assert ks_two_sample(x, y).statistic == pytest.approx(sps.ks_2samp(x, y).statistic, abs=1e-12)
    with pytest.raises(ValueError):
        ks_two_sample([], [1.0])


def test_censored_ks():
    law = ReferenceLaw.reciprocal_uniform()
    x = law.sample(50_000, make_stream(8))
    upper = 1.5
    rep = ks_censored(x[x <= upper], x.size, law, upper)
    assert rep.censored_fraction == pytest.approx(np.mean(x > upper))
    assert rep.within_band
    # brute force over a fine grid of the restricted range
    grid = np.linspace(0.5, upper, 20_001)
    brute = np.max(np.abs(np.searchsorted(np.sort(x), grid, side="right") / x.size - law.cdf(grid)))
    assert rep.statistic == pytest.approx(brute, abs=2e-4)
    with pytest.raises(ValueError):
        ks_censored([2.0], 1, law, upper)


def test_censored_ks_detects_wrong_mass():
    law = ReferenceLaw.reciprocal_uniform()
    x = law.sample(10_000, make_stream(9))
    kept = x[x <= 2.0][::2]  # half the observations silently lost
    assert ks_censored(kept, x.size, law, 2.0).statistic > 0.2
