"""Acceptance criteria, one test and one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the report lines.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from planar_local_time.cli import main
from planar_local_time.harness.config import ExperimentConfig
from planar_local_time.harness.experiments import decreasing, run_experiment
from planar_local_time.harness.parallel import run_replicas
from planar_local_time.limit import first_jump_after, sample_grid_many, sample_jump_times_many
from planar_local_time.metrics import j1_jump_gap_lower_bound, m1_distance, staircase, unit_step
from planar_local_time.oracles import (
    enumerate_local_time_distribution,
    exact_expected_local_time,
    exact_return_probability,
)
from planar_local_time.rng import make_stream
from planar_local_time.stats import BAND95, ReferenceLaw, ks_one_sample, ks_two_sample
from planar_local_time.walk import simulate_walk_returns

pytestmark = pytest.mark.slow


def report(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")


def experiment(exp, **kw):
    return run_experiment(ExperimentConfig.for_experiment(exp, **kw))


def test_criterion_01_oracle_equivalence(capsys):
    summary = experiment("E1", n=[2, 4, 6, 8, 10], replicas=100_000, master_seed=101)
    z = {r["n"]: r["pmf_max_z"] for r in summary.data["results"]}
    pmf_ok = all(v <= 4 for v in z.values())

    start = time.perf_counter()
    code = main(["oracle", "--n", "8"])
    capsys.readouterr()
    oracle_time = time.perf_counter() - start
    timing_ok = code == 0 and oracle_time < 60

    # P(S_2m = 0) = E[N_2m] - E[N_{2m-1}], exactly
    def mean(n):
        return sum(k * p for k, p in enumerate_local_time_distribution(n).items())

    exact_ok = all(exact_return_probability(m) == mean(2 * m) - mean(2 * m - 1) for m in range(1, 7))
    ok = pmf_ok and timing_ok and exact_ok
    worst = max(z.values())
    report(capsys, 1, ok, f"pmf max z {worst:.2f} (<= 4), oracle --n 8 in {oracle_time:.2f}s, exact agreement m<=6: {exact_ok}")
    assert ok


def test_criterion_02_mean_local_time(capsys):
    start = time.perf_counter()
    lines, ok = [], True
    for n in (10**2, 10**3, 10**4):
        counts = np.array(run_replicas(lambda i, st, n=n: simulate_walk_returns(n, st).count, 40_000, 202, key=(n,)))
        exact = float(exact_expected_local_time(n))
        z = (counts.mean() - exact) / (counts.std(ddof=1) / math.sqrt(counts.size))
        ok &= abs(z) <= 3
        lines.append(f"n={n} z={z:+.2f}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 30
    report(capsys, 2, ok, f"{', '.join(lines)}, {elapsed:.1f}s")
    assert ok


def test_criterion_03_exponential_trend(capsys):
    summary = experiment("E1")
    d = [r["ks"]["statistic"] for r in summary.data["results"]]
    ok = decreasing(d) and d[-1] <= 0.20
    report(capsys, 3, ok, f"KS along n=1e3,1e5,1e7: {', '.join(f'{v:.3f}' for v in d)}")
    assert ok


def test_criterion_04_limit_samplers(capsys):
    size = 100_000
    parts = []
    ok = True
    for k, t in enumerate((0.1, 0.5, 0.9)):
        u = make_stream(404, k).random(size * 3)
        x = np.array([v for v in (first_jump_after(t, ui) for ui in u) if v is not None])[:size]
        law = ReferenceLaw.uniform01()
        ks = ks_one_sample((1 - t / x) / (1 - t), law)
        ok &= ks.within_band
        parts.append(f"t={t} D*sqrt(n)={ks.statistic * math.sqrt(ks.sample_size):.2f}")

    eps = 1e-4
    times = sample_jump_times_many(eps, size, make_stream(404, 10))
    # no jump in [eps, 1] puts the last jump below eps; place it at 0
    last = np.array([tt[-1] if tt.size else 0.0 for tt in times])
    ks_last = ks_one_sample(last, ReferenceLaw.uniform01())
    ok &= ks_last.statistic <= ks_last.band95 + eps
    parts.append(f"last jump D={ks_last.statistic:.4f}")

    coarse = sample_grid_many([0.5, 1.0], size, make_stream(404, 11))[:, -1]
    fine = sample_grid_many(np.linspace(0.01, 1.0, 100), size, make_stream(404, 12))[:, -1]
    two = ks_two_sample(coarse, fine)
    ok &= two.p_value > 0.01
    parts.append(f"grid two-sample p={two.p_value:.3f}")

    eps = 0.01
    counts = np.array([tt.size for tt in sample_jump_times_many(eps, size, make_stream(404, 13))])
    z = (counts.mean() - math.log(1 / eps)) / (counts.std(ddof=1) / math.sqrt(size))
    ok &= abs(z) <= 3
    parts.append(f"jump count z={z:+.2f}")
    report(capsys, 4, ok, ", ".join(parts) + f" (band {BAND95})")
    assert ok


def test_criterion_05_increment_mixture(capsys):
    summary = experiment("E2")
    rows = {r["n"]: r for r in summary.data["results"]}
    freq = rows[10**6]["zero_frequency"]
    exact = rows[10**6].get("exact_zero_frequency")
    freq_ok = abs(freq - 0.5) <= 0.05
    d = [r["ks_nonzero_increments"]["statistic"] for r in summary.data["results"]]
    trend_ok = decreasing(d)
    ok = freq_ok and trend_ok
    report(
        capsys,
        5,
        ok,
        f"zero frequency at n=1e6 {freq:.4f} (target 0.5 +- 0.05, exact finite-n value {exact:.4f}); "
        f"nonzero-increment KS {', '.join(f'{v:.3f}' for v in d)} decreasing: {trend_ok}",
    )
    assert trend_ok
    assert freq_ok


def test_criterion_06_hitting_time_trend(capsys):
    summary = experiment("E3")
    d = [r["ks_censored"]["statistic"] for r in summary.data["results"]]
    ok = decreasing(d) and d[-1] <= 0.10
    report(capsys, 6, ok, f"censored KS along r=10,1e2,1e3: {', '.join(f'{v:.3f}' for v in d)}")
    assert ok


def test_criterion_07_excursion_uniformity(capsys):
    summary = experiment("E4")
    res = summary.data["results"]
    d_max = [r["ks_log_max_excursion"]["statistic"] for r in res]
    d_last = [r["ks_log_last_return"]["statistic"] for r in res]
    probe = [r["p_max_over_last_return_below_0.9"] for r in res]
    ok = decreasing(d_max) and decreasing(d_last) and max(d_max[-1], d_last[-1]) <= 0.15 and decreasing(probe)
    fmt = lambda v: ", ".join(f"{x:.3f}" for x in v)
    report(capsys, 7, ok, f"KS max excursion {fmt(d_max)}; KS last return {fmt(d_last)}; dominance {fmt(probe)}")
    assert ok


def test_criterion_08_topology_dichotomy(capsys):
    res = 1e-3
    start = time.perf_counter()
    target, stairs = unit_step(0.5), staircase(0.5, 0.01, 100)
    m1 = m1_distance(target, stairs, res).value
    j1 = j1_jump_gap_lower_bound(stairs, target, 1e-7).value
    near = m1_distance(unit_step(0.4), unit_step(0.5), res).value
    far = m1_distance(unit_step(0.1), unit_step(0.9), res).value
    elapsed = time.perf_counter() - start
    stair_ok = m1 <= 0.011 + res and j1 >= 0.49
    near_ok = abs(near - 0.1) <= res
    far_ok = abs(far - 0.5) <= res
    ok = stair_ok and near_ok and far_ok and elapsed < 1
    report(
        capsys,
        8,
        ok,
        f"staircase m1={m1:.4f} j1 bound={j1:.3f}; steps 0.4/0.5 m1={near:.4f} (0.1); "
        f"steps 0.1/0.9 m1={far:.4f} (0.5); {elapsed:.2f}s",
    )
    assert stair_ok and near_ok and elapsed < 1
    assert far_ok


def test_criterion_09_tightness_probes(capsys):
    summary = experiment("E6")
    probe = summary.data["results"]["probes"][0]
    p = probe["p_start"]
    ok = decreasing(p) and p[-1] <= 0.05
    report(capsys, 9, ok, f"P(L_n(delta) >= 0.2) at delta={probe['delta']}: {p}")
    assert ok


def test_criterion_10_determinism(capsys, tmp_path):
    same = True
    for exp, extra in (("E1", ["--n", "1000,100000", "--replicas", "400"]), ("E6", ["--n", "10000", "--replicas", "300"])):
        blobs = []
        for threads in ("1", "3"):
            out = tmp_path / f"{exp}-{threads}"
            assert main(["experiment", exp, *extra, "--seed", "99", "--threads", threads, "--out", str(out)]) == 0
            blobs.append((out / "summary.json").read_bytes())
        same &= blobs[0] == blobs[1]
    capsys.readouterr()
    report(capsys, 10, same, f"summary.json byte-identical across --threads 1 and 3: {same}")
    assert same
