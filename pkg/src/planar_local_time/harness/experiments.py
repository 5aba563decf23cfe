"""The six canonical experiments.

Each ``run_eX`` takes an :class:`ExperimentConfig` and returns an
:class:`ExperimentSummary`: a JSON-ready record (config echo, KS reports,
counts, gate results) plus per-replica samples for the CSV export. All limit
laws involved converge at speed ``1/log n``, so quantitative gates combine
generous absolute bounds with monotone trends along the ladder of sizes.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from planar_local_time import __version__
from planar_local_time.harness.config import ExperimentConfig
from planar_local_time.harness.parallel import run_replicas
from planar_local_time.limit import sample_grid
from planar_local_time.metrics import (
    j1_jump_gap_lower_bound,
    m1_distance,
    staircase,
    uniform_distance,
    unit_step,
)
from planar_local_time.oracles import (
    MAX_RENEWAL_N,
    enumerate_local_time_distribution,
    expected_local_time,
    window_no_return_probability,
)
from planar_local_time.rng import make_stream
from planar_local_time.scaling import build_rescaled_path, eval_path, floor_power, no_return_in_window
from planar_local_time.stats import ReferenceLaw, ks_censored, ks_one_sample
from planar_local_time.walk import excursion_stats, first_return_after, simulate_hitting_time, simulate_walk

# stream key separating the limit-process draws of E6 from the walk draws
_LIMIT_KEY = (1,)


@dataclass
class ExperimentSummary:
    data: dict
    samples: list = field(default_factory=list)
    wall_clock: float = 0.0

    @property
    def checks(self) -> dict:
        return self.data["checks"]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, sort_keys=True) + "\n"


def decreasing(values) -> bool:
    """Strictly decreasing, except that ties at exactly zero are allowed."""
    values = list(values)
    return all(b < a or a == b == 0 for a, b in zip(values, values[1:]))


def _summary(cfg: ExperimentConfig, results, checks, counts=None) -> dict:
    return {
        "experiment": cfg.experiment,
        "config": cfg.echo(),
        "library_version": __version__,
        "results": results,
        "counts": counts or {},
        "checks": {k: bool(v) for k, v in checks.items()},
    }


def _run(cfg, task, key=()):
    return run_replicas(task, cfg.replicas, cfg.master_seed, cfg.threads, key)


def run_e1_marginal(cfg: ExperimentConfig) -> ExperimentSummary:
    """N_n / log n against the exponential law with mean 1/pi."""
    start = time.perf_counter()
    law = ReferenceLaw.exp_mean(1 / math.pi)
    results, samples, distances, checks = [], [], [], {}
    for n in cfg.n:
        counts = np.array(_run(cfg, lambda i, st, n=n: simulate_walk(n, st, method=cfg.method)[0].count))
        x = counts / math.log(n)
        ks = ks_one_sample(x, law)
        distances.append(ks.statistic)
        mean, se = counts.mean(), counts.std(ddof=1) / math.sqrt(counts.size)
        exact = expected_local_time(n)
        entry = {
            "n": n,
            "ks": ks.to_dict(),
            "mean_local_time": float(mean),
            "exact_mean_local_time": exact,
            "mean_z": float((mean - exact) / se) if se > 0 else 0.0,
        }
        if n <= 12:
            pmf = enumerate_local_time_distribution(n)
            p = np.array([float(v) for v in pmf.values()])
            emp = np.bincount(counts, minlength=p.size)[: p.size] / counts.size
            sd = np.sqrt(p * (1 - p) / counts.size)
            z = np.where(sd > 0, np.abs(emp - p) / np.where(sd > 0, sd, 1), np.where(emp == p, 0.0, np.inf))
            entry["pmf_max_z"] = float(z.max())
            checks[f"pmf_within_4sd@n={n}"] = z.max() <= 4
        results.append(entry)
        samples += [(i, f"N_over_log_n@n={n}", float(v)) for i, v in enumerate(x)]
    if len(distances) > 1:
        checks["ks_decreasing"] = decreasing(distances)
    if cfg.n[-1] >= 10**7:
        checks["ks_le_0.20_at_largest_n"] = distances[-1] <= 0.20
    return ExperimentSummary(_summary(cfg, results, checks), samples, time.perf_counter() - start)


def run_e2_increments(cfg: ExperimentConfig) -> ExperimentSummary:
    """Increments of L_n over (s, t] and the first return after n^s."""
    start = time.perf_counter()
    s, t = cfg.s, cfg.t
    results, samples, nonzero_d, checks, counts = [], [], [], {}, {}

    def task(i, stream, n):
        rec = simulate_walk(n, stream, method=cfg.method)[0]
        path = build_rescaled_path(rec)
        zero = no_return_in_window(rec, s, t)
        inc = eval_path(path, t) - eval_path(path, s)
        sigma = first_return_after(rec, floor_power(n, s)) if s > 0 else None
        return zero, max(inc, 0.0), sigma

    for n in cfg.n:
        rows = _run(cfg, lambda i, st, n=n: task(i, st, n))
        zero = np.array([r[0] for r in rows])
        inc = np.array([r[1] for r in rows])
        entry = {"n": n, "zero_frequency": float(zero.mean()), "expected_zero_frequency": s / t}
        hi = floor_power(n, t)
        if hi <= MAX_RENEWAL_N:
            # exact finite-n value of the same event, for the size of the bias
            entry["exact_zero_frequency"] = window_no_return_probability(hi, floor_power(n, s))
        nonzero = inc[~zero]
        if nonzero.size:
            ks = ks_one_sample(nonzero, ReferenceLaw.exp_mean(t / math.pi))
            entry["ks_nonzero_increments"] = ks.to_dict()
            nonzero_d.append(ks.statistic)
        entry["ks_increment_mixture"] = ks_one_sample(inc, ReferenceLaw.increment_mixture(s, t)).to_dict()
        if s > 0:
            sig = np.array([math.log(r[2]) / (s * math.log(n)) for r in rows if r[2] is not None])
            # (log sigma / log n) / s has limit law 1/UNI, censored at u = 1
            ks = ks_censored(sig, len(rows), ReferenceLaw.reciprocal_uniform(), 1.0 / s)
            entry["ks_first_return"] = ks.to_dict()
            samples += [
                (i, f"log_sigma_over_log_n@n={n}", math.log(r[2]) / math.log(n) if r[2] else math.inf)
                for i, r in enumerate(rows)
            ]
            if n >= 10**7:
                checks[f"first_return_ks_le_0.10@n={n}"] = ks.statistic <= 0.10
        counts[f"zero_increments@n={n}"] = int(zero.sum())
        results.append(entry)
        samples += [(i, f"increment@n={n}", float(v)) for i, v in enumerate(inc)]
        if n >= 10**6:
            checks[f"zero_frequency_within_0.05@n={n}"] = abs(zero.mean() - s / t) <= 0.05
    if len(nonzero_d) > 1:
        checks["ks_nonzero_increments_decreasing"] = decreasing(nonzero_d)
    return ExperimentSummary(_summary(cfg, results, checks, counts), samples, time.perf_counter() - start)


def run_e3_hitting(cfg: ExperimentConfig) -> ExperimentSummary:
    """log(tau_v) / (2 log |v|) from v = (r, 0) against the 1/UNI law."""
    start = time.perf_counter()
    law = ReferenceLaw.reciprocal_uniform()
    results, samples, distances, checks, counts = [], [], [], {}, {}
    for r in cfg.radius:
        taus = _run(cfg, lambda i, st, r=r: simulate_hitting_time((r, 0), cfg.cap, st, method=cfg.method).tau)
        scale = 2 * math.log(r)
        stat = np.array([math.log(tau) / scale for tau in taus if tau is not None])
        upper = math.log(cfg.cap) / scale
        ks = ks_censored(stat, len(taus), law, upper)
        distances.append(ks.statistic)
        results.append(
            {
                "radius": r,
                "ks_censored": ks.to_dict(),
                "fraction_below_0.9": float(np.sum(stat < 0.9) / len(taus)),
                "heuristic_censored_fraction": max(0.0, 1 - scale / math.log(cfg.cap)),
            }
        )
        counts[f"censored@r={r}"] = int(len(taus) - stat.size)
        samples += [(i, f"hitting_exponent@r={r}", math.log(tau) / scale if tau else math.inf) for i, tau in enumerate(taus)]
    if len(distances) > 1:
        checks["ks_decreasing"] = decreasing(distances)
    if cfg.radius[-1] >= 1000:
        checks["ks_le_0.10_at_largest_r"] = distances[-1] <= 0.10
    return ExperimentSummary(_summary(cfg, results, checks, counts), samples, time.perf_counter() - start)


def run_e4_excursions(cfg: ExperimentConfig) -> ExperimentSummary:
    """Longest completed excursion and the last return before n."""
    start = time.perf_counter()
    uni = ReferenceLaw.uniform01()
    results, samples, checks, counts = [], [], {}, {}
    d_max, d_last, dominance = [], [], []

    def task(i, stream, n):
        ex = excursion_stats(simulate_walk(n, stream, method=cfg.method)[0])
        return ex.max_interior, ex.last_return

    for n in cfg.n:
        rows = np.array(_run(cfg, lambda i, st, n=n: task(i, st, n)), dtype=np.float64)
        has = rows[:, 1] > 0
        longest, last = rows[has, 0], rows[has, 1]
        log_n = math.log(n)
        a, b, ratio = np.log(longest) / log_n, np.log(last) / log_n, longest / last
        ks_a, ks_b = ks_one_sample(a, uni), ks_one_sample(b, uni)
        d_max.append(ks_a.statistic)
        d_last.append(ks_b.statistic)
        dominance.append(float(np.mean(ratio < 0.9)))
        results.append(
            {
                "n": n,
                "ks_log_max_excursion": ks_a.to_dict(),
                "ks_log_last_return": ks_b.to_dict(),
                "mean_max_over_last_return": float(ratio.mean()),
                "p_max_over_last_return_below_0.9": dominance[-1],
            }
        )
        counts[f"no_return_replicas@n={n}"] = int((~has).sum())
        idx = np.flatnonzero(has)
        samples += [(int(i), f"log_max_excursion_over_log_n@n={n}", float(v)) for i, v in zip(idx, a)]
        samples += [(int(i), f"log_last_return_over_log_n@n={n}", float(v)) for i, v in zip(idx, b)]
    if len(cfg.n) > 1:
        checks["ks_max_excursion_decreasing"] = decreasing(d_max)
        checks["ks_last_return_decreasing"] = decreasing(d_last)
        checks["dominance_probe_decreasing"] = decreasing(dominance)
    if cfg.n[-1] >= 10**8:
        checks["ks_le_0.15_at_largest_n"] = max(d_max[-1], d_last[-1]) <= 0.15
    return ExperimentSummary(_summary(cfg, results, checks, counts), samples, time.perf_counter() - start)


def run_e5_radius(cfg: ExperimentConfig) -> ExperimentSummary:
    """Distance from the origin at time n^s jointly with the local time."""
    start = time.perf_counter()
    s, eps = cfg.s, cfg.epsilon
    results, samples, checks, counts = [], [], {}, {}

    def task(i, stream, n, probe):
        rec, pos = simulate_walk(n, stream, probe=probe, method=cfg.method)
        return int(rec.local_time(probe)), pos.norm

    for n in cfg.n:
        probe = floor_power(n, s)
        rows = np.array(_run(cfg, lambda i, st, n=n, p=probe: task(i, st, n, p)), dtype=np.float64)
        log_n = math.log(n)
        local = rows[:, 0] / log_n
        at_origin = rows[:, 1] == 0
        with np.errstate(divide="ignore"):
            radius = np.log(rows[:, 1]) / log_n
        coverage = float(np.mean(np.abs(radius - s / 2) <= eps))
        finite = ~at_origin
        corr = float(np.corrcoef(local[finite], radius[finite])[0, 1]) if finite.sum() > 2 and np.ptp(local[finite]) > 0 else 0.0
        results.append(
            {
                "n": n,
                "probe_time": probe,
                "coverage": coverage,
                "coverage_target": 1 - eps,
                "mean_log_radius_over_log_n": float(radius[finite].mean()),
                "ks_local_time": ks_one_sample(local, ReferenceLaw.exp_mean(s / math.pi)).to_dict(),
                "correlation": corr,
            }
        )
        counts[f"at_origin@n={n}"] = int(at_origin.sum())
        samples += [(i, f"log_radius_over_log_n@n={n}", float(v)) for i, v in enumerate(radius)]
        samples += [(i, f"local_time_over_log_n@n={n}", float(v)) for i, v in enumerate(local)]
        if n >= 10**6:
            checks[f"coverage@n={n}"] = coverage >= 1 - eps
    return ExperimentSummary(_summary(cfg, results, checks, counts), samples, time.perf_counter() - start)


def run_e6_topology(cfg: ExperimentConfig) -> ExperimentSummary:
    """Tightness probes, the staircase M1/J1 dichotomy and J1 gaps to J."""
    start = time.perf_counter()
    deltas = sorted(cfg.delta, reverse=True)
    eta, res, mesh = cfg.eta, cfg.resolution, cfg.mesh
    results, samples, checks, counts = {"probes": [], "staircase": [], "limit_pairs": []}, [], {}, {}

    def task(i, stream, n):
        path = build_rescaled_path(simulate_walk(n, stream, method=cfg.method)[0])
        left = [eval_path(path, d) for d in deltas]
        right = [path.final_value - eval_path(path, 1 - d) for d in deltas]
        return left, right, path

    for n in cfg.n:
        rows = _run(cfg, lambda i, st, n=n: task(i, st, n))
        left = np.array([r[0] for r in rows])
        right = np.array([r[1] for r in rows])
        p_left = [float(np.mean(left[:, j] >= eta)) for j in range(len(deltas))]
        p_right = [float(np.mean(right[:, j] >= eta)) for j in range(len(deltas))]
        results["probes"].append({"n": n, "delta": deltas, "p_start": p_left, "p_end": p_right})
        checks[f"p_start_decreasing@n={n}"] = decreasing(p_left)
        checks[f"p_start_le_0.05_at_smallest_delta@n={n}"] = p_left[-1] <= 0.05
        for j, d in enumerate(deltas):
            samples += [(i, f"L_at_delta={d}@n={n}", float(v)) for i, v in enumerate(left[:, j])]

        limit_reps = min(cfg.limit_replicas or 0, cfg.replicas)
        if limit_reps and cfg.grid:
            bounds = []
            for i in range(limit_reps):
                jsample = sample_grid(cfg.grid, make_stream(cfg.master_seed, i, *_LIMIT_KEY))
                bounds.append(j1_jump_gap_lower_bound(rows[i][2], jsample, mesh).value)
            q = np.quantile(bounds, [0.1, 0.5, 0.9])
            results["limit_pairs"].append(
                {"n": n, "pairs": limit_reps, "j1_bound_quantiles": {"q10": q[0], "q50": q[1], "q90": q[2]}, "j1_bound_mean": float(np.mean(bounds))}
            )

    target = unit_step(0.5)
    for m in cfg.staircase_m:
        width = 1.0 / m
        stairs = staircase(0.5, width, m)
        m1 = m1_distance(target, stairs, res)
        j1 = j1_jump_gap_lower_bound(stairs, target, mesh)
        uni = uniform_distance(target, stairs, np.linspace(0, 1, 2001))
        results["staircase"].append({"m": m, "window": width, "m1": m1.to_dict(), "j1_lower_bound": j1.to_dict(), "uniform": uni.to_dict()})
        checks[f"staircase_m1_small@m={m}"] = m1.value <= max(width, 1 / (2 * m)) + res
        if mesh < width / m:
            checks[f"staircase_j1_large@m={m}"] = j1.value >= 0.5 - 1 / (2 * m) - 1e-9
    results["shifted_steps"] = [
        {"a": a, "b": b, "m1": m1_distance(unit_step(a), unit_step(b), res).value} for a, b in ((0.4, 0.5), (0.1, 0.9))
    ]
    return ExperimentSummary(_summary(cfg, results, checks, counts), samples, time.perf_counter() - start)


RUNNERS = {
    "E1": run_e1_marginal,
    "E2": run_e2_increments,
    "E3": run_e3_hitting,
    "E4": run_e4_excursions,
    "E5": run_e5_radius,
    "E6": run_e6_topology,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentSummary:
    cfg.validate()
    return RUNNERS[cfg.experiment](cfg)
