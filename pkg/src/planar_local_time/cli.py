"""Command-line interface: ``planar-lt <subcommand> ...``.

Exit codes: 0 success, 1 validation error, 2 failed gates in ``--check`` mode.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from planar_local_time.harness.config import EXPERIMENTS, ExperimentConfig
from planar_local_time.harness.experiments import run_experiment
from planar_local_time.harness.io import path_csv, read_path_csv, samples_csv, write_summary, write_text
from planar_local_time.harness.parallel import default_threads, run_replicas
from planar_local_time.limit import last_jump_time, sample_grid, sample_jump_times
from planar_local_time.metrics import (
    Polyline,
    completed_graph,
    j1_jump_gap_lower_bound,
    m1_distance,
    polyline_rows,
    staircase,
    uniform_distance,
    unit_step,
)
from planar_local_time.oracles import enumerate_local_time_distribution, exact_return_probability
from planar_local_time.rng import make_stream
from planar_local_time.scaling import build_rescaled_path, sample_on_grid
from planar_local_time.walk import excursion_stats, simulate_walk

EXIT_OK, EXIT_INVALID, EXIT_CHECK_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(float(v)) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _sci_int(text: str) -> int:
    try:
        return int(float(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None


def _common(p, n_type=_sci_int):
    p.add_argument("--n", type=n_type, help="walk length (e.g. 1e6)")
    p.add_argument("--replicas", type=int)
    p.add_argument("--seed", type=int, default=None, help="64-bit master seed")
    p.add_argument("--out", help="output directory (nothing is written elsewhere)")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default $PLANAR_LT_THREADS or 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="planar-lt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("simulate", help="simulate walks; per-replica statistics as CSV")
    _common(p)
    p.add_argument("--method", choices=("skip", "stepwise"), default="skip")
    p.add_argument("--paths", type=int, default=0, help="also write L_n paths of the first K replicas")
    p.add_argument("--points", type=int, default=201, help="grid points per written path")

    p = sub.add_parser("sample-limit", help="sample the limit process J")
    _common(p)
    p.add_argument("--mode", choices=("grid", "jumps", "last"), default="grid")
    p.add_argument("--grid", type=_float_list, default=None, help="comma-separated times in (0, 1]")
    p.add_argument("--epsilon", type=float, default=0.01)

    p = sub.add_parser("metric", help="distance between two monotone paths")
    p.add_argument("kind", choices=("m1", "j1", "uniform"))
    p.add_argument("f", help="path CSV (t,value) or step:A or staircase:START,WIDTH,M")
    p.add_argument("g", help="path CSV (t,value) or step:A or staircase:START,WIDTH,M")
    p.add_argument("--resolution", type=float, default=1e-3)
    p.add_argument("--mesh", type=float, default=1e-6)
    p.add_argument("--grid-points", type=int, default=2001)
    p.add_argument("--out", help="also write both completed graphs as CSV vertex lists here")

    p = sub.add_parser("experiment", help="run a canonical experiment")
    p.add_argument("id", choices=EXPERIMENTS, type=str.upper)
    _common(p, n_type=_int_list)
    p.add_argument("--config", help="JSON config file; flags override its fields")
    p.add_argument("--check", action="store_true", help="exit 2 when any gate fails")
    p.add_argument("--method", choices=("skip", "stepwise"))
    p.add_argument("--s", type=float)
    p.add_argument("--t", type=float)
    p.add_argument("--delta", type=_float_list)
    p.add_argument("--eta", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--radius", type=_int_list)
    p.add_argument("--cap", type=_sci_int)
    p.add_argument("--grid", type=_float_list)
    p.add_argument("--resolution", type=float)
    p.add_argument("--mesh", type=float)
    p.add_argument("--staircase-m", type=_int_list)
    p.add_argument("--limit-replicas", type=int)

    p = sub.add_parser("oracle", help="exact pmf of N_n by enumeration, as CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", help="output directory")
    return parser


def _emit(text: str, out, name: str):
    if out:
        path = write_text(out, name, text)
        print(f"wrote {path}")
    else:
        sys.stdout.write(text)


def _threads(args) -> int:
    return args.threads if args.threads is not None else default_threads()


def cmd_simulate(args) -> int:
    if args.n is None or args.n < 1:
        raise ValueError("--n must be a positive integer")
    replicas = args.replicas or 1
    seed = args.seed or 0
    if args.paths and args.n < 2:
        raise ValueError("paths need n >= 2")

    def task(i, stream):
        rec = simulate_walk(args.n, stream, method=args.method)[0]
        ex = excursion_stats(rec)
        path = build_rescaled_path(rec) if i < args.paths else None
        return rec.count, ex.last_return, ex.max_interior, path

    rows = run_replicas(task, replicas, seed, _threads(args))
    log_n = math.log(args.n) if args.n > 1 else math.nan
    samples = []
    for i, (count, last, longest, _) in enumerate(rows):
        samples += [(i, "local_time", count), (i, "local_time_over_log_n", count / log_n)]
        samples += [(i, "last_return", last), (i, "max_interior_excursion", longest)]
    _emit(samples_csv(samples), args.out, "samples.csv")
    for i, (*_, path) in enumerate(rows):
        if path is not None:
            _emit(path_csv(sample_on_grid(path, args.points)), args.out, f"path_{i}.csv")
    return EXIT_OK


def cmd_sample_limit(args) -> int:
    replicas = args.replicas or 1
    seed = args.seed or 0
    samples = []
    if args.mode == "grid":
        grid = args.grid or [round(0.01 * k, 2) for k in range(1, 101)]
        for i in range(replicas):
            sample = sample_grid(grid, make_stream(seed, i))
            if args.out and i == 0:
                _emit(path_csv(polyline_rows(completed_graph(sample))), args.out, "limit_path_0.csv")
            samples += [(i, f"J({t:g})", v) for t, v in zip(sample.grid, sample.values)]
    elif args.mode == "jumps":
        for i in range(replicas):
            seq = sample_jump_times(args.epsilon, make_stream(seed, i))
            samples += [(i, "jump_time", t) for t in seq.times]
            samples.append((i, "jump_count", len(seq.times)))
    else:
        samples = [(i, "last_jump", float(last_jump_time(make_stream(seed, i)))) for i in range(replicas)]
    _emit(samples_csv(samples), args.out, "limit_samples.csv")
    return EXIT_OK


def _path_arg(text: str):
    if text.startswith("step:"):
        return unit_step(float(text[5:]))
    if text.startswith("staircase:"):
        start, width, m = text[10:].split(",")
        return staircase(float(start), float(width), int(m))
    return Polyline(np.array(read_path_csv(text)))


def cmd_metric(args) -> int:
    f, g = _path_arg(args.f), _path_arg(args.g)
    if args.kind == "m1":
        report = m1_distance(f, g, args.resolution)
    elif args.kind == "j1":
        report = j1_jump_gap_lower_bound(f, g, args.mesh)
    else:
        report = uniform_distance(f, g, np.linspace(0, 1, args.grid_points))
    if args.out:
        write_text(args.out, "graph_f.csv", path_csv(polyline_rows(completed_graph(f))))
        write_text(args.out, "graph_g.csv", path_csv(polyline_rows(completed_graph(g))))
    print(json.dumps(report.to_dict(), sort_keys=True))
    return EXIT_OK


def cmd_experiment(args) -> int:
    overrides = {
        "n": args.n,
        "replicas": args.replicas,
        "master_seed": args.seed,
        "s": args.s,
        "t": args.t,
        "delta": args.delta,
        "eta": args.eta,
        "epsilon": args.epsilon,
        "radius": args.radius,
        "cap": args.cap,
        "grid": args.grid,
        "resolution": args.resolution,
        "mesh": args.mesh,
        "staircase_m": args.staircase_m,
        "limit_replicas": args.limit_replicas,
        "method": args.method,
        "out": args.out,
        "threads": _threads(args),
    }
    if args.config:
        with open(args.config) as fh:
            text = fh.read()
        cfg = ExperimentConfig.from_json(text, **overrides)
        if cfg.experiment != args.id:
            raise ValueError(f"config is for {cfg.experiment}, not {args.id}")
    else:
        cfg = ExperimentConfig.for_experiment(args.id, **overrides)
    summary = run_experiment(cfg)
    if cfg.out:
        print(f"wrote {write_summary(cfg.out, summary)}")
    else:
        sys.stdout.write(summary.to_json())
    for name, ok in summary.checks.items():
        print(f"{'PASS' if ok else 'FAIL'} {name}", file=sys.stderr)
    if args.check and not summary.passed:
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_oracle(args) -> int:
    pmf = enumerate_local_time_distribution(args.n)
    rows = ["k,probability,numerator,denominator"]
    rows += [f"{k},{float(p)!r},{p.numerator},{p.denominator}" for k, p in pmf.items()]
    _emit("\n".join(rows) + "\n", args.out, f"pmf_n{args.n}.csv")
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "sample-limit": cmd_sample_limit,
    "metric": cmd_metric,
    "experiment": cmd_experiment,
    "oracle": cmd_oracle,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage() + "planar-lt: error: a subcommand is required")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, OverflowError, OSError) as exc:
        print(f"planar-lt: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
