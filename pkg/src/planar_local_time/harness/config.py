"""Declarative experiment configurations."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field

from planar_local_time.rng import check_seed

EXPERIMENTS = ("E1", "E2", "E3", "E4", "E5", "E6")

# Defaults reproduce the acceptance runs.
DEFAULTS = {
    "E1": {"n": [10**3, 10**5, 10**7], "replicas": 5000},
    "E2": {"n": [10**4, 10**6, 10**8], "replicas": 5000, "s": 0.5, "t": 1.0},
    "E3": {"radius": [10, 100, 1000], "cap": 10**8, "replicas": 2000},
    "E4": {"n": [10**4, 10**6, 10**8], "replicas": 5000},
    "E5": {"n": [10**4, 10**6, 10**8], "replicas": 5000, "s": 0.5, "epsilon": 0.1},
    "E6": {
        "n": [10**6],
        "replicas": 5000,
        "delta": [0.1, 0.01, 0.001],
        "eta": 0.2,
        "staircase_m": [10, 100, 1000],
        "resolution": 1e-3,
        "mesh": 1e-7,
        "grid": [round(0.01 * k, 2) for k in range(1, 101)],
        "limit_replicas": 200,
    },
}


@dataclass
class ExperimentConfig:
    """One experiment run.

    Only the fields an experiment reads are echoed into its summary. The
    execution fields ``threads`` and ``out`` never affect results and are
    left out of the echo.
    """

    experiment: str
    n: list[int] = field(default_factory=list)
    replicas: int = 1000
    master_seed: int = 0
    s: float | None = None
    t: float | None = None
    delta: list[float] = field(default_factory=list)
    eta: float | None = None
    epsilon: float | None = None
    radius: list[int] = field(default_factory=list)
    cap: int | None = None
    grid: list[float] = field(default_factory=list)
    resolution: float | None = None
    mesh: float | None = None
    staircase_m: list[int] = field(default_factory=list)
    limit_replicas: int | None = None
    method: str = "skip"
    out: str | None = None
    threads: int = 1

    EXECUTION_FIELDS = ("out", "threads")

    @classmethod
    def for_experiment(cls, experiment: str, **overrides) -> ExperimentConfig:
        experiment = str(experiment).upper()
        if experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        values = dict(DEFAULTS[experiment])
        values.update({k: v for k, v in overrides.items() if v is not None})
        cfg = cls(experiment=experiment, **values)
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, text: str, **overrides) -> ExperimentConfig:
        data = json.loads(text)
        if not isinstance(data, dict) or "experiment" not in data:
            raise ValueError("config must be a JSON object with an 'experiment' field")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {', '.join(sorted(unknown))}")
        experiment = data.pop("experiment")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls.for_experiment(experiment, **data)

    def validate(self) -> None:
        self.master_seed = check_seed(self.master_seed)
        self.n = [int(v) for v in self.n]
        self.radius = [int(v) for v in self.radius]
        self.staircase_m = [int(v) for v in self.staircase_m]
        if self.replicas < 1:
            raise ValueError("replicas must be positive")
        if self.threads < 1:
            raise ValueError("threads must be positive")
        if any(v < 2 for v in self.n):
            raise ValueError("every n must be at least 2")
        if self.method not in ("skip", "stepwise"):
            raise ValueError("method must be 'skip' or 'stepwise'")
        exp = self.experiment
        if exp in ("E1", "E2", "E4", "E5", "E6") and not self.n:
            raise ValueError(f"{exp} needs at least one n")
        if exp == "E2":
            if self.s is None or self.t is None or not 0 <= self.s <= self.t <= 1:
                raise ValueError("E2 needs 0 <= s <= t <= 1")
        if exp == "E3":
            if not self.radius or any(r < 2 for r in self.radius):
                raise ValueError("E3 radii must be at least 2 (log|v| must be positive)")
            if self.cap is None or self.cap < max(self.radius):
                raise ValueError("E3 cap must be at least the largest radius")
        if exp == "E5":
            if self.s is None or not 0 < self.s <= 1:
                raise ValueError("E5 needs 0 < s <= 1")
            if self.epsilon is None or not 0 < self.epsilon < 1:
                raise ValueError("E5 needs 0 < epsilon < 1")
        if exp == "E6":
            if not self.delta or any(not 0 <= d <= 1 for d in self.delta):
                raise ValueError("E6 deltas must lie in [0, 1]")
            if self.eta is None or self.eta <= 0:
                raise ValueError("E6 needs eta > 0")
            if not self.resolution or self.resolution <= 0 or not self.mesh or self.mesh <= 0:
                raise ValueError("E6 needs positive resolution and mesh")
            if any(m < 1 for m in self.staircase_m):
                raise ValueError("staircase sizes must be positive")
            if self.limit_replicas is not None and self.limit_replicas < 0:
                raise ValueError("limit_replicas must be nonnegative")
            if self.grid and (sorted(self.grid) != list(self.grid) or self.grid[0] <= 0 or self.grid[-1] > 1):
                raise ValueError("grid must be ascending within (0, 1]")

    def echo(self) -> dict:
        used = {
            "E1": ("n", "replicas"),
            "E2": ("n", "replicas", "s", "t"),
            "E3": ("radius", "cap", "replicas"),
            "E4": ("n", "replicas"),
            "E5": ("n", "replicas", "s", "epsilon"),
            "E6": ("n", "replicas", "delta", "eta", "staircase_m", "resolution", "mesh", "grid", "limit_replicas"),
        }[self.experiment]
        out = {"experiment": self.experiment, "master_seed": self.master_seed, "method": self.method}
        out.update({k: getattr(self, k) for k in used})
        return out
