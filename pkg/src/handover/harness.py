"""Experiment orchestration: random scenarios and competitive-ratio measurement."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from . import adversary
from .events import Trajectory, check_coverage, coverage_timeline, step_sequence
from .geometry import ConvexPolygon, Disk, Interval, Region, ply
from .offline import (
    CoverageSolution,
    ValidationError,
    greedy_offline,
    greedy_offline_c,
    validate,
    validate_c,
)
from .online import TrilaterationTracker, make_tracker


class ScenarioGenerationError(RuntimeError):
    pass


@dataclass
class ScenarioParams:
    n: int = 8
    d: int = 1
    shape: str = "interval"  # interval | disk | polygon
    segments: int = 6
    bbox: float = 10.0
    size: tuple = (1.0, 4.0)  # interval length / disk radius / polygon circumradius range
    coverage: int = 1
    max_tries: int = 200


def _random_region(rid, rng, p: ScenarioParams) -> Region:
    lo_size, hi_size = p.size
    s = float(rng.uniform(lo_size, hi_size))
    if p.shape == "interval":
        a = float(rng.uniform(0, p.bbox - s))
        return Region(rid, Interval(a, a + s))
    cx, cy = (float(v) for v in rng.uniform(s * 0.5, p.bbox - s * 0.5, size=2))
    if p.shape == "disk":
        return Region(rid, Disk((cx, cy), s))
    if p.shape == "polygon":
        k = int(rng.integers(3, 7))
        angles = np.sort(rng.uniform(0, 2 * math.pi, size=k))
        gaps = np.diff(np.append(angles, angles[0] + 2 * math.pi))
        if gaps.max() >= math.pi or gaps.min() < 0.05:
            angles = np.linspace(0, 2 * math.pi, k, endpoint=False) + rng.uniform(0, 2 * math.pi)
        return Region(rid, ConvexPolygon([(cx + s * math.cos(a), cy + s * math.sin(a)) for a in angles]))
    raise ValueError(f"unknown shape {p.shape!r}")


def _depth(regions, point) -> int:
    return sum(r.shape.contains(point) for r in regions)


def _segment_covered(regions, p0, p1, c) -> bool:
    timeline = coverage_timeline(regions, Trajectory([(0.0, p0), (1.0, p1)]))
    return check_coverage(timeline, c)


def random_scenario(seed, params: ScenarioParams | dict | None = None):
    """Seeded random regions and a trajectory covered ``coverage`` times throughout.

    Trajectory pieces leaving the required coverage are resampled; after
    ``max_tries`` failed attempts a :class:`ScenarioGenerationError` is raised.
    """
    if params is None:
        params = ScenarioParams()
    elif isinstance(params, dict):
        params = ScenarioParams(**params)
    if params.shape == "interval" and params.d != 1:
        raise ValueError("interval scenarios are one-dimensional")
    if params.shape != "interval" and params.d != 2:
        raise ValueError(f"{params.shape} scenarios are two-dimensional")
    rng = np.random.default_rng(seed)
    regions = [_random_region(i, rng, params) for i in range(params.n)]
    c = params.coverage

    def sample_point(around=None):
        if around is None:
            return tuple(float(v) for v in rng.uniform(0, params.bbox, size=params.d))
        step = rng.normal(0, params.bbox / 6, size=params.d)
        return tuple(float(min(max(a + s, 0.0), params.bbox)) for a, s in zip(around, step))

    for _ in range(params.max_tries):
        start = sample_point()
        if _depth(regions, start) >= c and _segment_covered(regions, start, start, c):
            break
    else:
        raise ScenarioGenerationError(f"no start point covered by {c} regions")
    samples = [(0.0, start)]
    current = start
    for i in range(params.segments):
        for _ in range(params.max_tries):
            nxt = sample_point(current)
            if nxt != current and _segment_covered(regions, current, nxt, c):
                break
        else:
            raise ScenarioGenerationError(f"could not extend the trajectory with coverage {c}")
        samples.append((float(i + 1), nxt))
        current = nxt
    return regions, Trajectory(samples)


@dataclass
class ScenarioConfig:
    tracker: str = "random"
    coverage: int = 1
    seed: int = 0
    trials: int = 100
    # scenario source: "random" | "inline" | "tree" | "trilat" | "flower-adversary"
    # | "rhombi-adversary"
    source: str = "random"
    params: dict = field(default_factory=dict)
    regions: list | None = None
    trajectory: Any = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.coverage < 1:
            raise ValueError("coverage must be at least 1")


@dataclass
class TrialResult:
    trial: int
    seed: int
    alg_cost: int
    opt_cost: int
    ratio: float
    k: int
    ply: int
    c: int
    m: int | None = None
    steps: list = field(default_factory=list)  # pairs appended in each tracker step


@dataclass
class ExperimentResult:
    config: ScenarioConfig
    trials: list

    @property
    def ratios(self):
        return np.array([t.ratio for t in self.trials])

    @property
    def mean_ratio(self) -> float:
        return float(self.ratios.mean())

    @property
    def max_ratio(self) -> float:
        return float(self.ratios.max())

    @property
    def ci95(self) -> float:
        n = len(self.trials)
        if n < 2:
            return 0.0
        return float(1.96 * self.ratios.std(ddof=1) / math.sqrt(n))

    @property
    def mean_cost(self) -> float:
        return float(np.mean([t.alg_cost for t in self.trials]))

    def aggregate(self) -> dict:
        return {"mean_ratio": self.mean_ratio, "max_ratio": self.max_ratio,
                "ci95": self.ci95, "trials": len(self.trials)}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["trial", "seed", "alg_cost", "opt_cost", "ratio", "k", "ply", "c", "m"])
        for t in self.trials:
            w.writerow([t.trial, t.seed, t.alg_cost, t.opt_cost, repr(t.ratio), t.k, t.ply, t.c,
                        "" if t.m is None else t.m])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(self.aggregate(), indent=2, sort_keys=True)


def trial_seeds(master_seed: int, trials: int) -> list[int]:
    """Independent per-trial seeds derived from the master seed."""
    ss = np.random.SeedSequence(master_seed)
    return [int(s) for s in ss.generate_state(trials, dtype=np.uint64)]


def per_step_counts(pairs, step_times) -> list[int]:
    counts = [0] * len(step_times)
    for t, _ in pairs:
        idx = int(np.searchsorted(step_times, t, side="right")) - 1
        counts[idx] += 1
    return counts


def evaluate(tracker_name: str, regions, trajectory, seed: int, c: int = 1, trial: int = 0,
             region_ply: int | None = None) -> TrialResult:
    """Run one tracker on one scenario, validate its output and compare with the optimum."""
    timeline = coverage_timeline(regions, trajectory)
    tracker = make_tracker(tracker_name, seed=seed, coverage=c).fit(regions)
    out = tracker.predict(trajectory)
    if isinstance(out, CoverageSolution):
        violation = validate_c(regions, trajectory, out, timeline=timeline)
        alg = out.total_cost
        opt = greedy_offline_c(timeline, c).total_cost
        steps = []
    else:
        violation = validate(regions, trajectory, out, True, timeline=timeline)
        alg = out.cost
        opt = greedy_offline(timeline).cost
        steps = per_step_counts(out.pairs, tracker.step_times_)
    if violation is not None:
        raise ValidationError(violation)
    m = tracker.f_events_.m if isinstance(tracker, TrilaterationTracker) else None
    k = step_sequence(regions, trajectory).k
    return TrialResult(trial, seed, alg, opt, alg / opt, k,
                       region_ply if region_ply is not None else ply(regions), c, m, steps)


class TrialFailure(RuntimeError):
    def __init__(self, seed, cause):
        super().__init__(f"trial with seed {seed} failed: {cause}")
        self.seed = seed
        self.cause = cause


def run(config: ScenarioConfig | dict) -> ExperimentResult:
    """Run every trial of ``config`` and collect per-trial results."""
    if isinstance(config, dict):
        config = ScenarioConfig(**config)
    seeds = trial_seeds(config.seed, config.trials)
    results = []
    fixed = None
    if config.source == "inline":
        from .io import regions_from_json, trajectory_from_json

        regions = regions_from_json(config.regions)
        traj = trajectory_from_json(config.trajectory)
        fixed = (regions, [traj])
    elif config.source == "tree":
        tree = adversary.interval_tree(int(config.params.get("rho", 8)))
        fixed = (tree.regions, tree.distribution.trajectories)
    elif config.source == "trilat":
        inst = adversary.trilateration_lb(int(config.params.get("rho", 9)), config.coverage)
        fixed = (inst.regions, inst.distribution.trajectories)
    region_ply = ply(fixed[0]) if fixed else None

    for i, seed in enumerate(seeds):
        try:
            if config.source == "flower-adversary":
                results.append(_flower_trial(config, i, seed))
                continue
            if config.source == "rhombi-adversary":
                results.append(_rhombi_trial(config, i, seed))
                continue
            if fixed is not None:
                regions, trajs = fixed
                traj = trajs[i % len(trajs)]
                results.append(evaluate(config.tracker, regions, traj, seed, config.coverage, i, region_ply))
            elif config.source == "random":
                params = dict(config.params)
                params.setdefault("coverage", config.coverage)
                regions, traj = random_scenario(seed, params)
                results.append(evaluate(config.tracker, regions, traj, seed, config.coverage, i))
            else:
                raise ValueError(f"unknown scenario source {config.source!r}")
        except (ValidationError, AssertionError) as exc:
            raise TrialFailure(seed, exc) from exc
    return ExperimentResult(config, results)


def _flower_trial(config, i, seed) -> TrialResult:
    rho = int(config.params.get("rho", 8))
    updates = int(config.params.get("updates", 10 * (rho - 1)))
    res = adversary.run_deterministic_adversary(
        lambda: make_tracker(config.tracker, seed=seed), rho, updates)
    v = validate(res.regions, res.trajectory, res.details["tracking"], True)
    if v is not None:
        raise ValidationError(v)
    k = step_sequence(res.regions, res.trajectory).k
    return TrialResult(i, seed, res.alg_cost, res.opt_cost, res.ratio, k, rho, 1)


def _rhombi_trial(config, i, seed) -> TrialResult:
    rounds = int(config.params.get("rounds", 10))
    res = adversary.run_stateless_adversary(adversary.NearestCenterPolicy, rounds)
    k = step_sequence(res.regions, res.trajectory).k
    return TrialResult(i, seed, res.alg_cost, res.opt_cost, res.ratio, k, ply(res.regions), 1)


def config_from_dict(data: dict) -> ScenarioConfig:
    known = {f for f in ScenarioConfig.__dataclass_fields__}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return ScenarioConfig(**data)


def result_rows(result: ExperimentResult) -> list[dict]:
    return [asdict(t) for t in result.trials]
