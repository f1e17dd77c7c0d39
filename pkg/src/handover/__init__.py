"""Minimum-handover tracking of a moving point through covering regions."""

from .adversary import (
    ConstructionError,
    TrajectoryDistribution,
    exact_randomized_cost,
    flower,
    interval_tree,
    rhombi_construction,
    run_deterministic_adversary,
    run_stateless_adversary,
    trilateration_lb,
    yao_expected_cost,
)
from .events import (
    CoverageError,
    CoverageTimeline,
    Event,
    EventStream,
    Trajectory,
    check_coverage,
    coverage_timeline,
    event_sequence,
    step_sequence,
)
from .geometry import ConvexPolygon, Crossing, DimensionError, Disk, Interval, Region, crossing_times, ply
from .harness import ScenarioConfig, random_scenario, run
from .offline import (
    CoverageSolution,
    GreedyOfflineTracker,
    TrackingSequence,
    greedy_offline,
    greedy_offline_c,
    optimal_oracle,
    optimal_oracle_c,
    validate,
    validate_c,
)
from .online import (
    FirstCandidateTracker,
    IntervalTracker,
    RandomizedTracker,
    StatelessTracker,
    TrilaterationTracker,
    make_tracker,
)

__version__ = "0.1.0"

__all__ = [
    "ConstructionError",
    "ConvexPolygon",
    "CoverageError",
    "CoverageSolution",
    "CoverageTimeline",
    "Crossing",
    "DimensionError",
    "Disk",
    "Event",
    "EventStream",
    "FirstCandidateTracker",
    "GreedyOfflineTracker",
    "Interval",
    "IntervalTracker",
    "RandomizedTracker",
    "Region",
    "ScenarioConfig",
    "StatelessTracker",
    "TrackingSequence",
    "Trajectory",
    "TrajectoryDistribution",
    "TrilaterationTracker",
    "check_coverage",
    "coverage_timeline",
    "crossing_times",
    "event_sequence",
    "exact_randomized_cost",
    "flower",
    "greedy_offline",
    "greedy_offline_c",
    "interval_tree",
    "make_tracker",
    "optimal_oracle",
    "optimal_oracle_c",
    "ply",
    "random_scenario",
    "rhombi_construction",
    "run",
    "run_deterministic_adversary",
    "run_stateless_adversary",
    "step_sequence",
    "trilateration_lb",
    "validate",
    "validate_c",
    "yao_expected_cost",
]
