"""Offline tracking: greedy optimal solvers, exact oracles and validation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from sklearn.base import BaseEstimator

from .events import (
    CoverageError,
    CoverageTimeline,
    Trajectory,
    check_coverage,
    coverage_timeline,
)
from .geometry import EPS, Region
from .utils import check_regions, check_trajectory, check_is_fitted


@dataclass(frozen=True)
class TrackingSequence:
    pairs: tuple = ()

    def __init__(self, pairs=()):
        object.__setattr__(self, "pairs", tuple((float(t), int(r)) for t, r in pairs))

    @property
    def cost(self) -> int:
        return len(self.pairs)

    def __len__(self):
        return len(self.pairs)

    @property
    def regions(self) -> list[int]:
        return [r for _, r in self.pairs]

    def spans(self, end: float):
        """Yield ``(region, t_from, t_to)`` for every pair, the last one running to ``end``."""
        for i, (t, r) in enumerate(self.pairs):
            t_next = self.pairs[i + 1][0] if i + 1 < len(self.pairs) else end
            yield r, t, t_next


@dataclass(frozen=True)
class CoverageSolution:
    sequences: tuple = ()

    def __init__(self, sequences=()):
        object.__setattr__(self, "sequences", tuple(
            s if isinstance(s, TrackingSequence) else TrackingSequence(s) for s in sequences))

    @property
    def c(self) -> int:
        return len(self.sequences)

    @property
    def total_cost(self) -> int:
        return sum(s.cost for s in self.sequences)


@dataclass(frozen=True)
class Violation:
    """First constraint a tracking sequence breaks."""

    kind: str
    time: float | None = None
    region_id: int | None = None
    message: str = ""

    def __str__(self):
        where = []
        if self.time is not None:
            where.append(f"t={self.time:.9g}")
        if self.region_id is not None:
            where.append(f"region={self.region_id}")
        loc = f" ({', '.join(where)})" if where else ""
        return f"{self.kind}{loc}: {self.message}"


class ValidationError(ValueError):
    def __init__(self, violation: Violation):
        super().__init__(str(violation))
        self.violation = violation


def _validate_sequence(timeline: CoverageTimeline, S: TrackingSequence,
                       require_maximality: bool, eps: float = EPS) -> Violation | None:
    if not S.pairs:
        return Violation("empty", message="tracking sequence has no pairs")
    t_first = S.pairs[0][0]
    if abs(t_first - timeline.start) > eps:
        return Violation("start", t_first, S.pairs[0][1],
                         f"first pair must start at the horizon start {timeline.start}")
    for (ta, _), (tb, rb) in zip(S.pairs, S.pairs[1:]):
        if not tb > ta:
            return Violation("order", tb, rb, "pair times must be strictly increasing")
    if S.pairs[-1][0] > timeline.end + eps:
        return Violation("horizon", S.pairs[-1][0], S.pairs[-1][1], "pair starts after the horizon end")
    spans = list(S.spans(timeline.end))
    for i, (r, t0, t1) in enumerate(spans):
        if r not in timeline.intervals:
            return Violation("unknown-region", t0, r, "region does not exist")
        if not timeline.covers(r, t0, t1, eps):
            # locate where containment fails
            t_bad = t0
            for a, b in timeline.intervals[r]:
                if a - eps <= t0 <= b + eps:
                    t_bad = b
                    break
            return Violation("containment", t_bad, r,
                             f"region does not contain the trajectory on [{t0:.9g}, {t1:.9g}]")
        if require_maximality and i + 1 < len(spans):
            exit_time = next(b for a, b in timeline.intervals[r] if a - eps <= t0 and t1 <= b + eps)
            if exit_time > t1 + eps:
                return Violation("maximality", t1, r,
                                 f"region relinquished at {t1:.9g} but still contains the "
                                 f"trajectory until {exit_time:.9g}")
    return None


def validate(regions: Sequence[Region], trajectory: Trajectory, S: TrackingSequence,
             require_maximality: bool = True, timeline: CoverageTimeline | None = None
             ) -> Violation | None:
    """Check a tracking sequence; returns the first violation or None when valid."""
    if timeline is None:
        timeline = coverage_timeline(regions, trajectory)
    return _validate_sequence(timeline, S, require_maximality)


def validate_c(regions: Sequence[Region], trajectory: Trajectory, sol: CoverageSolution,
               timeline: CoverageTimeline | None = None) -> Violation | None:
    """Check containment of every sequence and mutual disjointness of region usage."""
    if timeline is None:
        timeline = coverage_timeline(regions, trajectory)
    if sol.c < 1:
        return Violation("empty", message="a coverage solution needs at least one sequence")
    if sol.c == 1:
        return _validate_sequence(timeline, sol.sequences[0], True)
    for S in sol.sequences:
        v = _validate_sequence(timeline, S, False)
        if v is not None:
            return v
    usage: dict[int, list[tuple[float, float, int]]] = {}
    for k, S in enumerate(sol.sequences):
        for r, t0, t1 in S.spans(timeline.end):
            usage.setdefault(r, []).append((t0, t1, k))
    for r, uses in usage.items():
        uses.sort()
        for (a0, a1, ka), (b0, b1, kb) in itertools.combinations(uses, 2):
            if ka != kb and min(a1, b1) - max(a0, b0) > EPS:
                return Violation("disjointness", max(a0, b0), r,
                                 f"region used by sequences {ka} and {kb} at the same time")
    return None


def _best_available(timeline: CoverageTimeline, t: float, exclude=()) -> tuple[int, float] | None:
    best = None
    for rid in timeline.region_ids:
        if rid in exclude:
            continue
        iv = timeline.interval_at(rid, t)
        if iv is None:
            continue
        # longest continuation first, lower id on ties
        if best is None or iv[1] > best[1]:
            best = (rid, iv[1])
    return best


def greedy_offline(timeline: CoverageTimeline) -> TrackingSequence:
    """Optimal tracking sequence: always switch to the region that stays longest."""
    t = timeline.start
    pairs = []
    while True:
        best = _best_available(timeline, t)
        if best is None:
            raise CoverageError(f"no region contains the trajectory at time {t}")
        pairs.append((t, best[0]))
        if best[1] >= timeline.end:
            return TrackingSequence(pairs)
        t = best[1]


def greedy_offline_c(timeline: CoverageTimeline, c: int) -> CoverageSolution:
    """Optimal set of ``c`` mutually disjoint tracking sequences."""
    if c < 1:
        raise ValueError("coverage must be a positive integer")
    t = timeline.start
    tracks: list[list[tuple[float, int]]] = [[] for _ in range(c)]
    current: list[int | None] = [None] * c
    until = [t] * c
    while True:
        due = [k for k in range(c) if until[k] == t and (current[k] is None or t < timeline.end)]
        if not due:
            break
        busy = {current[k] for k in range(c) if k not in due}
        for k in due:
            best = _best_available(timeline, t, busy)
            if best is None:
                raise CoverageError(f"fewer than {c} regions contain the trajectory at time {t}")
            rid, end = best
            busy.add(rid)
            current[k] = rid
            until[k] = end
            tracks[k].append((t, rid))
        pending = [u for u in until if u < timeline.end]
        if not pending:
            break
        t = min(pending)
    return CoverageSolution([TrackingSequence(p) for p in tracks])


def elementary_intervals(timeline: CoverageTimeline) -> list[tuple[float, float, frozenset]]:
    """Consecutive breakpoint pairs with the regions covering each of them entirely."""
    pts = timeline.breakpoints()
    if len(pts) == 1:
        t = pts[0]
        return [(t, t, frozenset(timeline.covering(t)))]
    out = []
    for a, b in zip(pts, pts[1:]):
        cover = frozenset(rid for rid in timeline.intervals if timeline.covers(rid, a, b, 0.0))
        out.append((a, b, cover))
    return out


def optimal_oracle(timeline: CoverageTimeline) -> int:
    """Minimum tracking cost by dynamic programming over elementary intervals."""
    cells = elementary_intervals(timeline)
    best: dict[int, int] = {}
    for _, _, cover in cells:
        if not cover:
            raise CoverageError("trajectory leaves the union of the regions")
        floor = min(best.values()) + 1 if best else 1
        best = {r: min(best.get(r, floor), floor) for r in cover}
    return min(best.values())


def optimal_oracle_c(timeline: CoverageTimeline, c: int, max_regions: int = 6,
                     max_cells: int = 10) -> int:
    """Exact minimum total cost of ``c`` disjoint sequences; exponential, tiny inputs only."""
    cells = elementary_intervals(timeline)
    if len(timeline.intervals) > max_regions or len(cells) > max_cells:
        raise ValueError(f"instance too large for the exhaustive c-coverage oracle "
                         f"({len(timeline.intervals)} regions, {len(cells)} elementary intervals)")
    best: dict[tuple, int] = {}
    for _, _, cover in cells:
        states = list(itertools.permutations(sorted(cover), c))
        if not states:
            raise CoverageError(f"an elementary interval has fewer than {c} covering regions")
        new = {}
        for state in states:
            if not best:
                new[state] = c
                continue
            new[state] = min(cost + sum(a != b for a, b in zip(prev, state))
                             for prev, cost in best.items())
        best = new
    return min(best.values())


class GreedyOfflineTracker(BaseEstimator):
    """Offline-optimal tracker with an estimator interface.

    ``fit`` takes the region set; ``predict`` takes a whole trajectory and
    returns the optimal :class:`TrackingSequence` (``coverage == 1``) or
    :class:`CoverageSolution`.
    """

    def __init__(self, coverage: int = 1):
        self.coverage = coverage

    def fit(self, regions, y=None):
        self.regions_ = check_regions(regions)
        self.dim_ = self.regions_[0].dim
        return self

    def predict(self, trajectory):
        check_is_fitted(self, "regions_")
        trajectory = check_trajectory(trajectory, self.dim_)
        timeline = coverage_timeline(self.regions_, trajectory)
        if not check_coverage(timeline, self.coverage):
            raise CoverageError(f"trajectory is not covered by {self.coverage} regions throughout")
        if self.coverage == 1:
            return greedy_offline(timeline)
        return greedy_offline_c(timeline, self.coverage)

    def score(self, trajectory):
        """Negative optimal cost, so that higher is better."""
        out = self.predict(trajectory)
        return -(out.cost if isinstance(out, TrackingSequence) else out.total_cost)
