"""Trajectories, the enter/exit event stream, coverage timelines and steps.

A trajectory is piecewise linear between timestamped samples. Region
containment along it is described in two equivalent ways: the sorted
event stream an online algorithm consumes, and the per-region list of
closed containment intervals that the offline solvers work with.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .geometry import EPS, Crossing, DimensionError, Region, as_point, segment_inside_range


class CoverageError(ValueError):
    """Raised when the trajectory is not covered by enough regions."""


@dataclass(frozen=True)
class Trajectory:
    samples: tuple

    def __init__(self, samples):
        samples = tuple((float(t), as_point(p)) for t, p in samples)
        object.__setattr__(self, "samples", samples)
        if not samples:
            raise ValueError("a trajectory needs at least one sample")
        times = [t for t, _ in samples]
        if not all(math.isfinite(t) for t in times):
            raise ValueError("sample times must be finite")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("sample times must be strictly increasing")
        if len({len(p) for _, p in samples}) != 1:
            raise DimensionError("all trajectory samples must share one dimension")

    @property
    def dim(self) -> int:
        return len(self.samples[0][1])

    @property
    def start(self) -> float:
        return self.samples[0][0]

    @property
    def end(self) -> float:
        return self.samples[-1][0]

    @property
    def times(self) -> list[float]:
        return [t for t, _ in self.samples]

    def segments(self):
        for (t0, p0), (t1, p1) in zip(self.samples, self.samples[1:]):
            yield t0, p0, t1, p1

    def __call__(self, t: float):
        """Position at time ``t`` (clamped to the horizon)."""
        times = self.times
        if t <= times[0]:
            return self.samples[0][1]
        if t >= times[-1]:
            return self.samples[-1][1]
        i = bisect.bisect_right(times, t) - 1
        (t0, p0), (t1, p1) = self.samples[i], self.samples[i + 1]
        w = (t - t0) / (t1 - t0)
        return tuple(a + w * (b - a) for a, b in zip(p0, p1))


@dataclass(frozen=True)
class Event:
    time: float
    region_id: int
    kind: Crossing

    @property
    def sort_key(self):
        return (self.time, self.kind.order, self.region_id)


def sort_events(events: Iterable[Event]) -> list[Event]:
    return sorted(events, key=lambda e: e.sort_key)


class EventStream:
    """Incremental event extraction as the trajectory is extended piece by piece.

    Crossings at a sample point depend on the piece that follows it, so
    events at a junction are emitted together with the next piece.
    """

    def __init__(self, regions: Sequence[Region], t0: float, p0, eps: float = EPS):
        self.regions = list(regions)
        self.eps = eps
        self.time = float(t0)
        self.point = as_point(p0)
        for r in self.regions:
            if r.dim != len(self.point):
                raise DimensionError(f"region {r.id} does not match trajectory dimension")
        # containment on a left neighbourhood of the current endpoint; None before
        # the first piece arrives
        self._left_state: dict[int, bool] | None = None
        self.initial: frozenset[int] | None = None

    def extend(self, t1: float, p1) -> list[Event]:
        t1, p1 = float(t1), as_point(p1)
        if not t1 > self.time:
            raise ValueError(f"trajectory times must increase: {t1} after {self.time}")
        t0, p0 = self.time, self.point
        events = []
        right_state = {}
        end_state = {}
        for r in self.regions:
            rng = segment_inside_range(r, t0, p0, t1, p1, self.eps)
            right_state[r.id] = rng is not None and rng[0] == t0
            end_state[r.id] = rng is not None and rng[1] == t1
            if rng is not None:
                a, b = rng
                if a > t0:
                    events.append(Event(a, r.id, Crossing.ENTER))
                if b < t1:
                    events.append(Event(b, r.id, Crossing.EXIT))
        if self._left_state is None:
            self.initial = frozenset(rid for rid, inside in right_state.items() if inside)
        else:
            for rid, inside in right_state.items():
                was = self._left_state[rid]
                if was and not inside:
                    events.append(Event(t0, rid, Crossing.EXIT))
                elif inside and not was:
                    events.append(Event(t0, rid, Crossing.ENTER))
        self._left_state = end_state
        self.time, self.point = t1, p1
        return sort_events(events)

    def initial_regions(self) -> frozenset[int]:
        if self.initial is None:
            # single-point trajectory: plain closed containment
            return frozenset(r.id for r in self.regions if r.shape.contains(self.point, self.eps))
        return self.initial


def _stream(regions, trajectory: Trajectory) -> tuple[EventStream, list[Event]]:
    if any(r.dim != trajectory.dim for r in regions):
        raise DimensionError("regions and trajectory have different dimensions")
    t0, p0 = trajectory.samples[0]
    stream = EventStream(regions, t0, p0)
    events = []
    for t, p in trajectory.samples[1:]:
        events.extend(stream.extend(t, p))
    return stream, events


def event_sequence(regions: Sequence[Region], trajectory: Trajectory) -> list[Event]:
    """Sorted enter/exit events of ``trajectory`` after its start time."""
    return _stream(regions, trajectory)[1]


def initial_regions(regions: Sequence[Region], trajectory: Trajectory) -> frozenset[int]:
    """Regions containing the trajectory on a right neighbourhood of its start."""
    return _stream(regions, trajectory)[0].initial_regions()


@dataclass
class CoverageTimeline:
    """Per-region maximal closed containment intervals over a finite horizon."""

    intervals: dict[int, list[tuple[float, float]]]
    start: float
    end: float

    @property
    def region_ids(self) -> list[int]:
        return sorted(self.intervals)

    def breakpoints(self) -> list[float]:
        pts = {self.start, self.end}
        for ivs in self.intervals.values():
            for a, b in ivs:
                pts.add(a)
                pts.add(b)
        return sorted(pts)

    def interval_at(self, region_id: int, t: float) -> tuple[float, float] | None:
        """Containment interval of ``region_id`` that contains ``t`` and continues past it.

        At the horizon end any interval reaching the end qualifies.
        """
        for a, b in self.intervals.get(region_id, ()):
            if a <= t < b or (t == b == self.end and a <= t):
                return (a, b)
        return None

    def active(self, t: float) -> set[int]:
        """Regions usable at time ``t``: they contain the trajectory just after ``t``."""
        return {rid for rid in self.intervals if self.interval_at(rid, t) is not None}

    def covering(self, t: float) -> set[int]:
        """Regions whose closed intervals contain ``t``."""
        return {rid for rid, ivs in self.intervals.items() if any(a <= t <= b for a, b in ivs)}

    def covers(self, region_id: int, t0: float, t1: float, eps: float = EPS) -> bool:
        return any(a - eps <= t0 and t1 <= b + eps for a, b in self.intervals.get(region_id, ()))


def timeline_from_events(region_ids: Iterable[int], initial: Iterable[int],
                         events: Iterable[Event], start: float, end: float) -> CoverageTimeline:
    inside_since = {rid: start for rid in initial}
    intervals: dict[int, list[tuple[float, float]]] = {rid: [] for rid in region_ids}
    for e in sort_events(events):
        if e.kind is Crossing.ENTER:
            inside_since[e.region_id] = e.time
        else:
            intervals[e.region_id].append((inside_since.pop(e.region_id), e.time))
    for rid, t in inside_since.items():
        intervals[rid].append((t, end))
    return CoverageTimeline(intervals, start, end)


def coverage_timeline(regions: Sequence[Region], trajectory: Trajectory) -> CoverageTimeline:
    """Maximal containment intervals of every region along ``trajectory``."""
    stream, events = _stream(regions, trajectory)
    return timeline_from_events([r.id for r in regions], stream.initial_regions(), events,
                                trajectory.start, trajectory.end)


def coverage_depths(timeline: CoverageTimeline) -> list[tuple[float, int]]:
    """Coverage count at every breakpoint and at every elementary-interval midpoint."""
    pts = timeline.breakpoints()
    probes = list(pts) + [0.5 * (a + b) for a, b in zip(pts, pts[1:])]
    return [(t, len(timeline.covering(t))) for t in sorted(probes)]


def check_coverage(timeline: CoverageTimeline, c: int) -> bool:
    """True iff at least ``c`` regions cover every instant of the horizon."""
    if c < 1:
        raise ValueError("coverage must be a positive integer")
    return all(n >= c for _, n in coverage_depths(timeline))


@dataclass
class Step:
    time: float
    point: tuple
    regions: frozenset


@dataclass
class StepSequence:
    steps: list[Step] = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.steps)

    @property
    def times(self) -> list[float]:
        return [s.time for s in self.steps]


def steps_from_timeline(timeline: CoverageTimeline) -> list[tuple[float, frozenset]]:
    t = timeline.start
    out = []
    while True:
        active = frozenset(timeline.active(t))
        if not active:
            raise CoverageError(f"no region contains the trajectory at time {t}")
        out.append((t, active))
        nxt = max(timeline.interval_at(rid, t)[1] for rid in active)
        if nxt >= timeline.end:
            return out
        t = nxt


def step_sequence(regions: Sequence[Region], trajectory: Trajectory) -> StepSequence:
    """Times at which the trajectory has left every region of the previous step.

    The number of steps ``k`` is a lower bound on the cost of every valid
    tracking sequence.
    """
    timeline = coverage_timeline(regions, trajectory)
    return StepSequence([Step(t, trajectory(t), ids) for t, ids in steps_from_timeline(timeline)])
