"""Online trackers driven by the enter/exit event stream.

Every tracker is an estimator: ``fit`` stores the region set and
``predict`` runs the tracker over a whole trajectory. The underlying state
machine (``start`` / ``on_event`` / ``flush`` / ``finish``) can also be
driven one event at a time, which is how the adversaries use it.

Decisions are taken once all events sharing a timestamp have been seen,
so simultaneous exits never produce two pairs with the same time.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Callable

from sklearn.base import BaseEstimator

from .events import CoverageError, Event, EventStream
from .geometry import Crossing, DimensionError, Interval, as_point
from .offline import CoverageSolution, TrackingSequence
from .utils import check_is_fitted, check_random_state, check_regions, check_trajectory


@dataclass
class FEventLog:
    """Exits of fixed sensors recorded by the trilateration tracker."""

    events: list = field(default_factory=list)
    step_times: list = field(default_factory=list)

    @property
    def per_step(self) -> list[int]:
        # the first step is charged one unit for the initial assignment
        counts = [0] * len(self.step_times)
        if counts:
            counts[0] = 1
        for t, _ in self.events:
            counts[bisect.bisect_right(self.step_times, t) - 1] += 1
        return counts

    @property
    def m(self) -> int:
        return sum(self.per_step)


def f_event_bound_check(log: FEventLog, opt_cost: int, c: int) -> bool:
    """Optimal cost is within ``[m/2 - c, m + c]`` of the F-event count ``m``."""
    m = log.m
    return m / 2 - c <= opt_cost <= m + c


class OnlineTracker(BaseEstimator):
    """Common state machine of the candidate-set trackers.

    Subclasses only decide which candidate to pick.
    """

    deterministic = True

    def fit(self, regions, y=None):
        self.regions_ = check_regions(regions)
        self.dim_ = self.regions_[0].dim
        self.region_ids_ = frozenset(r.id for r in self.regions_)
        return self

    # state machine

    def start(self, t0: float, point=None, active=None, locate: Callable | None = None, rng=None):
        """Reset the tracker at time ``t0``.

        ``active`` is the set of regions containing the trajectory just after
        ``t0``; when omitted it is computed from ``point``. ``locate`` maps a
        time to a position and is only needed by location-based policies.
        """
        check_is_fitted(self, "regions_")
        if active is None:
            point = as_point(point)
            active = {r.id for r in self.regions_ if r.shape.contains(point)}
        self.time_ = float(t0)
        self.inside_ = set(active)
        self.locate_ = locate
        self.step_times_ = []
        self.candidates_ = set()
        self.pairs_ = []
        self.rng_ = rng if rng is not None else check_random_state(getattr(self, "random_state", None))
        self._batch_exits = set()
        self._next_step(self.time_)
        self._pick(self.time_)
        return self

    def on_event(self, event: Event):
        if event.region_id not in self.region_ids_:
            raise ValueError(f"event for unknown region {event.region_id}")
        if event.time < self.time_:
            raise ValueError(f"event at {event.time} arrived after time {self.time_}")
        if event.time > self.time_:
            self.flush()
            self.time_ = event.time
        if event.kind is Crossing.ENTER:
            self.inside_.add(event.region_id)
        else:
            self.inside_.discard(event.region_id)
            self._batch_exits.add(event.region_id)
            self.candidates_.discard(event.region_id)

    def flush(self):
        """Take the decisions due for the events seen at the current time."""
        if self._batch_exits:
            self._resolve(self.time_)
            self._batch_exits = set()

    def finish(self):
        self.flush()
        return TrackingSequence(self.pairs_)

    @property
    def current_(self):
        return self.pairs_[-1][1] if self.pairs_ else None

    def _next_step(self, t):
        if not self.inside_:
            raise CoverageError(f"no region contains the trajectory at time {t}")
        self.step_times_.append(t)
        self.candidates_ = set(self.inside_)

    def _pick(self, t):
        choice = self._choose(t)
        if choice != self.current_:
            self.pairs_.append((t, choice))

    def _resolve(self, t):
        if not self.candidates_:
            self._next_step(t)
        if self.current_ not in self.candidates_:
            self._pick(t)

    def _choose(self, t) -> int:
        raise NotImplementedError

    # estimator interface

    def predict(self, trajectory):
        """Run the tracker over ``trajectory`` and return its tracking sequence."""
        check_is_fitted(self, "regions_")
        trajectory = check_trajectory(trajectory, self.dim_)
        t0, p0 = trajectory.samples[0]
        stream = EventStream(self.regions_, t0, p0)
        events = []
        for t, p in trajectory.samples[1:]:
            events.extend(stream.extend(t, p))
        return self.run_events(t0, stream.initial_regions(), events, locate=trajectory)

    def run_events(self, t0, active, events, locate=None, rng=None):
        """Replay a precomputed event list from scratch and return the output."""
        self.start(t0, active=active, locate=locate, rng=rng)
        for e in events:
            self.on_event(e)
        return self.finish()

    def cost(self, trajectory) -> int:
        out = self.predict(trajectory)
        return out.cost if isinstance(out, TrackingSequence) else out.total_cost


class RandomizedTracker(OnlineTracker):
    """Picks a uniformly random candidate; expected cost O(k log ply)."""

    deterministic = False

    def __init__(self, random_state=None):
        self.random_state = random_state

    def _choose(self, t):
        pool = sorted(self.candidates_)
        return pool[int(self.rng_.integers(len(pool)))]


class FirstCandidateTracker(OnlineTracker):
    """Picks the candidate with the smallest region id; cost at most k * ply."""

    def _choose(self, t):
        return min(self.candidates_)


class IntervalTracker(OnlineTracker):
    """One-dimensional tracker picking a candidate central in both endpoint orders.

    Each candidate is ranked by its left endpoint (left to right) and by
    its right endpoint (right to left); the candidate with the smallest
    worse rank is chosen. Within one step the candidate set at least halves
    at every handover, so a step costs at most ``floor(log2 ply) + 1``.
    """

    def fit(self, regions, y=None):
        super().fit(regions)
        if self.dim_ != 1:
            raise DimensionError("IntervalTracker only applies to one-dimensional scenarios")
        for r in self.regions_:
            if not isinstance(r.shape, Interval):
                raise TypeError(f"region {r.id} is not an interval")
        self.shapes_ = {r.id: r.shape for r in self.regions_}
        return self

    def _choose(self, t):
        pool = self.candidates_
        by_left = sorted(pool, key=lambda r: (self.shapes_[r].lo, r))
        by_right = sorted(pool, key=lambda r: (-self.shapes_[r].hi, r))
        rank_l = {r: i for i, r in enumerate(by_left)}
        rank_r = {r: i for i, r in enumerate(by_right)}
        return min(pool, key=lambda r: (max(rank_l[r], rank_r[r]), r))


class StatelessTracker(OnlineTracker):
    """Hands over according to a policy of the current location alone.

    ``policy(point, containing)`` returns one id of ``containing``.
    """

    def __init__(self, policy=None):
        self.policy = policy

    def _resolve(self, t):
        if self.current_ not in self.inside_:
            self._pick(t)

    def _next_step(self, t):
        if not self.inside_:
            raise CoverageError(f"no region contains the trajectory at time {t}")
        self.step_times_.append(t)

    def _choose(self, t):
        if self.locate_ is None:
            raise ValueError("a stateless tracker needs the trajectory position (locate)")
        containing = frozenset(self.inside_)
        choice = self.policy(self.locate_(t), containing)
        if choice not in containing:
            raise ValueError(f"policy chose region {choice}, which does not contain the point")
        return choice


class TrilaterationTracker(OnlineTracker):
    """Randomized tracker keeping ``coverage`` distinct regions assigned at all times.

    An exited assigned region is replaced by a random unused candidate; when
    fewer than ``coverage`` candidates remain a new step begins. Exits of
    sensors marked fixed at a step rollover are logged in ``f_events_``.
    """

    deterministic = False

    def __init__(self, coverage: int = 2, random_state=None):
        self.coverage = coverage
        self.random_state = random_state

    def start(self, t0, point=None, active=None, locate=None, rng=None):
        check_is_fitted(self, "regions_")
        if self.coverage < 1:
            raise ValueError("coverage must be a positive integer")
        self.slots_ = [None] * self.coverage
        self.tracks_ = [[] for _ in range(self.coverage)]
        self.fixed_ = set()
        self.f_events_ = FEventLog()
        super().start(t0, point, active, locate, rng)
        self.f_events_.step_times = self.step_times_
        return self

    def _next_step(self, t):
        if len(self.inside_) < self.coverage:
            raise CoverageError(f"fewer than {self.coverage} regions contain the trajectory at time {t}")
        self.step_times_.append(t)
        self.candidates_ = set(self.inside_)

    def _pick(self, t):
        for k, r in enumerate(self.slots_):
            if r is not None:
                continue
            pool = sorted(self.candidates_.difference(self.slots_))
            choice = pool[int(self.rng_.integers(len(pool)))]
            self.slots_[k] = choice
            self.tracks_[k].append((t, choice))

    def _resolve(self, t):
        exited = self._batch_exits
        assigned = set(self.slots_)
        rollover = len(self.candidates_) < self.coverage
        logged = exited & (assigned if rollover else self.fixed_)
        for r in sorted(logged):
            self.f_events_.events.append((t, r))
        if rollover:
            self.fixed_ = assigned - exited
            self._next_step(t)
        else:
            self.fixed_ -= exited
        self.slots_ = [None if r in exited else r for r in self.slots_]
        self._pick(t)

    @property
    def current_(self):
        return None

    def finish(self):
        self.flush()
        return CoverageSolution([TrackingSequence(p) for p in self.tracks_])


TRACKERS = {
    "random": RandomizedTracker,
    "det-first": FirstCandidateTracker,
    "det-1d": IntervalTracker,
    "trilat": TrilaterationTracker,
}


def make_tracker(name: str, seed=None, coverage: int = 1) -> OnlineTracker:
    """Build an unfitted tracker from its command-line name."""
    if name not in TRACKERS:
        raise ValueError(f"unknown tracker {name!r}; choose from {sorted(TRACKERS)}")
    if name == "random":
        return RandomizedTracker(random_state=seed)
    if name == "trilat":
        return TrilaterationTracker(coverage=coverage, random_state=seed)
    return TRACKERS[name]()
