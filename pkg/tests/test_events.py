import pytest
from hypothesis import given
from hypothesis import strategies as st

from handover.events import (
    CoverageError,
    Event,
    EventStream,
    Trajectory,
    check_coverage,
    coverage_timeline,
    event_sequence,
    initial_regions,
    sort_events,
    step_sequence,
)
from handover.geometry import Crossing, DimensionError, Interval, Region
from handover.harness import random_scenario


def test_trajectory_validation():
    with pytest.raises(ValueError):
        Trajectory([])
    with pytest.raises(ValueError):
        Trajectory([(0, (0.0,)), (0, (1.0,))])
    with pytest.raises(DimensionError):
        Trajectory([(0, (0.0,)), (1, (1.0, 2.0))])


def test_trajectory_interpolates():
    traj = Trajectory([(0, (0.0, 0.0)), (2, (2.0, 4.0))])
    assert traj(1.0) == (1.0, 2.0)
    assert traj(5.0) == (2.0, 4.0)


def test_simultaneous_events_exit_first():
    events = [Event(1.0, 2, Crossing.ENTER), Event(1.0, 5, Crossing.EXIT), Event(1.0, 1, Crossing.EXIT)]
    assert [(e.region_id, e.kind) for e in sort_events(events)] == [
        (1, Crossing.EXIT), (5, Crossing.EXIT), (2, Crossing.ENTER)]


def test_one_dimensional_example(two_intervals):
    traj = Trajectory([(0, (0.0,)), (3, (3.0,))])
    events = event_sequence(two_intervals, traj)
    assert [(e.time, e.region_id, e.kind) for e in events] == [
        (1.0, 1, Crossing.ENTER), (2.0, 0, Crossing.EXIT)]
    assert initial_regions(two_intervals, traj) == {0}


def test_initial_regions_use_right_neighbourhood():
    regions = [Region(0, Interval(-1, 0)), Region(1, Interval(0, 1))]
    traj = Trajectory([(0, (0.0,)), (1, (1.0,))])
    assert initial_regions(regions, traj) == {1}
    timeline = coverage_timeline(regions, traj)
    assert timeline.active(0.0) == {1}
    # a single touching instant is not a containment interval
    assert timeline.intervals[0] == []


def test_exit_at_a_sample_point():
    regions = [Region(0, Interval(0, 1)), Region(1, Interval(0, 3))]
    traj = Trajectory([(0, (0.5,)), (1, (1.0,)), (2, (2.0,))])
    events = event_sequence(regions, traj)
    assert events == [Event(1.0, 0, Crossing.EXIT)]


def test_touch_and_return_produces_no_events():
    regions = [Region(0, Interval(0, 1))]
    traj = Trajectory([(0, (0.5,)), (1, (1.0,)), (2, (0.5,))])
    assert event_sequence(regions, traj) == []


def test_coverage_timeline_intervals():
    regions = [Region(0, Interval(0, 1)), Region(1, Interval(0.5, 3))]
    traj = Trajectory([(0, (0.0,)), (2, (2.0,)), (4, (0.0,))])
    tl = coverage_timeline(regions, traj)
    assert tl.intervals[0] == [(0.0, 1.0), (3.0, 4.0)]
    assert tl.intervals[1] == [(0.5, 3.5)]
    assert check_coverage(tl, 1)
    assert not check_coverage(tl, 2)


def test_gap_in_coverage_detected():
    regions = [Region(0, Interval(0, 1)), Region(1, Interval(2, 3))]
    traj = Trajectory([(0, (0.0,)), (3, (3.0,))])
    assert not check_coverage(coverage_timeline(regions, traj), 1)
    with pytest.raises(CoverageError):
        step_sequence(regions, traj)


def test_steps_single_region_covers_all():
    regions = [Region(0, Interval(-10, 10)), Region(1, Interval(0, 1))]
    traj = Trajectory([(0, (0.0,)), (1, (5.0,))])
    assert step_sequence(regions, traj).k == 1


def test_step_sequence_example():
    regions = [Region(0, Interval(0, 2)), Region(1, Interval(1, 3)), Region(2, Interval(2.5, 5))]
    traj = Trajectory([(0, (0.0,)), (5, (5.0,))])
    steps = step_sequence(regions, traj)
    assert steps.times == [0.0, 2.0, 3.0]
    assert [s.regions for s in steps.steps] == [{0}, {1}, {2}]


def test_single_sample_trajectory():
    regions = [Region(0, Interval(0, 1)), Region(1, Interval(1, 2))]
    traj = Trajectory([(0, (1.0,))])
    assert initial_regions(regions, traj) == {0, 1}
    assert step_sequence(regions, traj).k == 1


def test_stream_rejects_time_reversal():
    stream = EventStream([Region(0, Interval(0, 1))], 0.0, (0.5,))
    stream.extend(1.0, (0.6,))
    with pytest.raises(ValueError):
        stream.extend(1.0, (0.7,))


@given(st.integers(0, 10_000), st.sampled_from(["interval", "disk", "polygon"]))
def test_incremental_stream_matches_batch(seed, shape):
    regions, traj = random_scenario(seed, dict(shape=shape, d=1 if shape == "interval" else 2,
                                               n=6, segments=4, size=(2.0, 5.0)))
    stream = EventStream(regions, *traj.samples[0])
    events = []
    for t, p in traj.samples[1:]:
        events.extend(stream.extend(t, p))
    assert events == event_sequence(regions, traj)
    assert events == sort_events(events)
    assert all(traj.start <= e.time <= traj.end for e in events)


@given(st.integers(0, 10_000))
def test_events_alternate_per_region(seed):
    regions, traj = random_scenario(seed, dict(shape="disk", d=2, n=6, segments=5, size=(1.0, 3.0)))
    inside = {r.id: r.id in initial_regions(regions, traj) for r in regions}
    for e in event_sequence(regions, traj):
        assert inside[e.region_id] == (e.kind is Crossing.EXIT)
        inside[e.region_id] = e.kind is Crossing.ENTER


@given(st.integers(0, 10_000))
def test_timeline_agrees_with_point_sampling(seed):
    regions, traj = random_scenario(seed, dict(shape="disk", d=2, n=5, segments=3, size=(1.0, 3.0)))
    tl = coverage_timeline(regions, traj)
    for i in range(1, 200):
        t = traj.start + (traj.end - traj.start) * i / 200
        p = traj(t)
        truly = {r.id for r in regions if r.shape.contains(p, eps=-1e-7)}
        assert truly <= tl.covering(t)
        assert tl.covering(t) <= {r.id for r in regions if r.shape.contains(p, eps=1e-7)}
