import pytest
from hypothesis import given
from hypothesis import strategies as st
from sklearn.base import clone

from handover.events import CoverageError, Trajectory, coverage_timeline, step_sequence
from handover.geometry import Disk, Interval, Region
from handover.harness import random_scenario
from handover.offline import (
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
from handover.online import RandomizedTracker

CHAIN = [Region(0, Interval(0, 2)), Region(1, Interval(1, 4)), Region(2, Interval(1.5, 3)),
         Region(3, Interval(3.5, 6))]
WALK = Trajectory([(0, (0.0,)), (6, (6.0,))])


def test_greedy_prefers_longest_continuation():
    S = greedy_offline(coverage_timeline(CHAIN, WALK))
    assert S.pairs == ((0.0, 0), (2.0, 1), (4.0, 3))
    assert S.cost == 3


def test_single_region_costs_one():
    regions = [Region(7, Disk((0.0, 0.0), 5.0))]
    traj = Trajectory([(0, (0.0, 0.0)), (1, (1.0, 1.0)), (2, (-1.0, 2.0))])
    assert greedy_offline(coverage_timeline(regions, traj)).pairs == ((0.0, 7),)


def test_greedy_rejects_uncovered():
    regions = [Region(0, Interval(0, 1)), Region(1, Interval(2, 3))]
    with pytest.raises(CoverageError):
        greedy_offline(coverage_timeline(regions, Trajectory([(0, (0.0,)), (1, (3.0,))])))


def test_validate_reports_violations():
    assert validate(CHAIN, WALK, TrackingSequence([(0.0, 0), (2.0, 1), (4.0, 3)])) is None
    v = validate(CHAIN, WALK, TrackingSequence([(0.0, 0), (3.0, 1), (4.0, 3)]), require_maximality=False)
    assert v.kind == "containment" and v.region_id == 0
    v = validate(CHAIN, WALK, TrackingSequence([(0.0, 0), (1.5, 1), (4.0, 3)]))
    assert v.kind == "maximality" and v.time == 1.5
    assert validate(CHAIN, WALK, TrackingSequence([(0.0, 0), (1.5, 1), (4.0, 3)]),
                    require_maximality=False) is None
    assert validate(CHAIN, WALK, TrackingSequence([(1.0, 0)])).kind == "start"
    assert validate(CHAIN, WALK, TrackingSequence([(0.0, 0), (0.0, 1)])).kind == "order"
    assert validate(CHAIN, WALK, TrackingSequence([(0.0, 9)])).kind == "unknown-region"
    assert validate(CHAIN, WALK, TrackingSequence([])).kind == "empty"


def test_validate_c_detects_shared_region():
    regions = [Region(0, Interval(0, 10)), Region(1, Interval(0, 10)), Region(2, Interval(0, 10))]
    traj = Trajectory([(0, (1.0,)), (1, (2.0,))])
    good = CoverageSolution([TrackingSequence([(0.0, 0)]), TrackingSequence([(0.0, 1)])])
    bad = CoverageSolution([TrackingSequence([(0.0, 0)]), TrackingSequence([(0.0, 0)])])
    assert validate_c(regions, traj, good) is None
    assert validate_c(regions, traj, bad).kind == "disjointness"


def test_greedy_c_example():
    regions = [Region(0, Interval(0, 3)), Region(1, Interval(0, 1)), Region(2, Interval(0.5, 5)),
               Region(3, Interval(2.5, 5))]
    traj = Trajectory([(0, (0.0,)), (5, (5.0,))])
    tl = coverage_timeline(regions, traj)
    sol = greedy_offline_c(tl, 2)
    assert validate_c(regions, traj, sol, timeline=tl) is None
    assert sol.total_cost == optimal_oracle_c(tl, 2) == 4


def test_greedy_c_needs_enough_regions():
    regions = [Region(0, Interval(0, 3))]
    with pytest.raises(CoverageError):
        greedy_offline_c(coverage_timeline(regions, Trajectory([(0, (0.0,)), (1, (1.0,))])), 2)


def test_oracle_c_refuses_large_instances():
    regions = [Region(i, Interval(0, 10)) for i in range(8)]
    tl = coverage_timeline(regions, Trajectory([(0, (1.0,)), (1, (2.0,))]))
    with pytest.raises(ValueError):
        optimal_oracle_c(tl, 2)


scenario_1d = st.builds(lambda s: random_scenario(s, dict(n=10, segments=6, size=(1.0, 4.0))),
                        st.integers(0, 2**32 - 1))
scenario_2d = st.builds(lambda s: random_scenario(s, dict(shape="disk", d=2, n=8, segments=5,
                                                          size=(1.5, 4.0))),
                        st.integers(0, 2**32 - 1))


@given(st.one_of(scenario_1d, scenario_2d))
def test_greedy_matches_oracle_and_bounds(scenario):
    regions, traj = scenario
    tl = coverage_timeline(regions, traj)
    S = greedy_offline(tl)
    assert validate(regions, traj, S, timeline=tl) is None
    assert S.cost == optimal_oracle(tl)
    assert step_sequence(regions, traj).k <= S.cost


@given(scenario_1d, st.integers(0, 1000))
def test_greedy_handovers_never_earlier(scenario, seed):
    """Greedy reaches at least as far as any valid sequence after the same number of handovers."""
    regions, traj = scenario
    tl = coverage_timeline(regions, traj)
    G = greedy_offline(tl)
    S = RandomizedTracker(random_state=seed).fit(regions).predict(traj)
    assert validate(regions, traj, S, timeline=tl) is None
    for (tg, _), (ts, _) in zip(G.pairs, S.pairs):
        assert tg >= ts


@given(st.integers(0, 2**32 - 1))
def test_greedy_c_matches_exhaustive_oracle(seed):
    regions, traj = random_scenario(seed, dict(n=5, segments=3, coverage=2, size=(3.0, 7.0)))
    tl = coverage_timeline(regions, traj)
    sol = greedy_offline_c(tl, 2)
    assert validate_c(regions, traj, sol, timeline=tl) is None
    assert sol.total_cost == optimal_oracle_c(tl, 2)


def test_estimator_interface():
    est = GreedyOfflineTracker()
    assert est.get_params() == {"coverage": 1}
    fitted = est.fit(CHAIN)
    assert fitted is est
    assert est.predict(WALK).cost == 3
    assert est.score(WALK) == -3
    assert clone(est).get_params() == est.get_params()
    with pytest.raises(Exception):
        clone(est).predict(WALK)
    est2 = GreedyOfflineTracker(coverage=2).fit(CHAIN)
    with pytest.raises(CoverageError):
        est2.predict(WALK)
