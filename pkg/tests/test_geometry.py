import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from handover.adversary import flower
from handover.geometry import (
    EPS,
    ConvexPolygon,
    Crossing,
    DimensionError,
    Disk,
    Interval,
    Region,
    boundary_intersections,
    contains,
    crossing_times,
    depth,
    ply,
    segment_inside_range,
)


def test_interval_exit():
    r = Region(0, Interval(0.0, 1.0))
    assert crossing_times(r, 0.0, (0.5,), 1.0, (1.5,)) == [(0.5, Crossing.EXIT)]


def test_disk_enter_and_exit():
    r = Region(0, Disk((0.0, 0.0), 1.0))
    out = crossing_times(r, 0.0, (-2.0, 0.0), 1.0, (2.0, 0.0))
    assert [k for _, k in out] == [Crossing.ENTER, Crossing.EXIT]
    assert out[0][0] == pytest.approx(0.25)
    assert out[1][0] == pytest.approx(0.75)


def test_tangent_segment_has_no_crossings():
    r = Region(0, Disk((0.0, 0.0), 1.0))
    assert crossing_times(r, 0.0, (-2.0, 1.0), 1.0, (2.0, 1.0)) == []


def test_polygon_crossings():
    square = Region(3, ConvexPolygon([(0, 0), (2, 0), (2, 2), (0, 2)]))
    out = crossing_times(square, 0.0, (-1.0, 1.0), 4.0, (3.0, 1.0))
    assert out == [(pytest.approx(1.0), Crossing.ENTER), (pytest.approx(3.0), Crossing.EXIT)]


def test_polygon_requires_counterclockwise_order():
    with pytest.raises(ValueError):
        ConvexPolygon([(0, 0), (0, 2), (2, 2), (2, 0)])


@pytest.mark.parametrize("vertices", [[(0, 0), (1, 0)], [(0, 0), (1, 0), (2, 0)],
                                      [(0, 0), (2, 0), (1, 0.2), (1, 2)]])
def test_polygon_rejects_degenerate_or_nonconvex(vertices):
    with pytest.raises(ValueError):
        ConvexPolygon(vertices)


def test_shape_validation():
    with pytest.raises(ValueError):
        Interval(2.0, 1.0)
    with pytest.raises(ValueError):
        Disk((0.0, 0.0), 0.0)


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        contains(Region(0, Interval(0, 1)), (0.5, 0.5))


def test_closed_containment():
    r = Region(0, Disk((0.0, 0.0), 1.0))
    assert contains(r, (1.0, 0.0))
    assert not contains(r, (1.0 + 1e-6, 0.0))


def test_inside_range_clips_to_segment():
    r = Region(0, Interval(0.0, 1.0))
    assert segment_inside_range(r, 0.0, (0.5,), 2.0, (2.5,)) == (0.0, pytest.approx(0.5))
    assert segment_inside_range(r, 0.0, (2.0,), 1.0, (3.0,)) is None


def test_boundary_intersections_of_circles():
    pts = boundary_intersections(Disk((0, 0), 1.0), Disk((1, 0), 1.0))
    assert len(pts) == 2
    for p in pts:
        assert math.dist(p, (0, 0)) == pytest.approx(1.0)
        assert math.dist(p, (1, 0)) == pytest.approx(1.0)


def test_ply_examples():
    assert ply([Region(0, Interval(0, 2)), Region(1, Interval(1, 3))]) == 2
    assert ply([Region(0, Interval(0, 1)), Region(1, Interval(2, 3))]) == 1
    assert ply([Region(i, Disk((3.0 * i, 0.0), 1.0)) for i in range(4)]) == 1


def test_ply_counts_touching_regions():
    assert ply([Region(0, Interval(0, 1)), Region(1, Interval(1, 2))]) == 2


@pytest.mark.parametrize("rho", [3, 5, 8, 12])
def test_flower_ply(rho):
    assert ply(flower(rho).regions) == rho


segment = st.tuples(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))


@given(segment, st.floats(-1, 1), st.floats(-1, 1), st.floats(0.3, 2.0))
def test_crossings_agree_with_sampling(seg, cx, cy, radius):
    """Containment flips between consecutive crossings exactly as reported."""
    x0, y0, x1, y1 = seg
    if math.dist((x0, y0), (x1, y1)) < 1e-3:
        return
    r = Region(0, Disk((cx, cy), radius))
    p0, p1 = (x0, y0), (x1, y1)
    out = crossing_times(r, 0.0, p0, 1.0, p1)
    times = [0.0] + [t for t, _ in out] + [1.0]
    for a, b in zip(times, times[1:]):
        if b - a < 1e-6:
            continue
        mid = 0.5 * (a + b)
        p = tuple(u + mid * (v - u) for u, v in zip(p0, p1))
        inside = r.shape.contains(p)
        following = [k for t, k in out if t > mid]
        if following:
            assert inside == (following[0] is Crossing.EXIT)


@given(st.lists(st.tuples(st.floats(0, 8), st.floats(0.2, 3)), min_size=1, max_size=8))
def test_ply_matches_grid_sampling(shapes):
    regions = [Region(i, Interval(a, a + w)) for i, (a, w) in enumerate(shapes)]
    grid = np.linspace(-1, 12, 2601)
    sampled = max(depth(regions, (float(x),), eps=0.0) for x in grid)
    assert ply(regions) >= sampled
    # exact: the maximum depth is attained at some left endpoint
    assert ply(regions) == max(depth(regions, (a,), eps=EPS) for a, _ in shapes)


@given(st.lists(st.tuples(st.floats(0, 5), st.floats(0, 5), st.floats(0.5, 2)), min_size=1, max_size=6))
def test_disk_ply_not_below_grid(shapes):
    regions = [Region(i, Disk((x, y), r)) for i, (x, y, r) in enumerate(shapes)]
    xs = np.linspace(-2, 7, 61)
    sampled = max(depth(regions, (float(x), float(y)), eps=0.0) for x in xs for y in xs)
    assert ply(regions) >= sampled
