"""Region shapes, closed-set containment and segment/boundary crossings.

Every supported shape is convex, so the part of a straight segment that
lies inside a region is always a single closed parameter interval. All
crossing logic is built on top of :meth:`Shape.clip`, which returns that
interval for the supporting line of a segment.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

EPS = 1e-9

Point = tuple


def as_point(coords) -> Point:
    """Convert a scalar or a sequence of coordinates to a point tuple."""
    if isinstance(coords, (int, float)):
        coords = (coords,)
    point = tuple(float(c) for c in coords)
    if not point or len(point) > 2:
        raise ValueError(f"points must have 1 or 2 coordinates, got {len(point)}")
    if not all(math.isfinite(c) for c in point):
        raise ValueError(f"point coordinates must be finite: {point}")
    return point


class DimensionError(ValueError):
    """Raised when a point, segment or region of the wrong dimension is used."""


class Crossing(enum.Enum):
    EXIT = "exit"
    ENTER = "enter"

    @property
    def order(self) -> int:
        # exits sort before enters at equal times
        return 0 if self is Crossing.EXIT else 1


class Shape:
    dim: int

    def contains(self, point: Point, eps: float = EPS) -> bool:
        raise NotImplementedError

    def clip(self, origin: Point, direction: Point) -> tuple[float, float] | None:
        """Parameter range ``[a, b]`` of ``origin + s * direction`` inside the shape.

        Bounds may be infinite. Returns None when the line misses the shape
        or only touches it (tangency).
        """
        raise NotImplementedError

    def centroid(self) -> Point:
        raise NotImplementedError

    def boundary_points(self) -> list[Point]:
        """Distinguished points on or in the shape used as ply witnesses."""
        return [self.centroid()]


@dataclass(frozen=True)
class Interval(Shape):
    lo: float
    hi: float
    dim = 1

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("interval endpoints must be finite")
        if not self.lo < self.hi:
            raise ValueError(f"interval needs lo < hi, got [{self.lo}, {self.hi}]")

    def contains(self, point, eps=EPS):
        x = point[0]
        return self.lo - eps <= x <= self.hi + eps

    def clip(self, origin, direction):
        x0, dx = origin[0], direction[0]
        if abs(dx) < 1e-300:
            return (-math.inf, math.inf) if self.lo <= x0 <= self.hi else None
        s_lo = (self.lo - x0) / dx
        s_hi = (self.hi - x0) / dx
        return (min(s_lo, s_hi), max(s_lo, s_hi))

    def centroid(self):
        return (0.5 * (self.lo + self.hi),)

    def boundary_points(self):
        return [(self.lo,), (self.hi,)]


@dataclass(frozen=True)
class Disk(Shape):
    center: Point
    radius: float
    dim = 2

    def __init__(self, center, radius):
        object.__setattr__(self, "center", as_point(center))
        object.__setattr__(self, "radius", float(radius))
        if len(self.center) != 2:
            raise ValueError("disk center must be 2-dimensional")
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"disk radius must be positive, got {radius}")

    def contains(self, point, eps=EPS):
        dx = point[0] - self.center[0]
        dy = point[1] - self.center[1]
        return math.hypot(dx, dy) <= self.radius + eps

    def clip(self, origin, direction):
        qx = origin[0] - self.center[0]
        qy = origin[1] - self.center[1]
        vx, vy = direction
        a = vx * vx + vy * vy
        b = 2.0 * (qx * vx + qy * vy)
        c = qx * qx + qy * qy - self.radius * self.radius
        if a < 1e-300:
            return (-math.inf, math.inf) if c <= 0 else None
        disc = b * b - 4.0 * a * c
        if disc <= 0:
            return None
        root = math.sqrt(disc)
        # numerically stable pair of roots
        q = -0.5 * (b + math.copysign(root, b))
        s1 = q / a
        s2 = c / q if q != 0 else -s1
        return (min(s1, s2), max(s1, s2))

    def centroid(self):
        return self.center


@dataclass(frozen=True)
class ConvexPolygon(Shape):
    vertices: tuple
    dim = 2

    def __init__(self, vertices):
        verts = tuple(as_point(v) for v in vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 3:
            raise ValueError("a polygon needs at least 3 vertices")
        if any(len(v) != 2 for v in verts):
            raise ValueError("polygon vertices must be 2-dimensional")
        if len(set(verts)) != len(verts):
            raise ValueError("polygon has repeated vertices")
        n = len(verts)
        for i in range(n):
            (ax, ay), (bx, by), (cx, cy) = verts[i], verts[(i + 1) % n], verts[(i + 2) % n]
            cross = (bx - ax) * (cy - by) - (by - ay) * (cx - bx)
            if cross <= 0:
                raise ValueError("polygon vertices must be strictly convex and counterclockwise")

    def _edges(self):
        n = len(self.vertices)
        for i in range(n):
            yield self.vertices[i], self.vertices[(i + 1) % n]

    def contains(self, point, eps=EPS):
        px, py = point
        for (ax, ay), (bx, by) in self._edges():
            ex, ey = bx - ax, by - ay
            # signed distance to the edge line, positive outside
            dist = ((px - ax) * ey - (py - ay) * ex) / math.hypot(ex, ey)
            if dist > eps:
                return False
        return True

    def clip(self, origin, direction):
        lo, hi = -math.inf, math.inf
        ox, oy = origin
        vx, vy = direction
        for (ax, ay), (bx, by) in self._edges():
            nx, ny = by - ay, -(bx - ax)  # outward normal for ccw order
            num = nx * (ox - ax) + ny * (oy - ay)
            den = nx * vx + ny * vy
            if abs(den) < 1e-300:
                if num > 0:
                    return None
                continue
            s = -num / den
            if den > 0:
                hi = min(hi, s)
            else:
                lo = max(lo, s)
        if lo >= hi:
            return None
        return (lo, hi)

    def centroid(self):
        n = len(self.vertices)
        return (sum(v[0] for v in self.vertices) / n, sum(v[1] for v in self.vertices) / n)

    def boundary_points(self):
        return list(self.vertices) + [self.centroid()]


@dataclass(frozen=True)
class Region:
    id: int
    shape: Shape

    @property
    def dim(self) -> int:
        return self.shape.dim


def contains(region: Region, point, eps: float = EPS) -> bool:
    """Closed-set membership test (boundary inclusive, with tolerance ``eps``)."""
    point = as_point(point)
    if len(point) != region.dim:
        raise DimensionError(
            f"region {region.id} is {region.dim}-dimensional, point has {len(point)} coordinates"
        )
    return region.shape.contains(point, eps)


def segment_inside_range(region: Region, t0: float, p0, t1: float, p1,
                         eps: float = EPS) -> tuple[float, float] | None:
    """Time range ``[a, b]`` (clipped to ``[t0, t1]``) during which a segment is inside.

    Times within ``eps`` of a segment endpoint are snapped onto it. Ranges
    shorter than ``eps`` are tangencies and reported as None.
    """
    p0, p1 = as_point(p0), as_point(p1)
    if len(p0) != region.dim or len(p1) != region.dim:
        raise DimensionError(f"segment dimension does not match region {region.id}")
    if not t0 < t1:
        return None
    direction = tuple(b - a for a, b in zip(p0, p1))
    clipped = region.shape.clip(p0, direction)
    if clipped is None:
        return None
    span = t1 - t0
    a = t0 + clipped[0] * span if math.isfinite(clipped[0]) else -math.inf
    b = t0 + clipped[1] * span if math.isfinite(clipped[1]) else math.inf
    if abs(a - t0) <= eps:
        a = t0
    if abs(a - t1) <= eps:
        a = t1
    if abs(b - t1) <= eps:
        b = t1
    if abs(b - t0) <= eps:
        b = t0
    a, b = max(a, t0), min(b, t1)
    if b - a <= eps:
        return None
    return (a, b)


def crossing_times(region: Region, t0: float, p0, t1: float, p1,
                   eps: float = EPS) -> list[tuple[float, Crossing]]:
    """Boundary crossings of the segment ``(t0, p0) -> (t1, p1)``.

    The containment state at ``t0`` is taken on the right (the state just
    after ``t0``), so the returned crossings lie strictly inside the open
    interval ``(t0, t1)`` and alternate starting from that state. A
    crossing that falls exactly on ``t1`` belongs to the junction with
    the next segment and is not reported here.
    """
    inside = segment_inside_range(region, t0, p0, t1, p1, eps)
    if inside is None:
        return []
    a, b = inside
    out = []
    if a > t0:
        out.append((a, Crossing.ENTER))
    if b < t1:
        out.append((b, Crossing.EXIT))
    return out


def _circle_circle(c1, r1, c2, r2):
    dx, dy = c2[0] - c1[0], c2[1] - c1[1]
    d = math.hypot(dx, dy)
    if d == 0 or d > r1 + r2 + EPS or d < abs(r1 - r2) - EPS:
        return []
    a = (r1 * r1 - r2 * r2 + d * d) / (2 * d)
    h = math.sqrt(max(r1 * r1 - a * a, 0.0))
    mx, my = c1[0] + a * dx / d, c1[1] + a * dy / d
    return [(mx + h * dy / d, my - h * dx / d), (mx - h * dy / d, my + h * dx / d)]


def _circle_segment(c, r, p, q):
    vx, vy = q[0] - p[0], q[1] - p[1]
    fx, fy = p[0] - c[0], p[1] - c[1]
    a = vx * vx + vy * vy
    b = 2 * (fx * vx + fy * vy)
    cc = fx * fx + fy * fy - r * r
    disc = b * b - 4 * a * cc
    if disc < 0:
        return []
    root = math.sqrt(disc)
    pts = []
    for s in ((-b - root) / (2 * a), (-b + root) / (2 * a)):
        if -EPS <= s <= 1 + EPS:
            pts.append((p[0] + s * vx, p[1] + s * vy))
    return pts


def _segment_segment(p, q, u, v):
    rx, ry = q[0] - p[0], q[1] - p[1]
    sx, sy = v[0] - u[0], v[1] - u[1]
    den = rx * sy - ry * sx
    if abs(den) < 1e-15:
        return []
    wx, wy = u[0] - p[0], u[1] - p[1]
    t = (wx * sy - wy * sx) / den
    w = (wx * ry - wy * rx) / den
    if -EPS <= t <= 1 + EPS and -EPS <= w <= 1 + EPS:
        return [(p[0] + t * rx, p[1] + t * ry)]
    return []


def _edges(poly: ConvexPolygon):
    return list(poly._edges())


def boundary_intersections(s1: Shape, s2: Shape) -> list[Point]:
    """Intersection points of the boundaries of two planar shapes."""
    if isinstance(s1, Disk) and isinstance(s2, Disk):
        return _circle_circle(s1.center, s1.radius, s2.center, s2.radius)
    if isinstance(s1, ConvexPolygon) and isinstance(s2, Disk):
        s1, s2 = s2, s1
    if isinstance(s1, Disk) and isinstance(s2, ConvexPolygon):
        return [pt for p, q in _edges(s2) for pt in _circle_segment(s1.center, s1.radius, p, q)]
    if isinstance(s1, ConvexPolygon) and isinstance(s2, ConvexPolygon):
        return [pt for e in _edges(s1) for f in _edges(s2) for pt in _segment_segment(*e, *f)]
    raise TypeError(f"no boundary intersection rule for {type(s1).__name__}/{type(s2).__name__}")


def depth(regions: Iterable[Region], point, eps: float = EPS) -> int:
    """Number of regions containing ``point``."""
    return sum(contains(r, point, eps) for r in regions)


def ply_witnesses(regions: Sequence[Region]) -> list[Point]:
    """Finite set of points on which the maximum coverage depth is attained."""
    pts: list[Point] = []
    for r in regions:
        pts.extend(r.shape.boundary_points())
    if regions[0].dim == 2:
        for r1, r2 in itertools.combinations(regions, 2):
            pts.extend(boundary_intersections(r1.shape, r2.shape))
    return pts


def ply(regions: Sequence[Region]) -> int:
    """Maximum number of regions covering any single point."""
    regions = list(regions)
    if not regions:
        raise ValueError("ply of an empty region set is undefined")
    dims = {r.dim for r in regions}
    if len(dims) != 1:
        raise DimensionError(f"regions of mixed dimensions {sorted(dims)}")
    return max(depth(regions, p) for p in ply_witnesses(regions))
