"""Lower-bound instances and the adversaries that exploit them.

* four congruent squares against stateless policies,
* a flower of unit disks against deterministic trackers,
* a binary tree of one-dimensional trajectories over unit intervals
  (a hard input distribution for randomized trackers), and its extension
  with double-length intervals for coverage ``c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .events import EventStream, Trajectory, coverage_timeline
from .geometry import EPS, ConvexPolygon, Disk, Interval, Region, contains
from .offline import greedy_offline, greedy_offline_c


class ConstructionError(RuntimeError):
    """A generated instance failed its own containment self-check."""


@dataclass
class TrajectoryDistribution:
    """Finite distribution over trajectories."""

    trajectories: list
    probabilities: list
    labels: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.trajectories) != len(self.probabilities):
            raise ValueError("one probability per trajectory is required")
        if any(p <= 0 for p in self.probabilities):
            raise ValueError("probabilities must be positive")
        if abs(float(sum(self.probabilities)) - 1.0) > EPS:
            raise ValueError("probabilities must sum to one")

    def __len__(self):
        return len(self.trajectories)

    def __iter__(self):
        return iter(zip(self.trajectories, self.probabilities))


# ---------------------------------------------------------------------------
# stateless policies: four squares

RHOMBUS_SIDE = 40.0
# the common cell is a hexagon; each entry is (owner, outward normal in degrees)
_HEXAGON_EDGES = [("b", 0), ("c", 100), ("d", 225), ("b", 270), ("a", 290), ("d", 315)]
_HEXAGON_OFFSET = 5.0
TWO_CELLS = ("ab", "ac", "ad", "bc", "cd")
RHOMBUS_IDS = {"a": 0, "b": 1, "c": 2, "d": 3}


def _unit(deg):
    return (math.cos(math.radians(deg)), math.sin(math.radians(deg)))


def _meet(n1, h1, n2, h2):
    det = n1[0] * n2[1] - n1[1] * n2[0]
    return ((h1 * n2[1] - h2 * n1[1]) / det, (n1[0] * h2 - n2[0] * h1) / det)


def _square(tight: dict[int, float], side: float) -> ConvexPolygon:
    """Square whose sides with the given normals sit at the given offsets.

    ``tight`` maps outward normals (degrees) to offsets; sides without an
    entry are placed so the square has the requested side length.
    """
    base = min(tight)
    normals = [base + 90 * k for k in range(4)]
    offsets = {}
    for k, a in enumerate(normals):
        if a in tight:
            offsets[a] = tight[a]
    for k, a in enumerate(normals):
        if a in offsets:
            continue
        opposite = normals[(k + 2) % 4]
        offsets[a] = side - offsets[opposite] if opposite in offsets else side / 2
    verts = []
    for k in range(4):
        a1, a2 = normals[k], normals[(k + 1) % 4]
        verts.append(_meet(_unit(a1), offsets[a1], _unit(a2), offsets[a2]))
    return ConvexPolygon(verts)


@dataclass
class RhombiConstruction:
    regions: list
    atlas: dict  # cell label -> interior representative point
    gates: dict  # two-region cell label -> hexagon vertex shared with the common cell

    def region(self, name: str) -> Region:
        return self.regions[RHOMBUS_IDS[name]]


def rhombi_construction(side: float = RHOMBUS_SIDE, offset: float = 0.2) -> RhombiConstruction:
    """Four congruent squares whose common cell touches the cells ab, ac, ad, bc and cd."""
    tight: dict[str, dict[int, float]] = {name: {} for name in "abcd"}
    for owner, deg in _HEXAGON_EDGES:
        tight[owner][deg] = _HEXAGON_OFFSET
    regions = [Region(RHOMBUS_IDS[name], _square(tight[name], side)) for name in "abcd"]

    n = len(_HEXAGON_EDGES)
    vertices = []
    for i in range(n):
        (o1, d1), (o2, d2) = _HEXAGON_EDGES[i], _HEXAGON_EDGES[(i + 1) % n]
        v = _meet(_unit(d1), _HEXAGON_OFFSET, _unit(d2), _HEXAGON_OFFSET)
        vertices.append((frozenset((o1, o2)), v, (d1, d2)))
    center = tuple(sum(v[1][k] for v in vertices) / n for k in range(2))
    atlas = {"abcd": center}
    gates = {}
    for cell in TWO_CELLS:
        absent = frozenset("abcd") - set(cell)
        owners, v, (d1, d2) = next(x for x in vertices if x[0] == absent)
        u1, u2 = _unit(d1), _unit(d2)
        bis = (u1[0] + u2[0], u1[1] + u2[1])
        norm = math.hypot(*bis)
        atlas[cell] = (v[0] + offset * bis[0] / norm, v[1] + offset * bis[1] / norm)
        gates[cell] = v
    out = RhombiConstruction(regions, atlas, gates)
    verify_rhombi(out)
    return out


def verify_rhombi(rc: RhombiConstruction, margin: float = 1e-6):
    """Containment self-check of the square construction; raises ConstructionError."""
    by_name = {name: rc.region(name) for name in "abcd"}

    def holding(p, eps):
        return {name for name, r in by_name.items() if contains(r, p, eps)}

    if holding(rc.atlas["abcd"], -margin) != set("abcd"):
        raise ConstructionError("common cell representative is not inside all four regions")
    for cell in TWO_CELLS:
        if holding(rc.atlas[cell], -margin) != set(cell) or holding(rc.atlas[cell], margin) != set(cell):
            raise ConstructionError(f"representative of cell {cell} is not in exactly {set(cell)}")
        gate = rc.gates[cell]
        if not set(cell) <= holding(gate, -margin):
            raise ConstructionError(f"gate of cell {cell} is not interior to {set(cell)}")
        if holding(gate, margin) != set("abcd") or holding(gate, -margin) != set(cell):
            raise ConstructionError(f"gate of cell {cell} is not on both absent boundaries")
        # straight walks stay inside the two present regions
        for a, b in ((rc.atlas["abcd"], gate), (gate, rc.atlas[cell])):
            for s in np.linspace(0.0, 1.0, 33):
                p = (a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1]))
                if not set(cell) <= holding(p, margin):
                    raise ConstructionError(f"walk into cell {cell} leaves one of {set(cell)}")


class NearestCenterPolicy:
    """Stateless policy: the containing region whose centre is closest."""

    def __init__(self, regions):
        self.centers = {r.id: r.shape.centroid() for r in regions}

    def __call__(self, point, containing):
        return min(containing, key=lambda rid: (math.dist(point, self.centers[rid]), rid))


@dataclass
class AdversaryRun:
    trajectory: Trajectory
    alg_cost: int
    opt_cost: int
    opt_cost_bound: int | None = None
    regions: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        return self.alg_cost / self.opt_cost


def _probe(policy, point, containing):
    first = policy(point, containing)
    if policy(point, containing) != first:
        raise ValueError("policy is not a function of its inputs")
    if first not in containing:
        raise ValueError(f"policy chose region {first}, outside the containing set {sorted(containing)}")
    return first


def run_stateless_adversary(policy, rounds: int, construction: RhombiConstruction | None = None
                            ) -> AdversaryRun:
    """Oscillate between two cells that make ``policy`` hand over twice per round.

    ``policy`` is a callable ``(point, containing_ids) -> id`` or a factory
    taking the region list and returning one.
    """
    from .online import StatelessTracker

    if rounds < 0:
        raise ValueError("rounds must be non-negative")
    rc = construction or rhombi_construction()
    if not hasattr(policy, "__call__"):
        raise TypeError("policy must be callable")
    if isinstance(policy, type):
        policy = policy(rc.regions)
    name_of = {v: k for k, v in RHOMBUS_IDS.items()}

    outgoing: dict[str, list[str]] = {name: [] for name in "abcd"}
    for cell in TWO_CELLS:
        x, y = cell
        chosen = name_of[_probe(policy, rc.gates[cell], frozenset((RHOMBUS_IDS[x], RHOMBUS_IDS[y])))]
        source = x if chosen == y else y
        outgoing[source].append(chosen)
    # pigeonhole: five edges on four vertices
    x = next(v for v in "abcd" if len(outgoing[v]) >= 2)
    y, z = sorted(outgoing[x])[:2]
    cell_y, cell_z = "".join(sorted(x + y)), "".join(sorted(x + z))

    center = rc.atlas["abcd"]
    samples = [rc.gates[cell_y], rc.atlas[cell_y], rc.gates[cell_y], center]
    for _ in range(rounds):
        samples += [rc.gates[cell_z], rc.atlas[cell_z], rc.gates[cell_z], center,
                    rc.gates[cell_y], rc.atlas[cell_y], rc.gates[cell_y], center]
    trajectory = Trajectory([(float(t), p) for t, p in enumerate(samples)])

    tracker = StatelessTracker(policy).fit(rc.regions)
    alg = tracker.predict(trajectory)
    opt = greedy_offline(coverage_timeline(rc.regions, trajectory))
    return AdversaryRun(trajectory, alg.cost, opt.cost, 1, rc.regions,
                        {"pivot": x, "targets": (y, z), "tracking": alg, "optimal": opt})


# ---------------------------------------------------------------------------
# deterministic trackers: flower of unit disks

FLOWER_CENTER_RADIUS = 0.9


@dataclass
class Flower:
    regions: list
    center: tuple
    exits: dict  # region id -> point outside that disk and inside all others
    delta: float


def flower(rho: int, center_radius: float = FLOWER_CENTER_RADIUS) -> Flower:
    """``rho`` unit disks with centres equally spaced on a circle of radius 0.9."""
    if rho < 3:
        raise ValueError("the flower needs at least 3 disks")
    centers = [(center_radius * math.cos(2 * math.pi * i / rho),
                center_radius * math.sin(2 * math.pi * i / rho)) for i in range(rho)]
    regions = [Region(i, Disk(c, 1.0)) for i, c in enumerate(centers)]
    delta = 0.05
    while delta > 1e-7:
        exits = {}
        for r, (cx, cy) in zip(regions, centers):
            # from the disk centre through the flower centre, just past the far boundary
            d = 1.0 + delta
            exits[r.id] = (cx - d * cx / center_radius, cy - d * cy / center_radius)
        if _flower_ok(regions, exits):
            return Flower(regions, (0.0, 0.0), exits, delta)
        delta /= 2
    raise ConstructionError(f"no exit cell offset found for a flower of {rho} disks")


def _flower_ok(regions, exits, margin: float = 1e-7) -> bool:
    for rid, p in exits.items():
        for r in regions:
            if r.id == rid:
                if contains(r, p, margin):
                    return False
            elif not contains(r, p, -margin):
                return False
    return all(contains(r, (0.0, 0.0), -margin) for r in regions)


def run_deterministic_adversary(tracker_factory: Callable, rho: int, updates: int) -> AdversaryRun:
    """Repeatedly walk out of whichever disk the tracker currently uses, and back."""
    fl = flower(rho)
    tracker = tracker_factory().fit(fl.regions)
    if not tracker.deterministic and getattr(tracker, "random_state", None) is None:
        raise ValueError("the adaptive adversary needs a replayable tracker (fix its seed)")
    t = 0.0
    samples = [(t, fl.center)]
    stream = EventStream(fl.regions, t, fl.center)
    tracker.start(t, active={r.id for r in fl.regions})
    for _ in range(updates):
        current = tracker.current_
        if current is None:
            raise ValueError("the adaptive adversary needs a single-sequence tracker")
        for target in (fl.exits[current], fl.center):
            t += 1.0
            samples.append((t, target))
            for e in stream.extend(t, target):
                tracker.on_event(e)
            tracker.flush()
    alg = tracker.finish()
    trajectory = Trajectory(samples)
    opt = greedy_offline(coverage_timeline(fl.regions, trajectory))
    bound = max(1, math.ceil(updates / (rho - 1)))
    return AdversaryRun(trajectory, alg.cost, opt.cost, bound, fl.regions,
                        {"tracking": alg, "optimal": opt})


# ---------------------------------------------------------------------------
# randomized trackers: tree of interval trajectories


@dataclass
class IntervalTree:
    regions: list
    distribution: TrajectoryDistribution
    xi: list  # per trajectory, the sequence of waypoint indices
    delta: float

    def waypoint(self, k: int) -> float:
        return tree_waypoint(len(self.regions), k)


def tree_waypoint(rho: int, k: int) -> float:
    """Point outside the ``|k|`` leftmost (k > 0) or rightmost (k < 0) intervals only."""
    delta = 1.0 / (2 * rho)
    if abs(k) >= rho:
        raise ValueError(f"waypoint index {k} out of range for {rho} intervals")
    if k >= 0:
        return (k + 0.5) * delta if k > 0 else 0.0
    return -1.0 + (rho + k + 0.5) * delta


def tree_indices(rho: int) -> list[list[int]]:
    """Waypoint index sequences of the ``rho`` tree trajectories.

    At step ``i`` (of ``h = log2 rho``) trajectory ``j`` branches on bit
    ``h - i`` of ``j - 1``: left to ``min(previous) - 2**(h-i)`` or right to
    ``max(previous) + 2**(h-i)``.
    """
    h = rho.bit_length() - 1
    out = []
    for j in range(1, rho + 1):
        xi = [0]
        for i in range(1, h + 1):
            half = 2 ** (h - i)
            if (j - 1) % (2 * half) < half:
                xi.append(min(xi) - half)
            else:
                xi.append(max(xi) + half)
        out.append(xi)
    return out


def interval_tree(rho: int) -> IntervalTree:
    """``rho`` unit intervals sharing the point 0, and ``rho`` equally likely trajectories."""
    if rho < 1 or rho & (rho - 1):
        raise ValueError(f"rho must be a power of two, got {rho}")
    delta = 1.0 / (2 * rho)
    regions = [Region(k, Interval(-1.0 + k * delta, k * delta)) for k in range(1, rho + 1)]
    indices = tree_indices(rho)
    trajectories = [Trajectory([(float(i), (tree_waypoint(rho, k),)) for i, k in enumerate(xi)])
                    for xi in indices]
    dist = TrajectoryDistribution(trajectories, [Fraction(1, rho)] * rho,
                                  [f"T{j}" for j in range(1, rho + 1)])
    tree = IntervalTree(regions, dist, indices, delta)
    _verify_tree(tree)
    return tree


def _verify_tree(tree: IntervalTree):
    for traj in tree.distribution.trajectories:
        survivors = [r for r in tree.regions if all(contains(r, p, -1e-12) for _, p in traj.samples)]
        if len(survivors) < 1:
            raise ConstructionError("a tree trajectory leaves every interval")


def yao_expected_cost(regions, distribution: TrajectoryDistribution, tracker_factory: Callable,
                      trials: int = 1000, seed: int = 0):
    """Expected tracking cost of a tracker under ``distribution``.

    Deterministic trackers are evaluated exactly (a :class:`Fraction`);
    randomized ones by averaging ``trials`` seeded runs per trajectory.
    """
    tracker = tracker_factory()
    if tracker.deterministic:
        total = Fraction(0)
        for traj, p in distribution:
            total += Fraction(p) * tracker.fit(regions).cost(traj)
        return total
    seeds = np.random.SeedSequence(seed).generate_state(trials, dtype=np.uint64)
    total = 0.0
    for traj, p in distribution:
        costs = [tracker.set_params(random_state=int(s)).fit(regions).cost(traj) for s in seeds]
        total += float(p) * float(np.mean(costs))
    return total


class _ScriptedRNG:
    """Stands in for a Generator: replays a prefix of choices, then picks 0."""

    def __init__(self, prefix):
        self.prefix = list(prefix)
        self.branching = []

    def integers(self, n):
        i = len(self.branching)
        self.branching.append(n)
        return self.prefix[i] if i < len(self.prefix) else 0


def exact_randomized_cost(tracker, regions, trajectory) -> Fraction:
    """Exact expected cost of a randomized tracker by enumerating its random choices."""
    tracker = tracker.fit(regions)
    t0, p0 = trajectory.samples[0]
    stream = EventStream(tracker.regions_, t0, p0)
    events = []
    for t, p in trajectory.samples[1:]:
        events.extend(stream.extend(t, p))

    def run(prefix):
        rng = _ScriptedRNG(prefix)
        out = tracker.run_events(t0, stream.initial_regions(), events, locate=trajectory, rng=rng)
        cost = out.cost if hasattr(out, "cost") else out.total_cost
        return cost, rng.branching

    expected = Fraction(0)
    stack = [((), Fraction(1))]
    while stack:
        prefix, prob = stack.pop()
        cost, branching = run(prefix)
        if len(branching) == len(prefix):
            expected += prob * cost
            continue
        n = branching[len(prefix)]
        for choice in range(n):
            stack.append((prefix + (choice,), prob / n))
    return expected


# ---------------------------------------------------------------------------
# coverage c: tree plus double-length intervals


@dataclass
class TrilaterationInstance:
    regions: list
    distribution: TrajectoryDistribution
    core: IntervalTree
    coverage: int


def trilateration_lb(rho: int, c: int) -> TrilaterationInstance:
    """``rho - c + 1`` tree intervals plus ``c - 1`` length-2 intervals covering them all."""
    if not 1 <= c <= rho:
        raise ValueError("need 1 <= c <= rho")
    core = interval_tree(rho - c + 1)
    first = len(core.regions) + 1
    shift = 0.2 / c
    doubles = [Region(first + j, Interval(-1.25 + j * shift, 0.75 + j * shift)) for j in range(c - 1)]
    lo = min(r.shape.lo for r in core.regions)
    hi = max(r.shape.hi for r in core.regions)
    for r in doubles:
        if not (r.shape.lo < lo and r.shape.hi > hi):
            raise ConstructionError("a double interval does not cover the unit intervals")
    return TrilaterationInstance(core.regions + doubles, core.distribution, core, c)


def optimal_cost(regions, trajectory, c: int = 1) -> int:
    timeline = coverage_timeline(regions, trajectory)
    if c == 1:
        return greedy_offline(timeline).cost
    return greedy_offline_c(timeline, c).total_cost
