"""JSON/CSV encodings of scenarios, solutions and event streams."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .events import Event, Trajectory
from .geometry import ConvexPolygon, Crossing, Disk, Interval, Region
from .offline import CoverageSolution, TrackingSequence

SCHEMA_VERSION = "1"


class InputError(ValueError):
    """Malformed input document."""


def region_to_json(r: Region) -> dict:
    s = r.shape
    if isinstance(s, Interval):
        shape = {"type": "interval", "lo": s.lo, "hi": s.hi}
    elif isinstance(s, Disk):
        shape = {"type": "disk", "center": list(s.center), "radius": s.radius}
    elif isinstance(s, ConvexPolygon):
        shape = {"type": "polygon", "vertices": [list(v) for v in s.vertices]}
    else:
        raise TypeError(f"cannot encode {type(s).__name__}")
    return {"id": r.id, "shape": shape}


def region_from_json(data: dict) -> Region:
    try:
        shape = data["shape"]
        kind = shape["type"]
        if kind == "interval":
            s = Interval(float(shape["lo"]), float(shape["hi"]))
        elif kind == "disk":
            s = Disk(shape["center"], shape["radius"])
        elif kind == "polygon":
            s = ConvexPolygon(shape["vertices"])
        else:
            raise InputError(f"unknown shape type {kind!r}")
        return Region(int(data["id"]), s)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed region {data!r}: {exc}") from exc


def regions_from_json(items) -> list[Region]:
    return [region_from_json(d) for d in items]


def trajectory_to_json(traj: Trajectory) -> dict:
    return {"samples": [[t, *p] for t, p in traj.samples]}


def trajectory_from_json(data: dict) -> Trajectory:
    try:
        return Trajectory([(row[0], row[1:]) for row in data["samples"]])
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise InputError(f"malformed trajectory: {exc}") from exc


def scenario_to_json(regions, trajectory=None, distribution=None, coverage: int = 1) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "dimension": regions[0].dim,
        "regions": [region_to_json(r) for r in regions],
        "coverage": coverage,
    }
    if trajectory is not None:
        doc["trajectory"] = trajectory_to_json(trajectory)
    if distribution is not None:
        doc["distribution"] = {
            "trajectories": [
                {**trajectory_to_json(t), "probability": str(Fraction(p)),
                 **({"label": lab} if lab is not None else {})}
                for (t, p), lab in zip(distribution, distribution.labels or [None] * len(distribution))
            ]
        }
    return doc


class Scenario:
    def __init__(self, regions, trajectory=None, distribution=None, coverage=1):
        self.regions = regions
        self.trajectory = trajectory
        self.distribution = distribution
        self.coverage = coverage

    @property
    def dimension(self):
        return self.regions[0].dim

    def __eq__(self, other):
        return (isinstance(other, Scenario) and self.regions == other.regions
                and self.trajectory == other.trajectory and self.coverage == other.coverage
                and _dist_key(self.distribution) == _dist_key(other.distribution))


def _dist_key(dist):
    if dist is None:
        return None
    return [(t, Fraction(p)) for t, p in dist]


def scenario_from_json(doc: dict) -> Scenario:
    from .adversary import TrajectoryDistribution

    if not isinstance(doc, dict):
        raise InputError("a scenario must be a JSON object")
    if str(doc.get("schema_version")) != SCHEMA_VERSION:
        raise InputError(f"unsupported or missing schema_version {doc.get('schema_version')!r}")
    try:
        regions = regions_from_json(doc["regions"])
    except KeyError as exc:
        raise InputError("scenario has no regions") from exc
    if not regions:
        raise InputError("scenario has no regions")
    dim = doc.get("dimension", regions[0].dim)
    if any(r.dim != dim for r in regions):
        raise InputError(f"regions do not match dimension {dim}")
    traj = trajectory_from_json(doc["trajectory"]) if "trajectory" in doc else None
    dist = None
    if "distribution" in doc:
        try:
            items = doc["distribution"]["trajectories"]
            dist = TrajectoryDistribution([trajectory_from_json(d) for d in items],
                                          [Fraction(d["probability"]) for d in items],
                                          [d.get("label") for d in items])
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"malformed distribution: {exc}") from exc
    if traj is None and dist is None:
        raise InputError("scenario needs a trajectory or a distribution")
    for t in ([traj] if traj else []) + (dist.trajectories if dist else []):
        if t.dim != dim:
            raise InputError("trajectory dimension does not match the regions")
    return Scenario(regions, traj, dist, int(doc.get("coverage", 1)))


def load_scenario(path) -> Scenario:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read scenario {path}: {exc}") from exc
    try:
        return scenario_from_json(doc)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def solution_to_json(sol) -> dict:
    if isinstance(sol, TrackingSequence):
        return {"pairs": [[t, r] for t, r in sol.pairs], "cost": sol.cost}
    return {"sequences": [{"pairs": [[t, r] for t, r in s.pairs]} for s in sol.sequences],
            "cost": sol.total_cost}


def solution_from_json(doc: dict):
    try:
        if "sequences" in doc:
            return CoverageSolution([TrackingSequence(s["pairs"]) for s in doc["sequences"]])
        return TrackingSequence(doc["pairs"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed solution: {exc}") from exc


def load_solution(path):
    try:
        with open(path) as fh:
            return solution_from_json(json.load(fh))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read solution {path}: {exc}") from exc


def events_to_csv(events) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["time", "region_id", "kind"])
    for e in events:
        w.writerow([repr(e.time), e.region_id, e.kind.value])
    return buf.getvalue()


def events_from_csv(text: str) -> list[Event]:
    rows = csv.DictReader(io.StringIO(text))
    return [Event(float(r["time"]), int(r["region_id"]), Crossing(r["kind"])) for r in rows]
