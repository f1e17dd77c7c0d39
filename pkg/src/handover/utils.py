"""Input validation helpers shared by the estimators."""

from __future__ import annotations

from sklearn.utils.validation import check_is_fitted

from .geometry import ConvexPolygon, DimensionError, Disk, Interval, Region
from .events import Trajectory

__all__ = ["check_regions", "check_trajectory", "check_is_fitted", "check_random_state"]


def check_regions(regions, dim: int | None = None) -> list[Region]:
    """Validate a region collection and return it as a list.

    Accepts :class:`Region` objects or ``(id, shape)`` pairs. Ids must be
    unique and all regions must share one dimension.
    """
    out = []
    for r in regions:
        if not isinstance(r, Region):
            rid, shape = r
            r = Region(int(rid), shape)
        if not isinstance(r.shape, (Interval, Disk, ConvexPolygon)):
            raise TypeError(f"unsupported shape {type(r.shape).__name__} for region {r.id}")
        out.append(r)
    if not out:
        raise ValueError("at least one region is required")
    ids = [r.id for r in out]
    if len(set(ids)) != len(ids):
        raise ValueError("region ids must be unique")
    dims = {r.dim for r in out}
    if len(dims) != 1:
        raise DimensionError(f"regions have mixed dimensions {sorted(dims)}")
    if dim is not None and dims != {dim}:
        raise DimensionError(f"expected {dim}-dimensional regions, got {dims.pop()}")
    return out


def check_trajectory(trajectory, dim: int | None = None) -> Trajectory:
    if not isinstance(trajectory, Trajectory):
        trajectory = Trajectory(trajectory)
    if dim is not None and trajectory.dim != dim:
        raise DimensionError(f"trajectory is {trajectory.dim}-dimensional, regions are {dim}-dimensional")
    return trajectory


def check_random_state(seed):
    """Turn ``seed`` into a :class:`numpy.random.Generator`."""
    import numpy as np

    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)
