"""Longest obstacle-free run along a great circle sampled against a mask."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .geodesy import EARTH_RADIUS_KM, GreatCircle, arc_length, gc_point, point_on_circle
from .morphology import SurfaceMask
from .relief import GridGeometry


@dataclass(frozen=True)
class PathResult:
    """Longest free arc of one great circle.

    ``phi_start``/``phi_end`` bound the arc measured from the circle's
    northbound equator crossing; the arc runs forward from start to end.
    """

    circle: GreatCircle
    phi_start: float
    phi_end: float
    angular_extent: float
    length_km: float
    start_point: tuple[float, float]
    end_point: tuple[float, float]
    closed: bool = False


def samples_per_circle(step: float) -> int:
    if not step > 0:
        raise ValueError(f"sampling step must be positive, got {step!r}")
    return int(math.ceil(360.0 / step - 1e-9))


def circular_runs(free: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Longest circular run of True per row of a 2-D boolean array.

    Returns ``(length, start)``; among equally long runs the smallest start
    index wins.  Rows that are entirely True report length ``n`` and start 0.
    """
    free = np.atleast_2d(np.asarray(free, dtype=bool))
    m, n = free.shape
    doubled = np.concatenate([free, free], axis=1)
    idx = np.arange(2 * n)
    last_block = np.maximum.accumulate(np.where(doubled, -1, idx), axis=1)
    run = idx - last_block
    length = np.minimum(run.max(axis=1), n)
    starts = np.mod(idx - length[:, None] + 1, n)
    start = np.where(run == length[:, None], starts, n).min(axis=1)
    start = np.where((length == n) | (length == 0), 0, start)
    return length, start


def longest_circular_run(free: np.ndarray) -> tuple[int, int]:
    """Single-row version of :func:`circular_runs`, cheap when obstacles are few."""
    free = np.asarray(free, dtype=bool)
    n = free.size
    blocked = np.flatnonzero(~free)
    if blocked.size == 0:
        return n, 0
    gaps = np.diff(np.append(blocked, blocked[0] + n)) - 1
    length = int(gaps.max())
    if length == 0:
        return 0, 0
    starts = (blocked[gaps == length] + 1) % n
    return length, int(starts.min())


class CircleScanner:
    """Samples great circles on one grid geometry at a fixed angular step.

    Latitude along a circle depends only on the heading, and the origin only
    shifts longitude, so row indices and column offsets are tabulated once per
    heading and reused for every origin.
    """

    def __init__(self, geometry: GridGeometry, step: float | None = None, cache_size: int = 2048,
                 radius_km: float = EARTH_RADIUS_KM):
        self.geometry = geometry
        self.n = samples_per_circle(geometry.cell_size if step is None else step)
        self.step = 360.0 / self.n
        self.radius_km = radius_km
        self.phi = -180.0 + self.step * (np.arange(self.n) + 1)
        self.tables = lru_cache(maxsize=cache_size)(self._tables)

    def _tables(self, heading: float) -> tuple[np.ndarray, np.ndarray]:
        lat, lon = point_on_circle(0.0, heading, self.phi)
        rows = self.geometry.row_index(lat)
        cols = self.geometry.col_coordinate(lon)
        rows.flags.writeable = False
        cols.flags.writeable = False
        return rows, cols

    def obstacles(self, mask: SurfaceMask, origin, heading: float) -> np.ndarray:
        """Obstacle flags at every sample; ``origin`` may be a 1-D array for a batch of circles."""
        if mask.geometry != self.geometry:
            raise ValueError("mask geometry differs from the scanner's grid")
        rows, cols = self.tables(float(heading))
        shift = np.asarray(origin, dtype=float)[..., None] / self.geometry.cell_size
        col_idx = np.mod(np.floor(cols + shift), self.geometry.cols).astype(np.intp)
        return mask.lookup(rows, col_idx)

    def run_length(self, mask: SurfaceMask, circle: GreatCircle) -> int:
        """Number of samples in the longest free run."""
        return longest_circular_run(~self.obstacles(mask, circle.origin, circle.heading))[0]

    def extent(self, mask: SurfaceMask, circle: GreatCircle) -> float:
        return self.run_length(mask, circle) * self.step

    def length_km(self, mask: SurfaceMask, circle: GreatCircle) -> float:
        return arc_length(self.extent(mask, circle), self.radius_km)

    def batch_run_lengths(self, mask: SurfaceMask, origins, heading: float) -> np.ndarray:
        return circular_runs(~self.obstacles(mask, np.asarray(origins, dtype=float), heading))[0]

    def scan(self, mask: SurfaceMask, circle: GreatCircle) -> PathResult:
        count, start = longest_circular_run(~self.obstacles(mask, circle.origin, circle.heading))
        return self.result(circle, count, start)

    def result(self, circle: GreatCircle, count: int, start: int) -> PathResult:
        closed = count == self.n
        extent = 360.0 if closed else count * self.step
        if closed:
            phi_start = phi_end = 180.0
        else:
            phi_start = float(self.phi[start] - self.step / 2)
            phi_end = phi_start + extent
        a = gc_point(circle, phi_start)
        b = gc_point(circle, phi_end)
        return PathResult(
            circle=circle,
            phi_start=a.phi,
            phi_end=b.phi,
            angular_extent=extent,
            length_km=arc_length(extent, self.radius_km),
            start_point=(a.lat, a.lon),
            end_point=(b.lat, b.lon),
            closed=closed,
        )


def longest_run(mask: SurfaceMask, circle: GreatCircle, step: float | None = None) -> PathResult:
    """Longest obstacle-free arc of ``circle``; ``step`` defaults to the mask's cell size."""
    return CircleScanner(mask.geometry, step).scan(mask, circle)
