"""Exhaustive evaluation of a lattice of great circles, used as ground truth for the solver.

Deliberately independent of the erosion pyramid and of any bounding logic:
it only samples circles against the raw mask.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .geodesy import EARTH_RADIUS_KM, GreatCircle
from .morphology import SurfaceMask
from .scan import CircleScanner, PathResult

DEFAULT_MAX_CIRCLES = 10_000_000


class CostCapExceeded(RuntimeError):
    def __init__(self, circles: int, samples: int, cap: int):
        self.circles = circles
        self.samples = samples
        self.cap = cap
        super().__init__(
            f"lattice of {circles:,} circles x {samples:,} samples = {circles * samples:,} point lookups "
            f"exceeds the cap of {cap:,} circles"
        )


@dataclass(frozen=True)
class OracleResult:
    best: PathResult
    circles: int
    wall_time: float
    mode: str
    lengths: np.ndarray | None = None


def lattice(step: float) -> np.ndarray:
    """Angles ``0, step, 2*step, ...`` strictly below 180."""
    if not step > 0:
        raise ValueError(f"lattice step must be positive, got {step!r}")
    return np.arange(int(math.ceil(180.0 / step - 1e-9))) * step


def lattice_size(delta_step: float, alpha_step: float) -> int:
    return len(lattice(delta_step)) * len(lattice(alpha_step))


def brute_force(mask: SurfaceMask, delta_step: float, alpha_step: float, phi_step: float | None = None,
                max_circles: int = DEFAULT_MAX_CIRCLES, parallel: bool = False,
                keep_lengths: bool = False, radius_km: float = EARTH_RADIUS_KM) -> OracleResult:
    """Longest free arc over every circle on the ``delta_step x alpha_step`` lattice.

    Ties go to the lexicographically smallest ``(origin, heading)``.  With
    ``keep_lengths`` the full ``(origins, headings)`` table of run lengths in
    samples is returned too.
    """
    started = time.perf_counter()
    origins = lattice(delta_step)
    headings = lattice(alpha_step)
    scanner = CircleScanner(mask.geometry, phi_step, cache_size=1, radius_km=radius_km)
    circles = len(origins) * len(headings)
    if circles > max_circles:
        raise CostCapExceeded(circles, scanner.n, max_circles)

    def column(heading):
        return scanner.batch_run_lengths(mask, origins, heading)

    if parallel:
        with ThreadPoolExecutor() as pool:
            columns = list(pool.map(column, headings))
    else:
        columns = [column(h) for h in headings]
    lengths = np.stack(columns, axis=1)
    i, j = np.unravel_index(np.argmax(lengths), lengths.shape)
    circle = GreatCircle(float(origins[i]), float(headings[j]))
    best = scanner.scan(mask, circle)
    return OracleResult(best, circles, time.perf_counter() - started, mask.mode,
                        lengths if keep_lengths else None)
