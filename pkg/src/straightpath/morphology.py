"""Land/water obstacle masks and their progressively eroded relaxations."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .relief import GridGeometry, ReliefGrid

WATER = "water"
LAND = "land"
_MODE_ALIASES = {"water": WATER, "water-search": WATER, "land": LAND, "land-search": LAND}

DEFAULT_FACTOR = 5.0


def check_mode(mode: str) -> str:
    try:
        return _MODE_ALIASES[mode]
    except KeyError:
        raise ValueError(f"unknown search mode {mode!r}; expected 'water' or 'land'") from None


@dataclass(frozen=True, eq=False)
class SurfaceMask:
    """Bit-packed obstacle raster: a set bit blocks the path being searched.

    Obstacles are land for water searches and water for land searches.
    """

    geometry: GridGeometry
    bits: np.ndarray = field(repr=False)
    mode: str = WATER

    def __post_init__(self):
        expected = (self.geometry.rows, (self.geometry.cols + 7) // 8)
        if self.bits.shape != expected or self.bits.dtype != np.uint8:
            raise ValueError(f"packed bits must be uint8 of shape {expected}, got {self.bits.dtype}{self.bits.shape}")
        object.__setattr__(self, "mode", check_mode(self.mode))
        self.bits.flags.writeable = False

    @classmethod
    def from_array(cls, geometry: GridGeometry, obstacle, mode: str = WATER) -> "SurfaceMask":
        obstacle = np.asarray(obstacle, dtype=bool)
        if obstacle.shape != geometry.shape:
            raise ValueError(f"obstacle array {obstacle.shape} does not match geometry {geometry.shape}")
        return cls(geometry, np.packbits(obstacle, axis=1), mode)

    def to_array(self) -> np.ndarray:
        return np.unpackbits(self.bits, axis=1, count=self.geometry.cols).astype(bool)

    def lookup(self, rows, cols) -> np.ndarray:
        """Obstacle flags at integer cell indices."""
        cols = np.asarray(cols)
        byte = self.bits[rows, cols >> 3]
        return ((byte >> (7 - (cols & 7))) & 1).astype(bool)

    def at(self, lat, lon) -> np.ndarray:
        return self.lookup(self.geometry.row_index(lat), self.geometry.col_index(lon))

    @property
    def obstacle_count(self) -> int:
        return int(np.unpackbits(self.bits, axis=1, count=self.geometry.cols).sum())

    def __eq__(self, other):
        if not isinstance(other, SurfaceMask):
            return NotImplemented
        return (self.geometry == other.geometry and self.mode == other.mode
                and np.array_equal(self.bits, other.bits))

    __hash__ = None


def classify(grid: ReliefGrid, mode: str) -> SurfaceMask:
    """Sign test on altitude; sea level counts as an obstacle in both modes."""
    mode = check_mode(mode)
    obstacle = grid.altitudes >= 0 if mode == WATER else grid.altitudes <= 0
    return SurfaceMask.from_array(grid.geometry, obstacle, mode)


def squared_distance_to_free(obstacle: np.ndarray, max_radius: float | None = None) -> np.ndarray:
    """Squared pixel distance from each cell to the nearest obstacle-free cell.

    Columns wrap around; rows stop at the poles.  Values are exact for every
    threshold up to ``max_radius`` (``None`` means any threshold).  Free cells
    get 0; if no free cell exists every cell gets ``inf``.
    """
    obstacle = np.asarray(obstacle, dtype=bool)
    if obstacle.all():
        return np.full(obstacle.shape, np.inf)
    cols = obstacle.shape[1]
    # the nearest wrapped free cell is never more than cols/2 columns away
    pad = cols // 2 + 1
    if max_radius is not None:
        pad = min(pad, int(math.ceil(max_radius)) + 1)
    padded = np.pad(obstacle, ((0, 0), (pad, pad)), mode="wrap")
    dist = ndimage.distance_transform_edt(padded)[:, pad:pad + cols]
    return np.rint(dist * dist)


def erode(mask: SurfaceMask, radius_cells: float) -> SurfaceMask:
    """Shrink obstacles: a cell stays blocked only if every cell within ``radius_cells`` is blocked."""
    if radius_cells < 0:
        raise ValueError("erosion radius must be non-negative")
    if radius_cells == 0:
        return mask
    d2 = squared_distance_to_free(mask.to_array(), radius_cells)
    return SurfaceMask.from_array(mask.geometry, d2 > radius_cells * radius_cells, mask.mode)


@dataclass(frozen=True)
class PyramidLevel:
    epsilon: float
    radius_cells: float
    mask: SurfaceMask


@dataclass(frozen=True)
class MaskPyramid:
    """Eroded masks indexed by search depth; level ``k`` has ``epsilon = initial / 2**k``.

    The last level is the raw classification, stored with ``epsilon = 0``.
    """

    levels: tuple[PyramidLevel, ...]
    factor: float = DEFAULT_FACTOR

    def __len__(self):
        return len(self.levels)

    def level(self, k: int) -> PyramidLevel:
        if not 0 <= k < len(self.levels):
            raise LookupError(f"pyramid has {len(self.levels)} levels, level {k} requested")
        return self.levels[k]

    @property
    def raw(self) -> SurfaceMask:
        return self.levels[-1].mask

    @property
    def depth(self) -> int:
        """Index of the raw level."""
        return len(self.levels) - 1

    @property
    def mode(self) -> str:
        return self.raw.mode

    @property
    def geometry(self) -> GridGeometry:
        return self.raw.geometry


def pyramid_radii(initial_epsilon: float, factor: float, cell_size: float) -> list[tuple[float, float]]:
    """``(epsilon, radius_cells)`` for each eroded level, stopping once the radius drops below a cell."""
    out = []
    k = 0
    while True:
        eps = initial_epsilon / 2 ** k
        radius = factor * eps / cell_size
        if radius < 1.0:
            return out
        out.append((eps, radius))
        k += 1


def build_pyramid(mask: SurfaceMask, initial_epsilon: float = 180.0, factor: float = DEFAULT_FACTOR) -> MaskPyramid:
    """Precompute every erosion level from one distance transform of the raw mask.

    The erosion radius in cells is ``factor * epsilon / cell_size``; ``factor``
    stretches the disk to cover the widening of longitude cells towards the poles.
    """
    if initial_epsilon <= 0:
        raise ValueError("initial epsilon must be positive")
    if factor < 1:
        raise ValueError("over-estimation factor must be at least 1")
    radii = pyramid_radii(initial_epsilon, factor, mask.geometry.cell_size)
    levels = []
    if radii:
        obstacle = mask.to_array()
        max_distance = math.hypot(mask.geometry.rows, mask.geometry.cols / 2)
        d2 = squared_distance_to_free(obstacle, min(radii[0][1], max_distance))
        for eps, radius in radii:
            eroded = SurfaceMask.from_array(mask.geometry, d2 > radius * radius, mask.mode)
            levels.append(PyramidLevel(eps, radius, eroded))
    levels.append(PyramidLevel(0.0, 0.0, mask))
    return MaskPyramid(tuple(levels), factor)


def write_pgm(mask: SurfaceMask, path) -> None:
    """Binary PGM, obstacles white, free cells black, north up."""
    pixels = np.where(mask.to_array(), 255, 0).astype(np.uint8)
    rows, cols = pixels.shape
    with open(os.fspath(path), "wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())
