"""Global equirectangular relief rasters: loading, validation, resampling and lookup."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

GRIDLINE = "gridline"
CELL_CENTERED = "cell-centered"
REGISTRATIONS = (GRIDLINE, CELL_CENTERED)
_REGISTRATION_ALIASES = {"gridline": GRIDLINE, "cell-centered": CELL_CENTERED, "cell": CELL_CENTERED,
                         "pixel": CELL_CENTERED}

MAX_ABS_ALTITUDE = 12_000
AGGREGATIONS = ("max-abs", "mean", "nearest")


class GridFormatError(ValueError):
    """File layout does not match the declared dimensions."""


class GridDataError(ValueError):
    """Altitude values are non-finite or outside the plausible range."""


def _normalise_registration(registration: str) -> str:
    try:
        return _REGISTRATION_ALIASES[registration.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown registration {registration!r}; expected one of {REGISTRATIONS}") from None


@dataclass(frozen=True)
class GridGeometry:
    """Placement of a global raster: rows run north to south, columns west to east."""

    rows: int
    cols: int
    registration: str = CELL_CENTERED
    lat_of_row0: float = 90.0
    lon_of_col0: float = -180.0

    def __post_init__(self):
        if self.rows < 2 or self.cols < 2:
            raise ValueError(f"grid must be at least 2x2, got {self.rows}x{self.cols}")
        if self.registration not in REGISTRATIONS:
            raise ValueError(f"unknown registration {self.registration!r}")
        span = self.rows - 1 if self.registration == GRIDLINE else self.rows
        if not math.isclose(span * self.cell_size, 180.0, rel_tol=1e-9):
            raise ValueError(
                f"{self.rows} rows with {self.registration} registration do not span 180 degrees "
                f"at cell size {self.cell_size!r} (from {self.cols} columns)"
            )

    @property
    def cell_size(self) -> float:
        return 360.0 / self.cols

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def _index_shift(self) -> float:
        # gridline samples sit on the lines, so round; cell-centred samples fill the cell, so floor
        return 0.5 if self.registration == GRIDLINE else 0.0

    def row_index(self, lat):
        """Nearest row for each latitude; latitudes beyond the poles clamp to the edge rows."""
        coord = (self.lat_of_row0 - np.asarray(lat, dtype=float)) / self.cell_size + self._index_shift
        return np.clip(np.floor(coord), 0, self.rows - 1).astype(np.intp)

    def col_coordinate(self, lon):
        """Continuous column coordinate whose floor, modulo ``cols``, is the nearest column."""
        return (np.asarray(lon, dtype=float) - self.lon_of_col0) / self.cell_size + self._index_shift

    def col_index(self, lon):
        return np.mod(np.floor(self.col_coordinate(lon)), self.cols).astype(np.intp)

    def row_lat(self, row):
        """Latitude of a row's sample point (cell centre or grid line)."""
        shift = 0.0 if self.registration == GRIDLINE else 0.5
        return self.lat_of_row0 - (np.asarray(row, dtype=float) + shift) * self.cell_size

    def col_lon(self, col):
        shift = 0.0 if self.registration == GRIDLINE else 0.5
        return self.lon_of_col0 + (np.asarray(col, dtype=float) + shift) * self.cell_size


@dataclass(frozen=True, eq=False)
class ReliefGrid:
    """Altitudes in metres relative to sea level on a global equirectangular grid."""

    geometry: GridGeometry
    altitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        alt = np.asarray(self.altitudes)
        if alt.shape != self.geometry.shape:
            raise GridFormatError(f"altitude array {alt.shape} does not match geometry {self.geometry.shape}")
        if not np.issubdtype(alt.dtype, np.integer):
            if not np.all(np.isfinite(alt)):
                raise GridDataError("altitudes contain non-finite values")
            if np.any(alt != np.round(alt)):
                raise GridDataError("altitudes must be whole metres")
        if alt.size and np.abs(alt.astype(np.int64, copy=False)).max() > MAX_ABS_ALTITUDE:
            raise GridDataError(f"altitudes exceed +/-{MAX_ABS_ALTITUDE} m")
        alt = np.ascontiguousarray(alt, dtype=np.int16)
        alt.flags.writeable = False
        object.__setattr__(self, "altitudes", alt)

    rows = property(lambda self: self.geometry.rows)
    cols = property(lambda self: self.geometry.cols)
    cell_size = property(lambda self: self.geometry.cell_size)
    registration = property(lambda self: self.geometry.registration)
    lat_of_row0 = property(lambda self: self.geometry.lat_of_row0)
    lon_of_col0 = property(lambda self: self.geometry.lon_of_col0)

    def __eq__(self, other):
        if not isinstance(other, ReliefGrid):
            return NotImplemented
        return self.geometry == other.geometry and np.array_equal(self.altitudes, other.altitudes)

    __hash__ = None


def infer_geometry(rows: int, cols: int, registration: str | None = None) -> GridGeometry:
    """Geometry for a global grid of the given shape, guessing registration from it if needed."""
    if registration is None:
        if cols == 2 * rows:
            registration = CELL_CENTERED
        elif cols == 2 * (rows - 1):
            registration = GRIDLINE
        else:
            raise ValueError(f"a {rows}x{cols} array is not a global equirectangular grid")
    return GridGeometry(rows, cols, _normalise_registration(registration))


def check_relief(relief, registration: str | None = None) -> ReliefGrid:
    """Accept a ReliefGrid or a 2-D array of altitudes and return a validated ReliefGrid."""
    if isinstance(relief, ReliefGrid):
        return relief
    alt = np.asarray(relief)
    if alt.ndim != 2:
        raise ValueError(f"expected a 2-D altitude array, got shape {alt.shape}")
    return ReliefGrid(infer_geometry(*alt.shape, registration), alt)


def _drop_duplicate_meridian(alt: np.ndarray, registration: str) -> np.ndarray:
    # ETOPO1 gridline files carry both -180 and +180 columns
    rows, cols = alt.shape
    if registration == GRIDLINE and rows > 1 and cols == 2 * (rows - 1) + 1:
        return alt[:, :-1]
    return alt


def _geometry_or_format_error(path: str, rows: int, cols: int, registration: str) -> GridGeometry:
    try:
        return GridGeometry(rows, cols, registration)
    except ValueError as exc:
        raise GridFormatError(f"{path}: {exc}") from None


def load_grid(path, format: str = "ascii-grid", rows: int | None = None, cols: int | None = None,
              registration: str = CELL_CENTERED) -> ReliefGrid:
    """Read a relief grid.

    ``raw-int16`` is headerless little-endian row-major data starting at the
    north-west corner, so ``rows`` and ``cols`` are required.  ``ascii-grid``
    carries a one-line header ``rows cols cell_size_arcmin registration``.
    """
    path = os.fspath(path)
    if format == "raw-int16":
        if rows is None or cols is None:
            raise ValueError("raw-int16 grids need explicit rows and cols")
        registration = _normalise_registration(registration)
        expected = rows * cols * 2
        actual = os.path.getsize(path)
        if actual != expected:
            raise GridFormatError(f"{path}: {actual} bytes, expected {expected} for {rows}x{cols} int16")
        alt = np.fromfile(path, dtype="<i2").reshape(rows, cols)
        alt = _drop_duplicate_meridian(alt, registration)
        return ReliefGrid(_geometry_or_format_error(path, rows, alt.shape[1], registration), alt)
    if format == "ascii-grid":
        return _load_ascii(path)
    raise ValueError(f"unknown grid format {format!r}")


def _load_ascii(path: str) -> ReliefGrid:
    with open(path) as fh:
        lines = [line.split() for line in fh if line.strip() and not line.lstrip().startswith("#")]
    if not lines or len(lines[0]) != 4:
        raise GridFormatError(f"{path}: header must be 'rows cols cell_size_arcmin registration'")
    try:
        rows, cols = int(lines[0][0]), int(lines[0][1])
        cell_arcmin = float(lines[0][2])
    except ValueError:
        raise GridFormatError(f"{path}: malformed header {' '.join(lines[0])!r}") from None
    registration = _normalise_registration(lines[0][3])
    body = lines[1:]
    if len(body) == rows and any(len(line) != cols for line in body):
        bad = next(i for i, line in enumerate(body) if len(line) != cols)
        raise GridFormatError(f"{path}: row {bad} has {len(body[bad])} values, header declares {cols}")
    tokens = [tok for line in body for tok in line]
    if len(tokens) != rows * cols:
        raise GridFormatError(f"{path}: {len(tokens)} values, header declares {rows}x{cols}")
    try:
        values = np.array(tokens, dtype=float).reshape(rows, cols)
    except ValueError as exc:
        raise GridFormatError(f"{path}: {exc}") from None
    alt = _drop_duplicate_meridian(values, registration)
    geometry = _geometry_or_format_error(path, rows, alt.shape[1], registration)
    if not math.isclose(geometry.cell_size * 60.0, cell_arcmin, rel_tol=1e-6):
        raise GridFormatError(
            f"{path}: header cell size {cell_arcmin}' disagrees with {alt.shape[1]} columns "
            f"({geometry.cell_size * 60.0}')"
        )
    return ReliefGrid(geometry, alt)


def write_ascii_grid(grid: ReliefGrid, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{grid.rows} {grid.cols} {grid.cell_size * 60.0:.12g} {grid.registration}\n")
        for row in grid.altitudes:
            fh.write(" ".join(map(str, row.tolist())) + "\n")


def write_raw(grid: ReliefGrid, path) -> None:
    grid.altitudes.astype("<i2").tofile(path)


def _reduce_windows(windows: np.ndarray, method: str) -> np.ndarray:
    """Reduce ``(R, C, k, k)`` windows (NaN marks cells beyond the poles) to ``(R, C)``."""
    flat = windows.reshape(*windows.shape[:2], -1)
    if method == "mean":
        return np.round(np.nanmean(flat, axis=-1))
    if method == "max-abs":
        magnitude = np.where(np.isnan(flat), -1.0, np.abs(flat))
        pick = np.argmax(magnitude, axis=-1)
        return np.take_along_axis(flat, pick[..., None], axis=-1)[..., 0]
    raise ValueError(f"unknown aggregation {method!r}; expected one of {AGGREGATIONS}")


def block_reduce(values: np.ndarray, factor: int, method: str = "nearest") -> np.ndarray:
    """Aggregate non-overlapping ``factor x factor`` blocks of a 2-D array."""
    values = np.asarray(values)
    rows, cols = values.shape
    if factor < 1 or rows % factor or cols % factor:
        raise ValueError(f"factor {factor} does not divide a {rows}x{cols} array")
    if method == "nearest":
        return values[factor // 2::factor, factor // 2::factor].copy()
    blocks = values.astype(float).reshape(rows // factor, factor, cols // factor, factor).transpose(0, 2, 1, 3)
    return _reduce_windows(blocks, method)


def _gridline_reduce(values: np.ndarray, factor: int, method: str) -> np.ndarray:
    if method == "nearest":
        return values[::factor, ::factor].copy()
    half = factor // 2
    padded = np.pad(values.astype(float), ((0, 0), (half, half)), mode="wrap")
    padded = np.pad(padded, ((half, half), (0, 0)), constant_values=np.nan)
    windows = sliding_window_view(padded, (2 * half + 1, 2 * half + 1))[::factor, ::factor]
    return _reduce_windows(windows, method)


def downsample(grid: ReliefGrid, factor: int, method: str = "nearest") -> ReliefGrid:
    """Coarsen a grid by an integer factor.

    ``nearest`` keeps the sample closest to each coarse cell's centre,
    ``mean`` averages the block, ``max-abs`` keeps the most extreme altitude.
    Gridline grids aggregate over a window centred on each retained grid line.
    """
    if method not in AGGREGATIONS:
        raise ValueError(f"unknown aggregation {method!r}; expected one of {AGGREGATIONS}")
    if not isinstance(factor, (int, np.integer)) or factor < 1:
        raise ValueError(f"downsampling factor must be a positive integer, got {factor!r}")
    if factor == 1:
        return grid
    geo = grid.geometry
    if geo.registration == GRIDLINE:
        if (geo.rows - 1) % factor or geo.cols % factor:
            raise ValueError(f"factor {factor} does not divide rows-1={geo.rows - 1} and cols={geo.cols}")
        alt = _gridline_reduce(grid.altitudes, factor, method)
    else:
        if geo.rows % factor or geo.cols % factor:
            raise ValueError(f"factor {factor} does not divide rows={geo.rows} and cols={geo.cols}")
        alt = block_reduce(grid.altitudes, factor, method)
    new_geo = GridGeometry(alt.shape[0], alt.shape[1], geo.registration, geo.lat_of_row0, geo.lon_of_col0)
    return ReliefGrid(new_geo, alt)


def sample(grid: ReliefGrid, lat, lon):
    """Nearest-neighbour altitude lookup; longitude wraps, latitude clamps at the poles."""
    lat = np.asarray(lat, dtype=float)
    if np.any(np.abs(lat) > 90.0):
        raise ValueError("latitude must lie in [-90, 90]")
    values = grid.altitudes[grid.geometry.row_index(lat), grid.geometry.col_index(lon)]
    return int(values) if values.ndim == 0 else values
