"""Stand-in global relief derived from the GSHHS land/sea/lake masks in ``basemap-data``.

The masks only say ocean, land or lake.  They are turned into signed
altitudes so that the sign test behaves like a real relief model: ocean is
negative, land positive, and lakes positive except the ones whose surface
lies below sea level (the Caspian Sea and the Dead Sea), which are negative.
Dry land below sea level is painted in from a short table of the major
depressions, approximated by lat/lon boxes.

Usage::

    python -m straightpath.proxy --cell-arcmin 6 --out proxy_6m.i16
"""
from __future__ import annotations

import argparse
import gzip
import os

import numpy as np
from scipy import ndimage

from .relief import CELL_CENTERED, GridGeometry, ReliefGrid, write_raw

OCEAN_M = -1000
LAND_M = 100
LAKE_M = 50
DEPRESSION_LAKE_M = -28

# (lat, lon) inside lakes whose surface is below sea level
BELOW_SEA_LEVEL_LAKES = {"Caspian Sea": (42.0, 50.5), "Dead Sea": (31.5, 35.5)}

# (lat_min, lat_max, lon_min, lon_max) of land lying below sea level
DEPRESSIONS = {
    "Dead Sea": (30.95, 31.78, 35.35, 35.60),
    "Northern Arava": (30.50, 30.95, 35.10, 35.40),
    "Jordan Rift": (31.75, 32.90, 35.50, 35.65),
    "Caspian Depression": (45.5, 48.3, 46.5, 53.0),
    "Karagiye": (43.3, 43.6, 51.2, 51.7),
    "Qattara Depression": (29.2, 30.2, 26.3, 28.9),
    "Turpan Depression": (42.5, 43.0, 88.8, 90.0),
    "Danakil Depression": (13.5, 14.6, 40.0, 40.7),
    "Lake Assal": (11.55, 11.75, 42.30, 42.50),
    "Chott Melrhir": (33.8, 34.3, 5.8, 6.9),
    "Lake Eyre": (-29.3, -28.4, 137.0, 137.6),
    "Death Valley": (35.9, 36.6, -117.0, -116.7),
    "Salton Trough": (32.9, 33.5, -116.1, -115.5),
}

_SOURCE_COLS = {10: 2160, 5: 4320, 2.5: 8640, 1.25: 17280}


def _basemap_data_dir() -> str:
    try:
        import mpl_toolkits.basemap_data as bd
    except ImportError as exc:
        raise RuntimeError("the proxy relief needs the 'basemap-data' package (pip install basemap-data)") from exc
    return list(bd.__path__)[0]


def load_lsmask(source_arcmin: float = 1.25, resolution: str = "f") -> np.ndarray:
    """GSHHS class raster (0 ocean, 1 land, 2 lake), north-up, first column at 180W."""
    cols = _SOURCE_COLS[source_arcmin]
    name = f"lsmask_{source_arcmin:g}min_{resolution}.bin"
    with gzip.open(os.path.join(_basemap_data_dir(), name), "rb") as fh:
        raw = np.frombuffer(fh.read(), dtype=np.uint8)
    return raw.reshape(cols // 2, cols)[::-1]


def proxy_relief(cell_arcmin: float = 6.0, source_arcmin: float = 1.25, resolution: str = "f") -> ReliefGrid:
    classes = load_lsmask(source_arcmin, resolution)
    src_rows, src_cols = classes.shape
    src_cell = 360.0 / src_cols

    lakes, _ = ndimage.label(classes == 2, structure=np.ones((3, 3)))
    sunken = set()
    for lat, lon in BELOW_SEA_LEVEL_LAKES.values():
        label = lakes[int((90.0 - lat) / src_cell), int((lon + 180.0) / src_cell)]
        if label:
            sunken.add(label)
    altitude_of_class = np.array([OCEAN_M, LAND_M, LAKE_M], dtype=np.int16)
    source = altitude_of_class[classes]
    source[np.isin(lakes, list(sunken))] = DEPRESSION_LAKE_M
    for lat_min, lat_max, lon_min, lon_max in DEPRESSIONS.values():
        r0, r1 = int((90.0 - lat_max) / src_cell), int(np.ceil((90.0 - lat_min) / src_cell))
        c0, c1 = int((lon_min + 180.0) / src_cell), int(np.ceil((lon_max + 180.0) / src_cell))
        block = source[r0:r1, c0:c1]
        block[block > 0] = DEPRESSION_LAKE_M

    cols = int(round(21600 / cell_arcmin))
    geometry = GridGeometry(cols // 2, cols, CELL_CENTERED)
    lat = geometry.row_lat(np.arange(geometry.rows))
    lon = geometry.col_lon(np.arange(geometry.cols))
    rows_idx = np.clip(np.floor((90.0 - lat) / src_cell).astype(int), 0, src_rows - 1)
    cols_idx = np.mod(np.floor((lon + 180.0) / src_cell).astype(int), src_cols)
    return ReliefGrid(geometry, source[np.ix_(rows_idx, cols_idx)])


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--cell-arcmin", type=float, default=6.0)
    parser.add_argument("--resolution", default="f", choices=list("clihf"))
    parser.add_argument("--out", required=True)
    args = parser.parse_args(argv)
    grid = proxy_relief(args.cell_arcmin, resolution=args.resolution)
    write_raw(grid, args.out)
    print(f"wrote {args.out}: --format raw-int16 --rows {grid.rows} --cols {grid.cols} "
          f"--registration {grid.registration}")


if __name__ == "__main__":
    main()
