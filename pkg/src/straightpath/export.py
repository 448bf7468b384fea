"""Result serialisation: GeoJSON paths, flat JSON reports and relief profiles along a circle."""
from __future__ import annotations

import csv
import json
import math
import os

import numpy as np
from scipy.optimize import brentq

from .geodesy import GreatCircle, _wrap180, gc_point, point_on_circle
from .morphology import SurfaceMask
from .relief import ReliefGrid, sample
from .scan import CircleScanner, PathResult

DENSIFY_KM = 100.0

REPORT_KEYS = (
    "mode", "length_km", "angular_extent_deg", "origin_deg", "heading_deg", "phi_start_deg",
    "phi_end_deg", "start_lat_deg", "start_lon_deg", "end_lat_deg", "end_lon_deg",
    "upper_bound_km", "gap_km", "nodes_expanded", "wall_time_s",
)


def path_phis(path: PathResult, spacing_km: float = DENSIFY_KM) -> np.ndarray:
    """Evenly spaced angles along the path, no further apart than ``spacing_km``."""
    segments = max(1, int(math.ceil(path.length_km / spacing_km)))
    return path.phi_start + np.linspace(0.0, path.angular_extent, segments + 1)


def _antimeridian_phi(circle: GreatCircle, phi0: float, phi1: float) -> float:
    def offset(phi):
        return _wrap180(float(point_on_circle(circle.origin, circle.heading, phi)[1]) - 180.0)

    return brentq(offset, phi0, phi1, xtol=1e-13)


def path_segments(path: PathResult, spacing_km: float = DENSIFY_KM) -> list[list[tuple[float, float]]]:
    """``[lon, lat]`` runs along the path, cut where it crosses the antimeridian."""
    phis = path_phis(path, spacing_km)
    lat, lon = point_on_circle(path.circle.origin, path.circle.heading, phis)
    lon = _wrap180(lon)
    segments = [[(float(lon[0]), float(lat[0]))]]
    for i in range(1, len(phis)):
        if abs(lon[i] - lon[i - 1]) > 180.0:
            phi_x = _antimeridian_phi(path.circle, phis[i - 1], phis[i])
            lat_x = gc_point(path.circle, phi_x).lat
            side = 180.0 if lon[i - 1] > 0 else -180.0
            segments[-1].append((side, lat_x))
            segments.append([(-side, lat_x)])
        segments[-1].append((float(lon[i]), float(lat[i])))
    return segments


def _lon180(lon: float) -> float:
    return float(_wrap180(lon))


def report_dict(report, path: PathResult | None = None) -> dict:
    """Flat key/value view of a solve (or oracle) report, keys in a fixed order."""
    best = report.best if path is None else path
    upper = getattr(report, "upper_bound", best.length_km)
    values = {
        "mode": report.mode,
        "length_km": best.length_km,
        "angular_extent_deg": best.angular_extent,
        "origin_deg": best.circle.origin,
        "heading_deg": best.circle.heading,
        "phi_start_deg": best.phi_start,
        "phi_end_deg": best.phi_end,
        "start_lat_deg": best.start_point[0],
        "start_lon_deg": _lon180(best.start_point[1]),
        "end_lat_deg": best.end_point[0],
        "end_lon_deg": _lon180(best.end_point[1]),
        "upper_bound_km": upper,
        "gap_km": upper - best.length_km,
        "nodes_expanded": getattr(report, "nodes_expanded", getattr(report, "circles", 0)),
        "wall_time_s": report.wall_time,
    }
    return {key: values[key] for key in REPORT_KEYS}


def write_report(report, path) -> dict:
    values = report_dict(report)
    with open(os.fspath(path), "w") as fh:
        json.dump(values, fh, indent=2)
        fh.write("\n")
    return values


def path_feature(path: PathResult, properties: dict | None = None, spacing_km: float = DENSIFY_KM) -> dict:
    segments = path_segments(path, spacing_km)
    coords = [[list(p) for p in seg] for seg in segments]
    if len(coords) == 1:
        geometry = {"type": "LineString", "coordinates": coords[0]}
    else:
        geometry = {"type": "MultiLineString", "coordinates": coords}
    return {"type": "Feature", "geometry": geometry, "properties": dict(properties or {})}


def write_geojson(path: PathResult, filename, properties: dict | None = None,
                  spacing_km: float = DENSIFY_KM) -> dict:
    collection = {"type": "FeatureCollection", "features": [path_feature(path, properties, spacing_km)]}
    with open(os.fspath(filename), "w") as fh:
        json.dump(collection, fh, indent=1)
        fh.write("\n")
    return collection


PROFILE_COLUMNS = ("phi_deg", "lat_deg", "lon_deg", "altitude_m", "obstacle_bit")


def profile_rows(grid: ReliefGrid, mask: SurfaceMask, circle: GreatCircle, step: float | None = None):
    """Relief and obstacle flag at every sample of ``circle``, in scan order."""
    scanner = CircleScanner(grid.geometry, step)
    lat, lon = point_on_circle(circle.origin, circle.heading, scanner.phi)
    altitude = sample(grid, lat, lon)
    blocked = scanner.obstacles(mask, circle.origin, circle.heading)
    for phi, la, lo, alt, bit in zip(scanner.phi, lat, _wrap180(lon), altitude, blocked):
        yield float(phi), float(la), float(lo), int(alt), int(bit)


def write_profile(grid: ReliefGrid, mask: SurfaceMask, circle: GreatCircle, filename,
                  step: float | None = None) -> int:
    count = 0
    with open(os.fspath(filename), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(PROFILE_COLUMNS)
        for phi, lat, lon, alt, bit in profile_rows(grid, mask, circle, step):
            writer.writerow([f"{phi:.6f}", f"{lat:.6f}", f"{lon:.6f}", alt, bit])
            count += 1
    return count
