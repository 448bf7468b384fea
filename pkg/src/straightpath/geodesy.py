"""Spherical trigonometry for great circles parametrised by equator crossing and heading.

A great circle ``GC(origin, heading)`` crosses the equator northbound at
longitude ``origin`` with angle ``heading`` to the equator.  A point on it is
addressed by ``phi``, the angle travelled from that crossing.  All public
functions take and return degrees.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

EARTH_RADIUS_KM = 6371.0088


def _wrap180(angle):
    """Map angles into (-180, 180]."""
    wrapped = np.mod(np.asarray(angle, dtype=float) + 180.0, 360.0) - 180.0
    wrapped = np.where(wrapped == -180.0, 180.0, wrapped)
    return wrapped.item() if wrapped.ndim == 0 else wrapped


def _wrap360(angle):
    """Map angles into [0, 360)."""
    wrapped = np.mod(np.asarray(angle, dtype=float), 360.0)
    wrapped = np.where(wrapped >= 360.0, 0.0, wrapped)
    return wrapped.item() if wrapped.ndim == 0 else wrapped


@dataclass(frozen=True)
class GreatCircle:
    """A great circle in canonical form, both angles in [0, 180)."""

    origin: float
    heading: float

    def __post_init__(self):
        for name in ("origin", "heading"):
            value = getattr(self, name)
            if not (math.isfinite(value) and 0.0 <= value < 180.0):
                raise ValueError(f"{name} must lie in [0, 180), got {value!r}")

    @classmethod
    def canonical(cls, origin: float, heading: float) -> "GreatCircle":
        """Build a circle from any (origin, heading) pair, folding it into canonical range.

        ``GC(d, a)`` and ``GC(d + 180, 180 - a)`` are the same set of points, so
        every circle has exactly one representative with both angles in [0, 180).
        """
        origin = _wrap360(origin)
        heading = _wrap360(heading)
        if heading >= 180.0:
            # same point set, traversed backwards
            heading -= 180.0
        if origin >= 180.0:
            origin, heading = origin - 180.0, 180.0 - heading
            if heading >= 180.0:
                heading = 0.0
        return cls(float(origin), float(heading))


@dataclass(frozen=True)
class CirclePoint:
    phi: float
    lat: float
    lon: float


def point_on_circle(origin, heading, phi):
    """Vectorised latitude/longitude of ``phi`` along ``GC(origin, heading)``.

    Returns ``(lat, lon)`` arrays, longitude in [0, 360).
    """
    a = np.radians(heading)
    p = np.radians(phi)
    sin_p = np.sin(p)
    lat = np.degrees(np.arcsin(np.clip(np.sin(a) * sin_p, -1.0, 1.0)))
    lon = np.asarray(origin, dtype=float) + np.degrees(np.arctan2(np.cos(a) * sin_p, np.cos(p)))
    return lat, _wrap360(lon)


def gc_point(gc: GreatCircle, phi: float) -> CirclePoint:
    phi = float(_wrap180(phi))
    lat, lon = point_on_circle(gc.origin, gc.heading, phi)
    return CirclePoint(phi=phi, lat=float(lat), lon=float(lon))


def circle_normal(origin, heading):
    """Unit normal of the plane of ``GC(origin, heading)`` (right-handed w.r.t. travel)."""
    d = np.radians(origin)
    a = np.radians(heading)
    return np.stack(
        [np.sin(d) * np.sin(a), -np.cos(d) * np.sin(a), np.cos(a) * np.ones_like(d)], axis=-1
    )


def unit_vector(lat, lon):
    la = np.radians(lat)
    lo = np.radians(lon)
    return np.stack([np.cos(la) * np.cos(lo), np.cos(la) * np.sin(lo), np.sin(la)], axis=-1)


def exact_max_separation(theta: float, d_theta: float, d_phi: float) -> float:
    """Largest distance from a point on one circle to the other circle, in degrees.

    The two circles have headings ``theta -/+ d_theta/2`` and origins ``d_phi``
    apart.  The value is the dihedral angle between their planes.
    """
    t, dt, dp = np.radians([theta, d_theta, d_phi])
    c = math.cos(dt) * math.cos(dp / 2) ** 2 + math.cos(2 * t) * math.sin(dp / 2) ** 2
    return math.degrees(math.acos(min(1.0, max(-1.0, c))))


def separation_bound(d_origin: float, d_heading: float) -> float:
    """Bound on the separation between a box's centre circle and any circle in the box.

    ``d_origin`` and ``d_heading`` are the full widths of the box.
    """
    return abs(d_origin / 2.0) + abs(d_heading / 2.0)


def arc_length(angular_extent: float, radius_km: float = EARTH_RADIUS_KM) -> float:
    return radius_km * math.radians(angular_extent)


def angular_distance(lat1, lon1, lat2, lon2):
    """Central angle between two points in degrees (haversine form)."""
    la1, lo1, la2, lo2 = map(np.radians, (lat1, lon1, lat2, lon2))
    h = np.sin((la2 - la1) / 2) ** 2 + np.cos(la1) * np.cos(la2) * np.sin((lo2 - lo1) / 2) ** 2
    return np.degrees(2 * np.arcsin(np.sqrt(np.clip(h, 0.0, 1.0))))


def parse_angle(text: str | float) -> float:
    """Parse ``12.5``, ``163°44'``, ``163d44'`` or ``-8°55'`` into decimal degrees.

    A bare number followed by ``'`` is taken as arcminutes.
    """
    if isinstance(text, (int, float)):
        return float(text)
    s = text.strip().replace("′", "'").replace("’", "'").replace("°", "d")
    if not s:
        raise ValueError("empty angle")
    sign = -1.0 if s.startswith("-") else 1.0
    s = s.lstrip("+-")
    hemisphere = s[-1:].upper()
    if hemisphere in ("N", "S", "E", "W"):
        s = s[:-1].strip()
        if hemisphere in ("S", "W"):
            sign = -sign
    try:
        if "d" in s:
            deg, _, rest = s.partition("d")
            rest = rest.strip().rstrip("'").strip()
            minutes = float(rest) if rest else 0.0
            return sign * (float(deg) + minutes / 60.0)
        if s.endswith("'"):
            return sign * float(s[:-1]) / 60.0
        return sign * float(s)
    except ValueError:
        raise ValueError(f"cannot parse angle {text!r}") from None
