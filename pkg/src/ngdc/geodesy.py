"""Great-circle and ellipsoidal distances in kilometres.

Three algorithms are offered, from cheapest to most precise:

* :func:`haversine_km` -- great circle on a sphere of mean radius,
* :func:`lambert_km` -- Lambert's first-order flattening correction,
* :func:`vincenty_km` -- Vincenty's iterative inverse solution.

Inputs are always degrees. :func:`resolve_distance_km` decides where the
distance for a registry entry comes from.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from . import _kernels

if TYPE_CHECKING:
    from .registry import LanguageEntry

logger = logging.getLogger(__name__)

MEAN_RADIUS_KM = 6371.0
"""Spherical Earth radius used by haversine (the conventional 6371 km).

The IUGG mean radius 6371.0088 km is available as :data:`IUGG_MEAN_RADIUS_KM`
for callers who want it; pass it as ``radius_km``.
"""
IUGG_MEAN_RADIUS_KM = 6371.0088


@dataclass(frozen=True)
class GeoPoint:
    lat_deg: float
    lon_deg: float

    def __post_init__(self):
        lat, lon = float(self.lat_deg), float(self.lon_deg)
        if not (math.isfinite(lat) and math.isfinite(lon)):
            raise ValueError(f"coordinates must be finite, got ({self.lat_deg}, {self.lon_deg})")
        if not -90.0 <= lat <= 90.0:
            raise ValueError(f"latitude {lat} outside [-90, 90]")
        if not -180.0 <= lon <= 180.0:
            raise ValueError(f"longitude {lon} outside [-180, 180]")
        object.__setattr__(self, "lat_deg", lat)
        object.__setattr__(self, "lon_deg", lon)

    @property
    def radians(self) -> tuple[float, float]:
        return math.radians(self.lat_deg), math.radians(self.lon_deg)


@dataclass(frozen=True)
class Ellipsoid:
    equatorial_radius_km: float
    flattening: float

    def __post_init__(self):
        if not self.equatorial_radius_km > 0:
            raise ValueError("equatorial radius must be positive")
        if not 0.0 <= self.flattening < 1.0:
            raise ValueError("flattening must lie in [0, 1)")

    @property
    def polar_radius_km(self) -> float:
        return self.equatorial_radius_km * (1.0 - self.flattening)


WGS84 = Ellipsoid(6378.137, 1.0 / 298.257223563)


class VincentyNonConvergence(ArithmeticError):
    """Vincenty's iteration did not settle (typically near-antipodal points)."""

    def __init__(self, p1: GeoPoint, p2: GeoPoint, iterations: int):
        self.p1, self.p2, self.iterations = p1, p2, iterations
        super().__init__(
            f"Vincenty inverse failed to converge for {p1} -> {p2} after {iterations} iterations"
        )


class DistanceUnresolvable(ValueError):
    """No usable distance source for a registry entry."""


class DistanceMethod(str, enum.Enum):
    PUBLISHED_FIRST = "published"
    HAVERSINE = "haversine"
    LAMBERT = "lambert"
    VINCENTY = "vincenty"


def haversine_km(p1: GeoPoint, p2: GeoPoint, radius_km: float = MEAN_RADIUS_KM) -> float:
    return _kernels.haversine_rad(*p1.radians, *p2.radians, radius_km)


def lambert_km(p1: GeoPoint, p2: GeoPoint, ellipsoid: Ellipsoid = WGS84) -> float:
    return _kernels.lambert_rad(
        *p1.radians, *p2.radians, ellipsoid.equatorial_radius_km, ellipsoid.flattening
    )


def vincenty_inverse(
    p1: GeoPoint,
    p2: GeoPoint,
    ellipsoid: Ellipsoid = WGS84,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> tuple[float, int, bool]:
    """Run the Vincenty iteration and report ``(distance_km, iterations, converged)``.

    Nothing is raised; ``distance_km`` is NaN when ``converged`` is false.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    d, it, ok = _kernels.vincenty_rad(
        *p1.radians,
        *p2.radians,
        ellipsoid.equatorial_radius_km,
        ellipsoid.flattening,
        float(tol),
        int(max_iter),
    )
    return float(d), int(it), bool(ok)


def vincenty_km(
    p1: GeoPoint,
    p2: GeoPoint,
    ellipsoid: Ellipsoid = WGS84,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Ellipsoidal inverse distance; raises :class:`VincentyNonConvergence` on failure."""
    d, it, ok = vincenty_inverse(p1, p2, ellipsoid, tol, max_iter)
    if not ok:
        raise VincentyNonConvergence(p1, p2, it)
    return d


def distance_km(p1: GeoPoint, p2: GeoPoint, method: DistanceMethod | str) -> tuple[float, str]:
    """Distance between two points plus the name of the algorithm that produced it.

    ``PUBLISHED_FIRST`` and ``VINCENTY`` both fall back to haversine when
    Vincenty does not converge; the returned name is then ``"haversine"``.
    """
    method = DistanceMethod(method)
    if method is DistanceMethod.HAVERSINE:
        return haversine_km(p1, p2), "haversine"
    if method is DistanceMethod.LAMBERT:
        return lambert_km(p1, p2), "lambert"
    try:
        return vincenty_km(p1, p2), "vincenty"
    except VincentyNonConvergence as exc:
        logger.warning("%s; falling back to haversine", exc)
        return haversine_km(p1, p2), "haversine"


def resolve_distance_km(
    entry: LanguageEntry,
    target: LanguageEntry,
    method: DistanceMethod | str = DistanceMethod.PUBLISHED_FIRST,
) -> float:
    method = DistanceMethod(method)
    if method is DistanceMethod.PUBLISHED_FIRST and entry.published_gd_km is not None:
        return entry.published_gd_km
    if entry.centroid is None or target.centroid is None:
        missing = entry.code if entry.centroid is None else target.code
        raise DistanceUnresolvable(
            f"distance unresolvable for {entry.code!r}: no published distance and "
            f"no centroid for {missing!r}"
        )
    return distance_km(entry.centroid, target.centroid, method)[0]


# -- array interface --------------------------------------------------------


def _as_radians(*arrays):
    out = [np.radians(np.ascontiguousarray(a, dtype=np.float64)).ravel() for a in arrays]
    if len({a.shape for a in out}) != 1:
        raise ValueError("coordinate arrays must have equal length")
    return out


def haversine_km_batch(lat1, lon1, lat2, lon2, radius_km: float = MEAN_RADIUS_KM) -> np.ndarray:
    """Element-wise haversine distance over 1-D coordinate arrays (degrees)."""
    return _kernels.haversine_batch(*_as_radians(lat1, lon1, lat2, lon2), float(radius_km))


def lambert_km_batch(lat1, lon1, lat2, lon2, ellipsoid: Ellipsoid = WGS84) -> np.ndarray:
    return _kernels.lambert_batch(
        *_as_radians(lat1, lon1, lat2, lon2),
        ellipsoid.equatorial_radius_km,
        ellipsoid.flattening,
    )


def vincenty_km_batch(
    lat1,
    lon1,
    lat2,
    lon2,
    ellipsoid: Ellipsoid = WGS84,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Element-wise Vincenty; returns ``(distance_km, iterations, converged)``.

    Non-converged slots hold NaN. No fallback is applied here.
    """
    return _kernels.vincenty_batch(
        *_as_radians(lat1, lon1, lat2, lon2),
        ellipsoid.equatorial_radius_km,
        ellipsoid.flattening,
        float(tol),
        int(max_iter),
    )
