"""Reference ellipsoids and geodetic/geocentric conversions."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import GeoError
from .points import GeoPoint, normalize_longitude


@dataclass(frozen=True)
class Ellipsoid:
    """Reference ellipsoid: semi-major axis ``a`` in metres, inverse flattening."""

    a: float
    inv_f: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and self.a > 0.0):
            raise GeoError(f"semi-major axis must be positive, got {self.a!r}")
        if not (math.isfinite(self.inv_f) and self.inv_f > 1.0):
            raise GeoError(f"inverse flattening must exceed 1, got {self.inv_f!r}")

    @property
    def f(self) -> float:
        """Flattening."""
        return 1.0 / self.inv_f

    @property
    def e2(self) -> float:
        """First eccentricity squared."""
        f = self.f
        return f * (2.0 - f)

    @property
    def n(self) -> float:
        """Third flattening, the expansion parameter of the projection series."""
        f = self.f
        return f / (2.0 - f)


WGS84 = Ellipsoid(6378137.0, 298.257223563)
GRS80 = Ellipsoid(6378137.0, 298.257222101)
INTERNATIONAL_1924 = Ellipsoid(6378388.0, 297.0)

ELLIPSOIDS: dict[str, Ellipsoid] = {
    "wgs84": WGS84,
    "grs80": GRS80,
    "intl1924": INTERNATIONAL_1924,
}


def geodetic_to_geocentric(ell: Ellipsoid, p: GeoPoint) -> tuple[float, float, float]:
    """Convert geodetic coordinates to earth-centred cartesian X, Y, Z in metres."""
    lam = math.radians(p.lon)
    phi = math.radians(p.lat)
    sin_phi = math.sin(phi)
    cos_phi = math.cos(phi)
    nu = ell.a / math.sqrt(1.0 - ell.e2 * sin_phi * sin_phi)
    x = (nu + p.h) * cos_phi * math.cos(lam)
    y = (nu + p.h) * cos_phi * math.sin(lam)
    z = (nu * (1.0 - ell.e2) + p.h) * sin_phi
    return (x, y, z)


def geocentric_to_geodetic(ell: Ellipsoid, xyz: tuple[float, float, float]) -> GeoPoint:
    """Convert earth-centred cartesian metres back to geodetic coordinates.

    Latitude is recovered by fixed-point iteration on the prime-vertical
    radius; converges to machine precision in a handful of rounds.
    """
    x, y, z = xyz
    if not all(math.isfinite(v) for v in xyz):
        raise GeoError(f"non-finite geocentric coordinate {xyz!r}")
    lam = math.atan2(y, x)
    rho = math.hypot(x, y)
    if rho == 0.0:
        # On the rotation axis: latitude is a pole.
        lat = 90.0 if z >= 0.0 else -90.0
        b = ell.a * (1.0 - ell.f)
        return GeoPoint(normalize_longitude(math.degrees(lam)), lat, abs(z) - b)
    phi = math.atan2(z, rho * (1.0 - ell.e2))
    for _ in range(20):
        sin_phi = math.sin(phi)
        nu = ell.a / math.sqrt(1.0 - ell.e2 * sin_phi * sin_phi)
        h = rho / math.cos(phi) - nu
        phi_next = math.atan2(z, rho * (1.0 - ell.e2 * nu / (nu + h)))
        if phi_next == phi:
            break
        phi = phi_next
    sin_phi = math.sin(phi)
    nu = ell.a / math.sqrt(1.0 - ell.e2 * sin_phi * sin_phi)
    h = rho / math.cos(phi) - nu
    return GeoPoint(normalize_longitude(math.degrees(lam)), math.degrees(phi), h)
