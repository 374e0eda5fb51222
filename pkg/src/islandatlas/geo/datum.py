"""Datum shifts between local reference frames and the atlas frame.

The seven-parameter similarity transform is applied in the position
vector convention with the usual small-angle rotation matrix; a shift
with rotations and scale left at zero degrades to the three-parameter
translation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import GeoError
from .ellipsoid import WGS84, Ellipsoid, geocentric_to_geodetic, geodetic_to_geocentric
from .points import GeoPoint, normalize_longitude

ARCSEC_TO_RAD = math.pi / 648000.0


@dataclass(frozen=True)
class DatumShift:
    """Geocentric shift: translations in metres, rotations in arc-seconds,
    scale change in parts per million."""

    dx: float = 0.0
    dy: float = 0.0
    dz: float = 0.0
    rx: float = 0.0
    ry: float = 0.0
    rz: float = 0.0
    ds: float = 0.0

    def __post_init__(self) -> None:
        for name in ("dx", "dy", "dz", "rx", "ry", "rz", "ds"):
            if not math.isfinite(getattr(self, name)):
                raise GeoError(f"non-finite {name} in datum shift")

    def is_zero(self) -> bool:
        return self == DatumShift()


def helmert_shift(s: DatumShift, xyz: tuple[float, float, float]) -> tuple[float, float, float]:
    """Apply a seven-parameter shift to geocentric metres.

    Position vector convention: X' = T + (1 + ds)(I + R)X with the
    linearized rotation matrix.  An all-zero shift returns the input
    unchanged, bit for bit.
    """
    x, y, z = xyz
    if not all(math.isfinite(v) for v in xyz):
        raise GeoError(f"non-finite geocentric coordinate {xyz!r}")
    if s.is_zero():
        return (x, y, z)
    rx = s.rx * ARCSEC_TO_RAD
    ry = s.ry * ARCSEC_TO_RAD
    rz = s.rz * ARCSEC_TO_RAD
    m = 1.0 + s.ds * 1e-6
    return (
        s.dx + m * (x - rz * y + ry * z),
        s.dy + m * (rz * x + y - rx * z),
        s.dz + m * (-ry * x + rx * y + z),
    )


def datum_transform(src_ellipsoid: Ellipsoid, shift: DatumShift, p: GeoPoint) -> GeoPoint:
    """Carry a point from its source datum onto the atlas datum (WGS84).

    Composition: geodetic to geocentric on the source ellipsoid, Helmert
    shift, geocentric back to geodetic on WGS84.  When the source is
    already WGS84 with a zero shift the point passes through untouched.
    """
    if shift.is_zero() and src_ellipsoid == WGS84:
        return GeoPoint(normalize_longitude(p.lon), p.lat, p.h)
    xyz = geodetic_to_geocentric(src_ellipsoid, p)
    return geocentric_to_geodetic(WGS84, helmert_shift(shift, xyz))
