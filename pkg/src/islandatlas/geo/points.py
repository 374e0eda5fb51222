"""Geographic and planar coordinate primitives.

Longitude lives in [0, 360) everywhere inside the atlas, so that island
groups straddling the 180 degree meridian stay contiguous in storage and
on screen.  Inputs in [-180, 180] are folded at construction time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import GeoError


def normalize_longitude(lon: float) -> float:
    """Fold a longitude in degrees into [0, 360).

    The result is congruent to the input modulo 360; the function is
    idempotent.  Non-finite input raises GeoError.
    """
    if not math.isfinite(lon):
        raise GeoError(f"longitude must be finite, got {lon!r}")
    folded = lon % 360.0
    if folded >= 360.0:
        # Tiny negative inputs round up to exactly 360.0 under float modulo.
        folded -= 360.0
    return folded


def delta_longitude(lon: float, reference: float) -> float:
    """Signed angular distance in degrees from ``reference`` to ``lon``.

    Wrapped into (-180, 180], so the short way around the globe.
    """
    d = (lon - reference) % 360.0
    if d > 180.0:
        d -= 360.0
    return d


@dataclass(frozen=True)
class GeoPoint:
    """Geographic position: degrees of longitude/latitude plus metres of height."""

    lon: float
    lat: float
    h: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lat) and math.isfinite(self.h)):
            raise GeoError(f"non-finite coordinate in GeoPoint({self.lon!r}, {self.lat!r}, {self.h!r})")
        if not -90.0 <= self.lat <= 90.0:
            raise GeoError(f"latitude {self.lat!r} outside [-90, 90]")
        object.__setattr__(self, "lon", normalize_longitude(self.lon))


@dataclass(frozen=True)
class ProjectedPoint:
    """Planar position in metres: easting ``x``, northing ``y``."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeoError(f"non-finite coordinate in ProjectedPoint({self.x!r}, {self.y!r})")
