"""Coordinate systems, projections, datum shifts and geodesic measurement."""

from .points import GeoPoint, ProjectedPoint, delta_longitude, normalize_longitude
from .ellipsoid import (
    ELLIPSOIDS,
    GRS80,
    INTERNATIONAL_1924,
    WGS84,
    Ellipsoid,
    geocentric_to_geodetic,
    geodetic_to_geocentric,
)
from .projection import KIND_EQUIRECTANGULAR, KIND_TM, ProjectionSpec, tm_forward, tm_inverse
from .datum import DatumShift, datum_transform, helmert_shift
from .affine import (
    AffineTransform,
    ControlPointPair,
    apply_affine,
    fit_affine,
    invert_affine,
)
from .measure import geodesic_area, great_circle_distance
from .simplify import simplify, simplify_coords
from .specstring import (
    format_affine,
    format_projection,
    format_shift,
    parse_affine,
    parse_crs,
    parse_projection,
    parse_shift,
)

__all__ = [
    "AffineTransform",
    "ControlPointPair",
    "DatumShift",
    "ELLIPSOIDS",
    "Ellipsoid",
    "GRS80",
    "GeoPoint",
    "INTERNATIONAL_1924",
    "KIND_EQUIRECTANGULAR",
    "KIND_TM",
    "ProjectedPoint",
    "ProjectionSpec",
    "WGS84",
    "apply_affine",
    "datum_transform",
    "delta_longitude",
    "fit_affine",
    "format_affine",
    "format_projection",
    "format_shift",
    "geocentric_to_geodetic",
    "geodesic_area",
    "geodetic_to_geocentric",
    "great_circle_distance",
    "helmert_shift",
    "invert_affine",
    "normalize_longitude",
    "parse_affine",
    "parse_crs",
    "parse_projection",
    "parse_shift",
    "simplify",
    "simplify_coords",
    "tm_forward",
    "tm_inverse",
]
