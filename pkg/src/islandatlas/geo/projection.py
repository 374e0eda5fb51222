"""Transverse Mercator projection with an equirectangular fallback.

The TM implementation follows the conformal-latitude series formulation:
exact conversion to the conformal sphere, then a fourth-order series in
the third flattening maps the sphere onto the plane.  Forward and inverse
use matched series, so round trips are accurate to well below a
nanodegree over the whole validity zone.

The equirectangular kind exists for region-scale caches whose extent
exceeds any sensible TM zone; it is exact to invert and carries no zone
limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from ..constants import TM_MAX_DELTA_DEG
from ..errors import GeoError, ProjectionDomainError
from .ellipsoid import Ellipsoid
from .points import GeoPoint, ProjectedPoint, delta_longitude, normalize_longitude

KIND_TM = "tm"
KIND_EQUIRECTANGULAR = "eqc"


@dataclass(frozen=True)
class ProjectionSpec:
    """Parameters of a planar projection.

    ``central_meridian`` is stored folded into [0, 360) like every other
    longitude.  ``scale_factor`` must lie in (0.9, 1.1] and is forced to 1
    for the equirectangular kind.
    """

    kind: str
    central_meridian: float
    lat_origin: float
    scale_factor: float
    false_easting: float
    false_northing: float
    ellipsoid: Ellipsoid

    def __post_init__(self) -> None:
        if self.kind not in (KIND_TM, KIND_EQUIRECTANGULAR):
            raise GeoError(f"unknown projection kind {self.kind!r}")
        for name in ("lat_origin", "scale_factor", "false_easting", "false_northing"):
            if not math.isfinite(getattr(self, name)):
                raise GeoError(f"non-finite {name} in projection spec")
        if not -90.0 < self.lat_origin < 90.0:
            raise GeoError(f"latitude of origin {self.lat_origin!r} outside (-90, 90)")
        if not 0.9 < self.scale_factor <= 1.1:
            raise GeoError(f"scale factor {self.scale_factor!r} outside (0.9, 1.1]")
        if self.kind == KIND_EQUIRECTANGULAR and self.scale_factor != 1.0:
            raise GeoError("equirectangular projections use scale factor 1")
        object.__setattr__(self, "central_meridian", normalize_longitude(self.central_meridian))


@lru_cache(maxsize=64)
def _series(ell: Ellipsoid) -> tuple[float, tuple[float, ...], tuple[float, ...]]:
    """Rectifying radius and the forward/inverse series coefficients."""
    n = ell.n
    n2 = n * n
    n3 = n2 * n
    n4 = n2 * n2
    radius = ell.a / (1.0 + n) * (1.0 + n2 / 4.0 + n4 / 64.0)
    fwd = (
        n / 2.0 - 2.0 * n2 / 3.0 + 5.0 * n3 / 16.0 + 41.0 * n4 / 180.0,
        13.0 * n2 / 48.0 - 3.0 * n3 / 5.0 + 557.0 * n4 / 1440.0,
        61.0 * n3 / 240.0 - 103.0 * n4 / 140.0,
        49561.0 * n4 / 161280.0,
    )
    inv = (
        n / 2.0 - 2.0 * n2 / 3.0 + 37.0 * n3 / 96.0 - n4 / 360.0,
        n2 / 48.0 + n3 / 15.0 - 437.0 * n4 / 1440.0,
        17.0 * n3 / 480.0 - 37.0 * n4 / 840.0,
        4397.0 * n4 / 161280.0,
    )
    return radius, fwd, inv


def _conformal_tan(e: float, tau: float) -> float:
    """Tangent of the conformal latitude for geodetic tangent ``tau``; exact."""
    sigma = math.sinh(e * math.atanh(e * tau / math.hypot(1.0, tau)))
    return tau * math.hypot(1.0, sigma) - sigma * math.hypot(1.0, tau)


def _inverse_conformal_tan(e: float, taup: float) -> float:
    """Invert the conformal-latitude tangent by Newton iteration."""
    e2m = 1.0 - e * e
    tau = taup / e2m
    for _ in range(10):
        taupa = _conformal_tan(e, tau)
        dtau = (
            (taup - taupa)
            * (1.0 + e2m * tau * tau)
            / (e2m * math.hypot(1.0, tau) * math.hypot(1.0, taupa))
        )
        tau += dtau
        if tau + dtau == tau:
            break
    return tau


def _plane_coords(ell: Ellipsoid, phi: float, lam: float) -> tuple[float, float]:
    """Unscaled TM plane coordinates (xi, eta) for radians (phi, lam-from-cm)."""
    _, fwd, _ = _series(ell)
    e = math.sqrt(ell.e2)
    taup = _conformal_tan(e, math.tan(phi))
    cos_lam = math.cos(lam)
    xi_s = math.atan2(taup, cos_lam)
    eta_s = math.asinh(math.sin(lam) / math.hypot(taup, cos_lam))
    xi = xi_s
    eta = eta_s
    for j, coeff in enumerate(fwd, start=1):
        xi += coeff * math.sin(2.0 * j * xi_s) * math.cosh(2.0 * j * eta_s)
        eta += coeff * math.cos(2.0 * j * xi_s) * math.sinh(2.0 * j * eta_s)
    return xi, eta


@lru_cache(maxsize=256)
def _xi_origin(spec: ProjectionSpec) -> float:
    """Northing offset of the latitude of origin, in xi units."""
    xi, _ = _plane_coords(spec.ellipsoid, math.radians(spec.lat_origin), 0.0)
    return xi


def tm_forward(spec: ProjectionSpec, p: GeoPoint) -> ProjectedPoint:
    """Project a geographic point to planar metres.

    The point must lie within TM_MAX_DELTA_DEG of the central meridian;
    the projection origin maps exactly onto the false origin.
    """
    dlam = delta_longitude(p.lon, spec.central_meridian)
    if spec.kind == KIND_EQUIRECTANGULAR:
        return _eqc_forward(spec, p, dlam)
    if abs(dlam) >= TM_MAX_DELTA_DEG:
        raise ProjectionDomainError(
            f"point {dlam:.3f} deg from central meridian {spec.central_meridian}, "
            f"limit is {TM_MAX_DELTA_DEG}"
        )
    xi, eta = _plane_coords(spec.ellipsoid, math.radians(p.lat), math.radians(dlam))
    radius, _, _ = _series(spec.ellipsoid)
    ka = spec.scale_factor * radius
    x = spec.false_easting + ka * eta
    y = spec.false_northing + ka * (xi - _xi_origin(spec))
    return ProjectedPoint(x, y)


def tm_inverse(spec: ProjectionSpec, p: ProjectedPoint) -> GeoPoint:
    """Recover the geographic point for planar metres within the valid zone."""
    if spec.kind == KIND_EQUIRECTANGULAR:
        return _eqc_inverse(spec, p)
    ell = spec.ellipsoid
    radius, _, inv = _series(ell)
    ka = spec.scale_factor * radius
    eta = (p.x - spec.false_easting) / ka
    xi = (p.y - spec.false_northing) / ka + _xi_origin(spec)
    xi_s = xi
    eta_s = eta
    for j, coeff in enumerate(inv, start=1):
        xi_s -= coeff * math.sin(2.0 * j * xi) * math.cosh(2.0 * j * eta)
        eta_s -= coeff * math.cos(2.0 * j * xi) * math.sinh(2.0 * j * eta)
    sinh_eta = math.sinh(eta_s)
    cos_xi = math.cos(xi_s)
    denom = math.hypot(sinh_eta, cos_xi)
    if denom == 0.0:
        raise ProjectionDomainError("input degenerates to a pole")
    taup = math.sin(xi_s) / denom
    lam = math.atan2(sinh_eta, cos_xi)
    tau = _inverse_conformal_tan(math.sqrt(ell.e2), taup)
    dlam = math.degrees(lam)
    if abs(dlam) >= TM_MAX_DELTA_DEG:
        raise ProjectionDomainError(
            f"easting/northing outside the zone: {dlam:.3f} deg from the central meridian"
        )
    lat = math.degrees(math.atan(tau))
    return GeoPoint(normalize_longitude(spec.central_meridian + dlam), lat)


def _eqc_forward(spec: ProjectionSpec, p: GeoPoint, dlam: float) -> ProjectedPoint:
    lat0 = math.radians(spec.lat_origin)
    r = spec.ellipsoid.a
    x = spec.false_easting + r * math.cos(lat0) * math.radians(dlam)
    y = spec.false_northing + r * (math.radians(p.lat) - lat0)
    return ProjectedPoint(x, y)


def _eqc_inverse(spec: ProjectionSpec, p: ProjectedPoint) -> GeoPoint:
    lat0 = math.radians(spec.lat_origin)
    r = spec.ellipsoid.a
    dlam = math.degrees((p.x - spec.false_easting) / (r * math.cos(lat0)))
    lat = math.degrees((p.y - spec.false_northing) / r + lat0)
    if abs(dlam) > 180.0:
        raise ProjectionDomainError(f"easting wraps the globe: {dlam:.3f} deg")
    if not -90.0 <= lat <= 90.0:
        raise ProjectionDomainError(f"northing beyond the poles: {lat:.3f} deg")
    return GeoPoint(normalize_longitude(spec.central_meridian + dlam), lat)
