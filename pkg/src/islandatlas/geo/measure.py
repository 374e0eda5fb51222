"""Distance and area on the authalic sphere.

Atlas measurements are spherical, not ellipsoidal: at archipelago scale
the difference is far below the width of a drawn coastline, and the
sphere keeps the math dependency-free.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

from ..constants import SPHERE_RADIUS_M
from ..errors import GeoError
from .points import GeoPoint


def great_circle_distance(p: GeoPoint, q: GeoPoint) -> float:
    """Haversine distance in metres."""
    phi1 = math.radians(p.lat)
    phi2 = math.radians(q.lat)
    dphi = phi2 - phi1
    dlam = math.radians(q.lon - p.lon)
    h = (
        math.sin(dphi / 2.0) ** 2
        + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    )
    return 2.0 * SPHERE_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


def path_length(points: Sequence[GeoPoint]) -> float:
    """Total length of a polyline in metres."""
    if len(points) < 2:
        raise GeoError("path needs at least 2 points")
    return sum(
        great_circle_distance(points[i], points[i + 1])
        for i in range(len(points) - 1)
    )


def _unit_vector(p: GeoPoint) -> tuple[float, float, float]:
    phi = math.radians(p.lat)
    lam = math.radians(p.lon)
    c = math.cos(phi)
    return (c * math.cos(lam), c * math.sin(lam), math.sin(phi))


def _angle(u: tuple[float, float, float], v: tuple[float, float, float]) -> float:
    cx = u[1] * v[2] - u[2] * v[1]
    cy = u[2] * v[0] - u[0] * v[2]
    cz = u[0] * v[1] - u[1] * v[0]
    cross = math.sqrt(cx * cx + cy * cy + cz * cz)
    dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
    return math.atan2(cross, dot)


def _triple(
    u: tuple[float, float, float],
    v: tuple[float, float, float],
    w: tuple[float, float, float],
) -> float:
    return (
        u[0] * (v[1] * w[2] - v[2] * w[1])
        - u[1] * (v[0] * w[2] - v[2] * w[0])
        + u[2] * (v[0] * w[1] - v[1] * w[0])
    )


def _triangle_excess(
    u: tuple[float, float, float],
    v: tuple[float, float, float],
    w: tuple[float, float, float],
) -> float:
    """Signed spherical excess of the triangle (u, v, w) by l'Huilier.

    Sign follows the orientation of the vertex triple; degenerate
    triangles contribute zero.
    """
    a = _angle(v, w)
    b = _angle(u, w)
    c = _angle(u, v)
    s = (a + b + c) / 2.0
    product = (
        math.tan(s / 2.0)
        * math.tan((s - a) / 2.0)
        * math.tan((s - b) / 2.0)
        * math.tan((s - c) / 2.0)
    )
    if product <= 0.0:
        return 0.0
    excess = 4.0 * math.atan(math.sqrt(product))
    return math.copysign(excess, _triple(u, v, w))


def geodesic_area(ring: Sequence[GeoPoint]) -> float:
    """Area in square metres of a closed ring on the sphere.

    The ring is fanned into triangles from its first vertex and the
    signed excesses are summed, so concave rings come out right.  The
    ring must repeat its first point at the end and contain at least
    three distinct vertices.
    """
    if len(ring) < 4:
        raise GeoError(f"ring needs at least 4 points including closure, got {len(ring)}")
    first, last = ring[0], ring[-1]
    if first.lon != last.lon or first.lat != last.lat:
        raise GeoError("ring is not closed")
    anchor = _unit_vector(ring[0])
    vectors = [_unit_vector(p) for p in ring[1:-1]]
    total = 0.0
    for i in range(len(vectors) - 1):
        total += _triangle_excess(anchor, vectors[i], vectors[i + 1])
    return abs(total) * SPHERE_RADIUS_M * SPHERE_RADIUS_M
