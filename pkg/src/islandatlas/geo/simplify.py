"""Douglas-Peucker line generalization in the projected plane."""

from __future__ import annotations

import math
from collections.abc import Sequence

from ..errors import GeoError
from .points import ProjectedPoint

Coord = tuple[float, float]


def _segment_distance(p: Coord, a: Coord, b: Coord) -> float:
    """Distance from p to the segment a-b; plain euclidean distance when
    the segment is degenerate."""
    dx = b[0] - a[0]
    dy = b[1] - a[1]
    if dx == 0.0 and dy == 0.0:
        return math.hypot(p[0] - a[0], p[1] - a[1])
    t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / (dx * dx + dy * dy)
    t = max(0.0, min(1.0, t))
    return math.hypot(p[0] - (a[0] + t * dx), p[1] - (a[1] + t * dy))


def simplify_coords(coords: Sequence[Coord], tolerance: float) -> list[Coord]:
    """Subsequence of coords whose omitted points all lie within
    tolerance of the simplified line.  Endpoints always survive; a zero
    tolerance returns every point.
    """
    if tolerance < 0.0 or not math.isfinite(tolerance):
        raise GeoError(f"tolerance must be finite and >= 0, got {tolerance!r}")
    if len(coords) < 2:
        raise GeoError("need at least 2 points to simplify")
    n = len(coords)
    if tolerance == 0.0 or n == 2:
        return [tuple(c) for c in coords]

    keep = [False] * n
    keep[0] = keep[n - 1] = True
    stack = [(0, n - 1)]
    while stack:
        lo, hi = stack.pop()
        if hi - lo < 2:
            continue
        a, b = coords[lo], coords[hi]
        worst = -1.0
        worst_i = lo
        for i in range(lo + 1, hi):
            d = _segment_distance(coords[i], a, b)
            if d > worst:
                worst = d
                worst_i = i
        if worst > tolerance:
            keep[worst_i] = True
            stack.append((lo, worst_i))
            stack.append((worst_i, hi))
    return [tuple(coords[i]) for i in range(n) if keep[i]]


def simplify(points: Sequence[ProjectedPoint], tolerance: float) -> list[ProjectedPoint]:
    kept = simplify_coords([(p.x, p.y) for p in points], tolerance)
    return [ProjectedPoint(x, y) for x, y in kept]
