"""Independent reference implementations used only by the test suite.

Each function here deliberately takes a different computational route
than the library code it checks: classical Redfearn series against the
Krueger series, law of cosines against haversine, matrix algebra
against expanded arithmetic, boundary integration against triangle
fans.  Agreement between the two routes is the evidence.
"""

from __future__ import annotations

import math

import numpy as np


# --- Transverse Mercator, classical Redfearn series (GDA-manual form) ---

def _redfearn_meridian_arc(a: float, e2: float, lat: float) -> float:
    e4 = e2 * e2
    e6 = e4 * e2
    a0 = 1.0 - e2 / 4.0 - 3.0 * e4 / 64.0 - 5.0 * e6 / 256.0
    a2 = (3.0 / 8.0) * (e2 + e4 / 4.0 + 15.0 * e6 / 128.0)
    a4 = (15.0 / 256.0) * (e4 + 3.0 * e6 / 4.0)
    a6 = 35.0 * e6 / 3072.0
    return a * (a0 * lat - a2 * math.sin(2 * lat) + a4 * math.sin(4 * lat) - a6 * math.sin(6 * lat))


def _redfearn_foot_point(a: float, f: float, m: float) -> float:
    n = f / (2.0 - f)
    n2, n3, n4 = n * n, n ** 3, n ** 4
    g = a * (1.0 - n) * (1.0 - n2) * (1.0 + 9.0 * n2 / 4.0 + 225.0 * n4 / 64.0)
    sig = m / g
    return (
        sig
        + (3.0 * n / 2.0 - 27.0 * n3 / 32.0) * math.sin(2.0 * sig)
        + (21.0 * n2 / 16.0 - 55.0 * n4 / 32.0) * math.sin(4.0 * sig)
        + (151.0 * n3 / 96.0) * math.sin(6.0 * sig)
        + (1097.0 * n4 / 512.0) * math.sin(8.0 * sig)
    )


def redfearn_forward(
    a: float,
    inv_f: float,
    cm_deg: float,
    lat0_deg: float,
    k0: float,
    fe: float,
    fn: float,
    lon_deg: float,
    lat_deg: float,
) -> tuple[float, float]:
    f = 1.0 / inv_f
    e2 = 2.0 * f - f * f
    lat = math.radians(lat_deg)
    dlon = math.radians(lon_deg - cm_deg)
    while dlon > math.pi:
        dlon -= 2.0 * math.pi
    while dlon < -math.pi:
        dlon += 2.0 * math.pi

    m = _redfearn_meridian_arc(a, e2, lat)
    om = _redfearn_meridian_arc(a, e2, math.radians(lat0_deg))

    slt = math.sin(lat)
    clt = math.cos(lat)
    eslt = 1.0 - e2 * slt * slt
    eta = a / math.sqrt(eslt)
    rho = eta * (1.0 - e2) / eslt
    psi = eta / rho

    wc = clt * dlon
    wc2 = wc * wc
    t = slt / clt
    t2 = t * t
    t4 = t2 * t2
    t6 = t2 * t4

    trm1 = (psi - t2) / 6.0
    trm2 = (((4.0 * (1.0 - 6.0 * t2) * psi + (1.0 + 8.0 * t2)) * psi - 2.0 * t2) * psi + t4) / 120.0
    trm3 = (61.0 - 479.0 * t2 + 179.0 * t4 - t6) / 5040.0
    east = (k0 * eta * dlon * clt) * (((trm3 * wc2 + trm2) * wc2 + trm1) * wc2 + 1.0) + fe

    trm1 = 1.0 / 2.0
    trm2 = ((4.0 * psi + 1.0) * psi - t2) / 24.0
    trm3 = (
        (((8.0 * (11.0 - 24.0 * t2) * psi - 28.0 * (1.0 - 6.0 * t2)) * psi
          + (1.0 - 32.0 * t2)) * psi - 2.0 * t2) * psi + t4
    ) / 720.0
    trm4 = (1385.0 - 3111.0 * t2 + 543.0 * t4 - t6) / 40320.0
    gcn = (eta * t) * ((((trm4 * wc2 + trm3) * wc2 + trm2) * wc2 + trm1) * wc2)
    north = (gcn + m - om) * k0 + fn
    return east, north


def redfearn_inverse(
    a: float,
    inv_f: float,
    cm_deg: float,
    lat0_deg: float,
    k0: float,
    fe: float,
    fn: float,
    east: float,
    north: float,
) -> tuple[float, float]:
    f = 1.0 / inv_f
    e2 = 2.0 * f - f * f
    om = _redfearn_meridian_arc(a, e2, math.radians(lat0_deg))

    m = (north - fn) / k0 + om
    fphi = _redfearn_foot_point(a, f, m)

    slt = math.sin(fphi)
    clt = math.cos(fphi)
    eslt = 1.0 - e2 * slt * slt
    eta = a / math.sqrt(eslt)
    rho = eta * (1.0 - e2) / eslt
    psi = eta / rho

    de = east - fe
    x = de / (eta * k0)
    x2 = x * x
    t = slt / clt
    t2 = t * t
    t4 = t2 * t2

    trm1 = 1.0 / 2.0
    trm2 = ((-4.0 * psi + 9.0 * (1.0 - t2)) * psi + 12.0 * t2) / 24.0
    trm3 = (
        (((8.0 * (11.0 - 24.0 * t2) * psi - 12.0 * (21.0 - 71.0 * t2)) * psi
          + 15.0 * ((15.0 * t2 - 98.0) * t2 + 15.0)) * psi
         + 180.0 * ((-3.0 * t2 + 5.0) * t2)) * psi + 360.0 * t4
    ) / 720.0
    trm4 = (((1575.0 * t2 + 4095.0) * t2 + 3633.0) * t2 + 1385.0) / 40320.0
    lat = fphi + (t * x * de / (k0 * rho)) * (((trm4 * x2 - trm3) * x2 + trm2) * x2 - trm1)

    trm1 = 1.0
    trm2 = (psi + 2.0 * t2) / 6.0
    trm3 = (
        ((-4.0 * (1.0 - 6.0 * t2) * psi + (9.0 - 68.0 * t2)) * psi + 72.0 * t2) * psi
        + 24.0 * t4
    ) / 120.0
    trm4 = (((720.0 * t2 + 1320.0) * t2 + 662.0) * t2 + 61.0) / 5040.0
    lon = math.radians(cm_deg) - (x / clt) * (((trm4 * x2 - trm3) * x2 + trm2) * x2 - trm1)

    return math.degrees(lon), math.degrees(lat)


# --- Spherical distance, law of cosines ---

def law_of_cosines_distance(
    radius: float, lon1: float, lat1: float, lon2: float, lat2: float
) -> float:
    p1 = math.radians(lat1)
    p2 = math.radians(lat2)
    dl = math.radians(lon2 - lon1)
    c = math.sin(p1) * math.sin(p2) + math.cos(p1) * math.cos(p2) * math.cos(dl)
    return radius * math.acos(max(-1.0, min(1.0, c)))


# --- Geodetic to geocentric via reduced latitude ---

def geocentric_reduced_latitude(
    a: float, inv_f: float, lon_deg: float, lat_deg: float, h: float
) -> tuple[float, float, float]:
    f = 1.0 / inv_f
    b = a * (1.0 - f)
    lat = math.radians(lat_deg)
    lon = math.radians(lon_deg)
    beta = math.atan2((1.0 - f) * math.sin(lat), math.cos(lat))
    x = a * math.cos(beta) * math.cos(lon) + h * math.cos(lat) * math.cos(lon)
    y = a * math.cos(beta) * math.sin(lon) + h * math.cos(lat) * math.sin(lon)
    z = b * math.sin(beta) + h * math.sin(lat)
    return x, y, z


def geodetic_bowring(
    a: float, inv_f: float, x: float, y: float, z: float
) -> tuple[float, float, float]:
    """Single-pass Bowring approximation; good to well under a
    micrometre for near-surface points."""
    f = 1.0 / inv_f
    b = a * (1.0 - f)
    e2 = 2.0 * f - f * f
    ep2 = e2 / (1.0 - e2)
    p = math.hypot(x, y)
    u = math.atan2(z * a, p * b)
    lat = math.atan2(
        z + ep2 * b * math.sin(u) ** 3,
        p - e2 * a * math.cos(u) ** 3,
    )
    lon = math.degrees(math.atan2(y, x)) % 360.0
    n = a / math.sqrt(1.0 - e2 * math.sin(lat) ** 2)
    h = p / math.cos(lat) - n
    return lon, math.degrees(lat), h


# --- Seven-parameter shift as explicit matrix algebra ---

def helmert_matrix(
    params: tuple[float, float, float, float, float, float, float],
    xyz: tuple[float, float, float],
) -> tuple[float, float, float]:
    dx, dy, dz, rx, ry, rz, ds = params
    arc = math.pi / (180.0 * 3600.0)
    rx, ry, rz = rx * arc, ry * arc, rz * arc
    rot = np.array(
        [
            [1.0, -rz, ry],
            [rz, 1.0, -rx],
            [-ry, rx, 1.0],
        ]
    )
    out = np.array([dx, dy, dz]) + (1.0 + ds * 1e-6) * (rot @ np.array(xyz))
    return float(out[0]), float(out[1]), float(out[2])


# --- Affine least squares via lstsq on the stacked system ---

def lstsq_affine(
    sources: list[tuple[float, float]], targets: list[tuple[float, float]]
) -> tuple[tuple[float, float, float, float, float, float], list[float], float]:
    src = np.asarray(sources, dtype=np.float64)
    dst = np.asarray(targets, dtype=np.float64)
    design = np.column_stack([src[:, 0], src[:, 1], np.ones(len(src))])
    coef_x, *_ = np.linalg.lstsq(design, dst[:, 0], rcond=None)
    coef_y, *_ = np.linalg.lstsq(design, dst[:, 1], rcond=None)
    fitted = np.column_stack([design @ coef_x, design @ coef_y])
    res = np.hypot(fitted[:, 0] - dst[:, 0], fitted[:, 1] - dst[:, 1])
    rms = float(np.sqrt(np.mean(res ** 2)))
    coeffs = (
        float(coef_x[0]), float(coef_x[1]), float(coef_x[2]),
        float(coef_y[0]), float(coef_y[1]), float(coef_y[2]),
    )
    return coeffs, [float(r) for r in res], rms


# --- Spherical polygon area by boundary integration ---

def _slerp(u: np.ndarray, v: np.ndarray, steps: int) -> np.ndarray:
    omega = math.atan2(float(np.linalg.norm(np.cross(u, v))), float(np.dot(u, v)))
    if omega == 0.0:
        return np.array([u])
    t = np.linspace(0.0, 1.0, steps + 1)[:-1]
    pts = (
        np.outer(np.sin((1.0 - t) * omega), u) + np.outer(np.sin(t * omega), v)
    ) / math.sin(omega)
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def quadrature_area(
    ring: list[tuple[float, float]], radius: float, steps_per_edge: int = 512
) -> float:
    """Area of a closed (lon, lat) ring by integrating sin(lat) d(lon)
    along great-circle edges densified with spherical interpolation.
    Assumes the ring does not enclose a pole.
    """
    vecs = []
    for lon, lat in ring:
        phi = math.radians(lat)
        lam = math.radians(lon)
        vecs.append(
            np.array([
                math.cos(phi) * math.cos(lam),
                math.cos(phi) * math.sin(lam),
                math.sin(phi),
            ])
        )
    samples = []
    for i in range(len(vecs) - 1):
        samples.append(_slerp(vecs[i], vecs[i + 1], steps_per_edge))
    chain = np.vstack(samples + [vecs[-1][None, :]])

    lats = np.arcsin(np.clip(chain[:, 2], -1.0, 1.0))
    lons = np.arctan2(chain[:, 1], chain[:, 0])
    dlon = np.diff(lons)
    dlon = (dlon + np.pi) % (2.0 * np.pi) - np.pi
    sin_mid = (np.sin(lats[:-1]) + np.sin(lats[1:])) / 2.0
    return abs(float(np.sum(sin_mid * dlon))) * radius * radius


# --- Recursive Douglas-Peucker ---

def recursive_simplify(
    coords: list[tuple[float, float]], tol: float
) -> list[tuple[float, float]]:
    if len(coords) < 3:
        return list(coords)

    def seg_dist(p, a, b):
        ax, ay = a
        bx, by = b
        px, py = p
        dx, dy = bx - ax, by - ay
        if dx == 0 and dy == 0:
            return math.hypot(px - ax, py - ay)
        t = max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / (dx * dx + dy * dy)))
        return math.hypot(px - (ax + t * dx), py - (ay + t * dy))

    def rec(lo: int, hi: int) -> list[int]:
        if hi - lo < 2:
            return [lo, hi]
        dmax, imax = -1.0, lo
        for i in range(lo + 1, hi):
            d = seg_dist(coords[i], coords[lo], coords[hi])
            if d > dmax:
                dmax, imax = d, i
        if dmax <= tol:
            return [lo, hi]
        left = rec(lo, imax)
        right = rec(imax, hi)
        return left[:-1] + right

    return [coords[i] for i in rec(0, len(coords) - 1)]


# --- Linear scans used against the spatial index ---

def scan_bbox(
    boxes: np.ndarray, xmin: float, ymin: float, xmax: float, ymax: float
) -> np.ndarray:
    """Indices of boxes intersecting the query, by full scan.
    boxes: (n, 4) array of xmin,ymin,xmax,ymax."""
    hit = (
        (boxes[:, 0] <= xmax)
        & (boxes[:, 2] >= xmin)
        & (boxes[:, 1] <= ymax)
        & (boxes[:, 3] >= ymin)
    )
    return np.nonzero(hit)[0]


# --- Planar measures for conservation checks ---

def shoelace_area(xy) -> float:
    """Signed polygon area of a planar ring (closing edge implied)."""
    a = np.asarray(xy, dtype=float)
    if len(a) >= 2 and (a[0] == a[-1]).all():
        a = a[:-1]
    if len(a) < 3:
        return 0.0
    x, y = a[:, 0], a[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def polyline_planar_length(xy) -> float:
    a = np.asarray(xy, dtype=float)
    return float(np.sum(np.hypot(np.diff(a[:, 0]), np.diff(a[:, 1]))))


def scan_bbox_loop(boxes, xmin: float, ymin: float, xmax: float, ymax: float):
    """Same scan as a plain per-feature loop; the timing baseline."""
    out = []
    for i, (bxmin, bymin, bxmax, bymax) in enumerate(boxes):
        if bxmin <= xmax and bxmax >= xmin and bymin <= ymax and bymax >= ymin:
            out.append(i)
    return out


# --- Planar point-to-geometry distance, winding-number containment ---

def point_to_segment(px, py, ax, ay, bx, by) -> float:
    vx, vy = bx - ax, by - ay
    wx, wy = px - ax, py - ay
    c1 = vx * wx + vy * wy
    if c1 <= 0.0:
        return math.hypot(wx, wy)
    c2 = vx * vx + vy * vy
    if c2 <= c1:
        return math.hypot(px - bx, py - by)
    t = c1 / c2
    return math.hypot(px - (ax + t * vx), py - (ay + t * vy))


def winding_contains(rings, px, py) -> bool:
    """Nonzero winding number over all rings of one polygon part."""
    winding = 0
    for ring in rings:
        for i in range(len(ring) - 1):
            ax, ay = ring[i]
            bx, by = ring[i + 1]
            if ay <= py:
                if by > py and (bx - ax) * (py - ay) - (px - ax) * (by - ay) > 0:
                    winding += 1
            elif by <= py and (bx - ax) * (py - ay) - (px - ax) * (by - ay) < 0:
                winding -= 1
    return winding != 0


def feature_distance(kind, coords, px, py) -> float:
    """Planar distance to a feature geometry; 0 inside a polygon part."""
    if kind == "Point":
        return math.hypot(px - coords[0], py - coords[1])
    if kind == "PolyLine":
        return min(
            point_to_segment(px, py, *coords[i], *coords[i + 1])
            for i in range(len(coords) - 1)
        )
    parts = [coords] if kind == "Polygon" else coords
    best = math.inf
    for rings in parts:
        if winding_contains(rings, px, py):
            return 0.0
        for ring in rings:
            for i in range(len(ring) - 1):
                d = point_to_segment(px, py, *ring[i], *ring[i + 1])
                if d < best:
                    best = d
    return best
