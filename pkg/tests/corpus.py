"""Seeded synthetic archipelago corpora used by the cache and server tests."""

from __future__ import annotations

import math
import random

from islandatlas.warehouse import (
    ATTR_INTEGER,
    ATTR_TEXT,
    AttributeField,
    Feature,
    Geometry,
    KIND_MULTIPOLYGON,
    KIND_POINT,
    KIND_POLYGON,
    KIND_POLYLINE,
    LayerSpec,
    Warehouse,
    normalize_winding,
)
from islandatlas.warehouse.ingest import create_warehouse

CENTRAL_MERIDIAN = 183.0
LON_SPAN = (179.5, 186.5)
LAT_SPAN = (-20.5, -14.5)
FIXED_TS = "2026-01-05T00:00:00Z"


def _rand_lon(rng: random.Random) -> float:
    return rng.uniform(*LON_SPAN)


def _rand_lat(rng: random.Random) -> float:
    return rng.uniform(*LAT_SPAN)


def blob_ring(rng: random.Random, cx: float, cy: float, radius: float, n: int = 8):
    """Closed star-convex ring around a centre, counter-clockwise."""
    pts = []
    for k in range(n):
        ang = 2.0 * math.pi * k / n
        rr = radius * (0.6 + 0.4 * rng.random())
        pts.append((cx + rr * math.cos(ang), cy + rr * math.sin(ang)))
    pts.append(pts[0])
    return pts


def wiggly_line(rng: random.Random, n: int = 5):
    x, y = _rand_lon(rng), _rand_lat(rng)
    pts = [(x, y)]
    for _ in range(n - 1):
        x += rng.uniform(-0.05, 0.05)
        y += rng.uniform(-0.05, 0.05)
        pts.append((x, y))
    return pts


def archipelago_warehouse(
    seed: int,
    n_points: int = 60,
    n_lines: int = 25,
    n_polys: int = 25,
    n_multis: int = 6,
) -> Warehouse:
    """A validating warehouse of mixed-kind features inside one TM zone."""
    layers = [
        LayerSpec(
            "places",
            KIND_POINT,
            "general-reference",
            schema=(
                AttributeField("name", ATTR_TEXT, True),
                AttributeField("population", ATTR_INTEGER, False),
            ),
        ),
        LayerSpec("rivers", KIND_POLYLINE, "environment"),
        LayerSpec("islands", KIND_POLYGON, "general-reference"),
        LayerSpec("reefs", KIND_MULTIPOLYGON, "environment"),
    ]
    w = create_warehouse("FJ", layers, timestamp=FIXED_TS)
    rng = random.Random(seed)
    fid = 1
    for _ in range(n_points):
        geom = Geometry(KIND_POINT, (_rand_lon(rng), _rand_lat(rng)))
        attrs = {"name": f"place-{fid}", "population": rng.randrange(10, 90000)}
        w.features["places"].append(Feature(fid, geom, attrs))
        fid += 1
    for _ in range(n_lines):
        geom = Geometry(KIND_POLYLINE, wiggly_line(rng, rng.randrange(3, 9)))
        w.features["rivers"].append(Feature(fid, geom, {}))
        fid += 1
    for _ in range(n_polys):
        ring = blob_ring(rng, _rand_lon(rng), _rand_lat(rng), rng.uniform(0.02, 0.2))
        geom = Geometry(KIND_POLYGON, [ring])
        normalize_winding(geom, geographic=True)
        w.features["islands"].append(Feature(fid, geom, {}))
        fid += 1
    for _ in range(n_multis):
        parts = []
        for _ in range(rng.randrange(2, 4)):
            ring = blob_ring(rng, _rand_lon(rng), _rand_lat(rng), rng.uniform(0.02, 0.08))
            parts.append([ring])
        geom = Geometry(KIND_MULTIPOLYGON, parts)
        normalize_winding(geom, geographic=True)
        w.features["reefs"].append(Feature(fid, geom, {}))
        fid += 1
    return w
