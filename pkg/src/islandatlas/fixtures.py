"""Deterministic synthetic corpus for the whole pipeline.

One call lays down a data directory with all thirteen warehouses, a
catalog with views and site extents, ingestable source files, and a
server config.  Everything derives from one seed and a fixed creation
stamp, so two runs produce byte-identical trees.

The corpus is small but exercises every pipeline stage on purpose:

- ``FJ`` ships with empty ``coastlines`` and ``villages`` layers plus
  matching files under ``sources/`` to ingest; the coastline source
  contains a polygon spanning longitude 178..183, across the 180
  meridian.  The villages source holds 30 valid features and 2 that
  the schema rejects.
- ``FJ`` rivers include one duplicated vertex (removed by cleaning)
  and one river split into two halves sharing a merge key (joined by
  sheet merging), so validation only passes after both stages run.
- Every other entry is born clean and complete.

Per-entry feature counts: coastlines 12 (FJ: 1 + 13 via ingest),
reefs 4, rivers 8 (FJ: 10 stored, 9 after merge), villages 30 (FJ: 0,
30 via ingest; region: 12 capitals). The region entry carries one
coastline blob per country and no rivers.
"""

from __future__ import annotations

import json
import math
import os
import random
import shutil
from typing import Any

from . import catalog as table
from .warehouse import (
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
    LayerStyle,
    MERGE_KEY_ATTR,
    Warehouse,
    create_warehouse,
    normalize_winding,
    save_warehouse,
)
from .errors import ConfigError

CORPUS_TIMESTAMP = "2026-01-05T00:00:00Z"
DEFAULT_SEED = 2026

# Entry data centres, lon in [0, 360). The FJ layout straddles 180.
CENTERS: dict[str, tuple[float, float]] = {
    "CK": (200.0, -21.2),
    "FJ": (180.5, -17.5),
    "KI": (173.0, 1.4),
    "MH": (171.2, 7.1),
    "NR": (166.9, -0.5),
    "NU": (190.1, -19.1),
    "TK": (188.2, -9.2),
    "TO": (184.8, -21.2),
    "TV": (179.2, -8.5),
    "SB": (160.0, -9.5),
    "VU": (167.0, -16.5),
    "WS": (188.2, -13.8),
    table.REGION_CODE: (185.0, -7.5),
}

REGION_VIEW = (155.0, -27.0, 215.0, 12.0)
FJ_VIEW = (176.0, -20.5, 185.0, -14.5)

PUBLISHED_ATTRS: dict[str, list[str]] = {
    "coastlines": ["name"],
    "reefs": [],
    "rivers": [],
    "villages": ["name", "population"],
}

ANTIMERIDIAN_ISLAND = "antimeridian-island"


def standard_layers() -> list[LayerSpec]:
    """The uniform layer set every corpus warehouse declares."""
    return [
        LayerSpec(
            "coastlines",
            KIND_POLYGON,
            "general-reference",
            schema=(AttributeField("name", ATTR_TEXT, False),),
            style=LayerStyle(stroke="#1f3a5f", stroke_width_px=1.5, fill="#d8ecd8"),
        ),
        LayerSpec(
            "reefs",
            KIND_MULTIPOLYGON,
            "environment",
            max_scale_denom=1_000_000.0,
            style=LayerStyle(stroke="#2a9d8f", stroke_width_px=1.0, fill="#bfe8e2"),
        ),
        LayerSpec(
            "rivers",
            KIND_POLYLINE,
            "environment",
            schema=(AttributeField(MERGE_KEY_ATTR, ATTR_TEXT, False),),
            max_scale_denom=2_000_000.0,
            style=LayerStyle(stroke="#1d6fb8", stroke_width_px=1.0),
        ),
        LayerSpec(
            "villages",
            KIND_POINT,
            "socio-economic",
            schema=(
                AttributeField("name", ATTR_TEXT, True),
                AttributeField("population", ATTR_INTEGER, False),
            ),
            max_scale_denom=500_000.0,
            style=LayerStyle(
                stroke="#333333", fill="#f4b942", point_symbol="square"
            ),
        ),
    ]


def entry_view(code: str) -> tuple[float, float, float, float]:
    if code == table.REGION_CODE:
        return REGION_VIEW
    if code == "FJ":
        return FJ_VIEW
    cx, cy = CENTERS[code]
    return (cx - 2.75, cy - 2.25, cx + 2.75, cy + 2.25)


def _round6(value: float) -> float:
    return round(value, 6)


def _blob(
    rng: random.Random, cx: float, cy: float, radius: float, n: int = 10
) -> list[tuple[float, float]]:
    """Closed star-convex ring around a centre."""
    radii = [radius * rng.uniform(0.6, 1.0) for _ in range(n)]
    ring = []
    for i in range(n):
        theta = 2.0 * math.pi * i / n
        ring.append(
            (
                _round6(cx + radii[i] * math.cos(theta)),
                _round6(cy + 0.7 * radii[i] * math.sin(theta)),
            )
        )
    ring.append(ring[0])
    return ring


def _antimeridian_ring() -> list[tuple[float, float]]:
    """Fixed ellipse spanning lon 178..183; adjacent vertices < 1 deg apart."""
    ring = []
    for k in range(24):
        theta = 2.0 * math.pi * k / 24
        ring.append(
            (
                _round6(180.5 + 2.5 * math.cos(theta)),
                _round6(-16.8 + 0.7 * math.sin(theta)),
            )
        )
    ring.append(ring[0])
    return ring


def _river(rng: random.Random, cx: float, cy: float, n: int) -> list[tuple[float, float]]:
    x, y = cx, cy
    heading = rng.uniform(0.0, 2.0 * math.pi)
    coords = [(_round6(x), _round6(y))]
    for _ in range(n - 1):
        heading += rng.uniform(-0.7, 0.7)
        step = rng.uniform(0.03, 0.12)
        x += step * math.cos(heading)
        y += step * math.sin(heading)
        coords.append((_round6(x), _round6(y)))
    return coords


def _polygon(ring: list[tuple[float, float]], name: str | None = None) -> tuple[Geometry, dict]:
    geom = Geometry(KIND_POLYGON, [ring])
    normalize_winding(geom, geographic=True)
    return geom, ({"name": name} if name is not None else {})


def build_country_warehouse(code: str, seed: int = DEFAULT_SEED) -> Warehouse:
    """One deterministic warehouse; FJ leaves its ingest-fed layers empty."""
    table.get_entry(code)
    rng = random.Random(f"{seed}:{code}")
    cx, cy = CENTERS[code]
    w = create_warehouse(code, standard_layers(), timestamp=CORPUS_TIMESTAMP)
    fid = 1

    if code == table.REGION_CODE:
        for info in table.COUNTRIES:
            bx, by = CENTERS[info.code]
            geom, attrs = _polygon(_blob(rng, bx, by, rng.uniform(0.8, 1.5), n=14), info.name)
            w.features["coastlines"].append(Feature(fid, geom, attrs))
            fid += 1
        for _ in range(4):
            parts = []
            for _ in range(rng.randrange(2, 4)):
                ring = _blob(rng, cx + rng.uniform(-20, 20), cy + rng.uniform(-12, 12), 0.5)
                parts.append([ring])
            geom = Geometry(KIND_MULTIPOLYGON, parts)
            normalize_winding(geom, geographic=True)
            w.features["reefs"].append(Feature(fid, geom))
            fid += 1
        for info in table.COUNTRIES:
            bx, by = CENTERS[info.code]
            point = Geometry(KIND_POINT, (_round6(bx + 0.05), _round6(by - 0.05)))
            attrs = {"name": info.capital, "population": rng.randrange(500, 60000)}
            w.features["villages"].append(Feature(fid, point, attrs))
            fid += 1
        return w

    if code == "FJ":
        # Coastlines and villages arrive via ingest from sources/.
        w.features["coastlines"] = []
    else:
        for i in range(12):
            bx = cx + rng.uniform(-2.2, 2.2)
            by = cy + rng.uniform(-1.8, 1.8)
            geom, attrs = _polygon(_blob(rng, bx, by, rng.uniform(0.05, 0.3)), f"island-{code}-{i}")
            w.features["coastlines"].append(Feature(fid, geom, attrs))
            fid += 1

    for _ in range(4):
        parts = []
        for _ in range(rng.randrange(2, 4)):
            ring = _blob(
                rng, cx + rng.uniform(-2.0, 2.0), cy + rng.uniform(-1.6, 1.6), 0.08
            )
            parts.append([ring])
        geom = Geometry(KIND_MULTIPOLYGON, parts)
        normalize_winding(geom, geographic=True)
        w.features["reefs"].append(Feature(fid, geom))
        fid += 1

    for i in range(8):
        coords = _river(rng, cx + rng.uniform(-2.0, 2.0), cy + rng.uniform(-1.6, 1.6), 6)
        feature = Feature(fid, Geometry(KIND_POLYLINE, coords))
        if code == "FJ" and i == 0:
            # Duplicated vertex: cleaning removes it, validation flags it.
            coords.insert(2, coords[1])
        w.features["rivers"].append(feature)
        fid += 1

    if code == "FJ":
        # One river split at a sheet boundary; halves share the merge key.
        whole = _river(rng, cx - 0.4, cy + 0.3, 9)
        seam = 4
        key = "river-fj-seam"
        w.features["rivers"].append(
            Feature(fid, Geometry(KIND_POLYLINE, whole[: seam + 1]), {MERGE_KEY_ATTR: key})
        )
        fid += 1
        w.features["rivers"].append(
            Feature(fid, Geometry(KIND_POLYLINE, whole[seam:]), {MERGE_KEY_ATTR: key})
        )
        fid += 1
    else:
        for i in range(30):
            point = Geometry(
                KIND_POINT,
                (_round6(cx + rng.uniform(-2.4, 2.4)), _round6(cy + rng.uniform(-2.0, 2.0))),
            )
            attrs = {"name": f"village-{code}-{i}", "population": rng.randrange(40, 9000)}
            w.features["villages"].append(Feature(fid, point, attrs))
            fid += 1

    return w


def _fj_coastline_source(seed: int) -> dict[str, Any]:
    rng = random.Random(f"{seed}:FJ:coastlines")
    features = [
        {
            "type": "Feature",
            "id": 1,
            "geometry": {
                "type": "Polygon",
                "coordinates": [[list(v) for v in _antimeridian_ring()]],
            },
            "properties": {"name": ANTIMERIDIAN_ISLAND},
        }
    ]
    for i in range(13):
        bx = 180.5 + rng.uniform(-3.6, 3.6)
        by = -17.5 + rng.uniform(-2.2, 2.2)
        ring = _blob(rng, bx, by, rng.uniform(0.05, 0.3))
        features.append(
            {
                "type": "Feature",
                "id": 2 + i,
                "geometry": {"type": "Polygon", "coordinates": [[list(v) for v in ring]]},
                "properties": {"name": f"island-FJ-{i}"},
            }
        )
    return {"type": "FeatureCollection", "features": features}


def _fj_village_source(seed: int) -> dict[str, Any]:
    rng = random.Random(f"{seed}:FJ:villages")
    features = []
    for i in range(30):
        features.append(
            {
                "type": "Feature",
                "id": 5001 + i,
                "geometry": {
                    "type": "Point",
                    "coordinates": [
                        _round6(180.5 + rng.uniform(-3.8, 3.8)),
                        _round6(-17.5 + rng.uniform(-2.4, 2.4)),
                    ],
                },
                "properties": {"name": f"village-FJ-{i}", "population": rng.randrange(40, 9000)},
            }
        )
    # Two deliberate rejects: a missing required name, a wrong geometry kind.
    features.append(
        {
            "type": "Feature",
            "id": 5901,
            "geometry": {"type": "Point", "coordinates": [181.0, -17.0]},
            "properties": {"population": 12},
        }
    )
    features.append(
        {
            "type": "Feature",
            "id": 5902,
            "geometry": {"type": "LineString", "coordinates": [[181.0, -17.0], [181.2, -17.1]]},
            "properties": {"name": "not-a-point"},
        }
    )
    return {"type": "FeatureCollection", "features": features}


def _site_boxes(code: str) -> dict[str, list[float]]:
    info = table.get_entry(code)
    cx, cy = CENTERS[code]
    boxes: dict[str, list[float]] = {}
    n = max(len(info.sites), 1)
    for i, name in enumerate(info.sites):
        theta = 2.0 * math.pi * i / n
        sx = _round6(cx + 1.6 * math.cos(theta))
        sy = _round6(cy + 1.1 * math.sin(theta))
        boxes[name] = [
            _round6(sx - 0.45),
            _round6(sy - 0.35),
            _round6(sx + 0.45),
            _round6(sy + 0.35),
        ]
    return boxes


def catalog_obj() -> dict[str, Any]:
    entries: dict[str, Any] = {}
    for info in list(table.COUNTRIES) + [table.REGION]:
        entries[info.code] = {
            "warehouse": f"warehouses/{info.code}.piwa",
            "cache": f"caches/{info.code}.pisc",
            "view": [float(v) for v in entry_view(info.code)],
            "sites": _site_boxes(info.code),
        }
    return {"entries": entries}


def _dump_json(path: str, payload: Any) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, sort_keys=True, indent=2)
        handle.write("\n")


def write_fixture_tree(
    out_dir: str | os.PathLike, *, seed: int = DEFAULT_SEED, force: bool = False
) -> dict[str, Any]:
    """Write the full corpus tree; returns a report of what was written."""
    out = os.path.abspath(os.fspath(out_dir))
    if os.path.exists(out):
        if not os.path.isdir(out):
            raise ConfigError(f"fixture target {out} is not a directory")
        if os.listdir(out):
            if not force:
                raise ConfigError(f"fixture target {out} is not empty (use force to replace)")
            shutil.rmtree(out)
    for sub in ("warehouses", "caches", "sources"):
        os.makedirs(os.path.join(out, sub), exist_ok=True)

    counts: dict[str, dict[str, int]] = {}
    for info in list(table.COUNTRIES) + [table.REGION]:
        w = build_country_warehouse(info.code, seed)
        save_warehouse(w, os.path.join(out, "warehouses", f"{info.code}.piwa"))
        counts[info.code] = {name: len(w.features[name]) for name in w.layers}

    _dump_json(os.path.join(out, "sources", "fj-coastlines.geojson"), _fj_coastline_source(seed))
    _dump_json(os.path.join(out, "sources", "fj-villages.geojson"), _fj_village_source(seed))
    _dump_json(os.path.join(out, "catalog.json"), catalog_obj())
    _dump_json(os.path.join(out, "config.json"), {"catalog": "catalog.json", "port": 8040})

    return {
        "out": out,
        "seed": seed,
        "created": CORPUS_TIMESTAMP,
        "warehouses": counts,
        "sources": ["sources/fj-coastlines.geojson", "sources/fj-villages.geojson"],
    }
