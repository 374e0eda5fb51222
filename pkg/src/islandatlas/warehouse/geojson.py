"""Vector interchange: RFC 7946 feature collections.

One documented extension: coordinates may carry longitudes in [0, 360),
which is how exported warehouses keep antimeridian features contiguous.
Readers here accept either convention; the ingest pipeline folds
everything into [0, 360) afterwards.

Every feature must carry an ``id``.  Structural problems inside a single
feature are returned as rejection entries so a partly good file still
ingests; only a file that is not a feature collection at all is fatal.
"""

from __future__ import annotations

import json
import math
import os
from typing import Any

from ..errors import SourceFormatError
from .model import (
    KIND_MULTIPOLYGON,
    KIND_POINT,
    KIND_POLYGON,
    KIND_POLYLINE,
    Feature,
    FeatureId,
    Geometry,
)

_GEOJSON_TO_KIND = {
    "Point": KIND_POINT,
    "LineString": KIND_POLYLINE,
    "Polygon": KIND_POLYGON,
    "MultiPolygon": KIND_MULTIPOLYGON,
}
_KIND_TO_GEOJSON = {v: k for k, v in _GEOJSON_TO_KIND.items()}

RawFeature = tuple[FeatureId, Geometry, dict[str, Any]]


def _position(value: Any) -> tuple[float, float]:
    if (
        not isinstance(value, (list, tuple))
        or len(value) not in (2, 3)
        or any(isinstance(c, bool) or not isinstance(c, (int, float)) for c in value[:2])
    ):
        raise ValueError(f"bad position {value!r}")
    x, y = float(value[0]), float(value[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"non-finite position {value!r}")
    return (x, y)


def _position_list(value: Any) -> list[tuple[float, float]]:
    if not isinstance(value, list):
        raise ValueError(f"expected coordinate array, got {value!r}")
    return [_position(v) for v in value]


def _geometry(obj: Any) -> Geometry:
    if not isinstance(obj, dict):
        raise ValueError("geometry missing")
    gtype = obj.get("type")
    kind = _GEOJSON_TO_KIND.get(gtype)
    if kind is None:
        raise ValueError(f"unsupported geometry type {gtype!r}")
    coords = obj.get("coordinates")
    if kind == KIND_POINT:
        return Geometry(kind, _position(coords))
    if kind == KIND_POLYLINE:
        return Geometry(kind, _position_list(coords))
    if kind == KIND_POLYGON:
        if not isinstance(coords, list):
            raise ValueError("polygon coordinates must be an array of rings")
        return Geometry(kind, [_position_list(ring) for ring in coords])
    if not isinstance(coords, list):
        raise ValueError("multipolygon coordinates must be an array of polygons")
    parts = []
    for part in coords:
        if not isinstance(part, list):
            raise ValueError("multipolygon part must be an array of rings")
        parts.append([_position_list(ring) for ring in part])
    return Geometry(kind, parts)


def parse_feature_collection(
    text: str,
) -> tuple[list[RawFeature], list[tuple[FeatureId | None, str]]]:
    """Parse GeoJSON text into raw features plus per-feature rejections."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SourceFormatError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise SourceFormatError("not a GeoJSON FeatureCollection")
    raw_features = doc.get("features")
    if not isinstance(raw_features, list):
        raise SourceFormatError("FeatureCollection has no features array")

    out: list[RawFeature] = []
    rejections: list[tuple[FeatureId | None, str]] = []
    for entry in raw_features:
        if not isinstance(entry, dict) or entry.get("type") != "Feature":
            rejections.append((None, "entry is not a Feature"))
            continue
        fid = entry.get("id")
        if isinstance(fid, bool) or not isinstance(fid, (int, str)) or fid == "":
            rejections.append((None, "feature id missing or not int/string"))
            continue
        try:
            geom = _geometry(entry.get("geometry"))
        except ValueError as exc:
            rejections.append((fid, str(exc)))
            continue
        props = entry.get("properties")
        if props is None:
            props = {}
        if not isinstance(props, dict):
            rejections.append((fid, "properties must be an object"))
            continue
        out.append((fid, geom, props))
    return out, rejections


def read_feature_collection(
    path: str | os.PathLike,
) -> tuple[list[RawFeature], list[tuple[FeatureId | None, str]]]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SourceFormatError(f"cannot read {path}: {exc}") from None
    return parse_feature_collection(text)


def _geometry_to_obj(geom: Geometry) -> dict[str, Any]:
    if geom.kind == KIND_POINT:
        coords: Any = list(geom.coordinates)
    elif geom.kind == KIND_POLYLINE:
        coords = [list(v) for v in geom.coordinates]
    elif geom.kind == KIND_POLYGON:
        coords = [[list(v) for v in ring] for ring in geom.coordinates]
    else:
        coords = [
            [[list(v) for v in ring] for ring in part] for part in geom.coordinates
        ]
    return {"type": _KIND_TO_GEOJSON[geom.kind], "coordinates": coords}


def format_feature_collection(features: list[Feature]) -> str:
    """Deterministic GeoJSON text for a feature list."""
    doc = {
        "type": "FeatureCollection",
        "features": [
            {
                "type": "Feature",
                "id": f.id,
                "geometry": _geometry_to_obj(f.geometry),
                "properties": dict(sorted(f.attributes.items())),
            }
            for f in features
        ],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def write_feature_collection(features: list[Feature], path: str | os.PathLike) -> int:
    text = format_feature_collection(features)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return len(features)
