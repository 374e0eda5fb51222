"""Read-only cache access: open, bbox query, point query, stats.

``open_cache`` loads the whole file into memory, so a handle is an
immutable snapshot: rebuilds that replace the file on disk never change
what an open handle returns.  Queries descend the packed index for
candidates, decode only those records, and filter against the true
geometry bounding box (bbox query) or the exact planar distance (point
query).
"""

from __future__ import annotations

import math
import os
from typing import Any

import numpy as np

from ..errors import CacheError, CacheFormatError, UnknownLayerError
from ..warehouse.container import layer_spec_from_obj
from ..warehouse.model import (
    FeatureId,
    Geometry,
    KIND_MULTIPOLYGON,
    KIND_POINT,
    KIND_POLYGON,
    KIND_POLYLINE,
    LayerSpec,
    feature_id_key,
)
from .format import (
    CacheSpec,
    cache_spec_from_obj,
    check_body_size,
    decode_header,
    split_records_blob,
    unpack_record,
)
from .index import PackedIndex, index_from_bytes

Box = tuple[float, float, float, float]
QueryHit = tuple[FeatureId, Geometry, dict[str, Any]]
PointHit = tuple[FeatureId, Geometry, dict[str, Any], float]


class _CacheLayer:
    __slots__ = ("spec", "count", "offsets", "payload", "index")

    def __init__(
        self,
        spec: LayerSpec,
        count: int,
        offsets: list[int],
        payload: memoryview,
        index: PackedIndex,
    ) -> None:
        self.spec = spec
        self.count = count
        self.offsets = offsets
        self.payload = payload
        self.index = index

    def record(self, ordinal: int) -> tuple[FeatureId, dict[str, Any], Geometry]:
        return unpack_record(self.payload[self.offsets[ordinal] : self.offsets[ordinal + 1]])


class SmartCache:
    """Immutable snapshot of one cache file, shareable between readers."""

    def __init__(
        self,
        path: str,
        country_code: str,
        created: str,
        spec: CacheSpec,
        layers: dict[str, _CacheLayer],
        file_size: int,
        base_scale_denom: float | None = None,
    ) -> None:
        self.path = path
        self.country_code = country_code
        self.created = created
        self.spec = spec
        self.layers = layers
        self.file_size = file_size
        self.base_scale_denom = base_scale_denom

    def layer_names(self) -> tuple[str, ...]:
        return tuple(self.layers)

    def layer_spec(self, name: str) -> LayerSpec:
        return self._layer(name).spec

    def _layer(self, name: str) -> _CacheLayer:
        try:
            return self.layers[name]
        except KeyError:
            raise UnknownLayerError(f"no layer {name!r} in cache {self.path}") from None


def open_cache(path: str | os.PathLike) -> SmartCache:
    """Load a cache file into an immutable read handle."""
    path = os.fspath(path)
    try:
        with open(path, "rb") as handle:
            data = handle.read()
    except OSError as exc:
        raise CacheFormatError(f"cannot read cache {path}: {exc}") from None
    header, body = decode_header(data)
    check_body_size(data, body, header)
    try:
        spec = cache_spec_from_obj(header["spec"])
        country_code = header["country_code"]
        created = header["created"]
        entries = header["layers"]
    except (KeyError, TypeError) as exc:
        raise CacheFormatError(f"header is missing fields: {exc}") from None

    view = memoryview(data)
    layers: dict[str, _CacheLayer] = {}
    pos = body
    for entry in entries:
        try:
            layer_spec = layer_spec_from_obj(entry["spec"])
            count = int(entry["count"])
            records_len = int(entry["records_len"])
            index_len = int(entry["index_len"])
            levels = [int(n) for n in entry["levels"]]
            fanout = int(entry["fanout"])
        except (KeyError, TypeError, ValueError) as exc:
            raise CacheFormatError(f"bad layer entry in header: {exc}") from None
        if levels and levels[0] != count:
            raise CacheFormatError("leaf level count does not match feature count")
        records_blob = view[pos : pos + records_len]
        pos += records_len
        index_blob = view[pos : pos + index_len]
        pos += index_len
        offsets, payload = split_records_blob(records_blob, count)
        index = index_from_bytes(index_blob, count, levels, fanout)
        layers[layer_spec.name] = _CacheLayer(layer_spec, count, offsets, payload, index)
    base_scale = header.get("base_scale_denom")
    return SmartCache(
        path,
        country_code,
        created,
        spec,
        layers,
        len(data),
        float(base_scale) if base_scale is not None else None,
    )


def _check_box(box: Box) -> Box:
    minx, miny, maxx, maxy = (float(v) for v in box)
    if not (minx <= maxx and miny <= maxy) or not all(
        math.isfinite(v) for v in (minx, miny, maxx, maxy)
    ):
        raise CacheError(f"malformed bbox {box!r}")
    return (minx, miny, maxx, maxy)


def _boxes_intersect(a: Box, b: Box) -> bool:
    return a[0] <= b[2] and a[2] >= b[0] and a[1] <= b[3] and a[3] >= b[1]


def query_bbox(cache: SmartCache, layer: str, box: Box) -> list[QueryHit]:
    """Features whose geometry bbox intersects ``box``, ascending by id.

    Records are packed in id order, so ordinal order is id order.
    """
    box = _check_box(box)
    data = cache._layer(layer)
    out: list[QueryHit] = []
    for ordinal in np.sort(data.index.search(box)):
        fid, attrs, geom = data.record(int(ordinal))
        if _boxes_intersect(geom.bbox(), box):
            out.append((fid, geom, attrs))
    return out


def _segment_distance(px: float, py: float, a, b) -> float:
    ax, ay = a
    bx, by = b
    dx = bx - ax
    dy = by - ay
    length2 = dx * dx + dy * dy
    if length2 == 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / length2
    t = 0.0 if t < 0.0 else 1.0 if t > 1.0 else t
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def _rings_contain(rings, px: float, py: float) -> bool:
    # Even-odd rule over outer plus holes.
    inside = False
    for ring in rings:
        for i in range(len(ring) - 1):
            x1, y1 = ring[i]
            x2, y2 = ring[i + 1]
            if (y1 > py) != (y2 > py):
                if px < x1 + (py - y1) * (x2 - x1) / (y2 - y1):
                    inside = not inside
    return inside


def _rings_boundary_distance(rings, px: float, py: float) -> float:
    best = math.inf
    for ring in rings:
        for i in range(len(ring) - 1):
            d = _segment_distance(px, py, ring[i], ring[i + 1])
            if d < best:
                best = d
    return best


def geometry_distance(geom: Geometry, px: float, py: float) -> float:
    """Planar distance from a point to the geometry; 0 inside a polygon."""
    if geom.kind == KIND_POINT:
        return math.hypot(px - geom.coordinates[0], py - geom.coordinates[1])
    if geom.kind == KIND_POLYLINE:
        pts = geom.coordinates
        return min(
            _segment_distance(px, py, pts[i], pts[i + 1]) for i in range(len(pts) - 1)
        )
    if geom.kind == KIND_POLYGON:
        parts = [geom.coordinates]
    else:
        parts = geom.coordinates
    best = math.inf
    for rings in parts:
        if _rings_contain(rings, px, py):
            return 0.0
        d = _rings_boundary_distance(rings, px, py)
        if d < best:
            best = d
    return best


def query_point(
    cache: SmartCache, layer: str, p: tuple[float, float], tol: float
) -> list[PointHit]:
    """Features within ``tol`` metres of ``p``, sorted by (distance, id)."""
    if not (tol > 0.0) or not math.isfinite(tol):
        raise CacheError(f"point query tolerance must be positive, got {tol!r}")
    px, py = float(p[0]), float(p[1])
    if not (math.isfinite(px) and math.isfinite(py)):
        raise CacheError(f"malformed query point {p!r}")
    data = cache._layer(layer)
    box = (px - tol, py - tol, px + tol, py + tol)
    hits: list[tuple[float, tuple, PointHit]] = []
    for ordinal in data.index.search(box):
        fid, attrs, geom = data.record(int(ordinal))
        d = geometry_distance(geom, px, py)
        if d <= tol:
            hits.append((d, feature_id_key(fid), (fid, geom, attrs, d)))
    hits.sort(key=lambda item: (item[0], item[1]))
    return [hit for _, _, hit in hits]


def cache_stats(cache: SmartCache) -> dict[str, Any]:
    """Counts, index depths, file size, and build stamp for one cache."""
    return {
        "country_code": cache.country_code,
        "created": cache.created,
        "base_scale_denom": cache.base_scale_denom,
        "file_size": cache.file_size,
        "total_features": sum(layer.count for layer in cache.layers.values()),
        "layers": {
            name: {"count": data.count, "index_depth": data.index.depth}
            for name, data in cache.layers.items()
        },
    }
