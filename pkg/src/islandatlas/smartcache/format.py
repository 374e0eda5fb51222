"""Cache file format: the `PISC1` binary layout.

A cache file is: the magic bytes ``PISC1``, a u32 format version, a u32
header length, a JSON header, then one records blob and one index blob
per layer, in header order.  All integers are little-endian; all
coordinates are IEEE-754 doubles in projected metres.  The header
carries the full build spec and the per-layer layer specs, so a cache
is readable without the warehouse it came from.

Records blob layout, per layer::

    offsets  (count + 1) x u32   record i spans payload[off[i]:off[i+1]]
    payload  concatenated feature records

Feature record::

    id          u8 tag (0 int, 1 text) + i64 | u32 length + UTF-8
    attributes  u32 length + JSON object (sorted keys, compact)
    geometry    u8 kind code + packed vertex data

Geometry codes: 0 Point (2 doubles), 1 PolyLine (u32 n + n pairs),
2 Polygon (u32 rings, each u32 n + n pairs), 3 MultiPolygon
(u32 parts, each as a Polygon body).
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from typing import Any, Mapping

from ..errors import CacheError, CacheFormatError, CacheTruncatedError, CacheVersionError
from ..geo.projection import ProjectionSpec
from ..geo.specstring import format_projection, parse_projection
from ..warehouse.container import layer_spec_from_obj, layer_spec_to_obj
from ..warehouse.model import (
    Feature,
    FeatureId,
    Geometry,
    KIND_MULTIPOLYGON,
    KIND_POINT,
    KIND_POLYGON,
    KIND_POLYLINE,
    LayerSpec,
)

MAGIC = b"PISC1"
CACHE_VERSION = 1

_U32 = struct.Struct("<I")
_I64 = struct.Struct("<q")
_PAIR = struct.Struct("<2d")

_ID_INT = 0
_ID_TEXT = 1

_GEOM_CODE = {KIND_POINT: 0, KIND_POLYLINE: 1, KIND_POLYGON: 2, KIND_MULTIPOLYGON: 3}
_GEOM_KIND = {code: kind for kind, code in _GEOM_CODE.items()}


@dataclass(frozen=True)
class CacheSpec:
    """What to publish: target projection, layers, and per-layer attributes.

    ``published`` maps a layer name to the attribute names to carry into
    the cache; layers absent from the mapping publish their full schema.
    """

    projection: ProjectionSpec
    layers: tuple[str, ...]
    published: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not isinstance(self.projection, ProjectionSpec):
            raise CacheError("cache projection must be a planar projection spec")
        layers = tuple(self.layers)
        if not layers:
            raise CacheError("cache spec needs at least one layer")
        if len(set(layers)) != len(layers):
            raise CacheError("cache spec lists a layer twice")
        published = {name: tuple(attrs) for name, attrs in dict(self.published).items()}
        for name in published:
            if name not in layers:
                raise CacheError(f"published attributes name unknown layer {name!r}")
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "published", published)

    def published_for(self, spec: LayerSpec) -> tuple[str, ...]:
        """Resolve the published attribute names for one layer, schema order."""
        if spec.name not in self.published:
            return tuple(f.name for f in spec.schema)
        wanted = set(self.published[spec.name])
        known = spec.field_map()
        for name in wanted:
            if name not in known:
                raise CacheError(
                    f"published attribute {name!r} is not in the {spec.name!r} schema"
                )
        return tuple(f.name for f in spec.schema if f.name in wanted)


def cache_spec_to_obj(spec: CacheSpec) -> dict[str, Any]:
    return {
        "projection": format_projection(spec.projection),
        "layers": list(spec.layers),
        "published": {k: list(v) for k, v in sorted(spec.published.items())},
    }


def cache_spec_from_obj(obj: dict[str, Any]) -> CacheSpec:
    projection = parse_projection(obj["projection"])
    return CacheSpec(
        projection=projection,
        layers=tuple(obj["layers"]),
        published={k: tuple(v) for k, v in obj.get("published", {}).items()},
    )


def pack_id(fid: FeatureId) -> bytes:
    if isinstance(fid, bool) or not isinstance(fid, (int, str)):
        raise CacheError(f"unpackable feature id {fid!r}")
    if isinstance(fid, int):
        return bytes((_ID_INT,)) + _I64.pack(fid)
    raw = fid.encode("utf-8")
    return bytes((_ID_TEXT,)) + _U32.pack(len(raw)) + raw


def pack_attributes(attrs: Mapping[str, Any]) -> bytes:
    raw = json.dumps(attrs, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return _U32.pack(len(raw)) + raw


def _pack_vertices(vertices: list[tuple[float, float]]) -> bytes:
    flat = struct.pack(f"<{2 * len(vertices)}d", *(c for v in vertices for c in v))
    return _U32.pack(len(vertices)) + flat


def _pack_rings(rings: list[list[tuple[float, float]]]) -> bytes:
    return _U32.pack(len(rings)) + b"".join(_pack_vertices(r) for r in rings)


def pack_geometry(geom: Geometry) -> bytes:
    head = bytes((_GEOM_CODE[geom.kind],))
    if geom.kind == KIND_POINT:
        return head + _PAIR.pack(*geom.coordinates)
    if geom.kind == KIND_POLYLINE:
        return head + _pack_vertices(geom.coordinates)
    if geom.kind == KIND_POLYGON:
        return head + _pack_rings(geom.coordinates)
    parts = geom.coordinates
    return head + _U32.pack(len(parts)) + b"".join(_pack_rings(p) for p in parts)


def pack_record(fid: FeatureId, attrs: Mapping[str, Any], geom: Geometry) -> bytes:
    return pack_id(fid) + pack_attributes(attrs) + pack_geometry(geom)


class _Reader:
    """Bounds-checked cursor over one records payload."""

    __slots__ = ("buf", "pos")

    def __init__(self, buf: bytes | memoryview, pos: int = 0) -> None:
        self.buf = buf
        self.pos = pos

    def take(self, n: int) -> memoryview:
        end = self.pos + n
        if end > len(self.buf):
            raise CacheTruncatedError("feature record ends past its blob")
        out = memoryview(self.buf)[self.pos : end]
        self.pos = end
        return out

    def u8(self) -> int:
        return self.take(1)[0]

    def u32(self) -> int:
        return _U32.unpack(self.take(4))[0]

    def i64(self) -> int:
        return _I64.unpack(self.take(8))[0]

    def vertices(self) -> list[tuple[float, float]]:
        n = self.u32()
        flat = struct.unpack(f"<{2 * n}d", self.take(16 * n))
        return [(flat[i], flat[i + 1]) for i in range(0, 2 * n, 2)]

    def rings(self) -> list[list[tuple[float, float]]]:
        return [self.vertices() for _ in range(self.u32())]


def unpack_record(buf: bytes | memoryview) -> tuple[FeatureId, dict[str, Any], Geometry]:
    r = _Reader(buf)
    tag = r.u8()
    if tag == _ID_INT:
        fid: FeatureId = r.i64()
    elif tag == _ID_TEXT:
        fid = str(r.take(r.u32()), "utf-8")
    else:
        raise CacheFormatError(f"unknown feature id tag {tag}")
    try:
        attrs = json.loads(str(r.take(r.u32()), "utf-8"))
    except ValueError as exc:
        raise CacheFormatError(f"feature attributes are not valid JSON: {exc}") from None
    code = r.u8()
    kind = _GEOM_KIND.get(code)
    if kind is None:
        raise CacheFormatError(f"unknown geometry code {code}")
    if kind == KIND_POINT:
        coords: Any = _PAIR.unpack(r.take(16))
    elif kind == KIND_POLYLINE:
        coords = r.vertices()
    elif kind == KIND_POLYGON:
        coords = r.rings()
    else:
        coords = [r.rings() for _ in range(r.u32())]
    if r.pos != len(buf):
        raise CacheFormatError("feature record has trailing bytes")
    return fid, attrs, Geometry(kind, coords)


def build_records_blob(records: list[bytes]) -> bytes:
    """Offsets table plus concatenated records."""
    offsets = [0]
    for rec in records:
        offsets.append(offsets[-1] + len(rec))
    table = struct.pack(f"<{len(offsets)}I", *offsets)
    return table + b"".join(records)


def split_records_blob(blob: memoryview, count: int) -> tuple[list[int], memoryview]:
    table_len = 4 * (count + 1)
    if len(blob) < table_len:
        raise CacheTruncatedError("records blob shorter than its offsets table")
    offsets = list(struct.unpack(f"<{count + 1}I", blob[:table_len]))
    payload = blob[table_len:]
    if offsets[0] != 0 or offsets[-1] != len(payload):
        raise CacheFormatError("records offsets do not span the payload")
    if any(a > b for a, b in zip(offsets, offsets[1:])):
        raise CacheFormatError("records offsets are not monotonic")
    return offsets, payload


def layer_header_obj(
    spec: LayerSpec,
    published: tuple[str, ...],
    count: int,
    records_len: int,
    index_len: int,
    levels: list[int],
    fanout: int,
) -> dict[str, Any]:
    keep = set(published)
    stored_spec = LayerSpec(
        name=spec.name,
        geometry_kind=spec.geometry_kind,
        theme_group=spec.theme_group,
        schema=tuple(f for f in spec.schema if f.name in keep),
        min_scale_denom=spec.min_scale_denom,
        max_scale_denom=spec.max_scale_denom,
        style=spec.style,
        raster=spec.raster,
    )
    return {
        "spec": layer_spec_to_obj(stored_spec),
        "count": count,
        "records_len": records_len,
        "index_len": index_len,
        "levels": levels,
        "fanout": fanout,
    }


def encode_cache(header: dict[str, Any], sections: list[bytes]) -> bytes:
    raw = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return b"".join([MAGIC, _U32.pack(CACHE_VERSION), _U32.pack(len(raw)), raw, *sections])


def decode_header(data: bytes) -> tuple[dict[str, Any], int]:
    """Check magic and version, parse the header, return it with the body offset."""
    if data[:5] != MAGIC:
        raise CacheFormatError("not a cache file: bad magic")
    if len(data) < 13:
        raise CacheTruncatedError("file ends inside the fixed header")
    version = _U32.unpack_from(data, 5)[0]
    if version != CACHE_VERSION:
        raise CacheVersionError(f"cache format version {version} is not supported")
    header_len = _U32.unpack_from(data, 9)[0]
    body = 13 + header_len
    if len(data) < body:
        raise CacheTruncatedError("file ends inside the header")
    try:
        header = json.loads(str(data[13:body], "utf-8"))
    except (UnicodeDecodeError, ValueError) as exc:
        raise CacheFormatError(f"header is not valid JSON: {exc}") from None
    if not isinstance(header, dict):
        raise CacheFormatError("header is not an object")
    return header, body


def check_body_size(data: bytes, body: int, header: dict[str, Any]) -> None:
    expected = body
    for entry in header.get("layers", []):
        expected += int(entry["records_len"]) + int(entry["index_len"])
    if len(data) < expected:
        raise CacheTruncatedError("file ends inside the layer sections")
    if len(data) > expected:
        raise CacheFormatError("trailing bytes after the last section")


def layer_specs_from_header(header: dict[str, Any]) -> list[LayerSpec]:
    return [layer_spec_from_obj(entry["spec"]) for entry in header.get("layers", [])]
