"""Warehouse domain model: layers, features, geometry.

Coordinates are stored as bare (x, y) float pairs: longitude/latitude
degrees in a warehouse, metres in a cache.  Longitudes always live in
[0, 360), which keeps every archipelago contiguous across the
antimeridian.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass, field

from ..errors import WarehouseError
from ..geo.points import delta_longitude

Vertex = tuple[float, float]
Ring = list[Vertex]

KIND_POINT = "Point"
KIND_POLYLINE = "PolyLine"
KIND_POLYGON = "Polygon"
KIND_MULTIPOLYGON = "MultiPolygon"
GEOMETRY_KINDS = (KIND_POINT, KIND_POLYLINE, KIND_POLYGON, KIND_MULTIPOLYGON)

THEME_GROUPS = ("general-reference", "environment", "climate", "socio-economic")

ATTR_TEXT = "text"
ATTR_INTEGER = "integer"
ATTR_REAL = "real"
ATTR_BOOLEAN = "boolean"
ATTR_TYPES = (ATTR_TEXT, ATTR_INTEGER, ATTR_REAL, ATTR_BOOLEAN)

MERGE_KEY_ATTR = "sheet_merge_key"

FeatureId = int | str


def feature_id_key(fid: FeatureId) -> tuple[int, int | str]:
    """Sort key putting integer ids first in numeric order, then text ids."""
    if isinstance(fid, bool):
        raise WarehouseError(f"boolean feature id {fid!r}")
    if isinstance(fid, int):
        return (0, fid)
    return (1, fid)


class Geometry:
    """One shape.  ``coordinates`` nesting depends on ``kind``:

    Point        (x, y)
    PolyLine     [(x, y), ...]
    Polygon      [ring, ...] with ring = [(x, y), ...], first ring outer
    MultiPolygon [[ring, ...], ...]
    """

    __slots__ = ("kind", "coordinates")

    def __init__(self, kind: str, coordinates) -> None:
        if kind not in GEOMETRY_KINDS:
            raise WarehouseError(f"unknown geometry kind {kind!r}")
        self.kind = kind
        self.coordinates = coordinates

    def __repr__(self) -> str:
        return f"Geometry({self.kind}, {self.coordinates!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Geometry):
            return NotImplemented
        return self.kind == other.kind and self.coordinates == other.coordinates

    def rings(self) -> Iterator[Ring]:
        """All rings of polygonal kinds, outer ring first per part."""
        if self.kind == KIND_POLYGON:
            yield from self.coordinates
        elif self.kind == KIND_MULTIPOLYGON:
            for part in self.coordinates:
                yield from part

    def vertices(self) -> Iterator[Vertex]:
        if self.kind == KIND_POINT:
            yield self.coordinates
        elif self.kind == KIND_POLYLINE:
            yield from self.coordinates
        else:
            for ring in self.rings():
                yield from ring

    def vertex_count(self) -> int:
        return sum(1 for _ in self.vertices())

    def map_vertices(self, fn: Callable[[float, float], Vertex]) -> "Geometry":
        """New geometry with every vertex passed through ``fn(x, y)``."""
        if self.kind == KIND_POINT:
            return Geometry(self.kind, fn(*self.coordinates))
        if self.kind == KIND_POLYLINE:
            return Geometry(self.kind, [fn(x, y) for x, y in self.coordinates])
        if self.kind == KIND_POLYGON:
            return Geometry(self.kind, [[fn(x, y) for x, y in ring] for ring in self.coordinates])
        return Geometry(
            self.kind,
            [[[fn(x, y) for x, y in ring] for ring in part] for part in self.coordinates],
        )

    def copy(self) -> "Geometry":
        return self.map_vertices(lambda x, y: (x, y))

    def bbox(self) -> tuple[float, float, float, float]:
        xs, ys = zip(*self.vertices())
        return (min(xs), min(ys), max(xs), max(ys))


def unwrap_ring(ring: Iterable[Vertex]) -> Ring:
    """Ring with longitudes made continuous relative to the first vertex.

    Needed before plane math (area, winding) on geographic rings that sit
    near the 0/360 seam; safe for rings narrower than 180 degrees.
    """
    it = iter(ring)
    first = next(it)
    ref = first[0]
    out = [first]
    out.extend((ref + delta_longitude(x, ref), y) for x, y in it)
    return out


def ring_signed_area(ring: Iterable[Vertex]) -> float:
    """Shoelace area; positive for counter-clockwise winding.

    The closing edge is implied, so open and closed rings give the same
    value.
    """
    pts = list(ring)
    if len(pts) >= 2 and pts[0] == pts[-1]:
        pts = pts[:-1]
    if len(pts) < 3:
        return 0.0
    total = 0.0
    for i, (x1, y1) in enumerate(pts):
        x2, y2 = pts[(i + 1) % len(pts)]
        total += x1 * y2 - x2 * y1
    return total / 2.0


def ring_is_ccw(ring: Iterable[Vertex], *, geographic: bool) -> bool:
    pts = unwrap_ring(ring) if geographic else list(ring)
    return ring_signed_area(pts) >= 0.0


def normalize_winding(geom: Geometry, *, geographic: bool) -> int:
    """Force outer rings counter-clockwise and holes clockwise, in place.

    Returns the number of rings reversed.
    """
    flipped = 0

    def fix(rings: list[Ring]) -> None:
        nonlocal flipped
        for i, ring in enumerate(rings):
            if len(ring) < 3:
                continue
            want_ccw = i == 0
            if ring_is_ccw(ring, geographic=geographic) != want_ccw:
                rings[i] = ring[::-1]
                flipped += 1

    if geom.kind == KIND_POLYGON:
        fix(geom.coordinates)
    elif geom.kind == KIND_MULTIPOLYGON:
        for part in geom.coordinates:
            fix(part)
    return flipped


@dataclass(frozen=True)
class AttributeField:
    name: str
    type: str
    required: bool = False

    def __post_init__(self) -> None:
        if not self.name:
            raise WarehouseError("attribute field needs a name")
        if self.type not in ATTR_TYPES:
            raise WarehouseError(
                f"attribute {self.name!r} has unknown type {self.type!r}"
            )


@dataclass(frozen=True)
class LayerStyle:
    stroke: str = "#1f3a5f"
    stroke_width_px: float = 1.0
    fill: str | None = None
    point_symbol: str | None = None


@dataclass(frozen=True)
class LayerSpec:
    """Schema and cartographic definition of one layer."""

    name: str
    geometry_kind: str
    theme_group: str
    schema: tuple[AttributeField, ...] = ()
    min_scale_denom: int = 1_000
    max_scale_denom: int = 10_000_000
    style: LayerStyle = field(default_factory=LayerStyle)
    raster: bool = False

    def __post_init__(self) -> None:
        if not self.name:
            raise WarehouseError("layer needs a name")
        if not self.raster and self.geometry_kind not in GEOMETRY_KINDS:
            raise WarehouseError(
                f"layer {self.name!r}: unknown geometry kind {self.geometry_kind!r}"
            )
        if self.theme_group not in THEME_GROUPS:
            raise WarehouseError(
                f"layer {self.name!r}: unknown theme group {self.theme_group!r}"
            )
        if self.min_scale_denom > self.max_scale_denom:
            raise WarehouseError(
                f"layer {self.name!r}: scale window is inverted "
                f"({self.min_scale_denom} > {self.max_scale_denom})"
            )
        names = [f.name for f in self.schema]
        if len(names) != len(set(names)):
            raise WarehouseError(f"layer {self.name!r}: duplicate attribute names")

    def field_map(self) -> dict[str, AttributeField]:
        return {f.name: f for f in self.schema}

    def visible_at(self, scale_denom: float) -> bool:
        return self.min_scale_denom <= scale_denom <= self.max_scale_denom


@dataclass
class Feature:
    id: FeatureId
    geometry: Geometry
    attributes: dict[str, object] = field(default_factory=dict)

    def copy(self) -> "Feature":
        return Feature(self.id, self.geometry.copy(), dict(self.attributes))


@dataclass
class Warehouse:
    """All spatial data for one catalog entry, geographic WGS84."""

    country_code: str
    layers: dict[str, LayerSpec]
    features: dict[str, list[Feature]]
    metadata: dict[str, object]

    def layer(self, name: str) -> LayerSpec:
        from ..errors import UnknownLayerError

        try:
            return self.layers[name]
        except KeyError:
            raise UnknownLayerError(
                f"no layer {name!r} in warehouse {self.country_code}"
            ) from None

    def layer_features(self, name: str) -> list[Feature]:
        self.layer(name)
        return self.features[name]

    def note(self, text: str) -> None:
        self.metadata.setdefault("notes", []).append(text)


@dataclass
class CleanReport:
    """What an ingest/clean/merge pass did to a layer."""

    stored: int = 0
    duplicates_removed: int = 0
    rings_closed: int = 0
    vertices_snapped: int = 0
    features_merged: int = 0
    features_rejected: int = 0
    rejections: list[tuple[FeatureId | None, str]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def reject(self, fid: FeatureId | None, reason: str) -> None:
        self.features_rejected += 1
        self.rejections.append((fid, reason))

    def changed(self) -> bool:
        return (
            self.duplicates_removed > 0
            or self.rings_closed > 0
            or self.vertices_snapped > 0
            or self.features_merged > 0
            or self.features_rejected > 0
        )

    def summary(self) -> str:
        parts = [
            f"stored={self.stored}",
            f"duplicates_removed={self.duplicates_removed}",
            f"rings_closed={self.rings_closed}",
            f"vertices_snapped={self.vertices_snapped}",
            f"features_merged={self.features_merged}",
            f"features_rejected={self.features_rejected}",
        ]
        return " ".join(parts)

    def to_dict(self) -> dict[str, object]:
        return {
            "stored": self.stored,
            "duplicates_removed": self.duplicates_removed,
            "rings_closed": self.rings_closed,
            "vertices_snapped": self.vertices_snapped,
            "features_merged": self.features_merged,
            "features_rejected": self.features_rejected,
            "rejections": [[fid, reason] for fid, reason in self.rejections],
            "notes": list(self.notes),
        }
