"""Warehouse creation and source ingestion.

Ingestion runs every incoming vertex through the transform chain

    optional affine -> inverse projection (if the source is projected)
    -> datum shift -> longitude folding into [0, 360)

then coerces attributes to the layer schema.  A feature either lands
whole or is rejected with a reason; there are no partial stores.
"""

from __future__ import annotations

import datetime as _dt
import os
from typing import Any

from .. import catalog
from ..errors import (
    DuplicateLayerError,
    GeoError,
    WarehouseError,
)
from ..geo.affine import AffineTransform, apply_affine
from ..geo.datum import DatumShift, datum_transform
from ..geo.ellipsoid import WGS84
from ..geo.points import GeoPoint, ProjectedPoint, normalize_longitude
from ..geo.projection import ProjectionSpec, tm_inverse
from .container import save_warehouse
from .geojson import read_feature_collection
from .model import (
    ATTR_BOOLEAN,
    ATTR_INTEGER,
    ATTR_REAL,
    ATTR_TEXT,
    CleanReport,
    Feature,
    Geometry,
    KIND_POLYGON,
    KIND_MULTIPOLYGON,
    LayerSpec,
    Warehouse,
    normalize_winding,
)


def _utc_now_iso() -> str:
    return _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def create_warehouse(
    code: str,
    layer_specs: list[LayerSpec],
    *,
    timestamp: str | None = None,
    path: str | os.PathLike | None = None,
) -> Warehouse:
    """New empty warehouse for a catalog entry.

    The code must exist in the catalog; layer names must be unique.
    When ``path`` is given the warehouse is persisted immediately.
    """
    catalog.get_entry(code)
    layers: dict[str, LayerSpec] = {}
    for spec in layer_specs:
        if spec.name in layers:
            raise DuplicateLayerError(f"layer {spec.name!r} declared twice")
        layers[spec.name] = spec
    w = Warehouse(
        country_code=code,
        layers=layers,
        features={name: [] for name in layers},
        metadata={"created": timestamp or _utc_now_iso(), "notes": []},
    )
    if path is not None:
        save_warehouse(w, path)
    return w


def _coerce_value(value: Any, type_: str) -> Any:
    """Schema coercion; raises ValueError when the value cannot conform.

    Integers widen to reals.  Nothing else converts: text stays text,
    numbers never parse out of strings, booleans are not numbers.
    """
    if type_ == ATTR_TEXT:
        if isinstance(value, str):
            return value
        raise ValueError(f"expected text, got {value!r}")
    if type_ == ATTR_BOOLEAN:
        if isinstance(value, bool):
            return value
        raise ValueError(f"expected boolean, got {value!r}")
    if type_ == ATTR_INTEGER:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValueError(f"expected integer, got {value!r}")
        return value
    if type_ == ATTR_REAL:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValueError(f"expected real, got {value!r}")
        return float(value)
    raise ValueError(f"unknown attribute type {type_!r}")


def coerce_attributes(
    props: dict[str, Any], spec: LayerSpec
) -> tuple[dict[str, Any], int]:
    """Project properties onto the layer schema.

    Returns the conforming attribute dict and how many unknown
    properties were dropped.  Raises ValueError on a missing required
    field or an unconvertible value.
    """
    out: dict[str, Any] = {}
    fields = spec.field_map()
    dropped = 0
    for key, value in props.items():
        field = fields.get(key)
        if field is None:
            dropped += 1
            continue
        if value is None:
            if field.required:
                raise ValueError(f"required attribute {key!r} is null")
            continue
        try:
            out[key] = _coerce_value(value, field.type)
        except ValueError as exc:
            raise ValueError(f"attribute {key!r}: {exc}") from None
    for field in spec.schema:
        if field.required and field.name not in out:
            raise ValueError(f"required attribute {field.name!r} missing")
    return out, dropped


def _chain_transform(
    source_crs: ProjectionSpec | None,
    datum: DatumShift | None,
    affine: AffineTransform | None,
    source_ellipsoid,
):
    shift = datum or DatumShift()
    # A projected source's geographic datum rides on its own ellipsoid;
    # plain geographic sources say so explicitly (default WGS84).
    src_ell = source_crs.ellipsoid if source_crs is not None else source_ellipsoid

    def fn(x: float, y: float) -> tuple[float, float]:
        if affine is not None:
            p = apply_affine(affine, ProjectedPoint(x, y))
            x, y = p.x, p.y
        if source_crs is not None:
            g = tm_inverse(source_crs, ProjectedPoint(x, y))
        else:
            if not -90.0 <= y <= 90.0:
                raise GeoError(f"latitude {y!r} out of range")
            g = GeoPoint(x, y)
        g = datum_transform(src_ell, shift, g)
        return (normalize_longitude(g.lon), g.lat)

    return fn


def _geometry_shape_ok(geom: Geometry) -> str | None:
    """Cheap structural check at ingest time; returns a reason or None.

    Open rings are allowed through (topology cleaning closes or rejects
    them); rings too short to ever close and empty shapes are not.
    """
    if geom.kind == "PolyLine":
        if len(geom.coordinates) < 2:
            return "polyline needs at least 2 vertices"
    elif geom.kind == KIND_POLYGON:
        if not geom.coordinates:
            return "polygon has no rings"
        for ring in geom.coordinates:
            if len(ring) < 3:
                return "ring needs at least 3 distinct vertices"
    elif geom.kind == KIND_MULTIPOLYGON:
        if not geom.coordinates or any(not part for part in geom.coordinates):
            return "multipolygon has an empty part"
        for part in geom.coordinates:
            for ring in part:
                if len(ring) < 3:
                    return "ring needs at least 3 distinct vertices"
    return None


def ingest(
    w: Warehouse,
    layer: str,
    source_file: str | os.PathLike,
    source_crs: ProjectionSpec | None = None,
    datum: DatumShift | None = None,
    affine: AffineTransform | None = None,
    *,
    source_ellipsoid=WGS84,
) -> CleanReport:
    """Read a feature collection into a layer.

    ``source_crs`` None means the file is already geographic, on
    ``source_ellipsoid`` when a datum shift is supplied.  Returns a
    report with stored/rejected counts; rejected features list their
    reasons.
    """
    spec = w.layer(layer)
    if spec.raster:
        raise WarehouseError(f"layer {layer!r} is a raster layer and stores no vector features")
    raw, parse_rejections = read_feature_collection(source_file)
    report = CleanReport()
    for fid, reason in parse_rejections:
        report.reject(fid, reason)

    transform = _chain_transform(source_crs, datum, affine, source_ellipsoid)
    existing_ids = {f.id for f in w.features[layer]}
    dropped_total = 0
    staged: list[Feature] = []
    for fid, geom, props in raw:
        if fid in existing_ids:
            report.reject(fid, "duplicate feature id")
            continue
        if geom.kind != spec.geometry_kind:
            report.reject(
                fid,
                f"geometry kind {geom.kind} does not match layer {spec.geometry_kind}",
            )
            continue
        reason = _geometry_shape_ok(geom)
        if reason is not None:
            report.reject(fid, reason)
            continue
        try:
            attrs, dropped = coerce_attributes(props, spec)
        except ValueError as exc:
            report.reject(fid, str(exc))
            continue
        try:
            out_geom = geom.map_vertices(transform)
        except GeoError as exc:
            report.reject(fid, f"coordinate transform failed: {exc}")
            continue
        normalize_winding(out_geom, geographic=True)
        dropped_total += dropped
        staged.append(Feature(fid, out_geom, attrs))
        existing_ids.add(fid)

    w.features[layer].extend(staged)
    report.stored = len(staged)
    if dropped_total:
        report.notes.append(f"dropped {dropped_total} properties not in the layer schema")
    basename = os.path.basename(os.fspath(source_file))
    w.note(
        f"ingested {report.stored} features into {layer} from {basename}"
        + (f", rejected {report.features_rejected}" if report.features_rejected else "")
    )
    return report
