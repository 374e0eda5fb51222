"""Warehouse container file: the `PIWA1` format.

A warehouse persists as one self-describing text file: the magic line
``PIWA1`` followed by a single JSON document holding metadata, the layer
table and per-layer feature blocks.  JSON numbers round-trip exactly
through Python's shortest-repr float formatting, so save/load is the
identity.  Writes go to a temporary sibling and are renamed into place.
"""

from __future__ import annotations

import json
import os
import tempfile
from typing import Any

from ..errors import ContainerFormatError
from .model import (
    AttributeField,
    Feature,
    Geometry,
    KIND_MULTIPOLYGON,
    KIND_POINT,
    KIND_POLYGON,
    KIND_POLYLINE,
    LayerSpec,
    LayerStyle,
    Warehouse,
)

MAGIC = "PIWA1"
CONTAINER_VERSION = 1


def layer_spec_to_obj(spec: LayerSpec) -> dict[str, Any]:
    return {
        "name": spec.name,
        "geometry_kind": spec.geometry_kind,
        "theme_group": spec.theme_group,
        "schema": [[f.name, f.type, f.required] for f in spec.schema],
        "min_scale_denom": spec.min_scale_denom,
        "max_scale_denom": spec.max_scale_denom,
        "style": {
            "stroke": spec.style.stroke,
            "stroke_width_px": spec.style.stroke_width_px,
            "fill": spec.style.fill,
            "point_symbol": spec.style.point_symbol,
        },
        "raster": spec.raster,
    }


def layer_spec_from_obj(obj: dict[str, Any]) -> LayerSpec:
    style = obj.get("style", {})
    return LayerSpec(
        name=obj["name"],
        geometry_kind=obj["geometry_kind"],
        theme_group=obj["theme_group"],
        schema=tuple(
            AttributeField(name, type_, bool(required))
            for name, type_, required in obj.get("schema", [])
        ),
        min_scale_denom=int(obj["min_scale_denom"]),
        max_scale_denom=int(obj["max_scale_denom"]),
        style=LayerStyle(
            stroke=style.get("stroke", "#1f3a5f"),
            stroke_width_px=float(style.get("stroke_width_px", 1.0)),
            fill=style.get("fill"),
            point_symbol=style.get("point_symbol"),
        ),
        raster=bool(obj.get("raster", False)),
    )


def _coords_to_json(geom: Geometry) -> Any:
    if geom.kind == KIND_POINT:
        return list(geom.coordinates)
    if geom.kind == KIND_POLYLINE:
        return [list(v) for v in geom.coordinates]
    if geom.kind == KIND_POLYGON:
        return [[list(v) for v in ring] for ring in geom.coordinates]
    return [[[list(v) for v in ring] for ring in part] for part in geom.coordinates]


def _coords_from_json(kind: str, coords: Any) -> Any:
    try:
        if kind == KIND_POINT:
            x, y = coords
            return (float(x), float(y))
        if kind == KIND_POLYLINE:
            return [(float(x), float(y)) for x, y in coords]
        if kind == KIND_POLYGON:
            return [[(float(x), float(y)) for x, y in ring] for ring in coords]
        if kind == KIND_MULTIPOLYGON:
            return [
                [[(float(x), float(y)) for x, y in ring] for ring in part]
                for part in coords
            ]
    except (TypeError, ValueError) as exc:
        raise ContainerFormatError(f"malformed {kind} coordinates: {exc}") from None
    raise ContainerFormatError(f"unknown geometry kind {kind!r}")


def warehouse_to_text(w: Warehouse) -> str:
    doc = {
        "container_version": CONTAINER_VERSION,
        "country_code": w.country_code,
        "metadata": w.metadata,
        "layers": [
            {
                "spec": layer_spec_to_obj(spec),
                "features": [
                    {
                        "id": f.id,
                        "kind": f.geometry.kind,
                        "coordinates": _coords_to_json(f.geometry),
                        "attributes": dict(sorted(f.attributes.items())),
                    }
                    for f in w.features[name]
                ],
            }
            for name, spec in w.layers.items()
        ],
    }
    return MAGIC + "\n" + json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def save_warehouse(w: Warehouse, path: str | os.PathLike) -> None:
    """Write atomically: a temporary sibling file is renamed over ``path``."""
    text = warehouse_to_text(w)
    directory = os.path.dirname(os.fspath(path)) or "."
    fd, tmp = tempfile.mkstemp(prefix=".piwa-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def warehouse_from_text(text: str) -> Warehouse:
    line, sep, body = text.partition("\n")
    if line != MAGIC or not sep:
        raise ContainerFormatError("not a warehouse container (bad magic)")
    try:
        doc = json.loads(body)
    except json.JSONDecodeError as exc:
        raise ContainerFormatError(f"container body is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ContainerFormatError("container body must be a JSON object")
    version = doc.get("container_version")
    if version != CONTAINER_VERSION:
        raise ContainerFormatError(
            f"unsupported container version {version!r}, expected {CONTAINER_VERSION}"
        )

    layers: dict[str, LayerSpec] = {}
    features: dict[str, list[Feature]] = {}
    for block in doc.get("layers", []):
        try:
            spec = layer_spec_from_obj(block["spec"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ContainerFormatError(f"malformed layer spec: {exc}") from None
        if spec.name in layers:
            raise ContainerFormatError(f"duplicate layer {spec.name!r} in container")
        layers[spec.name] = spec
        feats: list[Feature] = []
        for item in block.get("features", []):
            try:
                fid = item["id"]
                kind = item["kind"]
                geom = Geometry(kind, _coords_from_json(kind, item["coordinates"]))
                attrs = dict(item.get("attributes", {}))
            except (KeyError, TypeError) as exc:
                raise ContainerFormatError(f"malformed feature record: {exc}") from None
            feats.append(Feature(fid, geom, attrs))
        features[spec.name] = feats

    metadata = doc.get("metadata")
    if not isinstance(metadata, dict):
        metadata = {}
    return Warehouse(
        country_code=str(doc.get("country_code", "")),
        layers=layers,
        features=features,
        metadata=metadata,
    )


def load_warehouse(path: str | os.PathLike) -> Warehouse:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ContainerFormatError(f"cannot read warehouse {path}: {exc}") from None
    return warehouse_from_text(text)
