"""Shared fixture builders for the test suite."""

from __future__ import annotations

import json

from islandatlas.warehouse import (
    ATTR_TEXT,
    AttributeField,
    KIND_POLYGON,
    LayerSpec,
    MERGE_KEY_ATTR,
    create_warehouse,
)

FIXED_TS = "2026-01-05T00:00:00Z"


def make_layer(
    name: str = "coast",
    kind: str = KIND_POLYGON,
    theme: str = "general-reference",
    schema: tuple = (),
    **kw,
) -> LayerSpec:
    return LayerSpec(name, kind, theme, schema=schema, **kw)


def mergeable_schema(*extra: AttributeField) -> tuple:
    return (AttributeField(MERGE_KEY_ATTR, ATTR_TEXT, False),) + extra


def make_warehouse(code: str = "FJ", layers: list[LayerSpec] | None = None):
    if layers is None:
        layers = [make_layer()]
    return create_warehouse(code, layers, timestamp=FIXED_TS)


def gj_feature(fid, gtype: str, coords, props: dict | None = None) -> dict:
    return {
        "type": "Feature",
        "id": fid,
        "geometry": {"type": gtype, "coordinates": coords},
        "properties": props or {},
    }


def gj_collection(*features: dict) -> str:
    return json.dumps({"type": "FeatureCollection", "features": list(features)})


def write_geojson(tmp_path, name: str, *features: dict) -> str:
    path = tmp_path / name
    path.write_text(gj_collection(*features), encoding="utf-8")
    return str(path)
