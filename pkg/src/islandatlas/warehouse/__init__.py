"""Country data warehouse: layered vector storage with ingest,
topology cleaning, sheet merging, validation, and interchange I/O."""

from __future__ import annotations

import os

from .container import (
    CONTAINER_VERSION,
    MAGIC,
    load_warehouse,
    save_warehouse,
    warehouse_from_text,
    warehouse_to_text,
)
from .geojson import (
    format_feature_collection,
    parse_feature_collection,
    read_feature_collection,
    write_feature_collection,
)
from .ingest import coerce_attributes, create_warehouse, ingest
from .model import (
    ATTR_BOOLEAN,
    ATTR_INTEGER,
    ATTR_REAL,
    ATTR_TEXT,
    ATTR_TYPES,
    AttributeField,
    CleanReport,
    Feature,
    FeatureId,
    GEOMETRY_KINDS,
    Geometry,
    KIND_MULTIPOLYGON,
    KIND_POINT,
    KIND_POLYGON,
    KIND_POLYLINE,
    LayerSpec,
    LayerStyle,
    MERGE_KEY_ATTR,
    THEME_GROUPS,
    Warehouse,
    feature_id_key,
    normalize_winding,
    ring_is_ccw,
    ring_signed_area,
    unwrap_ring,
)
from .topology import SNAP_TOL_DEG, clean_topology, merge_sheets
from .validate import CHECK_NAMES, ValidationReport, validate


def export_layer(w: Warehouse, layer: str, path: str | os.PathLike) -> int:
    """Write one layer to the interchange format; returns the count."""
    w.layer(layer)
    return write_feature_collection(w.features[layer], path)


__all__ = [
    "ATTR_BOOLEAN",
    "ATTR_INTEGER",
    "ATTR_REAL",
    "ATTR_TEXT",
    "ATTR_TYPES",
    "AttributeField",
    "CHECK_NAMES",
    "CONTAINER_VERSION",
    "CleanReport",
    "Feature",
    "FeatureId",
    "GEOMETRY_KINDS",
    "Geometry",
    "KIND_MULTIPOLYGON",
    "KIND_POINT",
    "KIND_POLYGON",
    "KIND_POLYLINE",
    "LayerSpec",
    "LayerStyle",
    "MAGIC",
    "MERGE_KEY_ATTR",
    "SNAP_TOL_DEG",
    "THEME_GROUPS",
    "ValidationReport",
    "Warehouse",
    "clean_topology",
    "coerce_attributes",
    "create_warehouse",
    "export_layer",
    "feature_id_key",
    "format_feature_collection",
    "ingest",
    "load_warehouse",
    "merge_sheets",
    "normalize_winding",
    "parse_feature_collection",
    "read_feature_collection",
    "ring_is_ccw",
    "ring_signed_area",
    "save_warehouse",
    "unwrap_ring",
    "validate",
    "warehouse_from_text",
    "warehouse_to_text",
    "write_feature_collection",
]
