"""Structural validation of a warehouse.

Every check runs over every feature; failures carry the layer, the
feature id, and a short detail string.  Nothing raises: validation is
an inspection, not a gate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .ingest import coerce_attributes
from .model import (
    Feature,
    KIND_MULTIPOLYGON,
    KIND_POINT,
    KIND_POLYGON,
    KIND_POLYLINE,
    LayerSpec,
    Ring,
    Warehouse,
    feature_id_key,
    ring_is_ccw,
)

CHECK_NAMES = (
    "finite_coords",
    "lon_domain",
    "kind_match",
    "geometry_shape",
    "duplicate_vertices",
    "ring_closure",
    "winding",
    "schema",
    "unique_ids",
)


@dataclass
class ValidationReport:
    failures: dict[str, list[tuple[str, object, str]]] = field(
        default_factory=lambda: {name: [] for name in CHECK_NAMES}
    )

    def fail(self, check: str, layer: str, fid: object, detail: str) -> None:
        self.failures[check].append((layer, fid, detail))

    def passed(self, check: str) -> bool:
        return not self.failures[check]

    def ok(self) -> bool:
        return all(not v for v in self.failures.values())

    def summary(self) -> str:
        lines = []
        for name in CHECK_NAMES:
            bad = self.failures[name]
            if bad:
                ids = ", ".join(f"{layer}/{fid}" for layer, fid, _ in bad[:5])
                more = f" (+{len(bad) - 5} more)" if len(bad) > 5 else ""
                lines.append(f"FAIL {name}: {ids}{more}")
            else:
                lines.append(f"PASS {name}")
        return "\n".join(lines)

    def to_dict(self) -> dict[str, object]:
        return {
            "ok": self.ok(),
            "checks": {
                name: {
                    "passed": not self.failures[name],
                    "failures": [
                        {"layer": layer, "feature": fid, "detail": detail}
                        for layer, fid, detail in self.failures[name]
                    ],
                }
                for name in CHECK_NAMES
            },
        }


def _check_rings(
    report: ValidationReport, layer: str, fid: object, rings: list[Ring]
) -> None:
    for i, ring in enumerate(rings):
        if len(ring) < 4:
            report.fail("geometry_shape", layer, fid, f"ring {i} has {len(ring)} vertices")
            continue
        if ring[0] != ring[-1]:
            report.fail("ring_closure", layer, fid, f"ring {i} is open")
            continue
        want_ccw = i == 0
        if ring_is_ccw(ring, geographic=True) != want_ccw:
            side = "outer ring not counter-clockwise" if want_ccw else f"hole {i} not clockwise"
            report.fail("winding", layer, fid, side)


def _check_feature(
    report: ValidationReport, layer: str, spec: LayerSpec, f: Feature
) -> None:
    geom = f.geometry
    for x, y in geom.vertices():
        if not (math.isfinite(x) and math.isfinite(y)):
            report.fail("finite_coords", layer, f.id, f"vertex ({x!r}, {y!r})")
            return
    for x, y in geom.vertices():
        if not 0.0 <= x < 360.0:
            report.fail("lon_domain", layer, f.id, f"longitude {x!r} outside [0, 360)")
            break
        if not -90.0 <= y <= 90.0:
            report.fail("lon_domain", layer, f.id, f"latitude {y!r} outside [-90, 90]")
            break

    if geom.kind != spec.geometry_kind:
        report.fail(
            "kind_match", layer, f.id, f"{geom.kind} in a {spec.geometry_kind} layer"
        )
        return

    if geom.kind == KIND_POLYLINE:
        if len(geom.coordinates) < 2:
            report.fail("geometry_shape", layer, f.id, "polyline has fewer than 2 vertices")
        seq_list = [geom.coordinates]
    elif geom.kind == KIND_POLYGON:
        _check_rings(report, layer, f.id, geom.coordinates)
        seq_list = list(geom.coordinates)
    elif geom.kind == KIND_MULTIPOLYGON:
        if not geom.coordinates:
            report.fail("geometry_shape", layer, f.id, "multipolygon has no parts")
        for part in geom.coordinates:
            _check_rings(report, layer, f.id, part)
        seq_list = [ring for part in geom.coordinates for ring in part]
    else:
        seq_list = []

    for seq in seq_list:
        for i in range(1, len(seq)):
            if seq[i] == seq[i - 1]:
                report.fail(
                    "duplicate_vertices", layer, f.id, f"vertices {i - 1} and {i} coincide"
                )
                break

    try:
        coerced, dropped = coerce_attributes(dict(f.attributes), spec)
    except ValueError as exc:
        report.fail("schema", layer, f.id, str(exc))
        return
    if dropped:
        report.fail("schema", layer, f.id, f"{dropped} attributes not in the layer schema")
    elif coerced != f.attributes:
        report.fail("schema", layer, f.id, "attribute values not in schema form")


def validate(w: Warehouse) -> ValidationReport:
    """Run every structural check over every layer."""
    report = ValidationReport()
    for name, spec in w.layers.items():
        seen: set = set()
        for f in w.features[name]:
            key = feature_id_key(f.id)
            if key in seen:
                report.fail("unique_ids", name, f.id, "feature id repeats in layer")
            seen.add(key)
            _check_feature(report, name, spec, f)
    return report
