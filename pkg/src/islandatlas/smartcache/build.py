"""Cache builds: project, pack, index, and atomically replace.

A build never patches an existing file.  It packs everything into
memory, writes a temporary sibling, and renames it over the target, so
readers holding the old file keep a consistent snapshot until they
reopen.  Identical warehouse and spec produce byte-identical files: the
header timestamp is the warehouse creation stamp, not the wall clock,
and features are packed in id order.
"""

from __future__ import annotations

import fcntl
import os
import tempfile
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..errors import (
    CacheError,
    ProjectionDomainError,
    RasterPublishError,
    WarehouseInvalidError,
)
from ..geo.points import GeoPoint
from ..geo.projection import tm_forward
from ..warehouse.model import Feature, Warehouse, feature_id_key
from ..warehouse.validate import validate
from .format import (
    CacheSpec,
    build_records_blob,
    cache_spec_to_obj,
    encode_cache,
    layer_header_obj,
    pack_record,
)
from .index import FANOUT, build_index


@dataclass
class BuildReport:
    path: str
    file_size: int = 0
    created: str = ""
    stored: dict[str, int] = field(default_factory=dict)
    dropped: dict[str, int] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def total_stored(self) -> int:
        return sum(self.stored.values())

    def summary(self) -> str:
        lines = [f"cache {self.path}: {self.file_size} bytes"]
        for name in self.stored:
            lines.append(
                f"  {name}: stored={self.stored[name]} dropped={self.dropped[name]}"
            )
        lines.extend(f"  note: {text}" for text in self.notes)
        return "\n".join(lines)

    def to_dict(self) -> dict[str, Any]:
        return {
            "path": self.path,
            "file_size": self.file_size,
            "created": self.created,
            "stored": dict(self.stored),
            "dropped": dict(self.dropped),
            "notes": list(self.notes),
        }


class _BuildLock:
    """Advisory exclusive lock beside the output path; one builder at a time."""

    def __init__(self, out_path: str) -> None:
        self.path = out_path + ".lock"
        self.fd = -1

    def __enter__(self) -> "_BuildLock":
        self.fd = os.open(self.path, os.O_CREAT | os.O_RDWR, 0o644)
        try:
            fcntl.flock(self.fd, fcntl.LOCK_EX | fcntl.LOCK_NB)
        except OSError:
            os.close(self.fd)
            self.fd = -1
            raise CacheError(f"another build holds {self.path}") from None
        return self

    def __exit__(self, *exc: object) -> None:
        if self.fd >= 0:
            try:
                os.unlink(self.path)
            except OSError:
                pass
            fcntl.flock(self.fd, fcntl.LOCK_UN)
            os.close(self.fd)
            self.fd = -1


def _project_feature(spec: CacheSpec, feature: Feature):
    def fn(x: float, y: float):
        p = tm_forward(spec.projection, GeoPoint(x, y))
        return (p.x, p.y)

    return feature.geometry.map_vertices(fn)


def _pack_layer(
    w: Warehouse, spec: CacheSpec, name: str, report: BuildReport
) -> tuple[dict[str, Any], list[bytes]]:
    layer_spec = w.layer(name)
    if layer_spec.raster:
        raise RasterPublishError(f"rasters cannot be published: layer {name!r}")
    published = spec.published_for(layer_spec)
    records: list[bytes] = []
    boxes: list[tuple[float, float, float, float]] = []
    dropped = 0
    for feature in sorted(w.features[name], key=lambda f: feature_id_key(f.id)):
        try:
            geom = _project_feature(spec, feature)
        except ProjectionDomainError:
            dropped += 1
            continue
        attrs = {k: feature.attributes[k] for k in published if k in feature.attributes}
        records.append(pack_record(feature.id, attrs, geom))
        boxes.append(geom.bbox())
    index = build_index(np.array(boxes, dtype=np.float64).reshape(len(boxes), 4))
    records_blob = build_records_blob(records)
    index_blob = index.to_bytes()
    report.stored[name] = len(records)
    report.dropped[name] = dropped
    if dropped:
        report.notes.append(f"{name}: {dropped} features outside the projection zone")
    entry = layer_header_obj(
        layer_spec,
        published,
        count=len(records),
        records_len=len(records_blob),
        index_len=len(index_blob),
        levels=index.level_counts(),
        fanout=FANOUT,
    )
    return entry, [records_blob, index_blob]


def build_cache(
    w: Warehouse,
    spec: CacheSpec,
    out_path: str | os.PathLike,
    *,
    base_scale_denom: float | None = None,
) -> BuildReport:
    """Build a cache file from a clean warehouse, replacing any existing file.

    ``base_scale_denom`` is recorded in the header as the scale the cache
    was built to serve; geometry itself is stored at full resolution.
    """
    out = os.fspath(out_path)
    for name in spec.layers:
        if w.layer(name).raster:
            raise RasterPublishError(f"rasters cannot be published: layer {name!r}")
    check = validate(w)
    if not check.ok():
        raise WarehouseInvalidError(
            f"warehouse {w.country_code} fails validation:\n{check.summary()}"
        )

    created = str(w.metadata.get("created", ""))
    report = BuildReport(path=out, created=created)
    entries: list[dict[str, Any]] = []
    sections: list[bytes] = []
    for name in spec.layers:
        entry, blobs = _pack_layer(w, spec, name, report)
        entries.append(entry)
        sections.extend(blobs)
    header = {
        "country_code": w.country_code,
        "created": created,
        "spec": cache_spec_to_obj(spec),
        "layers": entries,
    }
    if base_scale_denom is not None:
        header["base_scale_denom"] = float(base_scale_denom)
    data = encode_cache(header, sections)

    with _BuildLock(out):
        directory = os.path.dirname(out) or "."
        fd, tmp_path = tempfile.mkstemp(prefix=".pisc-", dir=directory)
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(data)
            os.replace(tmp_path, out)
        except BaseException:
            try:
                os.unlink(tmp_path)
            except OSError:
                pass
            raise
    report.file_size = len(data)
    return report


def rebuild_from(
    w: Warehouse,
    spec: CacheSpec,
    path: str | os.PathLike,
    *,
    base_scale_denom: float | None = None,
) -> BuildReport:
    """Full rebuild; identical input yields a byte-identical file."""
    return build_cache(w, spec, path, base_scale_denom=base_scale_denom)
