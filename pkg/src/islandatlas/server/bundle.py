"""Offline bundle export: a relocatable directory a local server can serve.

The bundle carries everything the HTTP tier reads at request time: the
cache files, a catalog whose paths are all relative, the static UI
assets when available, and a server config pointing at them.  Nothing
in it is stamped with a wall-clock time, so exporting twice from the
same inputs produces byte-identical trees, and a server started on the
bundle answers /api requests exactly as the live instance does.

A manifest.json records every file with its size and SHA-256 so an
installation can be verified after a slow or unreliable copy.
"""

from __future__ import annotations

import hashlib
import json
import os
import shutil
from dataclasses import dataclass
from typing import Any, Iterable

from ..errors import ConfigError
from .catalog import AtlasCatalog

MANIFEST_NAME = "manifest.json"


@dataclass(frozen=True)
class BundleReport:
    path: str
    entries: tuple[str, ...]
    files: tuple[dict[str, Any], ...]

    @property
    def total_bytes(self) -> int:
        return sum(row["bytes"] for row in self.files)

    def summary(self) -> str:
        return (
            f"bundle {self.path}: {len(self.entries)} cache(s), "
            f"{len(self.files)} file(s), {self.total_bytes} bytes"
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "path": self.path,
            "entries": list(self.entries),
            "files": [dict(row) for row in self.files],
            "total_bytes": self.total_bytes,
        }


def _dump_json(path: str, payload: Any) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, sort_keys=True, indent=2)
        handle.write("\n")


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _catalog_obj(catalog: AtlasCatalog) -> dict[str, Any]:
    entries: dict[str, Any] = {}
    for entry in catalog.entries:
        entries[entry.code] = {
            "warehouse": f"warehouses/{entry.code}.piwa",
            "cache": f"caches/{entry.code}.pisc",
            "view": list(entry.view),
            "sites": {site.name: list(site.bbox) for site in entry.sites},
        }
    return {"entries": entries}


def export_offline_bundle(
    catalog: AtlasCatalog,
    out_dir: str | os.PathLike,
    *,
    codes: Iterable[str] | None = None,
    port: int = 8040,
    ui_dir: str | None = None,
    force: bool = False,
) -> BundleReport:
    """Write a self-contained bundle of caches, catalog, config, and UI.

    ``codes`` limits which caches are copied (default: every entry whose
    cache file exists).  The catalog always lists all entries so the
    country payload matches the live server; a missing cache answers 404
    from the bundle exactly as it would live.
    """
    out = os.path.abspath(os.fspath(out_dir))
    if os.path.exists(out):
        if not os.path.isdir(out):
            raise ConfigError(f"bundle target {out} is not a directory")
        if os.listdir(out):
            if not force:
                raise ConfigError(f"bundle target {out} is not empty (use force to replace)")
            shutil.rmtree(out)
    os.makedirs(out, exist_ok=True)

    if codes is None:
        wanted = [e.code for e in catalog.entries if os.path.isfile(e.cache_path)]
    else:
        wanted = [catalog.entry(code).code for code in codes]

    os.makedirs(os.path.join(out, "caches"), exist_ok=True)
    copied: list[str] = []
    for code in wanted:
        entry = catalog.entry(code)
        if not os.path.isfile(entry.cache_path):
            raise ConfigError(f"no cache built for {code} at {entry.cache_path}")
        shutil.copyfile(entry.cache_path, os.path.join(out, "caches", f"{code}.pisc"))
        copied.append(code)

    _dump_json(os.path.join(out, "catalog.json"), _catalog_obj(catalog))

    config: dict[str, Any] = {"catalog": "catalog.json", "port": port}
    if ui_dir is not None:
        if not os.path.isdir(ui_dir):
            raise ConfigError(f"UI asset directory {ui_dir} does not exist")
        shutil.copytree(ui_dir, os.path.join(out, "ui"))
        config["ui"] = "ui"
    _dump_json(os.path.join(out, "config.json"), config)

    rows: list[dict[str, Any]] = []
    for root, dirs, names in os.walk(out):
        dirs.sort()
        for name in sorted(names):
            full = os.path.join(root, name)
            rel = os.path.relpath(full, out).replace(os.sep, "/")
            rows.append({"path": rel, "bytes": os.path.getsize(full), "sha256": _sha256(full)})
    rows.sort(key=lambda row: row["path"])
    manifest = {"entries": sorted(copied), "files": rows}
    _dump_json(os.path.join(out, MANIFEST_NAME), manifest)

    return BundleReport(path=out, entries=tuple(sorted(copied)), files=tuple(rows))


def verify_bundle(bundle_dir: str | os.PathLike) -> list[str]:
    """Recompute manifest hashes; returns a list of problems, empty if clean."""
    out = os.path.abspath(os.fspath(bundle_dir))
    manifest_path = os.path.join(out, MANIFEST_NAME)
    try:
        with open(manifest_path, "r", encoding="utf-8") as handle:
            manifest = json.load(handle)
    except (OSError, ValueError) as exc:
        return [f"cannot read manifest: {exc}"]
    problems: list[str] = []
    for row in manifest.get("files", []):
        full = os.path.join(out, row["path"])
        if not os.path.isfile(full):
            problems.append(f"missing file {row['path']}")
            continue
        if os.path.getsize(full) != row["bytes"]:
            problems.append(f"size mismatch for {row['path']}")
        elif _sha256(full) != row["sha256"]:
            problems.append(f"hash mismatch for {row['path']}")
    return problems
