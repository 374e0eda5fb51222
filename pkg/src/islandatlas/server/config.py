"""Server configuration: one small JSON file.

The file names the runtime catalog, the listen port, and optionally a
directory of static UI assets::

    {"catalog": "catalog.json", "port": 8040, "ui": "ui"}

Relative paths are resolved against the config file's own directory,
so a directory tree holding config, catalog, caches, and UI can be
moved or copied as a unit.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

from ..errors import ConfigError


@dataclass(frozen=True)
class ServerConfig:
    catalog_path: str
    port: int = 8040
    ui_dir: str | None = None


def load_config(path: str | os.PathLike) -> ServerConfig:
    path = os.path.abspath(os.fspath(path))
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except ValueError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"config {path} must be a JSON object")
    unknown = set(doc) - {"catalog", "port", "ui"}
    if unknown:
        raise ConfigError(f"config {path} has unknown keys: {sorted(unknown)}")
    if "catalog" not in doc or not isinstance(doc["catalog"], str):
        raise ConfigError(f"config {path} needs a \"catalog\" path")
    base = os.path.dirname(path)
    catalog_path = os.path.normpath(os.path.join(base, doc["catalog"]))
    port = doc.get("port", 8040)
    if not isinstance(port, int) or isinstance(port, bool) or not 1 <= port <= 65535:
        raise ConfigError(f"config {path} has a bad port: {port!r}")
    ui = doc.get("ui")
    if ui is not None and not isinstance(ui, str):
        raise ConfigError(f"config {path} has a bad \"ui\" entry: {ui!r}")
    ui_dir = os.path.normpath(os.path.join(base, ui)) if ui is not None else None
    return ServerConfig(catalog_path=catalog_path, port=port, ui_dir=ui_dir)
