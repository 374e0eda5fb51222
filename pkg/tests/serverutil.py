"""Builders and a WSGI client shared by the HTTP-tier tests."""

from __future__ import annotations

import json
import os

from corpus import CENTRAL_MERIDIAN, archipelago_warehouse
from islandatlas import catalog as table
from islandatlas.geo.ellipsoid import WGS84
from islandatlas.geo.projection import ProjectionSpec
from islandatlas.server import AtlasApp, ServerConfig
from islandatlas.smartcache import CacheSpec, build_cache
from islandatlas.warehouse import (
    KIND_POINT,
    KIND_POLYGON,
    KIND_POLYLINE,
    LayerSpec,
    LayerStyle,
    create_warehouse,
)
from islandatlas.warehouse.model import Feature, Geometry, normalize_winding

ZONE = ProjectionSpec("tm", CENTRAL_MERIDIAN, 0.0, 0.9996, 500_000.0, 10_000_000.0, WGS84)
VIEW = (176.0, -21.0, 187.0, -14.0)
SITE_BOX = (178.0, -19.0, 180.0, -17.0)
PUBLISHED = {"places": ["name", "population"], "rivers": [], "islands": [], "reefs": []}


def write_catalog(root: str) -> str:
    """A full catalog under root; data paths point at root/caches, root/warehouses."""
    entries = {}
    for info in list(table.COUNTRIES) + [table.REGION]:
        entries[info.code] = {
            "warehouse": f"warehouses/{info.code}.piwa",
            "cache": f"caches/{info.code}.pisc",
            "view": list(VIEW),
            "sites": {name: list(SITE_BOX) for name in info.sites},
        }
    path = os.path.join(root, "catalog.json")
    with open(path, "w", encoding="utf-8") as handle:
        json.dump({"entries": entries}, handle)
    return path


def build_corpus_cache(root: str, code: str = "FJ", seed: int = 7, **kw):
    """Build a cache for one catalog code from the shared random corpus."""
    os.makedirs(os.path.join(root, "caches"), exist_ok=True)
    w = archipelago_warehouse(seed=seed, **kw)
    spec = CacheSpec(projection=ZONE, layers=tuple(w.layers), published=PUBLISHED)
    out = os.path.join(root, "caches", f"{code}.pisc")
    build_cache(w, spec, out)
    return w, out


def styled_warehouse():
    """Three layers with distinct styles and scale windows, fixed geometry."""
    layers = [
        LayerSpec(
            "coast",
            KIND_POLYGON,
            "general-reference",
            style=LayerStyle(stroke="#003366", stroke_width_px=2.0, fill="#66ccff"),
        ),
        LayerSpec(
            "roads",
            KIND_POLYLINE,
            "socio-economic",
            max_scale_denom=500_000.0,
            style=LayerStyle(stroke="#aa2200", stroke_width_px=1.0),
        ),
        LayerSpec(
            "towns",
            KIND_POINT,
            "socio-economic",
            max_scale_denom=250_000.0,
            style=LayerStyle(stroke="#000000", fill="#ffcc00", point_symbol="square"),
        ),
    ]
    w = create_warehouse("TO", layers, timestamp="2026-01-05T00:00:00Z")
    ring = [
        (184.0, -21.3),
        (184.5, -21.3),
        (184.5, -21.0),
        (184.0, -21.0),
        (184.0, -21.3),
    ]
    coast = Geometry(KIND_POLYGON, [ring])
    normalize_winding(coast, geographic=True)
    w.features["coast"].append(Feature(1, coast))
    w.features["roads"].append(
        Feature(2, Geometry(KIND_POLYLINE, [(184.05, -21.25), (184.45, -21.05)]))
    )
    w.features["towns"].append(Feature(3, Geometry(KIND_POINT, (184.25, -21.15))))
    return w


def build_styled_cache(root: str, code: str = "TO"):
    os.makedirs(os.path.join(root, "caches"), exist_ok=True)
    w = styled_warehouse()
    spec = CacheSpec(
        projection=ZONE, layers=tuple(w.layers), published={name: [] for name in w.layers}
    )
    out = os.path.join(root, "caches", f"{code}.pisc")
    build_cache(w, spec, out)
    return w, out


def make_app(root: str, ui_dir: str | None = None) -> AtlasApp:
    cfg = ServerConfig(
        catalog_path=os.path.join(root, "catalog.json"), port=8040, ui_dir=ui_dir
    )
    return AtlasApp(cfg)


class Client:
    """Drives the WSGI app in-process; no sockets involved."""

    def __init__(self, app) -> None:
        self.app = app

    def request(self, path: str, qs: str = "", method: str = "GET"):
        captured = {}

        def start_response(status, headers):
            captured["status"] = int(status.split(" ", 1)[0])
            captured["headers"] = dict(headers)

        env = {"REQUEST_METHOD": method, "PATH_INFO": path, "QUERY_STRING": qs}
        body = b"".join(self.app(env, start_response))
        return captured["status"], captured["headers"], body

    def get(self, path: str, qs: str = ""):
        return self.request(path, qs)

    def get_json(self, path: str, qs: str = ""):
        status, headers, body = self.request(path, qs)
        return status, headers, json.loads(body)


def load_schema(name: str) -> dict:
    here = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    path = os.path.join(here, "docs", "api-schemas", f"{name}.json")
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)
