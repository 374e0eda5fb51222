"""HTTP tier: a stateless WSGI app over the catalog and cache files.

Every endpoint is a GET under /api with query parameters; anything else
is served from the optional static UI directory.  Errors are structured
JSON with a machine code, mapped 400 for bad requests, 404 for unknown
names, 500 for faults.  The app holds only immutable state: the catalog
is loaded once, and cache handles are reopened automatically when the
file on disk is replaced by a rebuild, so any sequence of requests is
answerable in any order with identical results.

API responses carry an ``X-Payload-Bytes`` header with the body size;
map responses add the effective scale, the drawn layer list, and the
planar window, which is all a client needs to map pixels to metres.
"""

from __future__ import annotations

import http.client
import json
import mimetypes
import os
import socketserver
import wsgiref.simple_server
from typing import Any, Callable, Iterable
from urllib.parse import parse_qs

from ..errors import (
    AtlasError,
    CacheError,
    CacheFormatError,
    GeoError,
    ProjectionDomainError,
    UnknownCountryError,
    UnknownLayerError,
    WarehouseError,
)
from ..geo.measure import geodesic_area, great_circle_distance
from ..geo.points import GeoPoint, ProjectedPoint
from ..geo.projection import tm_forward, tm_inverse
from ..smartcache import SmartCache, open_cache, query_bbox, query_point
from ..warehouse.geojson import format_feature_collection
from ..warehouse.model import Feature, THEME_GROUPS
from .catalog import AtlasCatalog, load_catalog
from .config import ServerConfig
from .render import (
    M_PER_PX,
    planar_bbox_from_geographic,
    render_map,
    resolve_view,
    simplify_geometry,
    SIMPLIFY_FACTOR,
)

Headers = list[tuple[str, str]]
Response = tuple[int, Headers, bytes]


class ApiError(Exception):
    """Maps onto one structured JSON error response."""

    def __init__(self, status: int, code: str, message: str) -> None:
        super().__init__(message)
        self.status = status
        self.code = code


class Params:
    """Query-string accessors that turn absent or malformed values into 400s."""

    def __init__(self, query_string: str) -> None:
        self.raw = {
            key: values[-1] for key, values in parse_qs(query_string, keep_blank_values=True).items()
        }

    def get(self, name: str, default: str | None = None) -> str | None:
        return self.raw.get(name, default)

    def require(self, name: str) -> str:
        value = self.raw.get(name)
        if value is None or value == "":
            raise ApiError(400, "missing-parameter", f"query parameter {name!r} is required")
        return value

    def number(self, name: str, default: float | None = None) -> float:
        raw = self.raw.get(name)
        if raw is None or raw == "":
            if default is None:
                raise ApiError(400, "missing-parameter", f"query parameter {name!r} is required")
            return default
        try:
            return float(raw)
        except ValueError:
            raise ApiError(400, "bad-parameter", f"{name} must be a number, got {raw!r}") from None

    def integer(self, name: str) -> int:
        raw = self.require(name)
        try:
            return int(raw)
        except ValueError:
            raise ApiError(400, "bad-parameter", f"{name} must be an integer, got {raw!r}") from None

    def bbox(self) -> tuple[float, float, float, float]:
        raw = self.require("bbox")
        parts = raw.split(",")
        if len(parts) != 4:
            raise ApiError(400, "bad-parameter", "bbox must be minx,miny,maxx,maxy")
        try:
            minx, miny, maxx, maxy = (float(p) for p in parts)
        except ValueError:
            raise ApiError(400, "bad-parameter", f"bbox has a non-numeric part: {raw!r}") from None
        return (minx, miny, maxx, maxy)

    def bbox_is_geographic(self) -> bool:
        flag = self.raw.get("bbox_crs", "geographic")
        if flag not in ("geographic", "planar"):
            raise ApiError(400, "bad-parameter", "bbox_crs must be geographic or planar")
        return flag == "geographic"

    def scale_denom(self) -> float | None:
        raw = self.raw.get("scale_denom", "auto")
        if raw == "auto":
            return None
        try:
            value = float(raw)
        except ValueError:
            raise ApiError(400, "bad-parameter", f"scale_denom must be a number or auto, got {raw!r}") from None
        if value <= 0:
            raise ApiError(400, "bad-parameter", "scale_denom must be positive")
        return value


def _json_bytes(payload: Any) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


def _json_response(payload: Any, status: int = 200) -> Response:
    body = _json_bytes(payload)
    return (
        status,
        [
            ("Content-Type", "application/json; charset=utf-8"),
            ("X-Payload-Bytes", str(len(body))),
        ],
        body,
    )


def _error_response(status: int, code: str, message: str) -> Response:
    return _json_response({"error": {"code": code, "message": message}}, status)


class AtlasApp:
    """The WSGI callable; one instance serves any number of requests."""

    def __init__(self, config: ServerConfig, catalog: AtlasCatalog | None = None) -> None:
        self.config = config
        self.catalog = catalog if catalog is not None else load_catalog(config.catalog_path)
        self._caches: dict[str, tuple[tuple[int, int, int], SmartCache]] = {}
        self._routes: dict[str, Callable[[Params], Response]] = {
            "/api/countries": self._countries,
            "/api/map": self._map,
            "/api/features": self._features,
            "/api/identify": self._identify,
            "/api/search": self._search,
            "/api/measure": self._measure,
            "/api/legend": self._legend,
        }

    # -- plumbing --

    def __call__(self, environ, start_response) -> Iterable[bytes]:
        method = environ.get("REQUEST_METHOD", "GET")
        path = environ.get("PATH_INFO", "/")
        if method != "GET":
            status, headers, body = _error_response(
                405, "method-not-allowed", f"{method} is not supported; all endpoints are GET"
            )
            headers.append(("Allow", "GET"))
        else:
            try:
                status, headers, body = self._dispatch(path, Params(environ.get("QUERY_STRING", "")))
            except ApiError as exc:
                status, headers, body = _error_response(exc.status, exc.code, str(exc))
            except UnknownCountryError as exc:
                status, headers, body = _error_response(404, "unknown-country", str(exc))
            except UnknownLayerError as exc:
                status, headers, body = _error_response(404, "unknown-layer", str(exc))
            except CacheFormatError as exc:
                status, headers, body = _error_response(500, "cache-unreadable", str(exc))
            except (CacheError, GeoError, WarehouseError) as exc:
                status, headers, body = _error_response(400, "bad-request", str(exc))
            except AtlasError as exc:
                status, headers, body = _error_response(500, "internal", str(exc))
            except Exception as exc:  # pragma: no cover - last-resort guard
                status, headers, body = _error_response(500, "internal", f"{type(exc).__name__}: {exc}")
        reason = http.client.responses.get(status, "Unknown")
        headers.append(("Content-Length", str(len(body))))
        start_response(f"{status} {reason}", headers)
        return [body]

    def _dispatch(self, path: str, params: Params) -> Response:
        handler = self._routes.get(path)
        if handler is not None:
            return handler(params)
        if path.startswith("/api/"):
            raise ApiError(404, "unknown-endpoint", f"no endpoint {path}")
        return self._static(path)

    def _cache(self, code: str) -> SmartCache:
        entry = self.catalog.entry(code)
        try:
            st = os.stat(entry.cache_path)
        except OSError:
            # No path in the message: error bodies must match across installs.
            raise ApiError(404, "cache-missing", f"no cache built for {code}") from None
        sig = (st.st_mtime_ns, st.st_size, st.st_ino)
        slot = self._caches.get(code)
        if slot is not None and slot[0] == sig:
            return slot[1]
        cache = open_cache(entry.cache_path)
        self._caches[code] = (sig, cache)
        return cache

    def _layer_order(self, cache: SmartCache, raw: str | None) -> list[str]:
        """Requested layers in catalog (cache) order; unknown names are 404s."""
        names = cache.layer_names()
        if raw is None or raw == "" or raw == "default":
            return list(names)
        wanted = [part for part in raw.split(",") if part != ""]
        for name in wanted:
            if name not in names:
                raise UnknownLayerError(f"no layer {name!r} in cache")
        keep = set(wanted)
        return [name for name in names if name in keep]

    # -- endpoints --

    def _countries(self, params: Params) -> Response:
        return _json_response(self.catalog.countries_payload())

    def _resolve_planar_bbox(self, cache: SmartCache, params: Params):
        bbox = params.bbox()
        if params.bbox_is_geographic():
            for value, name in ((bbox[1], "minlat"), (bbox[3], "maxlat")):
                if not -90.0 <= value <= 90.0:
                    raise ApiError(400, "bad-parameter", f"{name} {value} outside [-90, 90]")
            return planar_bbox_from_geographic(cache.spec.projection, bbox)
        return bbox

    def _map(self, params: Params) -> Response:
        code = params.require("warehouse")
        cache = self._cache(code)
        width = params.integer("width")
        height = params.integer("height")
        bbox = self._resolve_planar_bbox(cache, params)
        view = resolve_view(bbox, width, height, params.scale_denom())
        layers = self._layer_order(cache, params.get("layers"))
        png, drawn = render_map(cache, view, layers)
        headers: Headers = [
            ("Content-Type", "image/png"),
            ("X-Payload-Bytes", str(len(png))),
            ("X-Scale-Denom", repr(view.scale_denom)),
            ("X-Layers", ",".join(drawn)),
            ("X-Bbox-Planar", ",".join(repr(v) for v in view.bbox)),
            ("X-Width", str(view.width)),
            ("X-Height", str(view.height)),
        ]
        return (200, headers, png)

    def _features(self, params: Params) -> Response:
        code = params.require("warehouse")
        cache = self._cache(code)
        layer = params.require("layer")
        bbox = self._resolve_planar_bbox(cache, params)
        scale = params.scale_denom()
        if scale is None:
            raise ApiError(400, "missing-parameter", "scale_denom must be a number here")
        tol = SIMPLIFY_FACTOR * scale
        projection = cache.spec.projection

        def to_geographic(x: float, y: float):
            g = tm_inverse(projection, ProjectedPoint(x, y))
            return (g.lon, g.lat)

        features = []
        for fid, geom, attrs in query_bbox(cache, layer, bbox):
            slim = simplify_geometry(geom, tol)
            if slim is None:
                continue
            features.append(Feature(fid, slim.map_vertices(to_geographic), attrs))
        body = format_feature_collection(features).encode("utf-8")
        headers: Headers = [
            ("Content-Type", "application/geo+json; charset=utf-8"),
            ("X-Payload-Bytes", str(len(body))),
            ("X-Feature-Count", str(len(features))),
        ]
        return (200, headers, body)

    def _identify(self, params: Params) -> Response:
        code = params.require("warehouse")
        cache = self._cache(code)
        lon = params.number("lon")
        lat = params.number("lat")
        tolerance_px = params.number("tolerance_px", default=5.0)
        if tolerance_px < 1.0:
            raise ApiError(400, "bad-parameter", "tolerance_px must be at least 1")
        scale = params.scale_denom()
        if scale is None:
            raise ApiError(400, "missing-parameter", "scale_denom must be a number here")
        layers = self._layer_order(cache, params.get("layers"))
        tol_m = tolerance_px * M_PER_PX * scale
        if not -90.0 <= lat <= 90.0:
            raise ApiError(400, "bad-parameter", f"lat {lat} outside [-90, 90]")
        try:
            p = tm_forward(cache.spec.projection, GeoPoint(lon, lat))
        except ProjectionDomainError:
            return _json_response({"hits": [], "tolerance_m": tol_m})
        hits = []
        for name in layers:
            for fid, _, attrs, distance in query_point(cache, name, (p.x, p.y), tol_m):
                hits.append(
                    {
                        "layer": name,
                        "id": fid,
                        "distance_m": distance,
                        "attributes": attrs,
                    }
                )
        return _json_response({"hits": hits, "tolerance_m": tol_m})

    def _search(self, params: Params) -> Response:
        q = params.get("q")
        if q is None or q == "":
            raise ApiError(400, "missing-parameter", "search needs a non-empty q parameter")
        return _json_response({"query": q, "hits": self.catalog.search(q)})

    def _measure(self, params: Params) -> Response:
        mode = params.require("mode")
        if mode not in ("distance", "area"):
            raise ApiError(400, "bad-parameter", f"mode must be distance or area, got {mode!r}")
        raw = params.require("path")
        points: list[GeoPoint] = []
        for token in raw.split(";"):
            parts = token.split(",")
            if len(parts) != 2:
                raise ApiError(400, "bad-parameter", f"path points are lon,lat pairs, got {token!r}")
            try:
                points.append(GeoPoint(float(parts[0]), float(parts[1])))
            except (ValueError, GeoError) as exc:
                raise ApiError(400, "bad-parameter", f"bad path point {token!r}: {exc}") from None
        if not points:
            raise ApiError(400, "bad-parameter", "path needs at least one point")
        if mode == "distance":
            value = sum(
                great_circle_distance(a, b) for a, b in zip(points, points[1:])
            )
            return _json_response({"mode": mode, "value": value, "unit": "m"})
        distinct = {(p.lon, p.lat) for p in points}
        if len(distinct) < 3:
            raise ApiError(400, "bad-parameter", "area needs at least three distinct points")
        ring = points + [points[0]] if points[0] != points[-1] else points
        return _json_response({"mode": mode, "value": geodesic_area(ring), "unit": "m2"})

    def _legend(self, params: Params) -> Response:
        code = params.require("warehouse")
        cache = self._cache(code)
        scale = params.scale_denom()
        if scale is None:
            raise ApiError(400, "missing-parameter", "scale_denom must be a number here")
        groups = []
        for group in THEME_GROUPS:
            layers = []
            for name in cache.layer_names():
                spec = cache.layer_spec(name)
                if spec.theme_group != group:
                    continue
                layers.append(
                    {
                        "name": spec.name,
                        "geometry_kind": spec.geometry_kind,
                        "min_scale_denom": spec.min_scale_denom,
                        "max_scale_denom": spec.max_scale_denom,
                        "visible": spec.visible_at(scale),
                        "style": {
                            "stroke": spec.style.stroke,
                            "stroke_width_px": spec.style.stroke_width_px,
                            "fill": spec.style.fill,
                            "point_symbol": spec.style.point_symbol,
                        },
                    }
                )
            if layers:
                groups.append({"name": group, "layers": layers})
        return _json_response({"scale_denom": scale, "groups": groups})

    # -- static UI --

    def _static(self, path: str) -> Response:
        if self.config.ui_dir is None:
            raise ApiError(404, "not-found", f"no static assets configured for {path}")
        root = os.path.abspath(self.config.ui_dir)
        rel = path.lstrip("/") or "index.html"
        full = os.path.abspath(os.path.normpath(os.path.join(root, rel)))
        if full != root and not full.startswith(root + os.sep):
            raise ApiError(404, "not-found", "path escapes the asset directory")
        if os.path.isdir(full):
            full = os.path.join(full, "index.html")
        try:
            with open(full, "rb") as handle:
                body = handle.read()
        except OSError:
            raise ApiError(404, "not-found", f"no asset {path}") from None
        ctype = mimetypes.guess_type(full)[0] or "application/octet-stream"
        return (200, [("Content-Type", ctype)], body)


class _QuietHandler(wsgiref.simple_server.WSGIRequestHandler):
    def log_message(self, *args) -> None:
        pass


class _ThreadingWSGIServer(socketserver.ThreadingMixIn, wsgiref.simple_server.WSGIServer):
    daemon_threads = True


def build_app(config: ServerConfig) -> AtlasApp:
    return AtlasApp(config)


def create_http_server(app: AtlasApp, host: str = "127.0.0.1", port: int | None = None):
    """Bind a threading HTTP server; the caller drives serve_forever."""
    chosen = app.config.port if port is None else port
    return wsgiref.simple_server.make_server(
        host, chosen, app, server_class=_ThreadingWSGIServer, handler_class=_QuietHandler
    )
