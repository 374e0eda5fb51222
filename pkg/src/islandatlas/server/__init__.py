"""HTTP map server: catalog, rendering, WSGI app, and offline export."""

from .app import ApiError, AtlasApp, build_app, create_http_server
from .bundle import BundleReport, export_offline_bundle, verify_bundle
from .catalog import AtlasCatalog, AtlasEntry, SiteView, load_catalog
from .config import ServerConfig, load_config
from .render import (
    BACKGROUND,
    M_PER_PX,
    MapView,
    SCALE_MAX,
    SCALE_MIN,
    SIMPLIFY_FACTOR,
    SIZE_MAX,
    SIZE_MIN,
    auto_scale,
    clamp_scale,
    expand_to_aspect,
    planar_bbox_from_geographic,
    render_map,
    resolve_view,
    simplify_geometry,
)

__all__ = [
    "ApiError",
    "AtlasApp",
    "AtlasCatalog",
    "AtlasEntry",
    "BACKGROUND",
    "BundleReport",
    "M_PER_PX",
    "MapView",
    "SCALE_MAX",
    "SCALE_MIN",
    "SIMPLIFY_FACTOR",
    "SIZE_MAX",
    "SIZE_MIN",
    "ServerConfig",
    "SiteView",
    "auto_scale",
    "build_app",
    "clamp_scale",
    "create_http_server",
    "expand_to_aspect",
    "export_offline_bundle",
    "load_catalog",
    "load_config",
    "planar_bbox_from_geographic",
    "render_map",
    "resolve_view",
    "simplify_geometry",
    "verify_bundle",
]
