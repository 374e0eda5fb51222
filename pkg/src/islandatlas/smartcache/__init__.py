"""Immutable projected-2D cache with a packed spatial index.

Build once from a clean warehouse, then serve map queries from the file
without touching the warehouse again.  Updates are whole-file rebuilds
with atomic replacement; there is no mutation interface.
"""

from .build import BuildReport, build_cache, rebuild_from
from .format import CACHE_VERSION, MAGIC, CacheSpec
from .index import FANOUT, PackedIndex, build_index
from .query import (
    SmartCache,
    cache_stats,
    geometry_distance,
    open_cache,
    query_bbox,
    query_point,
)

__all__ = [
    "BuildReport",
    "CACHE_VERSION",
    "CacheSpec",
    "FANOUT",
    "MAGIC",
    "PackedIndex",
    "SmartCache",
    "build_cache",
    "build_index",
    "cache_stats",
    "geometry_distance",
    "open_cache",
    "query_bbox",
    "query_point",
    "rebuild_from",
]
