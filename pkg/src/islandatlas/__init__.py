"""Web-GIS atlas engine for Pacific island archipelagos.

Subpackages:
  geo        coordinate systems, projections, datum shifts, measurement
  warehouse  per-country vector stores and the normalization pipeline
  smartcache immutable spatially indexed planar caches for map serving
  server     HTTP map service, catalog, rendering, offline bundles
"""

__version__ = "0.1.0"
