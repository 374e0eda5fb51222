"""Exception taxonomy shared across the atlas engine."""


class AtlasError(Exception):
    """Base class for every error raised by this package."""


class GeoError(AtlasError):
    """Invalid coordinate, ellipsoid or transform parameter."""


class ProjectionDomainError(GeoError):
    """Point outside the validity zone of a projection."""


class SpecStringError(GeoError):
    """Malformed textual encoding of a projection, shift or affine."""


class ControlPointError(GeoError):
    """Control point set unusable for fitting (too few, collinear)."""


class WarehouseError(AtlasError):
    """Warehouse-level failure."""


class UnknownCountryError(WarehouseError):
    """Country code not present in the catalog."""


class UnknownLayerError(WarehouseError):
    """Layer name not present in the warehouse or cache."""


class DuplicateLayerError(WarehouseError):
    """Layer name already taken within the warehouse."""


class SourceFormatError(WarehouseError):
    """Vector interchange file cannot be parsed."""


class ContainerFormatError(WarehouseError):
    """Warehouse container file is malformed."""


class CacheError(AtlasError):
    """Cache-level failure."""


class CacheFormatError(CacheError):
    """File is not a cache (bad magic)."""


class CacheVersionError(CacheError):
    """Cache format version not supported by this reader."""


class CacheTruncatedError(CacheError):
    """Cache file ends before its sections do."""


class RasterPublishError(CacheError):
    """Raster layers cannot be published into a cache."""


class WarehouseInvalidError(CacheError):
    """Refusing to build a cache from a warehouse that fails validation."""


class ConfigError(AtlasError):
    """Bad server or CLI configuration."""
