"""Tunable constants, collected in one place.

Every tolerance the pipeline or server applies is defined here so that
operators can override them from the CLI without hunting through modules.
"""

# Mean sphere radius used by the measurement tools (metres).  Measurement is
# a reader convenience; projections and datum work stay on the ellipsoid.
SPHERE_RADIUS_M = 6371008.8

# Transverse Mercator validity half-width, degrees of longitude from the
# central meridian.  Distortion grows without bound beyond this.
TM_MAX_DELTA_DEG = 10.0

# Default vertex snapping / seam tolerance for topology cleaning, degrees.
# About 0.11 m at the equator: below source-map accuracy, above float noise.
SNAP_TOL_DEG = 1e-6

# Relative eigenvalue threshold under which a control-point normal matrix
# is treated as singular (collinear sources).
AFFINE_SINGULAR_RTOL = 1e-12

# Rendering reference pixel size in metres, the common web-mapping
# convention for converting between scale denominators and screen pixels.
REFERENCE_PIXEL_M = 0.00028

# Geometry simplification tolerance per unit of scale denominator (metres).
SIMPLIFY_M_PER_SCALE = 0.0002

# Clamp range for effective scale denominators served by the map API.
SCALE_DENOM_MIN = 1_000
SCALE_DENOM_MAX = 10_000_000

# Pixel dimension limits accepted by the map renderer.
MAP_SIZE_MIN = 16
MAP_SIZE_MAX = 4096
