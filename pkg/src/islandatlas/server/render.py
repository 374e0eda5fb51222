"""Map rasterization: cache layers to PNG pixels.

One reference pixel of 0.00028 m converts between scale denominators
and screen sizes everywhere in the server.  A request bbox is first
expanded on its short axis to match the pixel aspect, then drawn with
one metres-per-pixel factor for both axes, top row at max y.  Geometry
is simplified before drawing with a tolerance of 0.0002 x the scale
denominator, so coarser maps carry fewer vertices.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

from PIL import Image, ImageDraw

from ..errors import CacheError, GeoError
from ..geo.points import GeoPoint
from ..geo.projection import ProjectionSpec, tm_forward
from ..geo.simplify import simplify_coords
from ..smartcache import SmartCache, query_bbox
from ..warehouse.model import (
    Geometry,
    KIND_MULTIPOLYGON,
    KIND_POINT,
    KIND_POLYGON,
    KIND_POLYLINE,
    LayerStyle,
)

M_PER_PX = 0.00028
SCALE_MIN = 1_000.0
SCALE_MAX = 10_000_000.0
SIMPLIFY_FACTOR = 0.0002
SIZE_MIN = 16
SIZE_MAX = 4096
BACKGROUND = "#ffffff"

Box = tuple[float, float, float, float]


@dataclass(frozen=True)
class MapView:
    """A resolved request: planar window, pixel size, effective scale."""

    bbox: Box
    width: int
    height: int
    scale_denom: float

    @property
    def metres_per_px(self) -> float:
        return (self.bbox[2] - self.bbox[0]) / self.width

    def to_px(self, x: float, y: float) -> tuple[float, float]:
        mpp = self.metres_per_px
        return ((x - self.bbox[0]) / mpp, (self.bbox[3] - y) / mpp)


def clamp_scale(denom: float) -> float:
    return min(max(denom, SCALE_MIN), SCALE_MAX)


def auto_scale(bbox: Box, width_px: int) -> float:
    return clamp_scale((bbox[2] - bbox[0]) / (width_px * M_PER_PX))


def expand_to_aspect(bbox: Box, width: int, height: int) -> Box:
    """Grow the short axis around its centre until bbox aspect matches pixels."""
    minx, miny, maxx, maxy = bbox
    w = maxx - minx
    h = maxy - miny
    if w < 0.0 or h < 0.0 or (w == 0.0 and h == 0.0):
        raise CacheError(f"degenerate bbox {bbox!r}")
    target = width / height
    final_h = max(h, w / target)
    final_w = final_h * target
    if final_w > w:
        cx = (minx + maxx) / 2.0
        minx, maxx = cx - final_w / 2.0, cx + final_w / 2.0
    if final_h > h:
        cy = (miny + maxy) / 2.0
        miny, maxy = cy - final_h / 2.0, cy + final_h / 2.0
    return (minx, miny, maxx, maxy)


def resolve_view(
    bbox: Box, width: int, height: int, scale_denom: float | None
) -> MapView:
    if not (SIZE_MIN <= width <= SIZE_MAX and SIZE_MIN <= height <= SIZE_MAX):
        raise CacheError(
            f"image size {width}x{height} outside [{SIZE_MIN}, {SIZE_MAX}]"
        )
    bbox = expand_to_aspect(bbox, width, height)
    if scale_denom is None:
        scale = auto_scale(bbox, width)
    else:
        scale = clamp_scale(float(scale_denom))
    return MapView(bbox, width, height, scale)


def planar_bbox_from_geographic(projection: ProjectionSpec, bbox: Box) -> Box:
    """Envelope of the four projected corners of a geographic bbox."""
    minlon, minlat, maxlon, maxlat = bbox
    if not (minlon <= maxlon and minlat <= maxlat):
        raise CacheError(f"degenerate bbox {bbox!r}")
    try:
        corners = [
            tm_forward(projection, GeoPoint(lon, lat))
            for lon in (minlon, maxlon)
            for lat in (minlat, maxlat)
        ]
    except GeoError as exc:
        raise CacheError(f"bbox cannot be projected: {exc}") from None
    xs = [p.x for p in corners]
    ys = [p.y for p in corners]
    return (min(xs), min(ys), max(xs), max(ys))


def simplify_geometry(geom: Geometry, tol: float) -> Geometry | None:
    """Thin vertices for one display scale.

    Polylines keep their endpoints.  A ring that falls below four
    vertices is dropped; a polygon that loses its outer ring is dropped
    entirely, as is any multipolygon part.
    """
    if tol <= 0.0 or geom.kind == KIND_POINT:
        return geom
    if geom.kind == KIND_POLYLINE:
        return Geometry(KIND_POLYLINE, simplify_coords(geom.coordinates, tol))

    def thin_part(rings) -> list | None:
        kept = []
        for i, ring in enumerate(rings):
            slim = simplify_coords(ring, tol)
            if len(slim) < 4:
                if i == 0:
                    return None
                continue
            kept.append(slim)
        return kept

    if geom.kind == KIND_POLYGON:
        part = thin_part(geom.coordinates)
        return Geometry(KIND_POLYGON, part) if part else None
    parts = [p for p in (thin_part(part) for part in geom.coordinates) if p]
    return Geometry(KIND_MULTIPOLYGON, parts) if parts else None


def _stroke_width(style: LayerStyle) -> int:
    return max(1, round(style.stroke_width_px))


def _draw_point(draw: ImageDraw.ImageDraw, x: float, y: float, style: LayerStyle) -> None:
    r = 3.0
    fill = style.fill or style.stroke
    if style.point_symbol == "square":
        draw.rectangle((x - r, y - r, x + r, y + r), fill=fill, outline=style.stroke)
    else:
        draw.ellipse((x - r, y - r, x + r, y + r), fill=fill, outline=style.stroke)


def _draw_polygon_part(
    img: Image.Image, draw: ImageDraw.ImageDraw, rings_px, style: LayerStyle
) -> None:
    if style.fill is not None:
        if len(rings_px) == 1:
            draw.polygon(rings_px[0], fill=style.fill)
        else:
            # Holes punch through to whatever is already drawn beneath:
            # fill through a per-part even-odd mask.
            mask = Image.new("1", img.size, 0)
            mdraw = ImageDraw.Draw(mask)
            mdraw.polygon(rings_px[0], fill=1)
            for hole in rings_px[1:]:
                mdraw.polygon(hole, fill=0)
            img.paste(Image.new("RGB", img.size, style.fill), (0, 0), mask)
            draw = ImageDraw.Draw(img)
    width = _stroke_width(style)
    for ring in rings_px:
        draw.line(ring, fill=style.stroke, width=width, joint="curve")


def render_map(
    cache: SmartCache, view: MapView, layer_names: list[str]
) -> tuple[bytes, list[str]]:
    """Rasterize the given layers over the view; returns PNG bytes and
    the names actually drawn after the scale-window filter."""
    img = Image.new("RGB", (view.width, view.height), BACKGROUND)
    draw = ImageDraw.Draw(img)
    tol = SIMPLIFY_FACTOR * view.scale_denom
    drawn: list[str] = []
    for name in layer_names:
        spec = cache.layer_spec(name)
        if not spec.visible_at(view.scale_denom):
            continue
        drawn.append(name)
        style = spec.style
        for _, geom, _ in query_bbox(cache, name, view.bbox):
            slim = simplify_geometry(geom, tol)
            if slim is None:
                continue
            if slim.kind == KIND_POINT:
                _draw_point(draw, *view.to_px(*slim.coordinates), style)
            elif slim.kind == KIND_POLYLINE:
                pts = [view.to_px(x, y) for x, y in slim.coordinates]
                draw.line(pts, fill=style.stroke, width=_stroke_width(style), joint="curve")
            else:
                parts = [slim.coordinates] if slim.kind == KIND_POLYGON else slim.coordinates
                for rings in parts:
                    rings_px = [[view.to_px(x, y) for x, y in ring] for ring in rings]
                    _draw_polygon_part(img, draw, rings_px, style)
                    draw = ImageDraw.Draw(img)
    out = io.BytesIO()
    img.save(out, format="PNG", optimize=False)
    return out.getvalue(), drawn
