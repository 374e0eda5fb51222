"""Textual encodings for projections, datum shifts and affines.

These strings travel through CLI flags, catalog files and warehouse
metadata, so parse and format must round-trip exactly.

    geographic
    tm:cm=183.0,lat0=0.0,k=0.9996,fe=500000.0,fn=10000000.0,ell=wgs84
    eqc:cm=180.0,lat0=-15.0,fe=0.0,fn=0.0,ell=wgs84
    shift:120.0,-48.0,155.0
    shift:120.0,-48.0,155.0,0.0,0.0,0.6,1.2
    affine:1.0,0.0,10.0,0.0,1.0,-5.0
"""

from __future__ import annotations

from ..errors import SpecStringError
from .affine import AffineTransform
from .datum import DatumShift
from .ellipsoid import ELLIPSOIDS, Ellipsoid
from .projection import KIND_EQUIRECTANGULAR, KIND_TM, ProjectionSpec

GEOGRAPHIC = "geographic"

_TM_KEYS = ("cm", "lat0", "k", "fe", "fn", "ell")
_EQC_KEYS = ("cm", "lat0", "fe", "fn", "ell")


def _float_token(text: str, context: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise SpecStringError(f"bad number {text!r} in {context}") from None


def _split_body(s: str, prefix: str) -> list[str]:
    body = s[len(prefix):]
    if not body:
        raise SpecStringError(f"empty {prefix.rstrip(':')} spec")
    return [t.strip() for t in body.split(",")]


def _parse_kv(tokens: list[str], required: tuple[str, ...], context: str) -> dict[str, str]:
    seen: dict[str, str] = {}
    for token in tokens:
        key, sep, value = token.partition("=")
        if not sep or not value:
            raise SpecStringError(f"expected key=value, got {token!r} in {context}")
        key = key.strip()
        if key not in required:
            raise SpecStringError(f"unknown key {key!r} in {context}")
        if key in seen:
            raise SpecStringError(f"duplicate key {key!r} in {context}")
        seen[key] = value.strip()
    missing = [k for k in required if k not in seen]
    if missing:
        raise SpecStringError(f"missing {', '.join(missing)} in {context}")
    return seen


def _ellipsoid_by_name(name: str) -> Ellipsoid:
    try:
        return ELLIPSOIDS[name]
    except KeyError:
        known = ", ".join(sorted(ELLIPSOIDS))
        raise SpecStringError(f"unknown ellipsoid {name!r} (known: {known})") from None


def _ellipsoid_name(ell: Ellipsoid) -> str:
    for name, candidate in ELLIPSOIDS.items():
        if candidate == ell:
            return name
    raise SpecStringError("ellipsoid has no registered name")


def parse_projection(s: str) -> ProjectionSpec:
    """Parse a planar projection spec; rejects plain `geographic`."""
    s = s.strip()
    if s.startswith("tm:"):
        kv = _parse_kv(_split_body(s, "tm:"), _TM_KEYS, s)
        return ProjectionSpec(
            kind=KIND_TM,
            central_meridian=_float_token(kv["cm"], s),
            lat_origin=_float_token(kv["lat0"], s),
            scale_factor=_float_token(kv["k"], s),
            false_easting=_float_token(kv["fe"], s),
            false_northing=_float_token(kv["fn"], s),
            ellipsoid=_ellipsoid_by_name(kv["ell"]),
        )
    if s.startswith("eqc:"):
        kv = _parse_kv(_split_body(s, "eqc:"), _EQC_KEYS, s)
        return ProjectionSpec(
            kind=KIND_EQUIRECTANGULAR,
            central_meridian=_float_token(kv["cm"], s),
            lat_origin=_float_token(kv["lat0"], s),
            scale_factor=1.0,
            false_easting=_float_token(kv["fe"], s),
            false_northing=_float_token(kv["fn"], s),
            ellipsoid=_ellipsoid_by_name(kv["ell"]),
        )
    raise SpecStringError(f"unknown projection spec {s!r}")


def parse_crs(s: str) -> ProjectionSpec | None:
    """Parse a CRS spec; None means geographic coordinates."""
    if s.strip() == GEOGRAPHIC:
        return None
    return parse_projection(s)


def format_projection(spec: ProjectionSpec | None) -> str:
    if spec is None:
        return GEOGRAPHIC
    ell = _ellipsoid_name(spec.ellipsoid)
    if spec.kind == KIND_TM:
        return (
            f"tm:cm={spec.central_meridian!r},lat0={spec.lat_origin!r},"
            f"k={spec.scale_factor!r},fe={spec.false_easting!r},"
            f"fn={spec.false_northing!r},ell={ell}"
        )
    return (
        f"eqc:cm={spec.central_meridian!r},lat0={spec.lat_origin!r},"
        f"fe={spec.false_easting!r},fn={spec.false_northing!r},ell={ell}"
    )


def parse_shift(s: str) -> DatumShift:
    s = s.strip()
    if not s.startswith("shift:"):
        raise SpecStringError(f"unknown shift spec {s!r}")
    values = [_float_token(t, s) for t in _split_body(s, "shift:")]
    if len(values) == 3:
        return DatumShift(*values)
    if len(values) == 7:
        return DatumShift(*values)
    raise SpecStringError(f"shift takes 3 or 7 numbers, got {len(values)} in {s!r}")


def format_shift(shift: DatumShift) -> str:
    head = f"shift:{shift.dx!r},{shift.dy!r},{shift.dz!r}"
    if shift.rx == 0.0 and shift.ry == 0.0 and shift.rz == 0.0 and shift.ds == 0.0:
        return head
    return f"{head},{shift.rx!r},{shift.ry!r},{shift.rz!r},{shift.ds!r}"


def parse_affine(s: str) -> AffineTransform:
    s = s.strip()
    if not s.startswith("affine:"):
        raise SpecStringError(f"unknown affine spec {s!r}")
    values = [_float_token(t, s) for t in _split_body(s, "affine:")]
    if len(values) != 6:
        raise SpecStringError(f"affine takes 6 numbers, got {len(values)} in {s!r}")
    return AffineTransform(*values)


def format_affine(t: AffineTransform) -> str:
    return f"affine:{t.a!r},{t.b!r},{t.c!r},{t.d!r},{t.e!r},{t.f!r}"
