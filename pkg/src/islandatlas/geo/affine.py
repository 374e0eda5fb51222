"""Planar affine transforms and their least-squares estimation from
ground control points.

Used to pull digitizer or scanned-sheet coordinates into projected
metres before any datum work happens.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..constants import AFFINE_SINGULAR_RTOL
from ..errors import ControlPointError, GeoError
from .points import ProjectedPoint


@dataclass(frozen=True)
class AffineTransform:
    """x' = a*x + b*y + c ; y' = d*x + e*y + f.  Determinant a*e - b*d
    must be nonzero so the transform stays invertible."""

    a: float
    b: float
    c: float
    d: float
    e: float
    f: float

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "d", "e", "f"):
            if not math.isfinite(getattr(self, name)):
                raise GeoError(f"non-finite coefficient {name} in affine transform")
        if self.a * self.e - self.b * self.d == 0.0:
            raise GeoError("degenerate affine transform, zero determinant")

    @property
    def determinant(self) -> float:
        return self.a * self.e - self.b * self.d

    def coefficients(self) -> tuple[float, float, float, float, float, float]:
        return (self.a, self.b, self.c, self.d, self.e, self.f)


IDENTITY_AFFINE = AffineTransform(1.0, 0.0, 0.0, 0.0, 1.0, 0.0)


@dataclass(frozen=True)
class ControlPointPair:
    """A plane coordinate as digitized and where it should land."""

    source: ProjectedPoint
    target: ProjectedPoint


def apply_affine(t: AffineTransform, p: ProjectedPoint) -> ProjectedPoint:
    return ProjectedPoint(
        t.a * p.x + t.b * p.y + t.c,
        t.d * p.x + t.e * p.y + t.f,
    )


def invert_affine(t: AffineTransform) -> AffineTransform:
    det = t.determinant
    ia = t.e / det
    ib = -t.b / det
    id_ = -t.d / det
    ie = t.a / det
    return AffineTransform(
        ia, ib, -(ia * t.c + ib * t.f),
        id_, ie, -(id_ * t.c + ie * t.f),
    )


def compose_affine(outer: AffineTransform, inner: AffineTransform) -> AffineTransform:
    """The transform equivalent to applying inner first, then outer."""
    return AffineTransform(
        outer.a * inner.a + outer.b * inner.d,
        outer.a * inner.b + outer.b * inner.e,
        outer.a * inner.c + outer.b * inner.f + outer.c,
        outer.d * inner.a + outer.e * inner.d,
        outer.d * inner.b + outer.e * inner.e,
        outer.d * inner.c + outer.e * inner.f + outer.f,
    )


def fit_affine(
    pairs: list[ControlPointPair],
) -> tuple[AffineTransform, list[float], float]:
    """Least-squares affine from control point pairs.

    Returns the fitted transform, the per-pair residual distances, and
    the root mean square residual.  Needs at least three pairs whose
    source points are not collinear; otherwise the normal matrix is
    singular and there is no unique answer.
    """
    if len(pairs) < 3:
        raise ControlPointError(
            f"affine fit needs at least 3 control point pairs, got {len(pairs)}"
        )

    src = np.array([(p.source.x, p.source.y) for p in pairs], dtype=np.float64)
    dst = np.array([(p.target.x, p.target.y) for p in pairs], dtype=np.float64)

    # Design matrix for one output axis: rows [x, y, 1].
    m = np.column_stack([src, np.ones(len(pairs))])
    normal = m.T @ m
    eigvals = np.linalg.eigvalsh(normal)
    if eigvals[0] <= AFFINE_SINGULAR_RTOL * eigvals[-1]:
        raise ControlPointError("control points are collinear, affine fit is singular")

    abc = np.linalg.solve(normal, m.T @ dst[:, 0])
    def_ = np.linalg.solve(normal, m.T @ dst[:, 1])

    transform = AffineTransform(
        float(abc[0]), float(abc[1]), float(abc[2]),
        float(def_[0]), float(def_[1]), float(def_[2]),
    )

    fitted = m @ np.column_stack([abc, def_])
    residual_vec = fitted - dst
    residuals = [float(r) for r in np.hypot(residual_vec[:, 0], residual_vec[:, 1])]
    rms = float(math.sqrt(sum(r * r for r in residuals) / len(residuals)))
    return transform, residuals, rms
