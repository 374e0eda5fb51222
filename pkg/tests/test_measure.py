from __future__ import annotations

import math

import pytest
from hypothesis import given, settings, strategies as st

from islandatlas.constants import SPHERE_RADIUS_M
from islandatlas.errors import GeoError
from islandatlas.geo import GeoPoint
from islandatlas.geo.measure import (
    geodesic_area,
    great_circle_distance,
    path_length,
)
from oracles import law_of_cosines_distance, quadrature_area

SUVA = GeoPoint(178.442, -18.141)
NUKUALOFA = GeoPoint(184.790, -21.136)

# Law-of-cosines value frozen from tests/oracles.py
DIST_SUVA_NUKUALOFA = 743429.3112012632

# Boundary-quadrature value for a 1 x 1 degree quad on the equator,
# frozen from tests/oracles.py at 2048 samples per edge
AREA_EQUATOR_QUAD = 12364031909.388153

lat_strategy = st.floats(min_value=-89.0, max_value=89.0)
lon_strategy = st.floats(min_value=0.0, max_value=360.0, exclude_max=True)


def ring(*coords: tuple[float, float]) -> list[GeoPoint]:
    return [GeoPoint(lon, lat) for lon, lat in coords]


class TestGreatCircleDistance:
    def test_coincident_points(self) -> None:
        assert great_circle_distance(SUVA, SUVA) == 0.0

    def test_antipodal_on_equator(self) -> None:
        d = great_circle_distance(GeoPoint(0.0, 0.0), GeoPoint(180.0, 0.0))
        assert d == pytest.approx(math.pi * SPHERE_RADIUS_M, rel=1e-12)

    def test_suva_to_nukualofa_frozen(self) -> None:
        assert great_circle_distance(SUVA, NUKUALOFA) == pytest.approx(
            DIST_SUVA_NUKUALOFA, abs=1.0
        )

    def test_against_live_law_of_cosines(self) -> None:
        import random

        rng = random.Random(31)
        for _ in range(500):
            a = GeoPoint(rng.uniform(0, 360), rng.uniform(-80, 80))
            b = GeoPoint(rng.uniform(0, 360), rng.uniform(-80, 80))
            want = law_of_cosines_distance(SPHERE_RADIUS_M, a.lon, a.lat, b.lon, b.lat)
            # law of cosines loses precision for very close points
            tol = max(1e-6, 1e-9 * want) if want > 1000.0 else 0.5
            assert great_circle_distance(a, b) == pytest.approx(want, abs=tol)

    def test_short_hop_across_zero_meridian(self) -> None:
        d = great_circle_distance(GeoPoint(359.9, 0.0), GeoPoint(0.1, 0.0))
        expected = math.radians(0.2) * SPHERE_RADIUS_M
        assert d == pytest.approx(expected, rel=1e-9)

    def test_short_hop_across_antimeridian(self) -> None:
        d = great_circle_distance(GeoPoint(179.95, -18.0), GeoPoint(180.05, -18.0))
        assert d < 12000.0

    @settings(max_examples=200)
    @given(lon1=lon_strategy, lat1=lat_strategy, lon2=lon_strategy, lat2=lat_strategy)
    def test_symmetry(self, lon1, lat1, lon2, lat2) -> None:
        a, b = GeoPoint(lon1, lat1), GeoPoint(lon2, lat2)
        assert great_circle_distance(a, b) == great_circle_distance(b, a)

    @settings(max_examples=200)
    @given(
        lon1=lon_strategy, lat1=lat_strategy,
        lon2=lon_strategy, lat2=lat_strategy,
        lon3=lon_strategy, lat3=lat_strategy,
    )
    def test_triangle_inequality(self, lon1, lat1, lon2, lat2, lon3, lat3) -> None:
        a, b, c = GeoPoint(lon1, lat1), GeoPoint(lon2, lat2), GeoPoint(lon3, lat3)
        ab = great_circle_distance(a, b)
        bc = great_circle_distance(b, c)
        ac = great_circle_distance(a, c)
        assert ab + bc >= ac - 1e-6


class TestPathLength:
    def test_two_points(self) -> None:
        assert path_length([SUVA, NUKUALOFA]) == pytest.approx(DIST_SUVA_NUKUALOFA, abs=1.0)

    def test_sums_segments(self) -> None:
        mid = GeoPoint(181.0, -19.5)
        total = path_length([SUVA, mid, NUKUALOFA])
        expected = great_circle_distance(SUVA, mid) + great_circle_distance(mid, NUKUALOFA)
        assert total == pytest.approx(expected, rel=1e-12)

    def test_single_point_rejected(self) -> None:
        with pytest.raises(GeoError):
            path_length([SUVA])


class TestGeodesicArea:
    def test_degenerate_ring_is_zero(self) -> None:
        r = ring((185.0, -20.0), (185.0, -20.0), (185.0, -20.0), (185.0, -20.0))
        assert geodesic_area(r) == 0.0

    def test_octant_triangle_exact(self) -> None:
        r = ring((0.0, 0.0), (90.0, 0.0), (0.0, 90.0), (0.0, 0.0))
        expected = 4.0 * math.pi * SPHERE_RADIUS_M**2 / 8.0
        assert geodesic_area(r) == pytest.approx(expected, rel=1e-12)

    def test_equator_quad_frozen(self) -> None:
        r = ring((10.0, 0.0), (11.0, 0.0), (11.0, 1.0), (10.0, 1.0), (10.0, 0.0))
        assert geodesic_area(r) == pytest.approx(AREA_EQUATOR_QUAD, rel=1e-9)

    def test_against_live_quadrature(self) -> None:
        quad = [(182.0, -22.0), (185.5, -22.0), (185.5, -17.5), (182.0, -17.5), (182.0, -22.0)]
        want = quadrature_area(quad, SPHERE_RADIUS_M)
        got = geodesic_area(ring(*quad))
        assert got == pytest.approx(want, rel=1e-8)

    def test_concave_ring_against_quadrature(self) -> None:
        concave = [
            (184.0, -20.0), (185.0, -20.0), (185.0, -18.0),
            (184.5, -19.5), (184.0, -18.0), (184.0, -20.0),
        ]
        want = quadrature_area(concave, SPHERE_RADIUS_M)
        got = geodesic_area(ring(*concave))
        assert got == pytest.approx(want, rel=1e-7)

    def test_orientation_independent(self) -> None:
        quad = [(182.0, -22.0), (185.5, -22.0), (185.5, -17.5), (182.0, -17.5), (182.0, -22.0)]
        fwd = geodesic_area(ring(*quad))
        rev = geodesic_area(ring(*reversed(quad)))
        assert rev == pytest.approx(fwd, rel=1e-12)

    def test_ring_spanning_antimeridian(self) -> None:
        quad = [(178.0, -19.0), (183.0, -19.0), (183.0, -17.0), (178.0, -17.0), (178.0, -19.0)]
        want = quadrature_area(quad, SPHERE_RADIUS_M)
        assert geodesic_area(ring(*quad)) == pytest.approx(want, rel=1e-8)

    def test_open_ring_rejected(self) -> None:
        with pytest.raises(GeoError):
            geodesic_area(ring((10.0, 0.0), (11.0, 0.0), (11.0, 1.0), (10.0, 1.0)))

    def test_too_short_ring_rejected(self) -> None:
        with pytest.raises(GeoError):
            geodesic_area(ring((10.0, 0.0), (11.0, 0.0), (10.0, 0.0)))
