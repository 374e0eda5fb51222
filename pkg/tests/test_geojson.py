"""Interchange parsing: per-feature rejection, fatal errors, determinism."""

import json

import pytest

from islandatlas.errors import SourceFormatError
from islandatlas.warehouse import (
    Feature,
    Geometry,
    KIND_MULTIPOLYGON,
    KIND_POINT,
    KIND_POLYGON,
    KIND_POLYLINE,
    format_feature_collection,
    parse_feature_collection,
    read_feature_collection,
    write_feature_collection,
)

from conftest import gj_collection, gj_feature

RING = [[10.0, 0.0], [11.0, 0.0], [11.0, 1.0], [10.0, 1.0], [10.0, 0.0]]


class TestParsing:
    def test_all_geometry_kinds_map(self):
        text = gj_collection(
            gj_feature(1, "Point", [178.5, -18.1]),
            gj_feature(2, "LineString", [[178.0, -18.0], [178.5, -18.1]]),
            gj_feature(3, "Polygon", [RING]),
            gj_feature(4, "MultiPolygon", [[RING]]),
        )
        feats, rejected = parse_feature_collection(text)
        assert rejected == []
        kinds = [g.kind for _, g, _ in feats]
        assert kinds == [KIND_POINT, KIND_POLYLINE, KIND_POLYGON, KIND_MULTIPOLYGON]

    def test_elevation_dropped(self):
        feats, rejected = parse_feature_collection(
            gj_collection(gj_feature(1, "Point", [178.5, -18.1, 220.0]))
        )
        assert rejected == []
        assert feats[0][1].coordinates == (178.5, -18.1)

    def test_both_longitude_conventions_accepted(self):
        feats, rejected = parse_feature_collection(
            gj_collection(
                gj_feature(1, "Point", [-175.2, -21.1]),
                gj_feature(2, "Point", [184.8, -21.1]),
            )
        )
        assert rejected == []
        assert feats[0][1].coordinates == (-175.2, -21.1)

    def test_string_and_int_ids(self):
        feats, rejected = parse_feature_collection(
            gj_collection(
                gj_feature("sheet-a", "Point", [10.0, 0.0]),
                gj_feature(42, "Point", [10.0, 0.0]),
            )
        )
        assert rejected == []
        assert [fid for fid, _, _ in feats] == ["sheet-a", 42]

    def test_missing_properties_becomes_empty(self):
        doc = {
            "type": "FeatureCollection",
            "features": [
                {"type": "Feature", "id": 1, "geometry": {"type": "Point", "coordinates": [1.0, 2.0]}}
            ],
        }
        feats, rejected = parse_feature_collection(json.dumps(doc))
        assert rejected == []
        assert feats[0][2] == {}


class TestPerFeatureRejection:
    def check_single_rejection(self, feature, expect_in_reason):
        feats, rejected = parse_feature_collection(
            gj_collection(gj_feature(1, "Point", [10.0, 0.0]), feature)
        )
        assert len(feats) == 1
        assert len(rejected) == 1
        assert expect_in_reason in rejected[0][1]

    def test_entry_not_a_feature(self):
        self.check_single_rejection({"type": "Banana"}, "not a Feature")

    def test_missing_id(self):
        f = gj_feature(1, "Point", [10.0, 0.0])
        del f["id"]
        self.check_single_rejection(f, "id missing")

    @pytest.mark.parametrize("bad_id", [True, 1.5, "", None, [1]])
    def test_bad_id_values(self, bad_id):
        f = gj_feature(bad_id, "Point", [10.0, 0.0])
        self.check_single_rejection(f, "id missing")

    @pytest.mark.parametrize(
        "gtype", ["MultiPoint", "MultiLineString", "GeometryCollection", "Circle"]
    )
    def test_unsupported_geometry_types(self, gtype):
        self.check_single_rejection(
            gj_feature(2, gtype, [[10.0, 0.0]]), "unsupported geometry"
        )

    def test_bad_positions(self):
        self.check_single_rejection(gj_feature(2, "Point", [10.0]), "bad position")
        self.check_single_rejection(
            gj_feature(2, "LineString", [[10.0, 0.0], [True, 0.0]]), "bad position"
        )

    def test_non_finite_position(self):
        # Python's json module happily parses NaN literals.
        text = '{"type":"FeatureCollection","features":[{"type":"Feature","id":2,"geometry":{"type":"Point","coordinates":[NaN,0.0]},"properties":{}}]}'
        feats, rejected = parse_feature_collection(text)
        assert feats == []
        assert "non-finite" in rejected[0][1]

    def test_properties_must_be_object(self):
        f = gj_feature(2, "Point", [10.0, 0.0])
        f["properties"] = ["not", "a", "dict"]
        self.check_single_rejection(f, "properties")

    def test_multipolygon_part_not_array(self):
        self.check_single_rejection(
            gj_feature(2, "MultiPolygon", ["oops"]), "part must be an array"
        )


class TestFatalErrors:
    def test_invalid_json(self):
        with pytest.raises(SourceFormatError):
            parse_feature_collection("{not json")

    def test_not_a_collection(self):
        with pytest.raises(SourceFormatError):
            parse_feature_collection('{"type": "Feature"}')
        with pytest.raises(SourceFormatError):
            parse_feature_collection("[1, 2, 3]")

    def test_missing_features_array(self):
        with pytest.raises(SourceFormatError):
            parse_feature_collection('{"type": "FeatureCollection"}')

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(SourceFormatError):
            read_feature_collection(tmp_path / "missing.geojson")


class TestFormatting:
    def build_features(self):
        return [
            Feature(2, Geometry(KIND_POLYGON, [[(x, y) for x, y in [
                (10.0, 0.0), (11.0, 0.0), (11.0, 1.0), (10.0, 1.0), (10.0, 0.0)]]]),
                {"name": "isle", "area": 1.0}),
            Feature("pt", Geometry(KIND_POINT, (359.123456789, -8.5)), {}),
        ]

    def test_round_trip_exact(self, tmp_path):
        features = self.build_features()
        path = tmp_path / "out.geojson"
        assert write_feature_collection(features, path) == 2
        feats, rejected = read_feature_collection(path)
        assert rejected == []
        assert [fid for fid, _, _ in feats] == [2, "pt"]
        assert feats[0][1] == features[0].geometry
        assert feats[1][1].coordinates == (359.123456789, -8.5)
        assert feats[0][2] == {"name": "isle", "area": 1.0}

    def test_format_is_deterministic(self):
        a = format_feature_collection(self.build_features())
        b = format_feature_collection(self.build_features())
        assert a == b
        assert a.endswith("\n")

    def test_property_order_does_not_matter(self):
        f1 = Feature(1, Geometry(KIND_POINT, (1.0, 2.0)), {"a": 1, "b": 2})
        f2 = Feature(1, Geometry(KIND_POINT, (1.0, 2.0)), {"b": 2, "a": 1})
        assert format_feature_collection([f1]) == format_feature_collection([f2])
