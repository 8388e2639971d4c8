import json

import numpy as np
import pytest

from terramap.formats import (VectorFeature, read_geojson, read_shapefile,
                              to_geojson)

# mirrors scripts/make_parser_fixtures.py by hand
EXPECTED_POINTS = [(12.5, 55.75), (10.25, 56.125), (-0.125, 51.5)]
EXPECTED_NAMES = ["Alpha", "Bravo", "Charlie"]
EXPECTED_SIZES = [12.5, 7.0, -3.25]


def test_point_shapefile_exact(fixtures_dir):
    feats = read_shapefile(fixtures_dir / "points")
    assert len(feats) == 3
    for feat, (x, y), name, size in zip(feats, EXPECTED_POINTS,
                                        EXPECTED_NAMES, EXPECTED_SIZES):
        assert feat.geometry == "Point"
        assert len(feat.parts) == 1
        np.testing.assert_array_equal(feat.parts[0], [[x, y]])
        assert feat.attributes["STEDNAVN"] == name
        assert feat.attributes["SIZE"] == size


def test_polyline_shapefile_exact(fixtures_dir):
    feats = read_shapefile(fixtures_dir / "roads")
    assert len(feats) == 2
    assert feats[0].geometry == "PolyLine"
    np.testing.assert_array_equal(
        feats[0].parts[0], [[0.0, 0.0], [1.0, 0.5], [2.0, 0.25]]
    )
    assert len(feats[1].parts) == 2
    np.testing.assert_array_equal(feats[1].parts[0], [[5.0, 5.0], [5.5, 6.0]])
    np.testing.assert_array_equal(
        feats[1].parts[1], [[6.0, 5.0], [6.5, 6.5], [7.0, 5.5]]
    )


def test_polygon_shapefile_rings_closed(fixtures_dir):
    feats = read_shapefile(fixtures_dir / "areas")
    assert len(feats) == 2
    assert feats[0].geometry == "Polygon"
    np.testing.assert_array_equal(
        feats[0].parts[0],
        [[0.0, 0.0], [4.0, 0.0], [4.0, 3.0], [0.0, 3.0], [0.0, 0.0]],
    )
    # the fixture leaves the second record's rings open; the parser closes them
    outer, hole = feats[1].parts
    np.testing.assert_array_equal(outer[0], outer[-1])
    np.testing.assert_array_equal(hole[0], hole[-1])
    assert len(outer) == 5 and len(hole) == 5
    assert feats[1].attributes["STEDNAVN"] == "Rammen"


def test_shapefile_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        read_shapefile(tmp_path / "nothing")


def test_shapefile_bad_magic(tmp_path):
    bad = tmp_path / "bad.shp"
    bad.write_bytes(b"\x00" * 100)
    with pytest.raises(ValueError, match="magic"):
        read_shapefile(tmp_path / "bad")


def test_shapefile_truncated(tmp_path):
    bad = tmp_path / "t.shp"
    bad.write_bytes(b"\x00" * 40)
    with pytest.raises(ValueError, match="truncated"):
        read_shapefile(tmp_path / "t")


def test_shapefile_unknown_shape_type_warns(tmp_path, fixtures_dir):
    import struct

    data = bytearray((fixtures_dir / "points.shp").read_bytes())
    # flip the first record's shape type to MultiPointZ (18, unsupported)
    struct.pack_into("<i", data, 108, 18)
    p = tmp_path / "odd.shp"
    p.write_bytes(bytes(data))
    with pytest.warns(UserWarning, match="unsupported shape type"):
        feats = read_shapefile(tmp_path / "odd")
    assert len(feats) == 2  # remaining records parsed, order preserved


def test_dbf_without_shp_attributes_empty(tmp_path, fixtures_dir):
    shp = (fixtures_dir / "points.shp").read_bytes()
    (tmp_path / "solo.shp").write_bytes(shp)
    feats = read_shapefile(tmp_path / "solo")
    assert all(f.attributes == {} for f in feats)


# -- GeoJSON ----------------------------------------------------------------

def test_counties_geojson(fixtures_dir):
    feats = read_geojson(fixtures_dir / "counties.geojson")
    assert len(feats) == 5
    polys = [f for f in feats if f.geometry == "Polygon"]
    assert len(polys) == 3
    assert polys[0].attributes == {"STATE": "06", "COUNTY": "001", "NAME": "North"}
    np.testing.assert_array_equal(
        polys[0].parts[0],
        [[0.0, 2.0], [2.0, 2.0], [2.0, 4.0], [0.0, 4.0], [0.0, 2.0]],
    )
    line = [f for f in feats if f.geometry == "PolyLine"][0]
    np.testing.assert_array_equal(line.parts[0], [[0.0, 1.75], [4.5, 1.75]])
    pt = [f for f in feats if f.geometry == "Point"][0]
    np.testing.assert_array_equal(pt.parts[0], [[1.0, 3.0]])


def test_geojson_bare_geometry(tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"type": "Point", "coordinates": [1.5, 2.5]}))
    feats = read_geojson(p)
    assert len(feats) == 1 and feats[0].geometry == "Point"


def test_geojson_multipolygon_flattened(tmp_path):
    p = tmp_path / "mp.json"
    p.write_text(json.dumps({
        "type": "Feature", "properties": {"id": 7},
        "geometry": {"type": "MultiPolygon", "coordinates": [
            [[[0, 0], [1, 0], [1, 1], [0, 0]]],
            [[[5, 5], [6, 5], [6, 6], [5, 5]]],
        ]},
    }))
    feats = read_geojson(p)
    assert len(feats) == 1
    assert feats[0].geometry == "Polygon"
    assert len(feats[0].parts) == 2


def test_geojson_open_ring_closed(tmp_path):
    p = tmp_path / "open.json"
    p.write_text(json.dumps({
        "type": "Polygon", "coordinates": [[[0, 0], [2, 0], [1, 2]]]
    }))
    feats = read_geojson(p)
    ring = feats[0].parts[0]
    np.testing.assert_array_equal(ring[0], ring[-1])


def test_geojson_unknown_geometry_skipped(tmp_path):
    p = tmp_path / "u.json"
    p.write_text(json.dumps({"type": "FeatureCollection", "features": [
        {"type": "Feature", "properties": {},
         "geometry": {"type": "GeometryCollection", "geometries": []}},
        {"type": "Feature", "properties": {},
         "geometry": {"type": "Point", "coordinates": [0, 0]}},
    ]}))
    with pytest.warns(UserWarning, match="unsupported geometry"):
        feats = read_geojson(p)
    assert len(feats) == 1


def test_geojson_round_trip_fixed_point(fixtures_dir, tmp_path):
    feats1 = read_geojson(fixtures_dir / "counties.geojson")
    doc = to_geojson(feats1)
    p = tmp_path / "rt.json"
    p.write_text(json.dumps(doc))
    feats2 = read_geojson(p)
    assert len(feats1) == len(feats2)
    for f1, f2 in zip(feats1, feats2):
        assert f1.geometry == f2.geometry
        assert f1.attributes == f2.attributes
        assert len(f1.parts) == len(f2.parts)
        for a, b in zip(f1.parts, f2.parts):
            np.testing.assert_array_equal(a, b)
    # serialize -> parse -> serialize reaches a fixed point
    assert to_geojson(feats2) == doc


def test_lonlat_concatenates_parts():
    f = VectorFeature("PolyLine", [np.zeros((3, 2)), np.ones((2, 2))])
    assert f.lonlat().shape == (5, 2)
    assert VectorFeature("Point", []).lonlat().shape == (0, 2)
