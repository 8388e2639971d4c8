"""Generate the binary/JSON parser fixtures checked into tests/fixtures/.

The shapefile bytes come from the independent struct-based writer in
tests/util_fixtures.py, not from the package's own parser.

Run from the repo root: python3 scripts/make_parser_fixtures.py
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIX = ROOT / "tests" / "fixtures"
sys.path.insert(0, str(ROOT / "tests"))

from util_fixtures import write_dbf, write_point_shp, write_poly_shp  # noqa: E402

# Exact coordinates mirrored by hand in tests/test_formats.py.
POINTS = [(12.5, 55.75), (10.25, 56.125), (-0.125, 51.5)]
POINT_NAMES = ["Alpha", "Bravo", "Charlie"]
POINT_SIZES = [12.5, 7.0, -3.25]

ROADS = [
    [[(0.0, 0.0), (1.0, 0.5), (2.0, 0.25)]],
    [[(5.0, 5.0), (5.5, 6.0)], [(6.0, 5.0), (6.5, 6.5), (7.0, 5.5)]],
]

# second record: outer square with a square hole, rings left open on
# purpose (the parser must close them)
POLYGONS = [
    [[(0.0, 0.0), (4.0, 0.0), (4.0, 3.0), (0.0, 3.0), (0.0, 0.0)]],
    [[(10.0, 10.0), (18.0, 10.0), (18.0, 18.0), (10.0, 18.0)],
     [(12.0, 12.0), (12.0, 15.0), (15.0, 15.0), (15.0, 12.0)]],
]
POLY_NAMES = ["Kvadrat", "Rammen"]

COUNTIES = {
    "type": "FeatureCollection",
    "features": [
        {"type": "Feature",
         "properties": {"STATE": "06", "COUNTY": "001", "NAME": "North"},
         "geometry": {"type": "Polygon", "coordinates":
                      [[[0.0, 2.0], [2.0, 2.0], [2.0, 4.0], [0.0, 4.0], [0.0, 2.0]]]}},
        {"type": "Feature",
         "properties": {"STATE": "06", "COUNTY": "003", "NAME": "Middle"},
         "geometry": {"type": "Polygon", "coordinates":
                      [[[2.5, 2.0], [4.5, 2.0], [4.5, 4.0], [2.5, 4.0], [2.5, 2.0]]]}},
        {"type": "Feature",
         "properties": {"STATE": "06", "COUNTY": "005", "NAME": "South"},
         "geometry": {"type": "Polygon", "coordinates":
                      [[[0.0, 0.0], [4.5, 0.0], [4.5, 1.5], [0.0, 1.5], [0.0, 0.0]]]}},
        {"type": "Feature",
         "properties": {"NAME": "river"},
         "geometry": {"type": "LineString",
                      "coordinates": [[0.0, 1.75], [4.5, 1.75]]}},
        {"type": "Feature",
         "properties": {"NAME": "city"},
         "geometry": {"type": "Point", "coordinates": [1.0, 3.0]}},
    ],
}


def main():
    FIX.mkdir(parents=True, exist_ok=True)
    write_point_shp(FIX / "points.shp", POINTS)
    write_dbf(FIX / "points.dbf",
              [("STEDNAVN", "C", 16), ("SIZE", "N", 10)],
              [{"STEDNAVN": n, "SIZE": s} for n, s in zip(POINT_NAMES, POINT_SIZES)])
    write_poly_shp(FIX / "roads.shp", ROADS, shape_type=3)
    write_poly_shp(FIX / "areas.shp", POLYGONS, shape_type=5)
    write_dbf(FIX / "areas.dbf", [("STEDNAVN", "C", 16)],
              [{"STEDNAVN": n} for n in POLY_NAMES])
    (FIX / "counties.geojson").write_text(json.dumps(COUNTIES, indent=1))
    for p in sorted(FIX.iterdir()):
        print(f"wrote {p}")


if __name__ == "__main__":
    main()
