"""Parsers for ESRI shapefiles (.shp + .dbf) and GeoJSON.

Shapefiles are parsed natively: the 100-byte main header, sequential
record headers (the .shx index is redundant for full scans) and shape
types 1/3/5.  Attributes come from the dBase III .dbf, joined by record
index.  Coordinates are assumed WGS84 lon/lat; .prj is not interpreted.
"""

from __future__ import annotations

import json
import struct
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = ["VectorFeature", "read_shapefile", "read_geojson", "to_geojson"]

SHAPE_NULL = 0
SHAPE_POINT = 1
SHAPE_POLYLINE = 3
SHAPE_POLYGON = 5


@dataclass
class VectorFeature:
    """A geometry plus its attribute map.

    ``parts`` is a list of (k, 2) lon/lat arrays: a single 1-point part
    for Point, open paths for PolyLine, closed rings for Polygon (outer
    rings and holes alike; rendering uses the even-odd rule so no
    classification is needed).
    """

    geometry: str  # "Point" | "PolyLine" | "Polygon"
    parts: list = field(default_factory=list)
    attributes: dict = field(default_factory=dict)

    def lonlat(self) -> np.ndarray:
        """All vertices stacked, for extent computation."""
        return np.concatenate(self.parts) if self.parts else np.empty((0, 2))


def _close_ring(ring: np.ndarray) -> np.ndarray:
    if len(ring) >= 2 and not np.array_equal(ring[0], ring[-1]):
        ring = np.concatenate([ring, ring[:1]])
    return ring


# ---------------------------------------------------------------------------
# shapefile (.shp)

def _parse_shp(data: bytes) -> list[tuple[str, list]]:
    if len(data) < 100:
        raise ValueError("shapefile truncated: missing 100-byte header")
    (file_code,) = struct.unpack(">i", data[:4])
    if file_code != 9994:
        raise ValueError(f"bad shapefile magic {file_code}, expected 9994")
    (file_len_words,) = struct.unpack(">i", data[24:28])
    (version,) = struct.unpack("<i", data[28:32])
    if version != 1000:
        raise ValueError(f"unsupported shapefile version {version}")
    end = min(file_len_words * 2, len(data))

    geoms: list = []
    skipped = 0
    pos = 100
    while pos + 8 <= end:
        _recno, content_words = struct.unpack(">ii", data[pos:pos + 8])
        pos += 8
        rec_end = pos + content_words * 2
        if rec_end > len(data):
            raise ValueError(f"shapefile truncated inside record at byte {pos}")
        (shape_type,) = struct.unpack("<i", data[pos:pos + 4])
        if shape_type == SHAPE_NULL:
            pass
        elif shape_type == SHAPE_POINT:
            x, y = struct.unpack("<dd", data[pos + 4:pos + 20])
            geoms.append(("Point", [np.array([[x, y]], dtype=np.float64)]))
        elif shape_type in (SHAPE_POLYLINE, SHAPE_POLYGON):
            nparts, npoints = struct.unpack("<ii", data[pos + 36:pos + 44])
            off = pos + 44
            parts_idx = np.frombuffer(data, "<i4", nparts, off)
            off += 4 * nparts
            pts = np.frombuffer(data, "<f8", npoints * 2, off).reshape(-1, 2)
            bounds = np.append(parts_idx, npoints)
            parts = [np.array(pts[bounds[i]:bounds[i + 1]]) for i in range(nparts)]
            if shape_type == SHAPE_POLYGON:
                parts = [_close_ring(p) for p in parts]
                geoms.append(("Polygon", parts))
            else:
                geoms.append(("PolyLine", parts))
        else:
            skipped += 1
        pos = rec_end
    if skipped:
        warnings.warn(f"skipped {skipped} record(s) with unsupported shape type")
    return geoms


# ---------------------------------------------------------------------------
# dBase III (.dbf)

def _parse_dbf(data: bytes) -> list[dict]:
    if len(data) < 32:
        raise ValueError("dbf truncated: missing header")
    n_records, header_size, record_size = struct.unpack("<ihh", data[4:12])
    fields = []
    pos = 32
    while pos + 32 <= header_size and data[pos] != 0x0D:
        desc = data[pos:pos + 32]
        name = desc[:11].split(b"\x00")[0].decode("ascii", "replace")
        ftype = chr(desc[11])
        length = desc[16]
        fields.append((name, ftype, length))
        pos += 32

    records = []
    pos = header_size
    for _ in range(n_records):
        if pos + record_size > len(data):
            break
        rec = data[pos:pos + record_size]
        pos += record_size
        if rec[:1] == b"*":  # deleted
            continue
        attrs = {}
        off = 1
        for name, ftype, length in fields:
            raw = rec[off:off + length].decode("latin-1").strip()
            off += length
            if ftype == "N" or ftype == "F":
                try:
                    attrs[name] = float(raw) if raw else float("nan")
                except ValueError:
                    attrs[name] = raw
            else:
                # Character and everything else surfaced as strings
                attrs[name] = raw
        records.append(attrs)
    return records


def read_shapefile(basepath) -> list[VectorFeature]:
    """Read ``basepath.shp`` (+ ``basepath.dbf`` attributes) into features."""
    base = Path(basepath)
    shp = base.with_suffix(".shp")
    dbf = base.with_suffix(".dbf")
    if not shp.exists():
        raise FileNotFoundError(str(shp))
    geoms = _parse_shp(shp.read_bytes())
    attrs: list[dict] = []
    if dbf.exists():
        attrs = _parse_dbf(dbf.read_bytes())
    features = []
    for i, (gtype, parts) in enumerate(geoms):
        features.append(VectorFeature(gtype, parts, attrs[i] if i < len(attrs) else {}))
    return features


# ---------------------------------------------------------------------------
# GeoJSON (RFC 7946 subset)

def _geom_to_parts(geom: dict) -> tuple[str, list] | None:
    gtype = geom.get("type")
    coords = geom.get("coordinates")
    if gtype == "Point":
        return "Point", [np.array([coords], dtype=np.float64)]
    if gtype == "LineString":
        return "PolyLine", [np.array(coords, dtype=np.float64)]
    if gtype == "MultiLineString":
        return "PolyLine", [np.array(c, dtype=np.float64) for c in coords]
    if gtype == "Polygon":
        return "Polygon", [_close_ring(np.array(r, dtype=np.float64)) for r in coords]
    if gtype == "MultiPolygon":
        parts = []
        for poly in coords:
            parts.extend(_close_ring(np.array(r, dtype=np.float64)) for r in poly)
        return "Polygon", parts
    return None


def read_geojson(path) -> list[VectorFeature]:
    """Read a GeoJSON file; unknown geometry types are skipped with a warning."""
    with open(path, "r", encoding="utf-8") as fin:
        doc = json.load(fin)

    if doc.get("type") == "FeatureCollection":
        raw_features = doc.get("features", [])
    elif doc.get("type") == "Feature":
        raw_features = [doc]
    else:
        raw_features = [{"type": "Feature", "geometry": doc, "properties": {}}]

    features = []
    skipped = 0
    for feat in raw_features:
        geom = feat.get("geometry") or {}
        parsed = _geom_to_parts(geom)
        if parsed is None:
            skipped += 1
            continue
        gtype, parts = parsed
        features.append(VectorFeature(gtype, parts, dict(feat.get("properties") or {})))
    if skipped:
        warnings.warn(f"skipped {skipped} feature(s) with unsupported geometry")
    return features


def to_geojson(features: list[VectorFeature]) -> dict:
    """Serialize features back to a GeoJSON FeatureCollection."""
    out = []
    for f in features:
        if f.geometry == "Point":
            geom = {"type": "Point", "coordinates": f.parts[0][0].tolist()}
        elif f.geometry == "PolyLine":
            if len(f.parts) == 1:
                geom = {"type": "LineString", "coordinates": f.parts[0].tolist()}
            else:
                geom = {"type": "MultiLineString",
                        "coordinates": [p.tolist() for p in f.parts]}
        else:
            geom = {"type": "Polygon", "coordinates": [p.tolist() for p in f.parts]}
        out.append({"type": "Feature", "geometry": geom,
                    "properties": dict(f.attributes)})
    return {"type": "FeatureCollection", "features": out}
