"""Fixed multi-layer reference scene shared by the golden-image test
and scripts/make_golden.py."""

import numpy as np

from terramap.datatable import DataTable
from terramap.layers import (ConvexHullLayer, DotLayer, GraphLayer, HistLayer,
                             KdeLayer)
from terramap.render import RenderTarget
from terramap.viewer import Engine

W, H = 320, 240


def scene_table(n: int = 600) -> DataTable:
    rng = np.random.default_rng(99)
    lon = np.concatenate([rng.normal(12.55, 0.10, n // 2),
                          rng.normal(12.72, 0.05, n // 2)])
    lat = np.concatenate([rng.normal(55.68, 0.06, n // 2),
                          rng.normal(55.62, 0.03, n // 2)])
    perm = rng.permutation(len(lon))
    return DataTable({"lat": lat, "lon": lon,
                      "dest_lat": lat[perm], "dest_lon": lon[perm]})


def build_reference_engine() -> Engine:
    table = scene_table()
    engine = Engine(target=RenderTarget(W, H), show_tiles=False)
    engine.add_layer(KdeLayer(table, bw=(8.0, 8.0), alpha=180))
    engine.add_layer(HistLayer(table, binsize=16, cmap="Blues", alpha=140))
    engine.add_layer(GraphLayer(table, src_lat="lat", src_lon="lon",
                                dest_lat="dest_lat", dest_lon="dest_lon",
                                alpha=24))
    engine.add_layer(ConvexHullLayer(table, color="g", alpha=40))
    engine.add_layer(DotLayer(table, color="k", point_size=1))
    return engine


def render_reference_scene() -> np.ndarray:
    engine = build_reference_engine()
    engine.render_frame()
    return engine.target.read_pixels()
