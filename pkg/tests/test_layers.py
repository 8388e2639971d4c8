import numpy as np
import pytest

from terramap import geometry
from terramap.colormap import ColorMap
from terramap.datatable import DataTable
from terramap.layers import (ConvexHullLayer, DelaunayLayer, DotLayer,
                             GeoJSONLayer, GraphLayer, HistLayer, KdeLayer,
                             MarkersLayer, ShapefileLayer, TrailLayer,
                             VoronoiLayer)
from terramap.projection import Projection, ViewState, fit_view
from terramap.render import RenderTarget, set_current_target
from terramap.ui import UiManager


def small_table(n=50, seed=3):
    rng = np.random.default_rng(seed)
    return DataTable({
        "lat": rng.uniform(55.5, 55.8, n),
        "lon": rng.uniform(12.4, 12.7, n),
        "name": [f"row{i}" for i in range(n)],
    })


def make_proj(table, w=200, h=150):
    from terramap.projection import bbox_from_points

    bbox = bbox_from_points(table["lon"], table["lat"])
    return Projection(fit_view(bbox, w, h))


def render_layer(layer, proj, w=200, h=150):
    target = RenderTarget(w, h)
    target.clear()
    layer.invalidate(proj)
    set_current_target(target)
    try:
        layer.draw(proj, 0.0, 0.0, UiManager())
    finally:
        set_current_target(None)
    return target.read_pixels()


def assert_paints_something(px):
    assert (px[..., :3] != 255).any(), "layer painted nothing"


def test_table_layers_require_lat_lon():
    bad = DataTable({"x": [1.0], "y": [2.0]})
    for cls in (DotLayer, HistLayer, KdeLayer, VoronoiLayer, DelaunayLayer,
                ConvexHullLayer, TrailLayer):
        with pytest.raises(ValueError):
            cls(bad)


def test_dot_layer_draws_points():
    t = small_table()
    layer = DotLayer(t, color="r", point_size=2)
    px = render_layer(layer, make_proj(t))
    assert_paints_something(px)
    red = (px[..., 0] == 255) & (px[..., 1] == 0)
    assert red.sum() >= len(t)  # at least one 2x2 quad per sample


def test_dot_layer_tooltip_hotspots():
    t = small_table(10)
    layer = DotLayer(t, f_tooltip=lambda row: row["name"])
    proj = make_proj(t)
    layer.invalidate(proj)
    x, y = proj.lonlat_to_screen(t["lon"], t["lat"])
    for i in (0, 5, 9):
        hit = layer.hotspots.query(x[i], y[i])
        assert hit is not None and hit.startswith("row")
    assert layer.hotspots.query(-50.0, -50.0) is None


def test_dot_layer_bbox_fits_points():
    t = small_table()
    b = DotLayer(t).bbox()
    assert b.south <= t["lat"].min() and b.north >= t["lat"].max()


def test_hist_layer_matches_bin2d():
    t = small_table(500)
    proj = make_proj(t)
    layer = HistLayer(t, binsize=10)
    layer.invalidate(proj)
    x, y = proj.lonlat_to_screen(t["lon"], t["lat"])
    oracle = geometry.bin2d(x, y, 10, (proj.screen_w, proj.screen_h))
    np.testing.assert_array_equal(layer.grid.values, oracle.values)


def test_hist_layer_zero_cells_transparent():
    t = small_table(5)
    proj = make_proj(t)
    layer = HistLayer(t, binsize=4)
    layer.invalidate(proj)
    alpha = layer._texture[..., 3]
    zeros = np.repeat(np.repeat(layer.grid.values == 0, 4, axis=0), 4, axis=1)
    assert (alpha[zeros] == 0).all()
    assert (alpha[~zeros] > 0).all()


def test_kde_layer_matches_kde_grid():
    t = small_table(300)
    proj = make_proj(t)
    layer = KdeLayer(t, bw=(6.0, 6.0))
    layer.invalidate(proj)
    x, y = proj.lonlat_to_screen(t["lon"], t["lat"])
    oracle = geometry.kde_grid(x, y, layer.params, (proj.screen_w, proj.screen_h))
    np.testing.assert_array_equal(layer.grid.values, oracle.values)
    px = render_layer(layer, proj)
    assert_paints_something(px)


def test_markers_layer(data_dir):
    t = small_table(8)
    layer = MarkersLayer(t, data_dir / "m.png", f_tooltip=lambda r: r["name"])
    px = render_layer(layer, make_proj(t))
    assert_paints_something(px)
    with pytest.raises(FileNotFoundError):
        MarkersLayer(t, data_dir / "missing.png")


def test_graph_layer_column_validation():
    t = DataTable({"a": [1.0], "b": [2.0], "c": [3.0], "name": ["x"]})
    with pytest.raises(ValueError, match="no column"):
        GraphLayer(t, src_lat="a", src_lon="b", dest_lat="c", dest_lon="d")
    with pytest.raises(ValueError, match="numeric"):
        GraphLayer(t, src_lat="a", src_lon="b", dest_lat="c", dest_lon="name")


def test_graph_layer_draws_edges(rng):
    n = 40
    t = DataTable({
        "src_lat": rng.uniform(55.5, 55.8, n),
        "src_lon": rng.uniform(12.4, 12.7, n),
        "dest_lat": rng.uniform(55.5, 55.8, n),
        "dest_lon": rng.uniform(12.4, 12.7, n),
    })
    layer = GraphLayer(t, alpha=255)
    lats = np.concatenate([t["src_lat"], t["dest_lat"]])
    lons = np.concatenate([t["src_lon"], t["dest_lon"]])
    from terramap.projection import bbox_from_points

    proj = Projection(fit_view(bbox_from_points(lons, lats), 200, 150))
    px = render_layer(layer, proj)
    assert_paints_something(px)


def test_voronoi_layer_lines_and_fill():
    t = small_table(30)
    proj = make_proj(t)
    px_lines = render_layer(VoronoiLayer(t), proj)
    assert_paints_something(px_lines)
    px_fill = render_layer(VoronoiLayer(t, fill=True, line_color=None), proj)
    assert_paints_something(px_fill)


def test_delaunay_layer_modes():
    t = small_table(30)
    proj = make_proj(t)
    assert_paints_something(render_layer(DelaunayLayer(t), proj))
    assert_paints_something(render_layer(DelaunayLayer(t, cmap="hot"), proj))


def test_convexhull_layer_degenerate_warns():
    t = DataTable({"lat": [55.5, 55.6], "lon": [12.5, 12.6]})
    layer = ConvexHullLayer(t)
    with pytest.warns(UserWarning, match="degenerate"):
        layer.invalidate(make_proj(small_table()))
    assert layer.painter.is_empty


def test_convexhull_layer_draws():
    t = small_table(30)
    px = render_layer(ConvexHullLayer(t, color="g"), make_proj(t))
    assert_paints_something(px)


def test_shapefile_layer(fixtures_dir):
    layer = ShapefileLayer(fixtures_dir / "areas",
                           f_tooltip=lambda attrs: attrs["STEDNAVN"])
    b = layer.bbox()
    proj = Projection(fit_view(b, 200, 150))
    px = render_layer(layer, proj)
    assert_paints_something(px)
    assert len(layer.hotspots) == 2


def test_geojson_layer_choropleth_fallback(fixtures_dir):
    unemployment = {("06", "001"): 4.5, ("06", "003"): 9.0}
    cmap = ColorMap("Blues", alpha=255, levels=10)

    def color(properties):
        key = (properties.get("STATE"), properties.get("COUNTY"))
        if key in unemployment:
            return cmap.to_color(unemployment[key], 10.0, "lin")
        return (0, 0, 0, 0)  # unmapped region: fully transparent

    layer = GeoJSONLayer(fixtures_dir / "counties.geojson", color=color)
    proj = Projection(fit_view(layer.bbox(), 300, 260))
    px = render_layer(layer, proj, 300, 260)

    def probe(lon, lat):
        sx, sy = proj.lonlat_to_screen([lon], [lat])
        return px[int(sy[0]), int(sx[0])]

    assert tuple(probe(1.0, 3.0)[:3]) != (255, 255, 255)   # mapped county filled
    assert tuple(probe(3.5, 3.0)[:3]) != (255, 255, 255)
    south = probe(2.0, 0.75)  # unmapped county left transparent
    assert tuple(south[:3]) == (255, 255, 255)


def test_geojson_layer_fixed_color(fixtures_dir):
    layer = GeoJSONLayer(fixtures_dir / "counties.geojson", fill=False, color="r")
    proj = Projection(fit_view(layer.bbox(), 300, 260))
    px = render_layer(layer, proj, 300, 260)
    assert_paints_something(px)


def test_trail_layer_counter_wraps():
    t = small_table(5)
    proj = make_proj(t)
    layer = TrailLayer(t)
    layer.invalidate(proj)
    target = RenderTarget(200, 150)
    target.clear()
    set_current_target(target)
    try:
        seen = []
        for _ in range(12):
            seen.append(layer.frame_counter)
            layer.draw(proj, 0, 0, UiManager())
    finally:
        set_current_target(None)
    assert seen == [0, 1, 2, 3, 4, 0, 1, 2, 3, 4, 0, 1]


def test_layers_skip_nan_rows():
    t = DataTable({"lat": [55.6, np.nan, 55.7], "lon": [12.5, 12.6, np.nan]})
    proj = make_proj(small_table())
    for cls in (DotLayer, HistLayer, KdeLayer):
        layer = cls(t)
        layer.invalidate(proj)  # must not raise
