"""Built-in visualization layers.

A layer's ``invalidate(proj)`` is called before its first draw and
whenever the map projection changes (zoom/view); ``draw(proj, mouse_x,
mouse_y, ui_manager)`` runs every frame.  Layers are thin adapters: all
grid/geometry content comes verbatim from :mod:`terramap.geometry`.
"""

from __future__ import annotations

import warnings

import numpy as np

from . import geometry, render
from .colormap import ColorMap, CategoricalColorMap, named_color
from .datatable import DataTable
from .formats import read_geojson, read_shapefile
from .geometry.delaunay import unique_edges
from .projection import BoundingBox, bbox_from_points
from .render import BatchPainter, draw_texture, read_image
from .ui import HotspotIndex

__all__ = [
    "BaseLayer", "DotLayer", "HistLayer", "KdeLayer", "MarkersLayer",
    "GraphLayer", "VoronoiLayer", "DelaunayLayer", "ConvexHullLayer",
    "ShapefileLayer", "GeoJSONLayer", "TrailLayer",
]


class BaseLayer:
    """Interface for all layers; subclasses must define invalidate and draw."""

    def invalidate(self, proj):
        raise NotImplementedError

    def draw(self, proj, mouse_x, mouse_y, ui_manager):
        raise NotImplementedError

    def bbox(self) -> BoundingBox | None:
        """Extent used for the automatic view fit, if any."""
        return None


class _TableLayer(BaseLayer):
    """Common base for layers bound to a lat/lon DataTable."""

    def __init__(self, table: DataTable):
        if "lat" not in table or "lon" not in table:
            raise ValueError("table must have 'lat' and 'lon' columns")
        self.table = table
        self.hotspots = HotspotIndex()

    def bbox(self):
        if self.table.nrows == 0:
            return None
        return bbox_from_points(self.table["lon"], self.table["lat"])

    def _screen_xy(self, proj):
        return proj.lonlat_to_screen(self.table["lon"], self.table["lat"])


class DotLayer(_TableLayer):
    """One square mark per sample."""

    def __init__(self, table, color="b", point_size: int = 2, alpha: int = 255,
                 f_tooltip=None):
        super().__init__(table)
        self.color = named_color(color, alpha)
        self.point_size = point_size
        self.f_tooltip = f_tooltip
        self.painter = BatchPainter()

    def invalidate(self, proj):
        x, y = self._screen_xy(proj)
        self.painter = BatchPainter()
        self.painter.set_color(self.color)
        self.painter.points(x, y, point_size=self.point_size)
        self.hotspots.clear()
        if self.f_tooltip is not None:
            size = max(self.point_size, 8)
            for i in range(self.table.nrows):
                if np.isfinite(x[i]) and np.isfinite(y[i]):
                    self.hotspots.add_rect_centered(x[i], y[i], size,
                                                    self.f_tooltip(self.table.row(i)))

    def draw(self, proj, mouse_x, mouse_y, ui_manager):
        self.painter.batch_draw()


def _grid_texture(grid: geometry.Grid2D, rgba_cells: np.ndarray) -> np.ndarray:
    """Upscale per-cell RGBA to pixels (one textured quad per grid)."""
    k = max(int(round(grid.cell_px)), 1)
    return np.repeat(np.repeat(rgba_cells, k, axis=0), k, axis=1)


class HistLayer(_TableLayer):
    """2D histogram of point counts on a uniform screen-space grid."""

    def __init__(self, table, binsize: int = 8, colorscale: str = "sqrt",
                 cmap: str = "hot", alpha: int = 220, show_zero: bool = False):
        super().__init__(table)
        self.binsize = int(binsize)
        self.colorscale = colorscale
        self.cmap = ColorMap(cmap, alpha=alpha)
        self.show_zero = show_zero
        self.grid = None
        self._texture = None

    def invalidate(self, proj):
        x, y = self._screen_xy(proj)
        self.grid = geometry.bin2d(x, y, self.binsize, (proj.screen_w, proj.screen_h))
        values = self.grid.values
        vmax = float(values.max())
        if vmax <= 0:
            self._texture = None
            return
        rgba = self.cmap.to_colors(values, vmax, self.colorscale)
        if not self.show_zero:
            rgba[values == 0, 3] = 0
        self._texture = _grid_texture(self.grid, rgba)

    def draw(self, proj, mouse_x, mouse_y, ui_manager):
        if self._texture is not None:
            draw_texture(render.current_target(), self._texture,
                         self.grid.origin_sx, self.grid.origin_sy)


class KdeLayer(_TableLayer):
    """Smooth density estimate (heatmap) rendered as a colormapped texture."""

    def __init__(self, table, bw=(5.0, 5.0), cmap: str = "hot", alpha: int = 220,
                 cut_below: float = 0.0, clip_above: float | None = None,
                 scaling: str = "sqrt", cells: float = 2.0):
        super().__init__(table)
        self.params = geometry.KdeParams(
            bw=tuple(bw), cut_below=cut_below, clip_above=clip_above,
            cells=cells, scaling=scaling,
        )
        self.cmap = ColorMap(cmap, alpha=alpha)
        self.grid = None
        self._texture = None

    def invalidate(self, proj):
        x, y = self._screen_xy(proj)
        self.grid = geometry.kde_grid(x, y, self.params, (proj.screen_w, proj.screen_h))
        values = self.grid.values
        vmax = self.params.clip_above
        if vmax is None:
            vmax = float(values.max())
        if vmax <= 0:
            self._texture = None
            return
        rgba = self.cmap.to_colors(values, vmax, self.params.scaling)
        rgba[values <= 0, 3] = 0
        self._texture = _grid_texture(self.grid, rgba)

    def draw(self, proj, mouse_x, mouse_y, ui_manager):
        if self._texture is not None:
            draw_texture(render.current_target(), self._texture,
                         self.grid.origin_sx, self.grid.origin_sy)


class MarkersLayer(_TableLayer):
    """Custom raster symbol per sample."""

    def __init__(self, table, image_path, scale: float = 1.0, f_tooltip=None):
        super().__init__(table)
        self.image = read_image(image_path)  # raises if missing
        self.scale = scale
        self.f_tooltip = f_tooltip
        self.painter = BatchPainter()

    def invalidate(self, proj):
        x, y = self._screen_xy(proj)
        self.painter = BatchPainter()
        self.painter.sprites(self.image, x, y, scale=self.scale)
        self.hotspots.clear()
        if self.f_tooltip is not None:
            w = self.image.shape[1] * self.scale
            for i in range(self.table.nrows):
                if np.isfinite(x[i]) and np.isfinite(y[i]):
                    self.hotspots.add_rect_centered(x[i], y[i], max(w, 8),
                                                    self.f_tooltip(self.table.row(i)))

    def draw(self, proj, mouse_x, mouse_y, ui_manager):
        self.painter.batch_draw()


class GraphLayer(BaseLayer):
    """Spatial graph; edges colored by their screen-space length."""

    def __init__(self, table: DataTable, src_lat="src_lat", src_lon="src_lon",
                 dest_lat="dest_lat", dest_lon="dest_lon", cmap: str = "hot",
                 alpha: int = 32, linewidth: int = 1):
        for col in (src_lat, src_lon, dest_lat, dest_lon):
            if col not in table:
                raise ValueError(f"table has no column {col!r}")
            if table[col].dtype.kind != "f":
                raise ValueError(f"column {col!r} must be numeric")
        self.table = table
        self.cols = (src_lat, src_lon, dest_lat, dest_lon)
        self.cmap = ColorMap(cmap, alpha=alpha)
        self.linewidth = linewidth
        self.painter = BatchPainter()

    def bbox(self):
        slat, slon, dlat, dlon = self.cols
        lats = np.concatenate([self.table[slat], self.table[dlat]])
        lons = np.concatenate([self.table[slon], self.table[dlon]])
        return bbox_from_points(lons, lats)

    def invalidate(self, proj):
        slat, slon, dlat, dlon = self.cols
        x0, y0 = proj.lonlat_to_screen(self.table[slon], self.table[slat])
        x1, y1 = proj.lonlat_to_screen(self.table[dlon], self.table[dlat])
        lengths = np.hypot(x1 - x0, y1 - y0)
        ok = np.isfinite(lengths)
        max_len = float(lengths[ok].max()) if ok.any() else 0.0
        self.painter = BatchPainter()
        if max_len > 0:
            colors = np.zeros((len(lengths), 4), dtype=np.float64)
            colors[ok] = self.cmap.to_colors(lengths[ok], max_len, "lin")
            self.painter.lines(x0, y0, x1, y1, width=self.linewidth, colors=colors)
        elif ok.any():
            self.painter.set_color(self.cmap.to_color(0.0, 1.0, "lin"))
            self.painter.lines(x0, y0, x1, y1, width=self.linewidth)

    def draw(self, proj, mouse_x, mouse_y, ui_manager):
        self.painter.batch_draw()


class VoronoiLayer(_TableLayer):
    """Voronoi tessellation of the samples, clipped to the viewport."""

    def __init__(self, table, line_color="b", fill: bool = False,
                 cmap: str = "hot", alpha: int = 160, line_width: int = 1):
        super().__init__(table)
        self.line_color = None if line_color is None else named_color(line_color)
        self.fill = fill
        self.cmap = ColorMap(cmap, alpha=alpha)
        self.line_width = line_width
        self.painter = BatchPainter()

    def invalidate(self, proj):
        x, y = self._screen_xy(proj)
        pts = np.stack([x, y], axis=1)
        pts = pts[np.isfinite(pts).all(axis=1)]
        self.painter = BatchPainter()
        clip = (0.0, 0.0, float(proj.screen_w), float(proj.screen_h))
        if len(pts) < 2:
            return
        if self.fill:
            diagram = geometry.voronoi(pts, clip)
            areas = np.array([
                0.5 * abs(np.dot(c[:, 0], np.roll(c[:, 1], -1))
                          - np.dot(c[:, 1], np.roll(c[:, 0], -1)))
                if len(c) else 0.0
                for c in diagram.cells
            ])
            amax = float(areas.max()) if len(areas) else 0.0
            for cell, area in zip(diagram.cells, areas):
                if len(cell) < 3 or amax <= 0:
                    continue
                # smaller cells (denser areas) take the hotter colors
                self.painter.set_color(self.cmap.to_color(amax - area, amax, "lin"))
                self.painter.poly_fill(cell)
        if self.line_color is not None:
            segs = geometry.voronoi_edges(pts, clip)
            self.painter.set_color(self.line_color)
            if len(segs):
                self.painter.lines(segs[:, 0], segs[:, 1], segs[:, 2], segs[:, 3],
                                   width=self.line_width)

    def draw(self, proj, mouse_x, mouse_y, ui_manager):
        self.painter.batch_draw()


class DelaunayLayer(_TableLayer):
    """Delaunay triangulation edges, optionally colored by edge length."""

    def __init__(self, table, cmap: str | None = None, color="b",
                 alpha: int = 255, line_width: int = 1):
        super().__init__(table)
        self.cmap = None if cmap is None else ColorMap(cmap, alpha=alpha)
        self.color = named_color(color, alpha)
        self.line_width = line_width
        self.painter = BatchPainter()

    def invalidate(self, proj):
        x, y = self._screen_xy(proj)
        pts = np.stack([x, y], axis=1)
        pts = pts[np.isfinite(pts).all(axis=1)]
        self.painter = BatchPainter()
        if len(pts) < 3:
            return
        tri = geometry.delaunay(pts)
        if tri.degenerate:
            warnings.warn("all points collinear; delaunay layer draws nothing")
            return
        e = unique_edges(tri)
        p0 = tri.points[e[:, 0]]
        p1 = tri.points[e[:, 1]]
        if self.cmap is not None:
            lengths = np.hypot(*(p1 - p0).T)
            max_len = float(lengths.max())
            colors = self.cmap.to_colors(lengths, max_len if max_len > 0 else 1.0, "lin")
            self.painter.lines(p0[:, 0], p0[:, 1], p1[:, 0], p1[:, 1],
                               width=self.line_width, colors=colors.astype(np.float64))
        else:
            self.painter.set_color(self.color)
            self.painter.lines(p0[:, 0], p0[:, 1], p1[:, 0], p1[:, 1],
                               width=self.line_width)

    def draw(self, proj, mouse_x, mouse_y, ui_manager):
        self.painter.batch_draw()


class ConvexHullLayer(_TableLayer):
    """Convex hull of the samples as a filled and/or outlined polygon."""

    def __init__(self, table, color="b", fill: bool = True, alpha: int = 110,
                 line_width: int = 2):
        super().__init__(table)
        self.color = named_color(color)
        self.fill = fill
        self.fill_alpha = alpha
        self.line_width = line_width
        self.painter = BatchPainter()

    def invalidate(self, proj):
        x, y = self._screen_xy(proj)
        pts = np.stack([x, y], axis=1)
        pts = pts[np.isfinite(pts).all(axis=1)]
        self.painter = BatchPainter()
        try:
            hull = geometry.convex_hull(pts)
        except ValueError:  # DegenerateHullError included
            warnings.warn("degenerate input; convex hull layer draws nothing")
            return
        if self.fill:
            self.painter.set_color(self.color[:3] + (self.fill_alpha,))
            self.painter.poly_fill(hull)
        self.painter.set_color(self.color)
        self.painter.poly_outline(hull, width=self.line_width)

    def draw(self, proj, mouse_x, mouse_y, ui_manager):
        self.painter.batch_draw()


class _FeatureLayer(BaseLayer):
    """Shared machinery for shapefile and GeoJSON layers."""

    def __init__(self, features, f_tooltip=None):
        self.features = features
        self.f_tooltip = f_tooltip
        self.hotspots = HotspotIndex()
        self.painter = BatchPainter()

    def bbox(self):
        pts = [f.lonlat() for f in self.features]
        if not pts:
            return None
        allpts = np.concatenate(pts)
        if len(allpts) == 0:
            return None
        return bbox_from_points(allpts[:, 0], allpts[:, 1])

    def _project_parts(self, proj, feature):
        return [np.stack(proj.lonlat_to_screen(p[:, 0], p[:, 1]), axis=1)
                for p in feature.parts]

    def _register_hotspot(self, parts, text):
        allp = np.concatenate(parts)
        x0, y0 = allp.min(axis=0)
        x1, y1 = allp.max(axis=0)
        self.hotspots.add(x0, y0, max(x1 - x0, 8), max(y1 - y0, 8), text)

    def draw(self, proj, mouse_x, mouse_y, ui_manager):
        self.painter.batch_draw()


class ShapefileLayer(_FeatureLayer):
    """Outlines of shapefile geometries with optional per-shape tooltips."""

    def __init__(self, basepath, color="b", f_tooltip=None, line_width: int = 1):
        super().__init__(read_shapefile(basepath), f_tooltip)
        self.color = named_color(color)
        self.line_width = line_width

    def invalidate(self, proj):
        self.painter = BatchPainter()
        self.painter.set_color(self.color)
        self.hotspots.clear()
        for feat in self.features:
            parts = self._project_parts(proj, feat)
            if feat.geometry == "Point":
                for p in parts:
                    self.painter.points(p[:, 0], p[:, 1], point_size=4)
            else:
                for p in parts:
                    self.painter.linestrip(p[:, 0], p[:, 1], width=self.line_width)
            if self.f_tooltip is not None and parts:
                self._register_hotspot(parts, self.f_tooltip(feat.attributes))


class GeoJSONLayer(_FeatureLayer):
    """GeoJSON shapes; color may be a fixed RGBA or a function of properties.

    A color function returning alpha 0 skips the feature (the standard
    choropleth fallback for unmapped regions).
    """

    def __init__(self, path, fill: bool = True, color=(0, 0, 255, 255),
                 f_tooltip=None, line_width: int = 1):
        super().__init__(read_geojson(path), f_tooltip)
        self.fill = fill
        self.color = color if callable(color) else named_color(color)
        self.line_width = line_width

    def _feature_color(self, feat):
        if callable(self.color):
            return named_color(self.color(feat.attributes))
        return self.color

    def invalidate(self, proj):
        self.painter = BatchPainter()
        self.hotspots.clear()
        for feat in self.features:
            rgba = self._feature_color(feat)
            if rgba[3] == 0:
                continue
            parts = self._project_parts(proj, feat)
            if not parts:
                continue
            self.painter.set_color(rgba)
            if feat.geometry == "Polygon" and self.fill:
                self.painter.poly_fill(parts[0], holes=parts[1:])
            elif feat.geometry == "Point":
                for p in parts:
                    self.painter.points(p[:, 0], p[:, 1], point_size=4)
            else:
                for p in parts:
                    self.painter.linestrip(p[:, 0], p[:, 1], width=self.line_width,
                                           closed=feat.geometry == "Polygon")
            if self.f_tooltip is not None:
                self._register_hotspot(parts, self.f_tooltip(feat.attributes))


class TrailLayer(_TableLayer):
    """Animated trail: renders the sample at the current frame counter.

    The counter advances by one per draw and wraps at the end of the
    data.  A fresh painter is built every frame.
    """

    def __init__(self, table, color="r", point_size: int = 4, trail: int = 1):
        super().__init__(table)
        self.color = named_color(color)
        self.point_size = point_size
        self.trail = max(int(trail), 1)
        self.frame_counter = 0
        self._x = np.empty(0)
        self._y = np.empty(0)

    def invalidate(self, proj):
        self._x, self._y = self._screen_xy(proj)

    def draw(self, proj, mouse_x, mouse_y, ui_manager):
        n = self.table.nrows
        if n == 0:
            return
        painter = BatchPainter()
        painter.set_color(self.color)
        lo = max(self.frame_counter - self.trail + 1, 0)
        painter.points(self._x[lo:self.frame_counter + 1],
                       self._y[lo:self.frame_counter + 1],
                       point_size=self.point_size)
        painter.batch_draw()
        self.frame_counter = (self.frame_counter + 1) % n
