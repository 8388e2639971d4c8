"""Top-level facade and the performance harness.

The facade mirrors the matplotlib-style accumulation model: each call
adds a layer to an initially empty canvas; ``show`` opens the viewer,
``savefig`` renders offscreen to PNG, and either one resets the canvas.
"""

from __future__ import annotations

import csv as _csv
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import layers as _layers_mod
from . import viewer as _viewer_mod
from .datatable import DataTable
from .layers import (BaseLayer, ConvexHullLayer, DelaunayLayer, DotLayer,
                     GeoJSONLayer, GraphLayer, HistLayer, KdeLayer,
                     MarkersLayer, ShapefileLayer, VoronoiLayer)
from .projection import BoundingBox
from .render import RenderTarget, write_png
from .tiles import TileCache, TileProvider, builtin_providers, default_cache_dir
from .viewer import Engine

__all__ = [
    "dot", "hist", "kde", "markers", "graph", "voronoi", "delaunay",
    "convexhull", "shapefiles", "geojson", "add_layer", "set_bbox",
    "tile_provider", "set_tile_cache", "show", "savefig", "clear",
    "bench", "BenchReport",
]


class _CanvasState:
    def __init__(self):
        self.layers: list[BaseLayer] = []
        self.bbox: BoundingBox | None = None
        self.provider: TileProvider | None = None
        self.cache_dir = None


_state = _CanvasState()


def clear() -> None:
    """Reset the canvas (fresh script state)."""
    global _state
    _state = _CanvasState()


def add_layer(layer: BaseLayer) -> None:
    _state.layers.append(layer)


def dot(data: DataTable, color="b", point_size: int = 2, alpha: int = 255,
        f_tooltip=None) -> None:
    add_layer(DotLayer(data, color=color, point_size=point_size, alpha=alpha,
                       f_tooltip=f_tooltip))


def hist(data: DataTable, binsize: int = 8, colorscale: str = "sqrt",
         cmap: str = "hot", alpha: int = 220, show_zero: bool = False) -> None:
    add_layer(HistLayer(data, binsize=binsize, colorscale=colorscale,
                        cmap=cmap, alpha=alpha, show_zero=show_zero))


def kde(data: DataTable, bw=(5.0, 5.0), cmap: str = "hot", alpha: int = 220,
        cut_below: float = 0.0, clip_above: float | None = None,
        scaling: str = "sqrt", cells: float = 2.0) -> None:
    add_layer(KdeLayer(data, bw=bw, cmap=cmap, alpha=alpha, cut_below=cut_below,
                       clip_above=clip_above, scaling=scaling, cells=cells))


def markers(data: DataTable, image_path, scale: float = 1.0, f_tooltip=None) -> None:
    add_layer(MarkersLayer(data, image_path, scale=scale, f_tooltip=f_tooltip))


def graph(data: DataTable, src_lat="src_lat", src_lon="src_lon",
          dest_lat="dest_lat", dest_lon="dest_lon", color: str = "hot",
          alpha: int = 32, linewidth: int = 1) -> None:
    add_layer(GraphLayer(data, src_lat=src_lat, src_lon=src_lon,
                         dest_lat=dest_lat, dest_lon=dest_lon,
                         cmap=color, alpha=alpha, linewidth=linewidth))


def voronoi(data: DataTable, line_color="b", fill: bool = False,
            cmap: str = "hot", alpha: int = 160, line_width: int = 1) -> None:
    add_layer(VoronoiLayer(data, line_color=line_color, fill=fill, cmap=cmap,
                           alpha=alpha, line_width=line_width))


def delaunay(data: DataTable, cmap: str | None = None, color="b",
             line_width: int = 1) -> None:
    add_layer(DelaunayLayer(data, cmap=cmap, color=color, line_width=line_width))


def convexhull(data: DataTable, color="b", fill: bool = True, alpha: int = 110) -> None:
    add_layer(ConvexHullLayer(data, color=color, fill=fill, alpha=alpha))


def shapefiles(basepath, color="b", f_tooltip=None, line_width: int = 1) -> None:
    add_layer(ShapefileLayer(basepath, color=color, f_tooltip=f_tooltip,
                             line_width=line_width))


def geojson(path, fill: bool = True, color=(0, 0, 255, 255), f_tooltip=None,
            line_width: int = 1) -> None:
    add_layer(GeoJSONLayer(path, fill=fill, color=color, f_tooltip=f_tooltip,
                           line_width=line_width))


def set_bbox(bbox: BoundingBox) -> None:
    _state.bbox = bbox


def tile_provider(provider, attribution: str = "", name: str = "custom") -> None:
    """Select a preset by name or configure a {z}/{x}/{y} template."""
    if isinstance(provider, TileProvider):
        _state.provider = provider
    elif provider in builtin_providers():
        _state.provider = builtin_providers()[provider]
    else:
        _state.provider = TileProvider(url_template=provider,
                                       attribution=attribution, name=name)


def set_tile_cache(path) -> None:
    _state.cache_dir = path


def _resolve_provider() -> TileProvider:
    if _state.provider is not None:
        return _state.provider
    env = os.environ.get("TERRAMAP_TILES")
    if env:
        presets = builtin_providers()
        if env in presets:
            return presets[env]
        return TileProvider(url_template=env, attribution="", name="env")
    return builtin_providers()["osm"]


def _build_engine(width: int, height: int, show_tiles: bool = True) -> Engine:
    engine = Engine(
        target=RenderTarget(width, height),
        provider=_resolve_provider(),
        cache=TileCache(_state.cache_dir or default_cache_dir()),
        show_tiles=show_tiles,
    )
    if _state.bbox is not None:
        engine.set_bbox(_state.bbox)
    for layer in _state.layers:
        engine.add_layer(layer)
    return engine


def show(width: int = 1280, height: int = 768) -> None:
    """Open the interactive viewer; the canvas resets when it closes."""
    engine = _build_engine(width, height)
    try:
        _viewer_mod.run(engine)
    finally:
        clear()


def savefig(path, width: int = 1280, height: int = 768,
            wait_tiles: float = 20.0) -> Path:
    """Render the canvas offscreen to a PNG file and reset it.

    Runs exactly one invalidate+draw cycle after (optionally) waiting
    for tile fetches; no window system is required.
    """
    engine = _build_engine(width, height)
    try:
        if engine.show_tiles and wait_tiles:
            engine.resolve_view()
            from .tiles import tiles_for_view

            for coord in tiles_for_view(engine.view):
                engine.cache.request_tile(engine.provider, coord)
            engine.cache.wait_idle(timeout=wait_tiles)
        engine.render_frame()
        path = Path(path if str(path).endswith(".png") else f"{path}.png")
        write_png(engine.target.read_pixels(), path)
        return path
    finally:
        clear()


# ---------------------------------------------------------------------------
# performance harness

BENCH_VISUALIZATIONS = ("dot", "graph", "hist", "kde", "voronoi")


@dataclass
class BenchReport:
    """Mean/SD wall time per visualization over R repetitions."""

    n_samples: int
    reps: int
    rows: list = field(default_factory=list)  # (name, mean_s, sd_s, times)

    def to_text(self) -> str:
        lines = [f"Render time for {self.n_samples} samples ({self.reps} reps)",
                 f"{'visualization':<15}{'mean [s]':>10}{'SD [s]':>10}"]
        for name, mean, sd, _ in self.rows:
            lines.append(f"{name:<15}{mean:>10.2f}{sd:>10.2f}")
        return "\n".join(lines)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fout:
            writer = _csv.writer(fout)
            writer.writerow(["visualization", "mean_s", "sd_s"] +
                            [f"t{i}_s" for i in range(self.reps)])
            for name, mean, sd, times in self.rows:
                writer.writerow([name, f"{mean:.4f}", f"{sd:.4f}"] +
                                [f"{t:.4f}" for t in times])

    def write_figure(self, path) -> None:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        names = [r[0] for r in self.rows]
        means = [r[1] for r in self.rows]
        sds = [r[2] for r in self.rows]
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.bar(names, means, yerr=sds, capsize=4, color="#4878a8")
        ax.set_ylabel("render time [s]")
        ax.set_title(f"{self.n_samples:,} samples, {self.reps} repetitions")
        fig.tight_layout()
        fig.savefig(path, dpi=120)
        plt.close(fig)


def synthetic_points(n: int, seed: int = 7) -> tuple[np.ndarray, np.ndarray]:
    """Mixture of 5 Gaussians over a country-sized box (Denmark-like)."""
    rng = np.random.default_rng(seed)
    centers = np.array([
        (12.57, 55.68), (10.20, 56.16), (9.55, 55.70),
        (10.39, 55.40), (8.45, 55.47),
    ])
    which = rng.integers(0, len(centers), n)
    lon = centers[which, 0] + rng.normal(0.0, 0.35, n)
    lat = centers[which, 1] + rng.normal(0.0, 0.20, n)
    return lon, lat


def _bench_layer(name: str, table: DataTable) -> BaseLayer:
    if name == "dot":
        return DotLayer(table)
    if name == "graph":
        return GraphLayer(table, src_lat="lat", src_lon="lon",
                          dest_lat="dest_lat", dest_lon="dest_lon")
    if name == "hist":
        return HistLayer(table)
    if name == "kde":
        return KdeLayer(table)
    if name == "voronoi":
        return VoronoiLayer(table)
    raise ValueError(f"unknown visualization {name!r}")


def bench(n_samples: int = 1_000_000, reps: int = 10, width: int = 1280,
          height: int = 768, visualizations=BENCH_VISUALIZATIONS,
          seed: int = 7, warmup: bool = True) -> BenchReport:
    """Time invalidate+first-draw per visualization on an offscreen target.

    Data generation is excluded from the timings and the base map is
    blank (no tile I/O), isolating the rendering work.
    """
    lon, lat = synthetic_points(int(n_samples), seed=seed)
    rng = np.random.default_rng(seed + 1)
    table = DataTable({
        "lat": lat, "lon": lon,
        "dest_lat": lat[rng.permutation(len(lat))],
        "dest_lon": lon[rng.permutation(len(lon))],
    })

    report = BenchReport(int(n_samples), int(reps))
    for name in visualizations:
        times = []
        n_runs = reps + (1 if warmup else 0)
        for rep in range(n_runs):
            engine = Engine(target=RenderTarget(width, height), show_tiles=False)
            engine.add_layer(_bench_layer(name, table))
            t0 = time.perf_counter()
            engine.render_frame()
            dt = time.perf_counter() - t0
            if warmup and rep == 0:
                continue  # JIT/compile warmup excluded
            times.append(dt)
        mean = float(np.mean(times))
        sd = float(np.std(times, ddof=1)) if len(times) > 1 else 0.0
        report.rows.append((name, mean, sd, times))
    return report
