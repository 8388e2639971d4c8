"""Frame loop, input handling and the interactive window.

The :class:`Engine` is deterministic and display-free: events go in
through :meth:`Engine.process_event`, frames come out of
:meth:`Engine.render_frame` on whatever target the engine owns.  The
interactive window (:func:`run`) is a thin matplotlib shell around it;
headless export uses the same engine with an offscreen target.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from . import render
from .projection import (BoundingBox, Projection, ViewState, fit_view,
                         MIN_ZOOM, MAX_ZOOM, TILE_SIZE)
from .render import RenderTarget, draw_texture, write_png
from .tiles import TileCache, TileProvider, TileStatus, blank_tile, builtin_providers, tiles_for_view
from .ui import UiManager

__all__ = ["Engine", "run"]

#: keys handled by the engine itself, never forwarded to layers
RESERVED_KEYS = {"+", "-", "left", "right", "up", "down", "p", "P"}

PAN_FRACTION = 0.25


class Engine:
    """Owns the layer list, view state, tile cache and render target."""

    def __init__(self, target: RenderTarget | None = None,
                 provider: TileProvider | None = None,
                 cache: TileCache | None = None,
                 view: ViewState | None = None,
                 show_tiles: bool = True,
                 screenshot_dir=None):
        self.target = target or RenderTarget(1280, 768)
        self.provider = provider or builtin_providers()["osm"]
        self.cache = cache or TileCache()
        self.layers: list = []
        self.view = view
        self.bbox: BoundingBox | None = None
        self.show_tiles = show_tiles
        self.ui = UiManager()
        self.mouse = (0.0, 0.0)
        self.running = True
        self.frame_index = 0
        self.screenshot_dir = Path(screenshot_dir) if screenshot_dir else Path.cwd()
        self._needs_invalidate = True
        #: diagnostics for the lifecycle tests
        self.invalidate_counts: dict[int, int] = {}

    # -- setup ----------------------------------------------------------

    def add_layer(self, layer) -> None:
        self.layers.append(layer)
        self.invalidate_counts.setdefault(id(layer), 0)
        self._needs_invalidate = True

    def set_bbox(self, bbox: BoundingBox) -> None:
        self.bbox = bbox
        self.view = None
        self._needs_invalidate = True

    def resolve_view(self) -> ViewState:
        """Fit the view to the explicit bbox, else to all layers' extents."""
        if self.view is not None:
            return self.view
        bbox = self.bbox
        if bbox is None:
            boxes = [b for b in (layer.bbox() for layer in self.layers) if b is not None]
            if boxes:
                bbox = BoundingBox(
                    north=max(b.north for b in boxes),
                    south=min(b.south for b in boxes),
                    west=min(b.west for b in boxes),
                    east=max(b.east for b in boxes),
                )
            else:
                bbox = BoundingBox(north=75.0, south=-60.0, west=-179.0, east=179.0)
        self.view = fit_view(bbox, self.target.width, self.target.height)
        return self.view

    # -- input ----------------------------------------------------------

    def process_event(self, event: tuple) -> None:
        """Apply one input event; view changes schedule re-invalidation."""
        kind = event[0]
        if kind == "quit":
            self.running = False
        elif kind == "move":
            self.mouse = (float(event[1]), float(event[2]))
        elif kind == "drag":
            view = self.resolve_view()
            self._set_view(view.panned(float(event[1]), float(event[2])))
        elif kind == "scroll":
            view = self.resolve_view()
            self._set_view(view.zoomed(int(event[1])))
        elif kind == "key":
            self._on_key(str(event[1]))
        else:
            raise ValueError(f"unknown event {event!r}")

    def _set_view(self, new_view: ViewState) -> None:
        old = self.view
        self.view = new_view
        if old != new_view:
            self._needs_invalidate = True

    def _on_key(self, key: str) -> None:
        view = self.resolve_view()
        if key == "+":
            self._set_view(view.zoomed(+1))
        elif key == "-":
            self._set_view(view.zoomed(-1))
        elif key in ("left", "right", "up", "down"):
            dx = view.screen_w * PAN_FRACTION * (1 if key == "left" else -1 if key == "right" else 0)
            dy = view.screen_h * PAN_FRACTION * (1 if key == "up" else -1 if key == "down" else 0)
            self._set_view(view.panned(dx, dy))
        elif key in ("p", "P"):
            self.screenshot()
        else:
            for layer in self.layers:
                handler = getattr(layer, "on_key_release", None)
                if handler is not None:
                    handler(key)

    # -- frame loop -----------------------------------------------------

    def invalidate_all(self) -> None:
        proj = Projection(self.resolve_view())
        for layer in self.layers:
            layer.invalidate(proj)
            self.invalidate_counts[id(layer)] = self.invalidate_counts.get(id(layer), 0) + 1
        self._needs_invalidate = False

    def _draw_tiles(self) -> None:
        view = self.view
        blank = None
        for coord in tiles_for_view(view):
            handle = self.cache.request_tile(self.provider, coord)
            if handle.status is TileStatus.READY:
                img = handle.image
            else:
                if blank is None:
                    blank = blank_tile()
                img = blank
            draw_texture(self.target, img,
                         coord.x * TILE_SIZE - view.origin_wx,
                         coord.y * TILE_SIZE - view.origin_wy)

    def render_frame(self) -> None:
        """Invalidate if needed, then draw tiles, layers and UI in order."""
        self.resolve_view()
        if self._needs_invalidate:
            self.invalidate_all()
        self.target.clear()
        render.set_current_target(self.target)
        try:
            if self.show_tiles:
                self._draw_tiles()
            proj = Projection(self.view)
            mx, my = self.mouse
            self.ui.clear_frame()
            tooltip = self.query_tooltip(mx, my)
            if tooltip is not None:
                self.ui.tooltip(tooltip, (mx, my))
            for layer in self.layers:
                layer.draw(proj, mx, my, self.ui)
            self.ui.draw(self.target, attribution=self.provider.attribution)
        finally:
            render.set_current_target(None)
        self.frame_index += 1

    def query_tooltip(self, mx: float, my: float) -> str | None:
        """Topmost hotspot hit across layers (last-added layer wins)."""
        for layer in reversed(self.layers):
            hotspots = getattr(layer, "hotspots", None)
            if hotspots is not None:
                hit = hotspots.query(mx, my)
                if hit is not None:
                    return hit
        return None

    def screenshot(self, path=None) -> Path:
        if path is None:
            path = self.screenshot_dir / f"frame-{self.frame_index:05d}.png"
        write_png(self.target.read_pixels(), path)
        return Path(path)

    def replay(self, events, frames_between: int = 1) -> None:
        """Drive the engine with a scripted event sequence (testing/automation)."""
        self.render_frame()
        for event in events:
            self.process_event(event)
            if not self.running:
                break
            for _ in range(frames_between):
                self.render_frame()


def run(engine: Engine, title: str = "terramap", max_frames: int | None = None) -> None:
    """Open an interactive window around ``engine`` (pan/zoom/tooltips).

    Keyboard: ``+``/``-`` zoom, arrows pan, ``P`` screenshot.  Returns
    when the window is closed.
    """
    import matplotlib

    if os.environ.get("DISPLAY") is None and os.name != "nt":
        matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    engine.render_frame()
    fig, ax = plt.subplots(
        figsize=(engine.target.width / 100, engine.target.height / 100), dpi=100
    )
    fig.canvas.manager.set_window_title(title) if fig.canvas.manager else None
    ax.set_axis_off()
    fig.subplots_adjust(0, 0, 1, 1)
    im = ax.imshow(engine.target.read_pixels())
    state = {"dragging": False, "last": (0.0, 0.0), "frames": 0}

    def redraw():
        engine.render_frame()
        im.set_data(engine.target.read_pixels())
        fig.canvas.draw_idle()

    def on_press(ev):
        if ev.x is not None:
            state["dragging"] = True
            state["last"] = (ev.x, ev.y)

    def on_release(_ev):
        state["dragging"] = False

    def on_motion(ev):
        if ev.x is None:
            return
        x, y = ev.x, engine.target.height - ev.y
        engine.process_event(("move", x, y))
        if state["dragging"]:
            lx, ly = state["last"]
            engine.process_event(("drag", ev.x - lx, -(ev.y - ly)))
            state["last"] = (ev.x, ev.y)
        redraw()

    def on_scroll(ev):
        engine.process_event(("scroll", 1 if ev.button == "up" else -1))
        redraw()

    def on_key(ev):
        if ev.key is not None:
            engine.process_event(("key", ev.key))
            redraw()

    def on_timer(*_a):
        # animated layers need continuous frames
        state["frames"] += 1
        if max_frames is not None and state["frames"] >= max_frames:
            plt.close(fig)
            return
        redraw()

    fig.canvas.mpl_connect("button_press_event", on_press)
    fig.canvas.mpl_connect("button_release_event", on_release)
    fig.canvas.mpl_connect("motion_notify_event", on_motion)
    fig.canvas.mpl_connect("scroll_event", on_scroll)
    fig.canvas.mpl_connect("key_press_event", on_key)
    timer = fig.canvas.new_timer(interval=33)
    timer.add_callback(on_timer)
    timer.start()
    plt.show()
    timer.stop()
