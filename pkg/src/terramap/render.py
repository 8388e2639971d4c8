"""Batched 2D primitive painting on a software framebuffer.

A :class:`BatchPainter` accumulates primitives (filled polygons, lines,
points, sprites) and flushes each primitive class in a single draw call
per :meth:`BatchPainter.batch_draw`.  Within one class all fragments are
resolved order-independently (weighted alpha accumulation), and classes
composite source-over in flush order; results are deterministic for a
given draw stream.  Targets are premultiplied float32 buffers readable
as straight RGBA and writable as PNG.
"""

from __future__ import annotations

import warnings

import numpy as np
from PIL import Image

from . import _raster

__all__ = ["RenderTarget", "BatchPainter", "read_image", "write_png", "draw_texture"]

WHITE = (255, 255, 255, 255)

# Target bound by the engine for the frame being drawn; lets layer code
# call batch_draw()/draw_texture() without threading the target through.
_current_target: "RenderTarget | None" = None


def set_current_target(target: "RenderTarget | None") -> None:
    global _current_target
    _current_target = target


def current_target() -> "RenderTarget":
    if _current_target is None:
        raise RuntimeError("no render target bound; draw inside an engine frame")
    return _current_target


class RenderTarget:
    """Fixed-size RGBA framebuffer (window or offscreen)."""

    def __init__(self, width: int, height: int, kind: str = "offscreen"):
        if kind not in ("offscreen", "window"):
            raise ValueError(f"kind must be 'offscreen' or 'window', got {kind!r}")
        self.width = int(width)
        self.height = int(height)
        self.kind = kind
        # premultiplied RGBA, float32 in [0, 1]
        self.buffer = np.zeros((self.height, self.width, 4), dtype=np.float32)
        self.draw_calls = 0

    def clear(self, color=WHITE) -> None:
        r, g, b, a = (c / 255.0 for c in color)
        self.buffer[..., 0] = r * a
        self.buffer[..., 1] = g * a
        self.buffer[..., 2] = b * a
        self.buffer[..., 3] = a

    def composite(self, rgb_premult: np.ndarray, alpha: np.ndarray) -> None:
        """Source-over a premultiplied full-frame layer onto the buffer."""
        inv = (1.0 - alpha)[..., None]
        self.buffer[..., :3] *= inv
        self.buffer[..., :3] += rgb_premult
        self.buffer[..., 3] *= inv[..., 0]
        self.buffer[..., 3] += alpha
        self.draw_calls += 1

    def read_pixels(self) -> np.ndarray:
        """Straight-alpha uint8 RGBA image, top-left origin."""
        a = self.buffer[..., 3]
        safe = np.where(a > 0.0, a, 1.0)[..., None]
        rgb = np.clip(self.buffer[..., :3] / safe, 0.0, 1.0)
        out = np.empty((self.height, self.width, 4), dtype=np.uint8)
        out[..., :3] = np.rint(rgb * 255.0)
        out[..., 3] = np.rint(np.clip(a, 0.0, 1.0) * 255.0)
        return out


def read_image(path) -> np.ndarray:
    """Load a PNG/JPEG image as an RGBA uint8 array."""
    with Image.open(path) as im:
        return np.asarray(im.convert("RGBA"), dtype=np.uint8)


def write_png(image: np.ndarray, path) -> None:
    Image.fromarray(np.asarray(image, dtype=np.uint8), "RGBA").save(path, format="PNG")


def draw_texture(target: RenderTarget, rgba: np.ndarray, x: float, y: float) -> None:
    """Blit a straight-alpha RGBA image source-over at (x, y), one draw call.

    Positions are rounded to the pixel grid.
    """
    h, w = rgba.shape[:2]
    x0, y0 = int(round(x)), int(round(y))
    dx0, dy0 = max(x0, 0), max(y0, 0)
    dx1, dy1 = min(x0 + w, target.width), min(y0 + h, target.height)
    if dx0 >= dx1 or dy0 >= dy1:
        return
    src = rgba[dy0 - y0:dy1 - y0, dx0 - x0:dx1 - x0].astype(np.float32) / 255.0
    a = src[..., 3:4]
    dst = target.buffer[dy0:dy1, dx0:dx1]
    dst[..., :3] *= 1.0 - a
    dst[..., :3] += src[..., :3] * a
    dst[..., 3:4] *= 1.0 - a
    dst[..., 3:4] += a
    target.draw_calls += 1


def _as_f64(arr) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(arr, dtype=np.float64).ravel())


class BatchPainter:
    """Primitive batcher; flush order is fills, lines, points, sprites."""

    def __init__(self):
        self._color = (0, 0, 255, 255)
        self._fills: list = []     # (verts, ring_starts, rgba01)
        self._lines: list = []     # (x0, y0, x1, y1, colors01, width)
        self._points: list = []    # (x, y, colors01, size)
        self._sprites: list = []   # (img, x, y, scale)
        self._version = 0
        self._cache: dict = {}

    # -- state ----------------------------------------------------------

    def set_color(self, color) -> None:
        from .colormap import named_color

        self._color = named_color(color)

    def _colors01(self, n: int, colors) -> np.ndarray:
        if colors is None:
            out = np.empty((n, 4), dtype=np.float32)
            out[:] = np.asarray(self._color, dtype=np.float32) / 255.0
            return out
        colors = np.asarray(colors, dtype=np.float32)
        if colors.ndim == 1:
            colors = np.broadcast_to(colors, (n, 4)).copy()
        if colors.shape != (n, 4):
            raise ValueError(f"colors must be (n, 4), got {colors.shape}")
        return np.ascontiguousarray(colors / 255.0)

    # -- primitives -----------------------------------------------------

    def points(self, x, y, point_size: int = 2, colors=None) -> None:
        """Queue points as size x size screen-aligned quads."""
        x, y = _as_f64(x), _as_f64(y)
        if len(x) != len(y):
            raise ValueError("x and y must have equal length")
        if len(x):
            self._points.append((x, y, self._colors01(len(x), colors), max(int(point_size), 1)))
            self._bump()

    def lines(self, x0, y0, x1, y1, width: int = 1, colors=None) -> None:
        """Queue line segments."""
        x0, y0, x1, y1 = (_as_f64(v) for v in (x0, y0, x1, y1))
        if not (len(x0) == len(y0) == len(x1) == len(y1)):
            raise ValueError("coordinate arrays must have equal length")
        if len(x0):
            self._lines.append((x0, y0, x1, y1, self._colors01(len(x0), colors), max(int(width), 1)))
            self._bump()

    def linestrip(self, x, y, width: int = 1, closed: bool = False) -> None:
        """Queue a connected polyline."""
        x, y = _as_f64(x), _as_f64(y)
        if len(x) < 2:
            return
        if closed:
            x = np.append(x, x[0])
            y = np.append(y, y[0])
        self.lines(x[:-1], y[:-1], x[1:], y[1:], width=width)

    def poly_fill(self, ring, holes=()) -> None:
        """Queue a filled polygon (even-odd rule; holes supported)."""
        rings = [np.asarray(ring, dtype=np.float64).reshape(-1, 2)]
        rings += [np.asarray(h, dtype=np.float64).reshape(-1, 2) for h in holes]
        rings = [r[np.isfinite(r).all(axis=1)] for r in rings]
        if len(rings[0]) < 3:
            warnings.warn("degenerate polygon ring skipped")
            return
        starts = np.cumsum([0] + [len(r) for r in rings]).astype(np.int64)
        verts = np.ascontiguousarray(np.concatenate(rings))
        rgba = np.asarray(self._color, dtype=np.float64) / 255.0
        self._fills.append((verts, starts, rgba))
        self._bump()

    def poly_outline(self, ring, width: int = 1) -> None:
        ring = np.asarray(ring, dtype=np.float64).reshape(-1, 2)
        self.linestrip(ring[:, 0], ring[:, 1], width=width, closed=True)

    def sprites(self, image: np.ndarray, x, y, scale: float = 1.0) -> None:
        """Queue a textured sprite centered at each position."""
        x, y = _as_f64(x), _as_f64(y)
        img = np.ascontiguousarray(np.asarray(image, dtype=np.uint8))
        if img.ndim != 3 or img.shape[2] != 4:
            raise ValueError("sprite image must be RGBA uint8")
        if len(x):
            self._sprites.append((img, x, y, float(scale)))
            self._bump()

    def _bump(self) -> None:
        self._version += 1

    @property
    def is_empty(self) -> bool:
        return not (self._fills or self._lines or self._points or self._sprites)

    # -- flushing -------------------------------------------------------

    def _resolve_class(self, name: str, batches, W: int, H: int):
        acc = np.zeros((5, W * H), dtype=np.float64)
        if name == "fills":
            for verts, starts, rgba in batches:
                _raster.accum_polygon(acc, W, H, verts, starts,
                                      rgba[0], rgba[1], rgba[2], rgba[3])
        elif name == "lines":
            for x0, y0, x1, y1, colors, width in batches:
                _raster.accum_lines(acc, W, H, x0, y0, x1, y1, colors, width)
        elif name == "points":
            for x, y, colors, size in batches:
                _raster.accum_points(acc, W, H, x, y, colors, size)
        elif name == "sprites":
            for img, x, y, scale in batches:
                _raster.accum_sprites(acc, W, H, img, x, y, scale)
        alpha = -np.expm1(acc[4]).reshape(H, W)
        suma = acc[3].reshape(H, W)
        safe = np.where(suma > 0.0, suma, 1.0)
        weight = (alpha / safe)[..., None]
        rgb_premult = acc[:3].T.reshape(H, W, 3) * weight
        return rgb_premult.astype(np.float32), alpha.astype(np.float32)

    def batch_draw(self, target: RenderTarget | None = None) -> None:
        """Flush all buffered primitives onto ``target``.

        Buffers are not consumed; drawing twice paints the same batches
        again.  At most one draw call is issued per primitive class.
        """
        if target is None:
            target = current_target()
        key = (target.width, target.height)
        cached = self._cache.get(key)
        if cached is None or cached[0] != self._version:
            layers = []
            for name, batches in (("fills", self._fills), ("lines", self._lines),
                                  ("points", self._points), ("sprites", self._sprites)):
                if batches:
                    layers.append(self._resolve_class(name, batches, *key))
            cached = (self._version, layers)
            self._cache = {key: cached}
        for rgb_premult, alpha in cached[1]:
            target.composite(rgb_premult, alpha)
