"""On-screen UI: hotspot (tooltip) index and status/tooltip overlay."""

from __future__ import annotations

import numpy as np
from PIL import Image, ImageDraw, ImageFont

from .render import RenderTarget, draw_texture

__all__ = ["HotspotIndex", "UiManager", "render_text"]

BUCKET_PX = 64

_FONT = ImageFont.load_default()


def render_text(text: str, fg=(0, 0, 0, 255), bg=(255, 255, 255, 210),
                pad: int = 3) -> np.ndarray:
    """Rasterize a short text box to an RGBA array with the bundled font."""
    lines = text.split("\n")
    probe = ImageDraw.Draw(Image.new("RGBA", (1, 1)))
    sizes = [probe.textbbox((0, 0), ln, font=_FONT) for ln in lines]
    w = max((s[2] for s in sizes), default=1) + 2 * pad
    lh = max((s[3] for s in sizes), default=10) + 2
    img = Image.new("RGBA", (w, lh * len(lines) + 2 * pad), bg)
    drawer = ImageDraw.Draw(img)
    for i, ln in enumerate(lines):
        drawer.text((pad, pad + i * lh), ln, fill=fg, font=_FONT)
    return np.asarray(img, dtype=np.uint8)


class HotspotIndex:
    """Screen rectangles with tooltip strings, bucketed for O(1) queries.

    ``query`` returns the topmost (last registered) hit.
    """

    def __init__(self, bucket_px: int = BUCKET_PX):
        self.bucket_px = bucket_px
        self._rects: list = []   # (x, y, w, h, text)
        self._buckets: dict = {}

    def __len__(self):
        return len(self._rects)

    def clear(self) -> None:
        self._rects.clear()
        self._buckets.clear()

    def add(self, x: float, y: float, w: float, h: float, text: str) -> None:
        idx = len(self._rects)
        self._rects.append((x, y, w, h, text))
        b = self.bucket_px
        for by in range(int(y // b), int((y + h) // b) + 1):
            for bx in range(int(x // b), int((x + w) // b) + 1):
                self._buckets.setdefault((bx, by), []).append(idx)

    def add_rect_centered(self, cx: float, cy: float, size: float, text: str) -> None:
        half = size / 2.0
        self.add(cx - half, cy - half, size, size, text)

    def query(self, px: float, py: float) -> str | None:
        b = self.bucket_px
        candidates = self._buckets.get((int(px // b), int(py // b)), ())
        best = None
        for idx in candidates:
            x, y, w, h, text = self._rects[idx]
            if x <= px <= x + w and y <= py <= y + h:
                best = text
        return best


class UiManager:
    """Status lines and tooltip, drawn above all layers."""

    def __init__(self):
        self.status_lines: list[str] = []
        self.tooltip_text: str | None = None
        self.tooltip_anchor: tuple[float, float] = (0.0, 0.0)

    def clear_frame(self) -> None:
        self.status_lines = []
        self.tooltip_text = None

    def status(self, text: str) -> None:
        self.status_lines.append(text)

    def tooltip(self, text: str, anchor=(0.0, 0.0)) -> None:
        self.tooltip_text = text
        self.tooltip_anchor = anchor

    def draw(self, target: RenderTarget, attribution: str = "") -> None:
        y = 4
        for line in self.status_lines:
            box = render_text(line)
            draw_texture(target, box, 4, y)
            y += box.shape[0] + 2
        if attribution:
            box = render_text(attribution, bg=(255, 255, 255, 170))
            draw_texture(target, box,
                         target.width - box.shape[1] - 2,
                         target.height - box.shape[0] - 2)
        if self.tooltip_text is not None:
            box = render_text(self.tooltip_text)
            ax, ay = self.tooltip_anchor
            # offset from cursor, clamped to the window
            x = min(max(ax + 8, 0), target.width - box.shape[1])
            yb = min(max(ay - 8 - box.shape[0], 0), target.height - box.shape[0])
            draw_texture(target, box, x, yb)
