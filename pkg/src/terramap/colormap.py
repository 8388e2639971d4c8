"""Value-to-color mapping with lin/log/sqrt scaling and discretization.

Continuous maps are embedded control-point tables (no plotting library
dependency); any name can be suffixed ``_r`` for the reversed map.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["ColorMap", "CategoricalColorMap", "colorbrewer", "create_set_cmap",
           "named_color", "CONTINUOUS_MAPS"]

# Control points in 8-bit linear RGB, evenly spaced over t in [0, 1].
CONTINUOUS_MAPS: dict[str, list[tuple[int, int, int]]] = {
    "hot": [(11, 0, 0), (85, 0, 0), (170, 0, 0), (255, 25, 0),
            (255, 115, 0), (255, 200, 0), (255, 255, 65), (255, 255, 255)],
    "jet": [(0, 0, 128), (0, 0, 255), (0, 128, 255), (0, 255, 255),
            (128, 255, 128), (255, 255, 0), (255, 128, 0), (255, 0, 0),
            (128, 0, 0)],
    "coolwarm": [(59, 76, 192), (98, 130, 234), (144, 178, 254),
                 (192, 212, 245), (221, 221, 221), (245, 196, 173),
                 (244, 154, 123), (222, 96, 77), (180, 4, 38)],
    "Blues": [(247, 251, 255), (222, 235, 247), (198, 219, 239),
              (158, 202, 225), (107, 174, 214), (66, 146, 198),
              (33, 113, 181), (8, 81, 156), (8, 48, 107)],
    "Reds": [(255, 245, 240), (254, 224, 210), (252, 187, 161),
             (252, 146, 114), (251, 106, 74), (239, 59, 44),
             (203, 24, 29), (165, 15, 21), (103, 0, 13)],
    "hsv": [(255, 0, 0), (255, 255, 0), (0, 255, 0), (0, 255, 255),
            (0, 0, 255), (255, 0, 255), (255, 0, 0)],
    "viridis": [(68, 1, 84), (72, 40, 120), (62, 74, 137), (49, 104, 142),
                (38, 130, 142), (31, 158, 137), (53, 183, 121),
                (109, 205, 89), (180, 222, 44), (253, 231, 37)],
}

# geoplotlib-style single-letter line colors
NAMED_COLORS = {
    "b": (0, 0, 255, 255), "g": (0, 200, 0, 255), "r": (255, 0, 0, 255),
    "c": (0, 255, 255, 255), "m": (255, 0, 255, 255), "y": (255, 255, 0, 255),
    "k": (0, 0, 0, 255), "w": (255, 255, 255, 255),
}

# fixed qualitative palette (ColorBrewer Set3, 12 classes)
QUALITATIVE_12 = [
    (141, 211, 199), (255, 255, 179), (190, 186, 218), (251, 128, 114),
    (128, 177, 211), (253, 180, 98), (179, 222, 105), (252, 205, 229),
    (217, 217, 217), (188, 128, 189), (204, 235, 197), (255, 237, 111),
]

SCALES = ("lin", "log", "sqrt")


def named_color(color, alpha: int = 255) -> tuple[int, int, int, int]:
    """Resolve a single-letter name, RGB or RGBA sequence to RGBA."""
    if isinstance(color, str):
        try:
            r, g, b, a = NAMED_COLORS[color]
        except KeyError:
            raise ValueError(f"unknown color name {color!r}") from None
        return (r, g, b, min(a, alpha))
    color = tuple(int(c) for c in color)
    if len(color) == 3:
        return color + (alpha,)
    if len(color) == 4:
        return color
    raise ValueError(f"color must be a name, RGB or RGBA, got {color!r}")


def _control_table(name: str) -> np.ndarray:
    base = name[:-2] if name.endswith("_r") else name
    try:
        table = np.array(CONTINUOUS_MAPS[base], dtype=np.float64)
    except KeyError:
        raise ValueError(
            f"unknown colormap {name!r}; available: {sorted(CONTINUOUS_MAPS)}"
        ) from None
    return table[::-1] if name.endswith("_r") else table


class ColorMap:
    """Continuous value -> RGBA map.

    Parameters mirror the usual construction: a map name, a uniform
    alpha in 0..255 and an optional number of discretization levels.
    """

    def __init__(self, name: str, alpha: int = 255, levels: int | None = None):
        self.name = name
        self.table = _control_table(name)
        if not 0 <= int(alpha) <= 255:
            raise ValueError(f"alpha {alpha} outside 0..255")
        self.alpha = int(alpha)
        if levels is not None and int(levels) < 1:
            raise ValueError(f"levels must be positive, got {levels}")
        self.levels = None if levels is None else int(levels)

    def _t(self, value, max_value, scale):
        v = np.clip(value, 0.0, max_value)
        if scale == "lin":
            t = v / max_value
        elif scale == "log":
            t = np.log1p(v) / math.log1p(max_value)
        elif scale == "sqrt":
            t = np.sqrt(v / max_value)
        else:
            raise ValueError(f"scale must be one of {SCALES}, got {scale!r}")
        if self.levels is not None:
            k = self.levels
            t = np.clip(np.floor(t * k) / max(k - 1, 1), 0.0, 1.0)
        return t

    def _interp(self, t: np.ndarray) -> np.ndarray:
        pos = t * (len(self.table) - 1)
        i0 = np.minimum(pos.astype(np.int64), len(self.table) - 2)
        frac = (pos - i0)[..., None]
        rgb = self.table[i0] * (1.0 - frac) + self.table[i0 + 1] * frac
        return np.rint(rgb).astype(np.int64)

    def to_color(self, value: float, max_value: float, scale: str = "lin"):
        """RGBA for ``value`` against ``max_value`` under the given scale."""
        if not max_value > 0:
            raise ValueError(f"max_value must be > 0, got {max_value}")
        if not math.isfinite(value):
            raise ValueError(f"value must be finite, got {value}")
        rgb = self._interp(np.asarray(self._t(float(value), float(max_value), scale)))
        return (int(rgb[0]), int(rgb[1]), int(rgb[2]), self.alpha)

    def to_colors(self, values, max_value: float, scale: str = "lin") -> np.ndarray:
        """Vectorized :meth:`to_color`; returns an (n, 4) uint8 array."""
        if not max_value > 0:
            raise ValueError(f"max_value must be > 0, got {max_value}")
        values = np.asarray(values, dtype=np.float64)
        if not np.isfinite(values).all():
            raise ValueError("values must be finite (filter NaN first)")
        rgb = self._interp(self._t(values, float(max_value), scale))
        out = np.empty(values.shape + (4,), dtype=np.uint8)
        out[..., :3] = rgb
        out[..., 3] = self.alpha
        return out


class CategoricalColorMap:
    """Fixed category -> RGBA assignment."""

    def __init__(self, assignment: dict):
        self.assignment = dict(assignment)

    def to_color(self, category):
        try:
            return self.assignment[category]
        except KeyError:
            raise KeyError(f"unknown category {category!r}") from None

    def __len__(self):
        return len(self.assignment)


def colorbrewer(categories, alpha: int = 255) -> CategoricalColorMap:
    """Assign colors from the 12-entry qualitative palette, in sort order."""
    cats = sorted(set(categories))
    if len(cats) > len(QUALITATIVE_12):
        raise ValueError(
            f"{len(cats)} categories exceed the {len(QUALITATIVE_12)}-color palette"
        )
    return CategoricalColorMap(
        {c: QUALITATIVE_12[i] + (alpha,) for i, c in enumerate(cats)}
    )


def create_set_cmap(cmap_name: str, categories, alpha: int = 255) -> CategoricalColorMap:
    """Sample a continuous map at evenly spaced points, one per category."""
    cats = sorted(set(categories))
    cmap = ColorMap(cmap_name, alpha=alpha)
    ts = np.linspace(0.0, 1.0, len(cats)) if len(cats) > 1 else np.array([0.0])
    assignment = {}
    for c, t in zip(cats, ts):
        rgb = cmap._interp(np.asarray(t))
        assignment[c] = (int(rgb[0]), int(rgb[1]), int(rgb[2]), alpha)
    return CategoricalColorMap(assignment)
