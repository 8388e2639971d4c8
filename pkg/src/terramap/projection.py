"""Web Mercator projection and view fitting.

World-pixel space at zoom ``z`` spans ``[0, 256 * 2**z]`` on both axes
(slippy-map convention, 256 px tiles).  Screen coordinates are world
pixels translated by the view origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

TILE_SIZE = 256
MIN_ZOOM = 2
MAX_ZOOM = 20

#: Latitude where the square Web Mercator world ends.
LAT_CLAMP = 85.05112878

__all__ = [
    "BoundingBox", "ViewState", "Projection",
    "lonlat_to_world", "world_to_lonlat", "lonlat_to_screen",
    "bbox_from_points", "fit_view", "tile_of",
    "TILE_SIZE", "MIN_ZOOM", "MAX_ZOOM", "LAT_CLAMP",
]


def world_size(zoom: int) -> float:
    return TILE_SIZE * (1 << int(zoom))


def lonlat_to_world(lon, lat, zoom: int):
    """Project lon/lat degrees to world pixels at ``zoom``.

    Accepts scalars or arrays.  Latitude is clamped to the Mercator
    cutoff; NaN passes through as NaN.
    """
    size = world_size(zoom)
    lon = np.asarray(lon, dtype=np.float64)
    lat = np.asarray(lat, dtype=np.float64)
    lat = np.clip(lat, -LAT_CLAMP, LAT_CLAMP)
    wx = size * (lon + 180.0) / 360.0
    phi = np.radians(lat)
    merc = np.log(np.tan(phi) + 1.0 / np.cos(phi))
    wy = size * (1.0 - merc / math.pi) / 2.0
    # tan/cos noise can push the poles a hair outside the world square
    wy = np.clip(wy, 0.0, size)
    if wx.ndim == 0:
        return float(wx), float(wy)
    return wx, wy


def world_to_lonlat(wx, wy, zoom: int):
    """Inverse of :func:`lonlat_to_world` (up to floating error)."""
    size = world_size(zoom)
    wx = np.asarray(wx, dtype=np.float64)
    wy = np.asarray(wy, dtype=np.float64)
    lon = wx / size * 360.0 - 180.0
    merc = math.pi * (1.0 - 2.0 * wy / size)
    lat = np.degrees(np.arctan(np.sinh(merc)))
    if lon.ndim == 0:
        return float(lon), float(lat)
    return lon, lat


def tile_of(lon: float, lat: float, zoom: int) -> tuple[int, int]:
    """Slippy tile (x, y) containing a lon/lat point."""
    wx, wy = lonlat_to_world(lon, lat, zoom)
    n = (1 << zoom) - 1
    return (min(int(wx // TILE_SIZE), n), min(int(wy // TILE_SIZE), n))


@dataclass(frozen=True)
class BoundingBox:
    """Geographic extent in degrees; north > south."""

    north: float
    south: float
    west: float
    east: float

    def __post_init__(self):
        object.__setattr__(self, "north", min(self.north, LAT_CLAMP))
        object.__setattr__(self, "south", max(self.south, -LAT_CLAMP))
        if not self.north > self.south:
            raise ValueError(f"north ({self.north}) must exceed south ({self.south})")
        if self.east == self.west:
            raise ValueError("east and west must differ")

    @staticmethod
    def from_points(lons, lats, pad: float = 0.02) -> "BoundingBox":
        return bbox_from_points(lons, lats, pad=pad)


def bbox_from_points(lons, lats, pad: float = 0.02) -> BoundingBox:
    """Min/max box over finite coordinates with 2% padding per side.

    A single point (or zero spread) expands to a 0.01 degree span.
    """
    lons = np.asarray(lons, dtype=np.float64)
    lats = np.asarray(lats, dtype=np.float64)
    ok = np.isfinite(lons) & np.isfinite(lats)
    if not ok.any():
        raise ValueError("no finite coordinates to fit")
    lons, lats = lons[ok], lats[ok]
    w, e = float(lons.min()), float(lons.max())
    s, n = float(lats.min()), float(lats.max())
    dlon, dlat = e - w, n - s
    if dlon == 0.0:
        w -= 0.005
        e += 0.005
    else:
        w -= pad * dlon
        e += pad * dlon
    if dlat == 0.0:
        s -= 0.005
        n += 0.005
    else:
        s -= pad * dlat
        n += pad * dlat
    return BoundingBox(north=n, south=s, west=w, east=e)


@dataclass(frozen=True)
class ViewState:
    """Integer zoom plus the world-pixel coordinates of the screen's top-left."""

    zoom: int
    origin_wx: float
    origin_wy: float
    screen_w: int
    screen_h: int

    def __post_init__(self):
        if not MIN_ZOOM <= self.zoom <= MAX_ZOOM:
            raise ValueError(f"zoom {self.zoom} outside [{MIN_ZOOM}, {MAX_ZOOM}]")
        object.__setattr__(self, "origin_wx", self._clamp(self.origin_wx, self.screen_w))
        object.__setattr__(self, "origin_wy", self._clamp(self.origin_wy, self.screen_h))

    def _clamp(self, origin: float, extent: int) -> float:
        # keep the viewport intersecting the world square
        size = world_size(self.zoom)
        return float(min(max(origin, -extent + 1.0), size - 1.0))

    def center_lonlat(self) -> tuple[float, float]:
        return world_to_lonlat(
            self.origin_wx + self.screen_w / 2.0,
            self.origin_wy + self.screen_h / 2.0,
            self.zoom,
        )

    def panned(self, dx: float, dy: float) -> "ViewState":
        """View after dragging the map by (dx, dy) screen pixels."""
        return replace(self, origin_wx=self.origin_wx - dx, origin_wy=self.origin_wy - dy)

    def zoomed(self, direction: int) -> "ViewState":
        """Zoom by +-1 level keeping the screen-center lon/lat fixed."""
        new_zoom = min(max(self.zoom + int(direction), MIN_ZOOM), MAX_ZOOM)
        if new_zoom == self.zoom:
            return self
        factor = 2.0 ** (new_zoom - self.zoom)
        cx = (self.origin_wx + self.screen_w / 2.0) * factor
        cy = (self.origin_wy + self.screen_h / 2.0) * factor
        return replace(
            self,
            zoom=new_zoom,
            origin_wx=cx - self.screen_w / 2.0,
            origin_wy=cy - self.screen_h / 2.0,
        )


def lonlat_to_screen(lons, lats, view: ViewState):
    """Vectorized lon/lat -> screen pixels under ``view``; NaN in, NaN out."""
    wx, wy = lonlat_to_world(np.atleast_1d(lons), np.atleast_1d(lats), view.zoom)
    return wx - view.origin_wx, wy - view.origin_wy


class Projection:
    """View handed to layers during invalidate."""

    def __init__(self, view: ViewState):
        self.view = view
        self.zoom = view.zoom
        self.screen_w = view.screen_w
        self.screen_h = view.screen_h

    def lonlat_to_screen(self, lons, lats):
        return lonlat_to_screen(lons, lats, self.view)

    def screen_to_lonlat(self, sx, sy):
        return world_to_lonlat(
            np.asarray(sx, dtype=np.float64) + self.view.origin_wx,
            np.asarray(sy, dtype=np.float64) + self.view.origin_wy,
            self.view.zoom,
        )


def _bbox_world_extent(bbox: BoundingBox, zoom: int) -> tuple[float, float, float, float]:
    wx0, wy0 = lonlat_to_world(bbox.west, bbox.north, zoom)
    wx1, wy1 = lonlat_to_world(bbox.east, bbox.south, zoom)
    return wx0, wy0, wx1 - wx0, wy1 - wy0


def fit_view(bbox: BoundingBox, screen_w: int, screen_h: int) -> ViewState:
    """Largest integer zoom at which ``bbox`` fits the screen, centered.

    Clamped to [MIN_ZOOM, MAX_ZOOM].
    """
    chosen = MIN_ZOOM
    for zoom in range(MAX_ZOOM, MIN_ZOOM - 1, -1):
        _, _, w, h = _bbox_world_extent(bbox, zoom)
        if w <= screen_w and h <= screen_h:
            chosen = zoom
            break
    wx0, wy0, w, h = _bbox_world_extent(bbox, chosen)
    return ViewState(
        zoom=chosen,
        origin_wx=wx0 + w / 2.0 - screen_w / 2.0,
        origin_wy=wy0 + h / 2.0 - screen_h / 2.0,
        screen_w=int(screen_w),
        screen_h=int(screen_h),
    )
