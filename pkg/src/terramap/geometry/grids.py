"""Screen-space 2D histogram and gridded kernel density estimation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import convolve1d

__all__ = ["Grid2D", "KdeParams", "bin2d", "kde_grid"]


@dataclass
class Grid2D:
    """Uniform screen-space grid of float values, row-major."""

    origin_sx: float
    origin_sy: float
    cell_px: float
    width: int   # cells along x
    height: int  # cells along y
    values: np.ndarray  # shape (height, width)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (self.height, self.width):
            raise ValueError(
                f"values shape {self.values.shape} != (height={self.height}, width={self.width})"
            )


@dataclass
class KdeParams:
    """Gaussian KDE parameters; bandwidth is in screen pixels."""

    bw: tuple[float, float] = (5.0, 5.0)
    cut_below: float = 0.0
    clip_above: float | None = None
    cells: float = 2.0
    scaling: str = "sqrt"

    def __post_init__(self):
        sx, sy = self.bw
        if not (sx > 0 and sy > 0):
            raise ValueError(f"bandwidth must be positive, got {self.bw}")
        if self.cut_below < 0:
            raise ValueError("cut_below must be >= 0")
        if self.clip_above is not None and not self.clip_above > self.cut_below:
            raise ValueError("clip_above must exceed cut_below")
        if self.cells < 1:
            raise ValueError("cell resolution must be >= 1 px")


def _cell_counts(sx, sy, cell_px, width, height, origin_sx=0.0, origin_sy=0.0):
    """Bin points into a width x height grid of cell counts."""
    sx = np.asarray(sx, dtype=np.float64).ravel()
    sy = np.asarray(sy, dtype=np.float64).ravel()
    ok = np.isfinite(sx) & np.isfinite(sy)
    ix = np.floor((sx[ok] - origin_sx) / cell_px).astype(np.int64)
    iy = np.floor((sy[ok] - origin_sy) / cell_px).astype(np.int64)
    inside = (ix >= 0) & (ix < width) & (iy >= 0) & (iy < height)
    flat = iy[inside] * width + ix[inside]
    counts = np.bincount(flat, minlength=width * height).astype(np.float64)
    return counts.reshape(height, width)


def bin2d(sx, sy, cell_px: float, viewport: tuple[int, int]) -> Grid2D:
    """Count points per cell over a viewport-covering grid.

    Cell index is floor(screen / cell_px); the grid extends to whole
    cells covering the viewport, points beyond it are discarded and NaN
    coordinates skipped.
    """
    if cell_px < 1:
        raise ValueError("cell_px must be >= 1")
    vw, vh = viewport
    width = max(int(math.ceil(vw / cell_px)), 1)
    height = max(int(math.ceil(vh / cell_px)), 1)
    values = _cell_counts(sx, sy, cell_px, width, height)
    return Grid2D(0.0, 0.0, float(cell_px), width, height, values)


def _gauss_kernel(sigma_cells: float) -> np.ndarray:
    """Normalized 1D Gaussian taps truncated at radius 3 sigma."""
    radius = max(int(math.ceil(3.0 * sigma_cells)), 1)
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-0.5 * (x / sigma_cells) ** 2)
    return k / k.sum()


def kde_grid(sx, sy, params: KdeParams, viewport: tuple[int, int]) -> Grid2D:
    """Gridded Gaussian KDE over the viewport.

    Points are binned at ``params.cells`` px resolution, then convolved
    with a separable truncated Gaussian whose sigma is the bandwidth in
    pixels.  The returned values are unnormalized count mass per cell;
    binning extends 3 sigma beyond the viewport so near-edge points
    contribute their full mass.
    """
    cell = float(params.cells)
    bw_x, bw_y = (params.bw[0] / cell, params.bw[1] / cell)
    kx = _gauss_kernel(bw_x)
    ky = _gauss_kernel(bw_y)
    mx, my = len(kx) // 2, len(ky) // 2

    vw, vh = viewport
    width = max(int(math.ceil(vw / cell)), 1)
    height = max(int(math.ceil(vh / cell)), 1)
    counts = _cell_counts(
        sx, sy, cell, width + 2 * mx, height + 2 * my,
        origin_sx=-mx * cell, origin_sy=-my * cell,
    )
    dens = convolve1d(counts, kx, axis=1, mode="constant")
    dens = convolve1d(dens, ky, axis=0, mode="constant")
    dens = dens[my:my + height, mx:mx + width]

    if params.cut_below > 0:
        dens[dens < params.cut_below] = 0.0
    if params.clip_above is not None:
        np.minimum(dens, params.clip_above, out=dens)
    return Grid2D(0.0, 0.0, cell, width, height, dens)
