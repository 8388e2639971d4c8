import math

import numpy as np
import pytest

from terramap.geometry import Grid2D, KdeParams, bin2d, kde_grid


def brute_force_bin2d(sx, sy, cell_px, width, height):
    grid = np.zeros((height, width))
    for x, y in zip(sx, sy):
        if not (math.isfinite(x) and math.isfinite(y)):
            continue
        ix = math.floor(x / cell_px)
        iy = math.floor(y / cell_px)
        if 0 <= ix < width and 0 <= iy < height:
            grid[iy, ix] += 1
    return grid


def test_grid2d_shape_validated():
    with pytest.raises(ValueError):
        Grid2D(0, 0, 2.0, 4, 3, np.zeros((4, 4)))


def test_kde_params_validation():
    with pytest.raises(ValueError):
        KdeParams(bw=(0.0, 5.0))
    with pytest.raises(ValueError):
        KdeParams(cut_below=-1.0)
    with pytest.raises(ValueError):
        KdeParams(cut_below=2.0, clip_above=1.0)
    with pytest.raises(ValueError):
        KdeParams(cells=0.5)


def test_bin2d_matches_brute_force_10k(rng):
    sx = rng.uniform(-50, 850, 10_000)
    sy = rng.uniform(-50, 650, 10_000)
    sx[::97] = np.nan
    grid = bin2d(sx, sy, 8, (800, 600))
    oracle = brute_force_bin2d(sx, sy, 8, grid.width, grid.height)
    np.testing.assert_array_equal(grid.values, oracle)


def test_bin2d_conservation(rng):
    # all points strictly inside the viewport: counts sum to n
    sx = rng.uniform(0, 799, 5_000)
    sy = rng.uniform(0, 599, 5_000)
    grid = bin2d(sx, sy, 16, (800, 600))
    assert grid.values.sum() == 5_000
    assert (grid.values >= 0).all()


def test_bin2d_cell_boundaries():
    grid = bin2d([0.0, 7.999, 8.0], [0.0, 0.0, 0.0], 8, (32, 8))
    assert grid.values[0, 0] == 2
    assert grid.values[0, 1] == 1


def test_bin2d_grid_covers_viewport():
    grid = bin2d([], [], 7, (100, 50))
    assert grid.width == math.ceil(100 / 7)
    assert grid.height == math.ceil(50 / 7)
    assert grid.values.sum() == 0


def test_bin2d_rejects_subpixel_cells():
    with pytest.raises(ValueError):
        bin2d([1.0], [1.0], 0.5, (100, 100))


# -- KDE --------------------------------------------------------------------

def direct_kde_oracle(sx, sy, params, viewport):
    """Per-point scatter of the truncated separable kernel (no FFT/conv)."""
    cell = float(params.cells)
    vw, vh = viewport
    width = max(math.ceil(vw / cell), 1)
    height = max(math.ceil(vh / cell), 1)

    def taps(sigma_px):
        s = sigma_px / cell
        radius = max(math.ceil(3.0 * s), 1)
        x = np.arange(-radius, radius + 1, dtype=float)
        k = np.exp(-0.5 * (x / s) ** 2)
        return k / k.sum(), radius

    kx, rx = taps(params.bw[0])
    ky, ry = taps(params.bw[1])
    dens = np.zeros((height, width))
    for x, y in zip(np.asarray(sx, float), np.asarray(sy, float)):
        if not (math.isfinite(x) and math.isfinite(y)):
            continue
        ix = math.floor(x / cell)
        iy = math.floor(y / cell)
        if not (-rx <= ix < width + rx and -ry <= iy < height + ry):
            continue
        for dy in range(-ry, ry + 1):
            cy = iy + dy
            if not 0 <= cy < height:
                continue
            wy = ky[dy + ry]
            for dx in range(-rx, rx + 1):
                cx = ix + dx
                if 0 <= cx < width:
                    dens[cy, cx] += wy * kx[dx + rx]
    if params.cut_below > 0:
        dens[dens < params.cut_below] = 0.0
    if params.clip_above is not None:
        dens = np.minimum(dens, params.clip_above)
    return dens


def test_kde_separable_matches_direct_32x32(rng):
    params = KdeParams(bw=(5.0, 3.0), cells=2.0)
    n = 300
    sx = rng.uniform(-20, 84, n)   # includes points outside the viewport
    sy = rng.uniform(-20, 84, n)
    grid = kde_grid(sx, sy, params, (64, 64))
    assert (grid.height, grid.width) == (32, 32)
    oracle = direct_kde_oracle(sx, sy, params, (64, 64))
    scale = max(oracle.max(), 1e-300)
    assert np.abs(grid.values - oracle).max() / scale < 1e-9


def test_kde_mass_conservation(rng):
    # points at least 3 sigma inside the grid contribute full unit mass
    params = KdeParams(bw=(4.0, 4.0), cells=2.0)
    n = 500
    margin = 3 * 4.0 + 4
    sx = rng.uniform(margin, 400 - margin, n)
    sy = rng.uniform(margin, 400 - margin, n)
    grid = kde_grid(sx, sy, params, (400, 400))
    assert grid.values.sum() == pytest.approx(n, rel=1e-6)


def test_kde_translation_equivariance(rng):
    params = KdeParams(bw=(3.0, 3.0), cells=2.0)
    sx = rng.uniform(100, 200, 200)
    sy = rng.uniform(100, 200, 200)
    g0 = kde_grid(sx, sy, params, (400, 400))
    shift_cells = 5
    g1 = kde_grid(sx + shift_cells * 2.0, sy, params, (400, 400))
    np.testing.assert_allclose(
        g1.values[:, shift_cells:], g0.values[:, :-shift_cells], atol=1e-12
    )


def test_kde_cut_below_and_clip_above(rng):
    sx = rng.normal(100, 5, 1000)
    sy = rng.normal(100, 5, 1000)
    raw = kde_grid(sx, sy, KdeParams(bw=(4.0, 4.0)), (200, 200))
    vmax = raw.values.max()
    cut = kde_grid(sx, sy, KdeParams(bw=(4.0, 4.0), cut_below=vmax / 2),
                   (200, 200))
    assert ((cut.values == 0) | (cut.values >= vmax / 2)).all()
    clipped = kde_grid(sx, sy, KdeParams(bw=(4.0, 4.0), clip_above=vmax / 2),
                       (200, 200))
    assert clipped.values.max() <= vmax / 2


def test_kde_values_nonnegative(rng):
    grid = kde_grid(rng.uniform(0, 100, 100), rng.uniform(0, 100, 100),
                    KdeParams(), (100, 100))
    assert (grid.values >= 0).all()
