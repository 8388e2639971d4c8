"""Numba rasterization kernels for the software framebuffer.

All kernels accumulate fragments into per-pixel planes:

* ``acc[0..2]``  sum of alpha-weighted RGB (0..1 floats)
* ``acc[3]``     sum of alpha
* ``acc[4]``     sum of log(1 - alpha)  (log transmittance)

A batch is resolved to a single premultiplied image afterwards, so
fragment order within one batch does not matter; batches composite
over each other in draw order.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _frag(acc, W, xi, yi, r, g, b, a, lt):
    idx = yi * W + xi
    acc[0, idx] += r * a
    acc[1, idx] += g * a
    acc[2, idx] += b * a
    acc[3, idx] += a
    acc[4, idx] += lt


@njit(cache=True)
def accum_points(acc, W, H, xs, ys, colors, size):
    """Splat each point as a size x size screen-aligned quad."""
    half = size * 0.5
    for i in range(xs.shape[0]):
        x = xs[i]
        y = ys[i]
        if not (math.isfinite(x) and math.isfinite(y)):
            continue
        r = colors[i, 0]
        g = colors[i, 1]
        b = colors[i, 2]
        a = colors[i, 3]
        lt = math.log1p(-a) if a < 1.0 else -745.0
        x0 = int(math.floor(x - half + 0.5))
        y0 = int(math.floor(y - half + 0.5))
        for yi in range(max(y0, 0), min(y0 + size, H)):
            for xi in range(max(x0, 0), min(x0 + size, W)):
                _frag(acc, W, xi, yi, r, g, b, a, lt)


@njit(cache=True)
def accum_lines(acc, W, H, x0s, y0s, x1s, y1s, colors, width):
    """DDA line rasterization with square dilation for width > 1."""
    wlo = -(width - 1) // 2
    whi = wlo + width
    for i in range(x0s.shape[0]):
        ax = x0s[i]
        ay = y0s[i]
        bx = x1s[i]
        by = y1s[i]
        if not (math.isfinite(ax) and math.isfinite(ay)
                and math.isfinite(bx) and math.isfinite(by)):
            continue
        # Liang-Barsky clip to the (width-expanded) viewport
        t0 = 0.0
        t1 = 1.0
        dx = bx - ax
        dy = by - ay
        ok = True
        for side in range(4):
            if side == 0:
                p = -dx
                q = ax - (-float(width))
            elif side == 1:
                p = dx
                q = (W + float(width)) - ax
            elif side == 2:
                p = -dy
                q = ay - (-float(width))
            else:
                p = dy
                q = (H + float(width)) - ay
            if p == 0.0:
                if q < 0.0:
                    ok = False
                    break
            else:
                t = q / p
                if p < 0.0:
                    if t > t1:
                        ok = False
                        break
                    if t > t0:
                        t0 = t
                else:
                    if t < t0:
                        ok = False
                        break
                    if t < t1:
                        t1 = t
        if not ok:
            continue
        cax = ax + t0 * dx
        cay = ay + t0 * dy
        cbx = ax + t1 * dx
        cby = ay + t1 * dy

        r = colors[i, 0]
        g = colors[i, 1]
        b = colors[i, 2]
        a = colors[i, 3]
        lt = math.log1p(-a) if a < 1.0 else -745.0

        steps = int(max(abs(cbx - cax), abs(cby - cay))) + 1
        sx = (cbx - cax) / steps
        sy = (cby - cay) / steps
        x = cax
        y = cay
        for s in range(steps + 1):
            xc = int(x)
            yc = int(y)
            if width == 1:
                if 0 <= xc < W and 0 <= yc < H:
                    _frag(acc, W, xc, yc, r, g, b, a, lt)
            else:
                for yo in range(wlo, whi):
                    yi = yc + yo
                    if yi < 0 or yi >= H:
                        continue
                    for xo in range(wlo, whi):
                        xi = xc + xo
                        if 0 <= xi < W:
                            _frag(acc, W, xi, yi, r, g, b, a, lt)
            x += sx
            y += sy


@njit(cache=True)
def accum_polygon(acc, W, H, verts, ring_starts, r, g, b, a):
    """Even-odd scanline fill of a polygon (outer ring plus holes).

    ``verts`` is (n, 2); ``ring_starts`` delimits rings (last entry is n).
    Pixel centers at (x + 0.5, y + 0.5).
    """
    lt = math.log1p(-a) if a < 1.0 else -745.0
    n = verts.shape[0]
    ymin = H
    ymax = 0
    for i in range(n):
        yv = verts[i, 1]
        iy = int(math.floor(yv))
        if iy < ymin:
            ymin = iy
        if iy + 1 > ymax:
            ymax = iy + 1
    if ymin < 0:
        ymin = 0
    if ymax > H:
        ymax = H

    xs = np.empty(n + 8, np.float64)
    nrings = ring_starts.shape[0] - 1
    for yi in range(ymin, ymax):
        yc = yi + 0.5
        cnt = 0
        for ri in range(nrings):
            lo = ring_starts[ri]
            hi = ring_starts[ri + 1]
            for i in range(lo, hi):
                j = i + 1 if i + 1 < hi else lo
                y0 = verts[i, 1]
                y1 = verts[j, 1]
                if (y0 <= yc) != (y1 <= yc):
                    t = (yc - y0) / (y1 - y0)
                    xs[cnt] = verts[i, 0] + t * (verts[j, 0] - verts[i, 0])
                    cnt += 1
        # insertion sort (crossing counts are small)
        for i in range(1, cnt):
            v = xs[i]
            j = i - 1
            while j >= 0 and xs[j] > v:
                xs[j + 1] = xs[j]
                j -= 1
            xs[j + 1] = v
        k = 0
        while k + 1 < cnt:
            xa = int(math.ceil(xs[k] - 0.5))
            xb = int(math.ceil(xs[k + 1] - 0.5))
            if xa < 0:
                xa = 0
            if xb > W:
                xb = W
            for xi in range(xa, xb):
                _frag(acc, W, xi, yi, r, g, b, a, lt)
            k += 2


@njit(cache=True)
def accum_sprites(acc, W, H, img, xs, ys, scale):
    """Nearest-neighbor blit of an RGBA sprite centered at each position."""
    sh = img.shape[0]
    sw = img.shape[1]
    dw = max(int(round(sw * scale)), 1)
    dh = max(int(round(sh * scale)), 1)
    for i in range(xs.shape[0]):
        x = xs[i]
        y = ys[i]
        if not (math.isfinite(x) and math.isfinite(y)):
            continue
        x0 = int(math.floor(x - dw * 0.5 + 0.5))
        y0 = int(math.floor(y - dh * 0.5 + 0.5))
        for dy in range(dh):
            yi = y0 + dy
            if yi < 0 or yi >= H:
                continue
            sy = min(int(dy * sh / dh), sh - 1)
            for dx in range(dw):
                xi = x0 + dx
                if xi < 0 or xi >= W:
                    continue
                sx = min(int(dx * sw / dw), sw - 1)
                a = img[sy, sx, 3] / 255.0
                if a <= 0.0:
                    continue
                r = img[sy, sx, 0] / 255.0
                g = img[sy, sx, 1] / 255.0
                b = img[sy, sx, 2] / 255.0
                lt = math.log1p(-a) if a < 1.0 else -745.0
                _frag(acc, W, xi, yi, r, g, b, a, lt)
