"""Voronoi tessellation as the dual of the Delaunay triangulation.

Cells are computed per seed by intersecting the clip rectangle with the
perpendicular-bisector half-planes of the seed's Delaunay neighbors
(which is exactly the Voronoi cell).  ``voronoi_edges`` is the fast
line-drawing path used by the layer: one segment per dual edge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .delaunay import Triangulation, delaunay

__all__ = ["VoronoiDiagram", "voronoi", "voronoi_edges", "circumcenters"]

Rect = tuple[float, float, float, float]  # x0, y0, x1, y1


@dataclass
class VoronoiDiagram:
    seeds: np.ndarray           # (n, 2), deduplicated
    cells: list                 # per seed: (k, 2) closed convex polygon, may be empty
    clip_rect: Rect


def _rect_poly(rect: Rect) -> np.ndarray:
    x0, y0, x1, y1 = rect
    return np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]], dtype=np.float64)


def _clip_halfplane(poly: np.ndarray, seed, other) -> np.ndarray:
    """Keep the part of ``poly`` closer to ``seed`` than to ``other``."""
    if len(poly) == 0:
        return poly
    mid = 0.5 * (np.asarray(seed) + np.asarray(other))
    normal = np.asarray(seed) - np.asarray(other)  # points toward the kept side
    d = (poly - mid) @ normal
    out = []
    k = len(poly)
    for i in range(k):
        j = (i + 1) % k
        di, dj = d[i], d[j]
        if di >= 0:
            out.append(poly[i])
        if (di > 0) != (dj > 0) and di != dj:
            t = di / (di - dj)
            out.append(poly[i] + t * (poly[j] - poly[i]))
    if len(out) < 3:
        return np.empty((0, 2), dtype=np.float64)
    return np.asarray(out, dtype=np.float64)


def _neighbor_sets(tri: Triangulation) -> list[set]:
    nbrs: list[set] = [set() for _ in range(tri.n_points)]
    for a, b, c in tri.triangles:
        nbrs[a].update((b, c))
        nbrs[b].update((a, c))
        nbrs[c].update((a, b))
    return nbrs


def voronoi(points, clip_rect: Rect) -> VoronoiDiagram:
    """Voronoi cells of a point set, clipped to a rectangle."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be an (n, 2) array")
    pts = np.unique(pts[np.isfinite(pts).all(axis=1)], axis=0)
    if len(pts) == 0:
        raise ValueError("no seeds")

    base = _rect_poly(clip_rect)
    n = len(pts)
    if n == 1:
        return VoronoiDiagram(pts, [base], clip_rect)

    if n == 2:
        nbrs: list = [{1}, {0}]
    else:
        tri = delaunay(pts)
        if tri.degenerate:
            # collinear seeds: every pair is a potential neighbor
            nbrs = [set(range(n)) - {i} for i in range(n)]
        else:
            nbrs = _neighbor_sets(tri)
            pts = tri.points  # same dedup, same order

    cells = []
    for i in range(n):
        poly = base
        for j in nbrs[i]:
            poly = _clip_halfplane(poly, pts[i], pts[j])
            if len(poly) == 0:
                break
        cells.append(poly)
    return VoronoiDiagram(pts, cells, clip_rect)


def circumcenters(tri: Triangulation) -> np.ndarray:
    """Circumcenter of every triangle, shape (m, 2)."""
    a = tri.points[tri.triangles[:, 0]]
    b = tri.points[tri.triangles[:, 1]]
    c = tri.points[tri.triangles[:, 2]]
    ab = b - a
    ac = c - a
    d = 2.0 * (ab[:, 0] * ac[:, 1] - ab[:, 1] * ac[:, 0])
    ab2 = (ab * ab).sum(axis=1)
    ac2 = (ac * ac).sum(axis=1)
    ux = (ac[:, 1] * ab2 - ab[:, 1] * ac2) / d
    uy = (ab[:, 0] * ac2 - ac[:, 0] * ab2) / d
    return a + np.stack([ux, uy], axis=1)


def voronoi_edges(points, clip_rect: Rect) -> np.ndarray:
    """Dual-edge segments (x0, y0, x1, y1) for line rendering.

    Internal Delaunay edges map to the segment between the adjacent
    circumcenters; hull edges to an outward ray truncated at a length
    that exceeds the clip rectangle.
    """
    pts = np.asarray(points, dtype=np.float64)
    pts = np.unique(pts[np.isfinite(pts).all(axis=1)], axis=0)
    x0r, y0r, x1r, y1r = clip_rect
    span = float(max(x1r - x0r, y1r - y0r)) * 4.0 + 1.0

    if len(pts) < 2:
        return np.empty((0, 4), dtype=np.float64)
    if len(pts) == 2:
        mid = 0.5 * (pts[0] + pts[1])
        d = pts[1] - pts[0]
        perp = np.array([-d[1], d[0]])
        perp = perp / np.hypot(*perp)
        p0 = mid - perp * span
        p1 = mid + perp * span
        return np.array([[p0[0], p0[1], p1[0], p1[1]]])

    tri = delaunay(pts)
    if tri.degenerate:
        # collinear seeds: bisector lines between consecutive points
        order = np.lexsort((tri.points[:, 1], tri.points[:, 0]))
        p = tri.points[order]
        mids = 0.5 * (p[:-1] + p[1:])
        d = p[1:] - p[:-1]
        norm = np.hypot(d[:, 0], d[:, 1])[:, None]
        perp = np.stack([-d[:, 1], d[:, 0]], axis=1) / norm
        a = mids - perp * span
        b = mids + perp * span
        return np.concatenate([a, b], axis=1)

    t = tri.triangles
    m = len(t)
    centers = circumcenters(tri)

    # map sorted edge -> (tri, opposite-vertex) pairs
    edges = np.concatenate([t[:, [1, 2]], t[:, [2, 0]], t[:, [0, 1]]])
    tri_ids = np.tile(np.arange(m), 3)
    key = np.sort(edges, axis=1)
    order = np.lexsort((key[:, 1], key[:, 0]))
    key_s = key[order]
    tri_s = tri_ids[order]
    edge_s = edges[order]
    same = (key_s[:-1] == key_s[1:]).all(axis=1)

    segs = []
    # internal edges: consecutive pairs with the same key
    i1 = np.nonzero(same)[0]
    if len(i1):
        c0 = centers[tri_s[i1]]
        c1 = centers[tri_s[i1 + 1]]
        segs.append(np.concatenate([c0, c1], axis=1))

    # hull edges: keys appearing once -> outward ray
    once = np.ones(len(key_s), dtype=bool)
    once[i1] = False
    once[i1 + 1] = False
    h = np.nonzero(once)[0]
    if len(h):
        a = tri.points[edge_s[h, 0]]
        b = tri.points[edge_s[h, 1]]
        c0 = centers[tri_s[h]]
        d = b - a
        norm = np.hypot(d[:, 0], d[:, 1])[:, None]
        # edge (v[j+1], v[j+2]) of a CCW triangle: outward normal is its right side
        outward = np.stack([d[:, 1], -d[:, 0]], axis=1) / norm
        c1 = c0 + outward * span
        segs.append(np.concatenate([c0, c1], axis=1))

    if not segs:
        return np.empty((0, 4), dtype=np.float64)
    return np.concatenate(segs, axis=0)
