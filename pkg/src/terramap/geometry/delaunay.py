"""Delaunay triangulation (incremental Bowyer-Watson)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._delaunay_core import _triangulate

__all__ = ["Triangulation", "delaunay", "unique_edges"]


@dataclass
class Triangulation:
    """Points plus CCW index triples; ``degenerate`` flags collinear input."""

    points: np.ndarray          # (n, 2) float64, deduplicated
    triangles: np.ndarray       # (m, 3) int32, counterclockwise
    degenerate: bool = False

    @property
    def n_points(self) -> int:
        return len(self.points)


def _dedup(points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be an (n, 2) array")
    pts = pts[np.isfinite(pts).all(axis=1)]
    return np.unique(pts, axis=0)  # exact-equality dedup, lexicographic order


def delaunay(points) -> Triangulation:
    """Triangulate a point set.

    Exactly-equal duplicates are removed first.  Raises ``ValueError``
    for fewer than 3 distinct points; fully collinear input yields an
    empty triangulation flagged ``degenerate``.
    """
    pts = _dedup(points)
    if len(pts) < 3:
        raise ValueError(f"need >= 3 distinct points, got {len(pts)}")
    tris = _triangulate(np.ascontiguousarray(pts))
    if len(tris) == 0:
        return Triangulation(pts, tris.reshape(0, 3), degenerate=True)

    # normalize orientation to CCW
    a = pts[tris[:, 0]]
    b = pts[tris[:, 1]]
    c = pts[tris[:, 2]]
    area2 = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - \
            (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    flip = area2 < 0
    if flip.any():
        tris = tris.copy()
        tris[flip, 1], tris[flip, 2] = tris[flip, 2], tris[flip, 1]
    return Triangulation(pts, tris)


def unique_edges(tri: Triangulation) -> np.ndarray:
    """Deduplicated (i, j) vertex index pairs of all triangle edges."""
    t = tri.triangles
    e = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
    e = np.sort(e, axis=1)
    return np.unique(e, axis=0)
