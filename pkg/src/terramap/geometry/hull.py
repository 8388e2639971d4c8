"""Convex hull by Andrew's monotone chain."""

from __future__ import annotations

import numpy as np

__all__ = ["convex_hull", "DegenerateHullError"]


class DegenerateHullError(ValueError):
    """Fewer than 3 distinct points, or all points collinear."""


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> np.ndarray:
    """Hull vertices in counterclockwise order, collinear points excluded.

    ``points`` is an (n, 2) array-like.  Raises
    :class:`DegenerateHullError` on degenerate input.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be an (n, 2) array")
    pts = np.unique(pts[np.isfinite(pts).all(axis=1)], axis=0)
    if len(pts) < 3:
        raise DegenerateHullError(f"need >= 3 distinct points, got {len(pts)}")

    pts_list = pts.tolist()  # lexicographically sorted by np.unique

    lower: list = []
    for p in pts_list:
        while len(lower) > 1 and _cross(lower[-2], lower[-1], p) <= 0.0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts_list):
        while len(upper) > 1 and _cross(upper[-2], upper[-1], p) <= 0.0:
            upper.pop()
        upper.append(p)

    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateHullError("all points are collinear")
    return np.asarray(hull, dtype=np.float64)
