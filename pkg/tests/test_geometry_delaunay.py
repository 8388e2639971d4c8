import numpy as np
import pytest

from terramap.geometry import circumcenters, convex_hull, delaunay
from terramap.geometry.delaunay import unique_edges


def in_circumcircle_oracle(a, b, c, p):
    """Sign of the standard incircle determinant for a CCW triangle."""
    m = np.array([
        [a[0] - p[0], a[1] - p[1], (a[0] - p[0]) ** 2 + (a[1] - p[1]) ** 2],
        [b[0] - p[0], b[1] - p[1], (b[0] - p[0]) ** 2 + (b[1] - p[1]) ** 2],
        [c[0] - p[0], c[1] - p[1], (c[0] - p[0]) ** 2 + (c[1] - p[1]) ** 2],
    ])
    return np.linalg.det(m)


def assert_empty_circumcircles(tri, rel_tol=1e-9):
    pts = tri.points
    a = pts[tri.triangles[:, 0]]
    b = pts[tri.triangles[:, 1]]
    c = pts[tri.triangles[:, 2]]
    centers = circumcenters(tri)
    r2 = ((a - centers) ** 2).sum(axis=1)
    # every point must be outside (or on) every circumcircle
    d2 = ((pts[None, :, :] - centers[:, None, :]) ** 2).sum(axis=2)
    scale = np.maximum(r2[:, None], 1.0)
    violations = (r2[:, None] - d2) / scale > rel_tol
    assert not violations.any(), f"{violations.sum()} in-circle violations"


def hull_boundary_count(pts):
    """Points lying on the hull boundary, collinear ones included."""
    pts = np.asarray(pts, dtype=float)
    hull = convex_hull(pts)
    scale = max(np.abs(pts).max(), 1.0)
    on = np.zeros(len(pts), dtype=bool)
    for a, b in zip(hull, np.roll(hull, -1, axis=0)):
        d = b - a
        cross = d[0] * (pts[:, 1] - a[1]) - d[1] * (pts[:, 0] - a[0])
        t = ((pts - a) @ d) / (d @ d)
        on |= (np.abs(cross) <= 1e-9 * scale ** 2) & (t >= 0) & (t <= 1)
    return int(on.sum())


def euler_triangle_count(tri):
    n = tri.n_points
    h = hull_boundary_count(tri.points)
    return 2 * n - 2 - h


def test_simple_square():
    tri = delaunay([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert len(tri.triangles) == 2
    assert sorted(np.unique(tri.triangles)) == [0, 1, 2, 3]


def test_triangles_are_ccw(rng):
    tri = delaunay(rng.normal(size=(100, 2)))
    a = tri.points[tri.triangles[:, 0]]
    b = tri.points[tri.triangles[:, 1]]
    c = tri.points[tri.triangles[:, 2]]
    area2 = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - \
            (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    assert (area2 > 0).all()


def test_200_points_exhaustive_circumcircle_and_count():
    rng = np.random.default_rng(2024)
    pts = rng.uniform(0, 100, size=(200, 2))
    tri = delaunay(pts)
    assert_empty_circumcircles(tri, rel_tol=1e-9)
    assert len(tri.triangles) == euler_triangle_count(tri)


def test_determinant_oracle_spot_check(rng):
    # cross-check the vectorized circumcircle test against the raw
    # determinant form on a small instance
    pts = rng.normal(size=(30, 2))
    tri = delaunay(pts)
    for t in tri.triangles:
        a, b, c = tri.points[t]
        for p in tri.points:
            det = in_circumcircle_oracle(a, b, c, p)
            assert det < 1e-6  # positive determinant = strictly inside


def test_every_point_used(rng):
    for n in (10, 57, 300):
        tri = delaunay(rng.uniform(size=(n, 2)))
        assert set(np.unique(tri.triangles)) == set(range(tri.n_points))


def test_euler_count_random_sizes(rng):
    for n in (5, 23, 150, 800):
        tri = delaunay(rng.normal(size=(n, 2)))
        assert len(tri.triangles) == euler_triangle_count(tri)


def test_duplicates_deduplicated():
    pts = [(0, 0), (1, 0), (0, 1), (0, 0), (1, 0)]
    tri = delaunay(pts)
    assert tri.n_points == 3
    assert len(tri.triangles) == 1


def test_too_few_points():
    with pytest.raises(ValueError):
        delaunay([(0, 0), (1, 1)])
    with pytest.raises(ValueError):
        delaunay([(0, 0), (1, 1), (0, 0)])


def test_collinear_flagged_degenerate():
    tri = delaunay([(0, 0), (1, 1), (2, 2), (3, 3)])
    assert tri.degenerate
    assert len(tri.triangles) == 0


def test_cocircular_grid_is_valid():
    # a regular grid has many exactly-cocircular quadruples; any valid
    # tie-break is acceptable but the result must be a proper triangulation
    xs, ys = np.meshgrid(np.arange(8.0), np.arange(8.0))
    pts = np.stack([xs.ravel(), ys.ravel()], axis=1)
    tri = delaunay(pts)
    assert len(tri.triangles) == euler_triangle_count(tri)
    assert_empty_circumcircles(tri, rel_tol=1e-9)


def test_unique_edges(rng):
    tri = delaunay(rng.normal(size=(50, 2)))
    e = unique_edges(tri)
    assert (e[:, 0] < e[:, 1]).all()
    assert len(np.unique(e, axis=0)) == len(e)
    # Euler: edges = 3n - 3 - h for a Delaunay triangulation
    h = len(convex_hull(tri.points))
    assert len(e) == 3 * tri.n_points - 3 - h


def test_clustered_input(rng):
    # tight clusters with large empty space between them
    pts = np.concatenate([
        rng.normal(0, 0.01, size=(60, 2)),
        rng.normal(50, 0.01, size=(60, 2)),
        rng.normal([-30, 80], 0.01, size=(60, 2)),
    ])
    tri = delaunay(pts)
    assert len(tri.triangles) == euler_triangle_count(tri)
    assert_empty_circumcircles(tri, rel_tol=1e-9)
