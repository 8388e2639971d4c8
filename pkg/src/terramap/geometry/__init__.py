"""Computational kernels behind the density and structure layers.

Everything here is pure: screen-space coordinates in, plain arrays out.
Layers adapt these results to colors and batches but add no geometry
logic of their own.
"""

from .grids import Grid2D, KdeParams, bin2d, kde_grid
from .hull import convex_hull
from .delaunay import Triangulation, delaunay
from .voronoi import VoronoiDiagram, voronoi, voronoi_edges, circumcenters

__all__ = [
    "Grid2D", "KdeParams", "bin2d", "kde_grid",
    "convex_hull",
    "Triangulation", "delaunay",
    "VoronoiDiagram", "voronoi", "voronoi_edges", "circumcenters",
]
