"""terramap: geographical visualization on slippy-map tiles.

Typical use mirrors the matplotlib model::

    import terramap
    data = terramap.read_csv("bus.csv")
    terramap.dot(data)
    terramap.show()            # or terramap.savefig("map.png")
"""

from .app import (add_layer, bench, clear, convexhull, delaunay, dot, geojson,
                  graph, hist, kde, markers, savefig, set_bbox, set_tile_cache,
                  shapefiles, show, tile_provider, voronoi)
from .colormap import ColorMap, colorbrewer, create_set_cmap
from .datatable import DataTable, read_csv, write_csv
from .layers import BaseLayer
from .projection import BoundingBox
from .render import BatchPainter
from .tiles import TileProvider

__version__ = "0.1.0"

#: construct a table from in-memory columns
from_columns = DataTable

__all__ = [
    "DataTable", "from_columns", "read_csv", "write_csv",
    "BoundingBox", "ColorMap", "colorbrewer", "create_set_cmap",
    "BatchPainter", "BaseLayer", "TileProvider",
    "dot", "hist", "kde", "markers", "graph", "voronoi", "delaunay",
    "convexhull", "shapefiles", "geojson", "add_layer", "set_bbox",
    "tile_provider", "set_tile_cache", "show", "savefig", "clear", "bench",
]
