"""Command-line face over the facade.

``terramap VISUALIZATION INPUT`` opens the interactive viewer, or
exports a PNG with ``--out``.  ``terramap bench`` runs the performance
harness and writes its table, CSV and figure.  Exit code 0 on success,
2 on input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import app
from .datatable import CsvParseError, read_csv
from .projection import BoundingBox

VIZ_COMMANDS = ("dot", "hist", "kde", "graph", "voronoi", "delaunay",
                "convexhull", "shapefile", "geojson")


class InputError(Exception):
    pass


def _parse_size(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise InputError(f"--size must look like 800x600, got {text!r}") from None


def _parse_bbox(text: str) -> BoundingBox:
    try:
        n, w, s, e = (float(v) for v in text.split(","))
        return BoundingBox(north=n, west=w, south=s, east=e)
    except ValueError as exc:
        raise InputError(f"bad --bbox {text!r}: {exc}") from None


def _parse_bw(text: str) -> tuple[float, float]:
    try:
        sx, sy = (float(v) for v in text.split(","))
        return sx, sy
    except ValueError:
        raise InputError(f"--bw must look like 5,5, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="terramap", description="geographical visualizations on map tiles"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name in VIZ_COMMANDS:
        p = sub.add_parser(name, help=f"{name} visualization")
        p.add_argument("input", help="CSV file (shapefile/geojson: vector file)")
        p.add_argument("--out", help="write a PNG instead of opening the viewer")
        p.add_argument("--size", default="1280x768", help="viewport WxH pixels")
        p.add_argument("--bbox", help="view bounds N,W,S,E in degrees")
        p.add_argument("--cmap", default=None, help="colormap name (e.g. hot)")
        p.add_argument("--tiles", default=None,
                       help="tile provider preset or {z}/{x}/{y} template")
        p.add_argument("--tile-cache", default=None, help="tile cache directory")
        p.add_argument("--no-tiles", action="store_true", help="blank base map")
        p.add_argument("--lat", default="lat", help="latitude column name")
        p.add_argument("--lon", default="lon", help="longitude column name")
        p.add_argument("--alpha", type=int, default=None)
        if name == "dot":
            p.add_argument("--point-size", type=int, default=2)
        if name == "hist":
            p.add_argument("--binsize", type=int, default=8)
            p.add_argument("--colorscale", default="sqrt",
                           choices=("lin", "log", "sqrt"))
        if name == "kde":
            p.add_argument("--bw", default="5,5", help="bandwidth SX,SY in px")
            p.add_argument("--cut-below", type=float, default=0.0)
            p.add_argument("--clip-above", type=float, default=None)
            p.add_argument("--scaling", default="sqrt", choices=("lin", "log", "sqrt"))
        if name == "graph":
            p.add_argument("--src-lat", default="src_lat")
            p.add_argument("--src-lon", default="src_lon")
            p.add_argument("--dest-lat", default="dest_lat")
            p.add_argument("--dest-lon", default="dest_lon")
            p.add_argument("--linewidth", type=int, default=1)
        if name in ("voronoi", "convexhull", "geojson"):
            p.add_argument("--fill", action="store_true")

    b = sub.add_parser("bench", help="million-sample performance harness")
    b.add_argument("--samples", type=int, default=1_000_000)
    b.add_argument("--reps", type=int, default=10)
    b.add_argument("--size", default="1280x768")
    b.add_argument("--out-dir", default=".", help="where bench.csv/bench.png go")
    return parser


def _load_table(args, require_latlon=True):
    try:
        table = read_csv(args.input)
    except FileNotFoundError:
        raise InputError(f"input file not found: {args.input}")
    except CsvParseError as exc:
        raise InputError(str(exc))
    if not require_latlon:
        return table
    for col in (args.lat, args.lon):
        if col not in table:
            raise InputError(f"input has no column {col!r}")
    if args.lat != "lat":
        table = table.rename(args.lat, "lat")
    if args.lon != "lon":
        table = table.rename(args.lon, "lon")
    return table


def _run_viz(args) -> None:
    app.clear()
    if args.tiles:
        app.tile_provider(args.tiles)
    if args.tile_cache:
        app.set_tile_cache(args.tile_cache)
    if args.bbox:
        app.set_bbox(_parse_bbox(args.bbox))
    cmap = args.cmap
    alpha = args.alpha

    cmd = args.command
    try:
        if cmd == "shapefile":
            base = Path(args.input)
            if not base.with_suffix(".shp").exists():
                raise InputError(f"shapefile not found: {base.with_suffix('.shp')}")
            app.shapefiles(args.input)
        elif cmd == "geojson":
            if not Path(args.input).exists():
                raise InputError(f"geojson file not found: {args.input}")
            app.geojson(args.input, fill=args.fill)
        else:
            # graph reads its own four coordinate columns, no lat/lon needed
            table = _load_table(args, require_latlon=(cmd != "graph"))
            if cmd == "dot":
                app.dot(table, point_size=args.point_size,
                        alpha=alpha if alpha is not None else 255)
            elif cmd == "hist":
                app.hist(table, binsize=args.binsize, colorscale=args.colorscale,
                         cmap=cmap or "hot")
            elif cmd == "kde":
                app.kde(table, bw=_parse_bw(args.bw), cmap=cmap or "hot",
                        cut_below=args.cut_below, clip_above=args.clip_above,
                        scaling=args.scaling)
            elif cmd == "graph":
                for col in (args.src_lat, args.src_lon, args.dest_lat, args.dest_lon):
                    if col not in table:
                        raise InputError(f"input has no column {col!r}")
                app.graph(table, src_lat=args.src_lat, src_lon=args.src_lon,
                          dest_lat=args.dest_lat, dest_lon=args.dest_lon,
                          color=cmap or "hot",
                          alpha=alpha if alpha is not None else 32,
                          linewidth=args.linewidth)
            elif cmd == "voronoi":
                app.voronoi(table, fill=args.fill, cmap=cmap or "hot")
            elif cmd == "delaunay":
                app.delaunay(table, cmap=cmap)
            elif cmd == "convexhull":
                app.convexhull(table, fill=args.fill)
    except (ValueError, KeyError) as exc:
        raise InputError(str(exc))

    w, h = _parse_size(args.size)
    if args.no_tiles:
        # savefig/show honor the canvas provider; blank map = no provider fetches
        import terramap.app as _a
        _a._state.provider = None
    if args.out:
        if args.no_tiles:
            _savefig_blank(args.out, w, h)
        else:
            app.savefig(args.out, width=w, height=h)
        print(f"wrote {args.out}")
    else:
        app.show(width=w, height=h)


def _savefig_blank(out, w, h):
    from .render import write_png
    from .viewer import Engine
    from .render import RenderTarget

    engine = Engine(target=RenderTarget(w, h), show_tiles=False)
    for layer in app._state.layers:
        engine.add_layer(layer)
    if app._state.bbox is not None:
        engine.set_bbox(app._state.bbox)
    engine.render_frame()
    write_png(engine.target.read_pixels(), out)
    app.clear()


def _run_bench(args) -> None:
    w, h = _parse_size(args.size)
    report = app.bench(n_samples=args.samples, reps=args.reps, width=w, height=h)
    print(report.to_text())
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report.write_csv(out_dir / "bench.csv")
    report.write_figure(out_dir / "bench.png")
    print(f"wrote {out_dir / 'bench.csv'} and {out_dir / 'bench.png'}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "bench":
            _run_bench(args)
        else:
            _run_viz(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
