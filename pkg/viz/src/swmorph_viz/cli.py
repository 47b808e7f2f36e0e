"""Command line entry points: render one figure, or batch a directory."""

import argparse
import json
import sys

from swmorph_viz.batch import figure_set
from swmorph_viz.render import PlotJob, render
from swmorph_viz.snapshots import SnapshotFormatError

EXIT_OK = 0
EXIT_ERROR = 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="swmorph-viz",
        description="Plot solver snapshot CSV files.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_render = sub.add_parser("render", help="render a single figure")
    p_render.add_argument("--snapshot", action="append", required=True,
                          help="snapshot CSV; repeat for overlays")
    p_render.add_argument("--field", default="eta",
                          help="h, hu, hv, hC, zb, eta or derived C")
    p_render.add_argument("--kind", default="heatmap",
                          choices=["heatmap", "surface", "profile",
                                   "compare"])
    p_render.add_argument("--out", required=True, help="output image path")
    p_render.add_argument("--data", help="two-column measured profile")
    p_render.add_argument("--slice-y", type=float, dest="slice_y",
                          help="profile along constant y")
    p_render.add_argument("--slice-x", type=float, dest="slice_x",
                          help="profile along constant x")
    p_render.add_argument("--title")

    p_batch = sub.add_parser("batch", help="regenerate the figure set")
    p_batch.add_argument("--snapshots", required=True,
                         help="directory containing snapshot CSVs")
    p_batch.add_argument("--out", required=True, help="output directory")
    p_batch.add_argument("--data", help="two-column measured profile")
    return parser


def cmd_render(args):
    slice_axis = None
    slice_value = None
    if args.slice_y is not None:
        slice_axis, slice_value = "y", args.slice_y
    if args.slice_x is not None:
        slice_axis, slice_value = "x", args.slice_x
    job = PlotJob(snapshots=tuple(args.snapshot), field=args.field,
                  kind=args.kind, out=args.out, data=args.data,
                  slice_axis=slice_axis, slice_value=slice_value,
                  title=args.title)
    info = render(job)
    print(json.dumps(info, indent=2))
    return EXIT_OK


def cmd_batch(args):
    report = figure_set(args.snapshots, args.out, data=args.data)
    print(json.dumps(report, indent=2))
    return EXIT_OK if not report["parse_errors"] else EXIT_ERROR


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "render":
            return cmd_render(args)
        return cmd_batch(args)
    except (SnapshotFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
