"""Entry point: ``render <csv> --kind contour --out fig.png``.

Exit codes: 0 on success, 2 on malformed or inconsistent input.
"""

import argparse
import os
import sys

from .figures import PlotSpec, render_contour, render_sweep
from .reader import RenderError


def build_parser():
    p = argparse.ArgumentParser(
        prog="render",
        description="Render simulator CSV output (map or sweep) to a PNG.")
    p.add_argument("csv", help="input CSV written by the cherenkov CLI")
    p.add_argument("--kind", default="contour",
                   choices=("contour", "ridge-overlay", "sweep-line"))
    p.add_argument("--out", default=None,
                   help="output image (default: <csv stem>.png)")
    p.add_argument("--column", default="theta_rad",
                   help="y column for --kind sweep-line")
    p.add_argument("--xlabel", default="")
    p.add_argument("--ylabel", default="")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    out = args.out or os.path.splitext(args.csv)[0] + ".png"
    try:
        spec = PlotSpec(csv_path=args.csv, kind=args.kind, out_path=out,
                        xlabel=args.xlabel, ylabel=args.ylabel,
                        column=args.column)
        if spec.kind == "sweep-line":
            render_sweep(spec)
        else:
            render_contour(spec)
    except (RenderError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
