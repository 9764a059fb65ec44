"""Batch rendering front end: `plot <subcommand> --in FILES --out PNG`.

Exit codes: 0 success, 2 schema or argument error, 4 IO error.
"""

from __future__ import annotations

import argparse
import sys


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot", description="Render figures from exported tables; "
                                 "no physics is recomputed.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sensitivity", help="coupling-reach curves")
    p.add_argument("--in", dest="inputs", nargs="+", required=True,
                   metavar="CSV", help="sensitivity tables")
    p.add_argument("--out", required=True, help="output image path")
    p.add_argument("--bounds", nargs="*", default=[], metavar="CSV",
                   help="bound curves to shade")
    p.add_argument("--labels", nargs="*", help="curve labels (default: stems)")
    p.add_argument("--inset-f-hz", type=float,
                   help="zoom inset centered on this frequency")
    p.add_argument("--inset-span-hz", type=float,
                   help="inset width (default 0.1%% of the center)")
    p.add_argument("--title")

    p = sub.add_parser("budget", help="noise-budget panels")
    p.add_argument("--in", dest="inputs", nargs="+", required=True,
                   metavar="CSV", help="budget tables")
    p.add_argument("--out", required=True)
    p.add_argument("--labels", nargs="*")
    p.add_argument("--title")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    import matplotlib
    matplotlib.use("Agg")
    from . import plots

    try:
        if args.command == "sensitivity":
            plots.plot_sensitivity(
                args.inputs, out=args.out, bounds=args.bounds,
                labels=args.labels, inset_f_hz=args.inset_f_hz,
                inset_span_hz=args.inset_span_hz, title=args.title)
        else:
            plots.plot_budget(args.inputs, out=args.out, labels=args.labels,
                              title=args.title)
    except ValueError as exc:  # includes SchemaError
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
