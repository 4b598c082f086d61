"""cascade-plots command line: render figures from harness CSVs."""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURE_KINDS, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cascade-plots",
        description="Render figures from cascade-lab experiment CSVs.")
    subs = parser.add_subparsers(dest="command", required=True)
    sub = subs.add_parser("render", help="render one figure")
    sub.add_argument("--kind", required=True, choices=FIGURE_KINDS)
    sub.add_argument("--in", dest="inputs", required=True, nargs="+",
                     help="input CSV file(s)")
    sub.add_argument("--out", required=True, help="output .png or .svg")
    sub.add_argument("--linear-x", action="store_true",
                     help="force a linear x axis")
    sub.add_argument("--linear-y", action="store_true",
                     help="force a linear y axis")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(kind=args.kind, inputs=tuple(args.inputs),
                          out=args.out, logx=not args.linear_x,
                          logy=not args.linear_y)
        path = render(spec)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
