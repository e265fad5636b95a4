"""figgen: render qdnoise result CSVs into SVG+PNG figures.

Exit codes: 0 success, 2 schema violation or bad arguments.
"""

from __future__ import annotations

import argparse
import sys

from .render import FigureSpec, render
from .schema import KINDS, SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figgen", description="Figures from qdnoise result CSVs"
    )
    parser.add_argument("--kind", required=True, choices=KINDS, help="figure kind")
    parser.add_argument(
        "--in",
        dest="inputs",
        required=True,
        nargs="+",
        metavar="CSV",
        help="input CSV file(s); fidelity-vs-time overlays several",
    )
    parser.add_argument("--out", required=True, metavar="PATH", help="output base path")
    parser.add_argument("--x-scale", choices=("linear", "log"), help="override x axis scale")
    parser.add_argument("--y-scale", choices=("linear", "log"), help="override y axis scale")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(
        kind=args.kind,
        inputs=tuple(args.inputs),
        output=args.out,
        x_scale=args.x_scale,
        y_scale=args.y_scale,
    )
    try:
        result = render(spec)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    for path in result.written:
        print(f"wrote {path}")
    if result.minima_count is not None:
        print(f"detected {result.minima_count} rate minima")
    return 0


if __name__ == "__main__":
    sys.exit(main())
