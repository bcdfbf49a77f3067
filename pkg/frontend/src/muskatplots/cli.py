"""Figure rendering entry point.

    muskat-plots render --kind norm_decay --log runs/linear --out decay.png
    muskat-plots render --kind snapshots --log runs/a --log runs/b --out s.png
"""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURE_KINDS, FigureSpec, render
from .logdir import SchemaError

__all__ = ["main"]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="muskat-plots",
                                     description="figures from run-log directories")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one figure")
    p.add_argument("--kind", required=True, choices=FIGURE_KINDS)
    p.add_argument("--log", action="append", required=True, dest="logs",
                   help="run-log directory (repeatable)")
    p.add_argument("--out", required=True, help="output image path")
    p.add_argument("--log-scale", action="store_true")

    args = parser.parse_args(argv)
    try:
        spec = FigureSpec(kind=args.kind, log_dirs=args.logs,
                          output=args.out, log_scale=args.log_scale)
        path = render(spec)
    except (SchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
