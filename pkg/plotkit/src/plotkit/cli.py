"""plotkit render --spec fig.json [--out path]

Reads a figure spec (kind, input_csv, output), resolves paths relative to the
spec file, and writes the image.  Exit codes: 0 success, 2 bad spec/input.
"""

from __future__ import annotations

import argparse
import json
import pathlib
import sys

from .figures import SchemaError, render


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="plotkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", default=None, help="override the spec's output path")
    args = parser.parse_args(argv)

    spec_path = pathlib.Path(args.spec)
    try:
        spec = json.loads(spec_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"cannot read spec {args.spec}: {exc}\n")
        return 2
    if args.out is not None:
        spec["output"] = args.out
    try:
        out = render(spec, base_dir=spec_path.parent)
    except SchemaError as exc:
        sys.stderr.write(f"figure spec error: {exc}\n")
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
