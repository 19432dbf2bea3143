"""``render <spec.json>``: draw one figure from one CSV."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .render import RenderError, load_spec, render


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render a lines/contour/scatter figure from a CSV, per a JSON spec.",
    )
    parser.add_argument("spec", type=Path, help="path to the figure spec JSON")
    args = parser.parse_args(argv)
    try:
        result = render(load_spec(args.spec))
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(result.output_image)
    return 0


if __name__ == "__main__":
    sys.exit(main())
