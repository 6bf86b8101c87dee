"""render --figure <id> --data-dir <dir> --out <file>"""

from __future__ import annotations

import argparse
import sys

from .recipes import RECIPES
from .render import render


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="render",
                                 description="render one study figure from CSVs")
    ap.add_argument("--figure", required=True, choices=sorted(RECIPES))
    ap.add_argument("--data-dir", required=True)
    ap.add_argument("--out", required=True)
    args = ap.parse_args(argv)
    try:
        result = render(args.figure, args.data_dir, args.out)
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {result.path} ({result.n_panels} panels)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
