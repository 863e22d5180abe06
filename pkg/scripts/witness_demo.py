#!/usr/bin/env python3
"""Witness searches at dims 2 (exhaustive net) and 4 (random net)."""

import json
import sys
from pathlib import Path

from carlab import cli

OUT = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out")


def main() -> int:
    OUT.mkdir(parents=True, exist_ok=True)
    runs = [
        ["fsigma-search", "--dim", "2", "--pairs", "25", "--epsilon", "0.4",
         "--seed", "7"],
        ["fsigma-search", "--dim", "4", "--pairs", "25", "--epsilon", "0.4",
         "--net", "random", "--net-size", "3000", "--seed", "7"],
    ]
    for argv in runs:
        dim = argv[2]
        path = OUT / f"fsigma_dim{dim}.json"
        code = cli.main(argv + ["--output", str(path)])
        if code != 0:
            return code
        summary = json.loads(path.read_text())["summary"]
        print(f"dim {dim}: {summary['found']}/{summary['pairs']} witnesses found "
              f"({summary['net_mode']} net, {summary['net_size']} elements)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
