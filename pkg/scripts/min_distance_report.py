#!/usr/bin/env python3
"""Run the two minimum-distance experiments and print their summaries.

Writes min_distance.json (closed form vs the exact-image oracle, per
dimension) and product_distance.json (the two-qubit constant
adjudication) into the output directory.
"""

import json
import sys
from pathlib import Path

from carlab import cli

OUT = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out")


def main() -> int:
    OUT.mkdir(parents=True, exist_ok=True)
    for dim in (2, 3, 4):
        path = OUT / f"min_distance_dim{dim}.json"
        code = cli.main(
            ["min-distance", "--dim", str(dim), "--trials", "100", "--seed", "7",
             "--budget", "2000", "--output", str(path)]
        )
        if code != 0:
            return code
        summary = json.loads(path.read_text())["summary"]
        print(f"dim {dim}: max |closed - oracle| = {summary['max_abs_error']:.3e}")
    path = OUT / "product_distance.json"
    code = cli.main(
        ["product-distance", "--pairs", "50", "--seed", "7", "--output", str(path)]
    )
    if code != 0:
        return code
    summary = json.loads(path.read_text())["summary"]
    print(
        "two-qubit products: max |oracle - single constant| = "
        f"{summary['max_error_single']:.3e}; closest approach to the doubled "
        f"constant = {summary['min_deviation_doubled']:.3f}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
