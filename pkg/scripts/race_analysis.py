#!/usr/bin/env python3
"""Exhaustively enumerate the interleavings of the two-entrance restaurant
model and report every reachable final store, for the buggy guard and the
fixed one.

    python3 scripts/race_analysis.py [--init m=4,c=0,r=0]
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from revlang.checker import enumerate_final_stores  # noqa: E402
from revlang.syntax import parse  # noqa: E402

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--init", default="m=4,c=0,r=0")
    args = parser.parse_args()
    init = {}
    for item in args.init.split(","):
        name, value = item.split("=")
        init[name.strip()] = int(value)

    for label, path in [("buggy guard  (reads r)", "restaurant.rwl"),
                        ("fixed guard  (reserves 2)", "restaurant_fixed.rwl")]:
        program = parse((PROGRAMS / path).read_text())
        finals = enumerate_final_stores(program, init)
        total = sum(finals.values())
        print(f"{label}: {total} interleavings, "
              f"{len(finals)} distinct final stores")
        for store, count in sorted(finals.items()):
            values = dict(store)
            over = values["c"] + values["r"] > values["m"]
            flag = "  <-- over capacity" if over else ""
            print(f"  {values}  x{count}{flag}")
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
