#!/usr/bin/env python3
"""Report wall-clock timings of the three engines over a batch of random
programs: plain forward runs, state-saving annotated runs, and reverse
runs of the inverted programs.

    python3 scripts/state_saving_overhead.py [--programs 100] [--seed 0]
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from revlang.engines import (  # noqa: E402
    annotated_configuration, plain_configuration, reverse_configuration,
    run_to_completion,
)
from revlang.generate import generate_source  # noqa: E402
from revlang.scheduler import Schedule, Scripted, SeededRandom  # noqa: E402
from revlang.syntax import parse  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--programs", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    cases = []
    for i in range(args.programs):
        src, init = generate_source(args.seed + i)
        cases.append((parse(src), init, args.seed + i))

    annotated_results = []
    t0 = time.perf_counter()
    for program, init, seed in cases:
        config = annotated_configuration(program, init)
        annotated_results.append(run_to_completion(config, SeededRandom(seed)))
    t_annotated = time.perf_counter() - t0

    t0 = time.perf_counter()
    for (program, init, _), fwd in zip(cases, annotated_results):
        config = plain_configuration(program, init)
        run_to_completion(config, Scripted(Schedule(fwd.schedule)))
    t_plain = time.perf_counter() - t0

    t0 = time.perf_counter()
    for fwd in annotated_results:
        run_to_completion(reverse_configuration(fwd.config), SeededRandom(1))
    t_reverse = time.perf_counter() - t0

    steps = sum(len(r.trace) for r in annotated_results)
    idents = sum(len(r.identifier_trace) for r in annotated_results)
    print(f"{args.programs} programs, {steps} forward steps "
          f"({idents} identifier steps)")
    print(f"  plain forward      {t_plain:8.3f} s")
    print(f"  annotated forward  {t_annotated:8.3f} s "
          f"(x{t_annotated / t_plain:.2f} vs plain)")
    print(f"  reverse            {t_reverse:8.3f} s "
          f"(x{t_reverse / t_plain:.2f} vs plain)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
