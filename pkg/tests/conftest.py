import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from revlang.engines import enabled_redexes, step  # noqa: E402
from revlang.syntax import parse  # noqa: E402

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"

RESTAURANT_SRC = (PROGRAMS / "restaurant.rwl").read_text()
RESTAURANT_FIXED_SRC = (PROGRAMS / "restaurant_fixed.rwl").read_text()
FIB_SRC = (PROGRAMS / "fib.rwl").read_text()

RESTAURANT_INIT = {"m": 4, "c": 0, "r": 0}
FIB_INIT = {"F": 3, "S": 4, "N": 4}


@pytest.fixture
def restaurant():
    return parse(RESTAURANT_SRC)


@pytest.fixture
def fib():
    return parse(FIB_SRC)


def drive(config, picker, limit=10_000):
    """Step a configuration with a per-step chooser; returns (config, trace,
    schedule).  `picker(enabled, trace)` returns an index."""
    trace = []
    schedule = []
    for _ in range(limit):
        enabled = enabled_redexes(config)
        if not enabled:
            return config, trace, schedule
        idx = picker(enabled, trace)
        config, record = step(config, enabled[idx])
        trace.append(record)
        schedule.append(idx)
    raise AssertionError("drive() exceeded its step limit")


def race_schedule_picker():
    """The worked schedule: loop until the third condition evaluation, let
    the parallel assignment run, then finish the loop."""
    state = {"evals": 0, "interleaved": False}

    def pick(enabled, trace):
        if trace and trace[-1].rule.rstrip("a") in ("W1", "W2"):
            state["evals"] += 1
        if state["evals"] >= 3 and not state["interleaved"]:
            for i, redex in enumerate(enabled):
                if redex.path[:1] == ("parR",):
                    state["interleaved"] = True
                    return i
        for i, redex in enumerate(enabled):
            if redex.path[:1] == ("parL",):
                return i
        return 0

    return pick
