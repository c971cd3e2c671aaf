"""Schedule policies resolving the nondeterministic redex choice.

A recorded schedule stores choice indices into each step's canonically
ordered enabled list, so replaying it reproduces the exact trace.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .engines.config import RedexId


class ScheduleError(Exception):
    pass


def canonical_order(redexes: list[RedexId]) -> list[RedexId]:
    """Total order by tree path, outer and left positions first."""
    return sorted(redexes, key=RedexId.sort_key)


@dataclass
class Schedule:
    choices: list[int] = field(default_factory=list)
    seed: Optional[int] = None

    def to_json(self) -> dict:
        obj: dict = {"choices": list(self.choices)}
        if self.seed is not None:
            obj["seed"] = self.seed
        return obj

    @staticmethod
    def from_json(obj: dict) -> "Schedule":
        return Schedule(list(obj["choices"]), obj.get("seed"))

    def save(self, path: str):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=2)

    @staticmethod
    def load(path: str) -> "Schedule":
        with open(path, encoding="utf-8") as fh:
            return Schedule.from_json(json.load(fh))


class SchedulePolicy:
    """Chooses an index into the canonically ordered enabled list."""

    def choose(self, enabled: list[RedexId], step_index: int) -> int:
        raise NotImplementedError


class LeftmostFirst(SchedulePolicy):
    def choose(self, enabled, step_index):
        return 0


class SeededRandom(SchedulePolicy):
    def __init__(self, seed: int = 0):
        self.seed = seed
        self._rng = random.Random(seed)

    def choose(self, enabled, step_index):
        return self._rng.randrange(len(enabled))


class Scripted(SchedulePolicy):
    def __init__(self, schedule: Schedule):
        self.schedule = schedule

    def choose(self, enabled, step_index):
        if step_index >= len(self.schedule.choices):
            raise ScheduleError(f"schedule exhausted at step {step_index}")
        idx = self.schedule.choices[step_index]
        if not 0 <= idx < len(enabled):
            raise ScheduleError(
                f"schedule index {idx} out of range at step {step_index} "
                f"({len(enabled)} redexes enabled)")
        return idx


class Interactive(SchedulePolicy):
    """Delegates each choice to a callback (used by the session service)."""

    def __init__(self, callback: Callable[[list[RedexId], int], int]):
        self.callback = callback

    def choose(self, enabled, step_index):
        idx = self.callback(enabled, step_index)
        if not 0 <= idx < len(enabled):
            raise ScheduleError(f"callback returned invalid index {idx}")
        return idx


def policy_from_spec(spec: str) -> SchedulePolicy:
    """Build a policy from a CLI-style spec: `seed:N`, `leftmost`, or a
    schedule file path."""
    if spec == "leftmost":
        return LeftmostFirst()
    if spec.startswith("seed:"):
        return SeededRandom(int(spec.split(":", 1)[1]))
    return Scripted(Schedule.load(spec))
