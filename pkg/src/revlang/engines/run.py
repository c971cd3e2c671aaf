"""Run loop, configuration constructors and the executed-run bundle."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Optional

from ..environments import (
    AuxStore, aux_from_json, aux_to_json, counters_from_json,
    counters_to_json, env_from_json, env_to_json, initial_env,
)
from ..syntax.tree import (
    Program, is_terminal, key_from_json, key_to_json, program_from_json,
    program_to_json,
)
from ..syntax.render import render
from ..transform import annotate, invert
from .config import (
    ANNOTATED, BudgetExceeded, Configuration, PLAIN, REVERSE, RedexId,
    StuckError, TransitionRecord,
)
from .redex import enabled_redexes
from .step_annotated import step_annotated
from .step_forward import step_forward
from .step_reverse import step_reverse

DEFAULT_BUDGET = 100_000

_STEPPERS = {PLAIN: step_forward, ANNOTATED: step_annotated, REVERSE: step_reverse}


def step(config: Configuration, redex: RedexId) -> tuple[Configuration, TransitionRecord]:
    return _STEPPERS[config.mode](config, redex)


def plain_configuration(program: Program, init: dict[str, int]) -> Configuration:
    env, counters = initial_env(init)
    return Configuration(program, env, AuxStore(), counters, {}, None, PLAIN)


def annotated_configuration(program: Program, init: dict[str, int]) -> Configuration:
    """Annotate an original program and set up its starting state."""
    annotated, table = annotate(program)
    env, counters = initial_env(init)
    return Configuration(annotated, env, AuxStore(), counters, table,
                         annotated, ANNOTATED)


def executed_program(config: Configuration) -> tuple[Program, dict]:
    """The executed annotated version: origin tree plus populated table."""
    if config.mode != ANNOTATED:
        raise ValueError("executed program exists only for annotated runs")
    if not is_terminal(config.program):
        raise ValueError("annotated run has not finished")
    return config.origin, config.table


def reverse_configuration(config: Configuration) -> Configuration:
    """Build the reverse configuration from a completed annotated run."""
    origin, table = executed_program(config)
    inverted = invert(origin)
    counters = replace(config.counters, prev_id=config.counters.next_id - 1)
    return Configuration(inverted, config.env, config.aux, counters, table,
                         inverted, REVERSE)


@dataclass
class RunResult:
    config: Configuration
    trace: list[TransitionRecord] = field(default_factory=list)
    schedule: list[int] = field(default_factory=list)

    @property
    def identifier_trace(self) -> list[int]:
        return [r.ident for r in self.trace if r.ident is not None]


def run_to_completion(config: Configuration, policy,
                      budget: int = DEFAULT_BUDGET) -> RunResult:
    """Step under the policy until no rule is enabled."""
    trace: list[TransitionRecord] = []
    schedule: list[int] = []
    for step_index in range(budget):
        enabled = enabled_redexes(config)
        if not enabled:
            if is_terminal(config.program):
                return RunResult(config, trace, schedule)
            raise StuckError(
                "no rule applies to the non-terminal residual program:\n"
                + render(config.program))
        idx = policy.choose(enabled, step_index)
        config, record = step(config, enabled[idx])
        trace.append(replace(record, step_index=step_index))
        schedule.append(idx)
    raise BudgetExceeded(f"no terminal configuration within {budget} steps")


# --------------------------------------------------------------------------
# Executed-run bundle: everything `invert` and `reverse` need.

BUNDLE_VERSION = 1


def table_to_json(table: dict) -> list:
    return [[key_to_json(k), list(v)] for k, v in sorted(table.items())]


def table_from_json(items: list) -> dict:
    return {key_from_json(k): tuple(v) for k, v in items}


def bundle_from_run(source: str, init: dict[str, int], result: RunResult,
                    schedule_seed: Optional[int] = None) -> dict:
    config = result.config
    origin, table = executed_program(config)
    return {
        "schemaVersion": BUNDLE_VERSION,
        "source": source,
        "init": dict(sorted(init.items())),
        "program": program_to_json(origin),
        "table": table_to_json(table),
        "delta": aux_to_json(config.aux),
        "counters": counters_to_json(config.counters),
        "env": env_to_json(config.env),
        "trace": [r.to_json() for r in result.trace],
        "schedule": {"seed": schedule_seed, "choices": result.schedule},
    }


def save_bundle(bundle: dict, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(bundle, fh, indent=1, sort_keys=True)


def load_bundle(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        bundle = json.load(fh)
    for field_name in ("program", "table", "delta", "counters", "env", "init"):
        if field_name not in bundle:
            raise ValueError(f"bundle is missing field {field_name!r}")
    return bundle


def reverse_configuration_from_bundle(bundle: dict) -> Configuration:
    origin = program_from_json(bundle["program"])
    table = table_from_json(bundle["table"])
    env = env_from_json(bundle["env"])
    aux = aux_from_json(bundle["delta"])
    counters = counters_from_json(bundle["counters"])
    counters = replace(counters, prev_id=counters.next_id - 1)
    inverted = invert(origin)
    return Configuration(inverted, env, aux, counters, table, inverted, REVERSE)
