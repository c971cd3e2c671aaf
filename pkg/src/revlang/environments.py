"""Execution state: variable/data/procedure/while environments, the
auxiliary store of reversal information, and the counters that hand out
identifiers, memory locations and construct versions.

Everything here is a value: updates return new objects, so engines and the
session service can snapshot state by keeping a reference.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Optional

from .syntax.tree import (
    ConstructId, GLOBAL_SCOPE, Path, Program, program_from_json,
    program_to_json, path_text,
)

INT_MIN = -(2 ** 63)
INT_MAX = 2 ** 63 - 1


class RevlangError(Exception):
    """Base class for runtime failures."""


class UnboundVariable(RevlangError):
    pass


class UnboundProcedure(RevlangError):
    pass


class AuxStoreError(RevlangError):
    """Pop on an empty stack or an identifier mismatch."""


class CounterError(RevlangError):
    pass


class ArithmeticOverflow(RevlangError):
    pass


def check_int(value: int) -> int:
    if value < INT_MIN or value > INT_MAX:
        raise ArithmeticOverflow(f"value {value} exceeds 64-bit signed range")
    return value


def scope_token(block: Optional[ConstructId]) -> str:
    return GLOBAL_SCOPE if block is None else block.text()


# --------------------------------------------------------------------------
# gamma / sigma / mu / beta

@dataclass(frozen=True, slots=True)
class ProcEntry:
    name: str
    body: Program
    decl_path: Path  # scope the declaration ran in; drives name resolution
    basis: bool = True  # False for the renamed copies installed by calls


@dataclass(frozen=True, slots=True)
class EnvSet:
    """The four execution environments."""

    gamma: dict = field(default_factory=dict)  # (var, scope token) -> loc
    sigma: dict = field(default_factory=dict)  # loc -> value
    mu: dict = field(default_factory=dict)     # construct-id text -> ProcEntry
    beta: dict = field(default_factory=dict)   # while-id text -> While stmt

    def bind_var(self, name: str, scope: str, loc: int, value: int) -> "EnvSet":
        return EnvSet({**self.gamma, (name, scope): loc},
                      {**self.sigma, loc: value}, self.mu, self.beta)

    def unbind_var(self, name: str, scope: str) -> "EnvSet":
        gamma = dict(self.gamma)
        del gamma[(name, scope)]
        return EnvSet(gamma, self.sigma, self.mu, self.beta)

    def write(self, loc: int, value: int) -> "EnvSet":
        return EnvSet(self.gamma, {**self.sigma, loc: value}, self.mu, self.beta)

    def bind_proc(self, key: str, entry: ProcEntry) -> "EnvSet":
        return EnvSet(self.gamma, self.sigma, {**self.mu, key: entry}, self.beta)

    def unbind_proc(self, key: str) -> "EnvSet":
        mu = dict(self.mu)
        del mu[key]
        return EnvSet(self.gamma, self.sigma, mu, self.beta)

    def bind_loop(self, key: str, stmt) -> "EnvSet":
        return EnvSet(self.gamma, self.sigma, self.mu, {**self.beta, key: stmt})

    def unbind_loop(self, key: str) -> "EnvSet":
        beta = dict(self.beta)
        del beta[key]
        return EnvSet(self.gamma, self.sigma, self.mu, beta)


def eval_var(gamma: dict, path: Path, name: str) -> int:
    """Resolve a variable to its location, innermost block first then global."""
    for block in path:
        loc = gamma.get((name, block.text()))
        if loc is not None:
            return loc
    loc = gamma.get((name, GLOBAL_SCOPE))
    if loc is None:
        raise UnboundVariable(f"variable {name!r} is not in scope at {path_text(path)}")
    return loc


def eval_proc(name: str, path: Path, mu: dict) -> str:
    """Resolve a procedure name to the identifier of its innermost declaration."""
    candidates = [(key, e) for key, e in mu.items()
                  if e.name == name and e.basis]
    for block in path:
        token = block.text()
        for key, entry in candidates:
            if entry.decl_path and entry.decl_path[0].text() == token:
                return key
    for key, entry in candidates:
        if not entry.decl_path:
            return key
    raise UnboundProcedure(f"procedure {name!r} is not in scope at {path_text(path)}")


# --------------------------------------------------------------------------
# Auxiliary store

# Stack names for the shared stacks; per-variable stacks use the variable name.
STACK_B = "B"
STACK_W = "W"
STACK_WI = "WI"
STACK_PR = "Pr"


@dataclass(frozen=True, slots=True)
class AuxStore:
    """Stacks of (identifier, payload) pairs saved for reversal."""

    var_stacks: dict = field(default_factory=dict)  # name -> tuple[(id, int)]
    branches: tuple = ()    # B: (id, bool)
    loops: tuple = ()       # W: (id, bool)
    loop_info: tuple = ()   # WI: (id, annotation info)
    proc_info: tuple = ()   # Pr: (id, annotation info)

    def _get(self, stack: str) -> tuple:
        if stack == STACK_B:
            return self.branches
        if stack == STACK_W:
            return self.loops
        if stack == STACK_WI:
            return self.loop_info
        if stack == STACK_PR:
            return self.proc_info
        return self.var_stacks.get(stack, ())

    def _with(self, stack: str, value: tuple) -> "AuxStore":
        if stack == STACK_B:
            return replace(self, branches=value)
        if stack == STACK_W:
            return replace(self, loops=value)
        if stack == STACK_WI:
            return replace(self, loop_info=value)
        if stack == STACK_PR:
            return replace(self, proc_info=value)
        stacks = {**self.var_stacks, stack: value}
        if not value:
            del stacks[stack]
        return replace(self, var_stacks=stacks)

    def push(self, stack: str, ident: int, payload) -> "AuxStore":
        current = self._get(stack)
        if current and current[-1][0] >= ident:
            raise AuxStoreError(
                f"push of identifier {ident} onto stack {stack} would break "
                f"ascending order (top is {current[-1][0]})")
        return self._with(stack, current + ((ident, payload),))

    def top(self, stack: str):
        current = self._get(stack)
        return current[-1] if current else None

    def pop(self, stack: str, ident: int):
        """Pop (ident, payload); the top must carry exactly `ident`."""
        current = self._get(stack)
        if not current:
            raise AuxStoreError(f"pop from empty stack {stack}")
        top_id, payload = current[-1]
        if top_id != ident:
            raise AuxStoreError(
                f"stack {stack} top has identifier {top_id}, expected {ident}")
        return payload, self._with(stack, current[:-1])

    def stack_names(self) -> list[str]:
        names = sorted(self.var_stacks)
        return names + [STACK_B, STACK_W, STACK_WI, STACK_PR]

    def is_empty(self) -> bool:
        return not (self.var_stacks or self.branches or self.loops
                    or self.loop_info or self.proc_info)


# --------------------------------------------------------------------------
# Counters

@dataclass(frozen=True, slots=True)
class Counters:
    """Forward/reverse identifier counters, location allocator and the
    per-construct version counters behind loop-body renaming."""

    next_id: int = 1
    prev_id: int = 0
    next_loc: int = 0
    free_pool: tuple = ()
    versions: dict = field(default_factory=dict)

    def take_next(self) -> tuple[int, "Counters"]:
        return self.next_id, Counters(self.next_id + 1, self.prev_id,
                                      self.next_loc, self.free_pool, self.versions)

    def take_previous(self) -> tuple[int, "Counters"]:
        if self.prev_id < 1:
            raise CounterError("reverse execution complete: no identifiers left")
        return self.prev_id, Counters(self.next_id, self.prev_id - 1,
                                      self.next_loc, self.free_pool, self.versions)

    def peek_previous(self) -> int:
        return self.prev_id

    def alloc_loc(self) -> tuple[int, "Counters"]:
        if self.free_pool:
            return self.free_pool[-1], Counters(self.next_id, self.prev_id,
                                                self.next_loc, self.free_pool[:-1],
                                                self.versions)
        return self.next_loc, Counters(self.next_id, self.prev_id,
                                       self.next_loc + 1, self.free_pool,
                                       self.versions)

    def free_loc(self, loc: int) -> "Counters":
        return Counters(self.next_id, self.prev_id, self.next_loc,
                        self.free_pool + (loc,), self.versions)

    def next_version(self, counter_key: str) -> tuple[int, "Counters"]:
        v = self.versions.get(counter_key, 0) + 1
        return v, replace(self, versions={**self.versions, counter_key: v})

    def previous_version(self, counter_key: str) -> tuple[int, "Counters"]:
        v = self.versions.get(counter_key, 0) - 1
        if v < 0:
            raise CounterError(f"version counter for {counter_key} below zero")
        versions = {**self.versions, counter_key: v}
        if v == 0:
            del versions[counter_key]
        return v, replace(self, versions=versions)

    def current_version(self, counter_key: str) -> int:
        return self.versions.get(counter_key, 0)


def initial_env(init: dict[str, int]) -> tuple[EnvSet, Counters]:
    """Globals named in `init` are bound at global scope before execution."""
    env = EnvSet()
    counters = Counters()
    for name in sorted(init):
        loc, counters = counters.alloc_loc()
        env = env.bind_var(name, GLOBAL_SCOPE, loc, check_int(init[name]))
    return env, counters


# --------------------------------------------------------------------------
# JSON state dump (deterministic ordering)

def env_to_json(env: EnvSet) -> dict:
    from .syntax.tree import stmt_to_json
    return {
        "gamma": [[name, scope, loc]
                  for (name, scope), loc in sorted(env.gamma.items())],
        "sigma": [[loc, value] for loc, value in sorted(env.sigma.items())],
        "mu": [[key, entry.name, program_to_json(entry.body),
                [b.text() for b in entry.decl_path], entry.basis]
               for key, entry in sorted(env.mu.items())],
        "beta": [[key, stmt_to_json(stmt)] for key, stmt in sorted(env.beta.items())],
    }


def env_from_json(obj: dict) -> EnvSet:
    from .syntax.tree import cid_from_text, stmt_from_json
    return EnvSet(
        gamma={(name, scope): loc for name, scope, loc in obj["gamma"]},
        sigma={loc: value for loc, value in obj["sigma"]},
        mu={key: ProcEntry(name, program_from_json(body),
                           tuple(cid_from_text("block", b) for b in path), basis)
            for key, name, body, path, basis in obj["mu"]},
        beta={key: stmt_from_json(stmt) for key, stmt in obj["beta"]},
    )


def aux_to_json(aux: AuxStore) -> dict:
    return {
        "variables": {name: [[i, v] for i, v in stack]
                      for name, stack in sorted(aux.var_stacks.items())},
        "B": [[i, v] for i, v in aux.branches],
        "W": [[i, v] for i, v in aux.loops],
        "WI": [[i, _info_to_json(v)] for i, v in aux.loop_info],
        "Pr": [[i, _info_to_json(v)] for i, v in aux.proc_info],
    }


def _info_to_json(info) -> list:
    # annotation info: tuple of (key, stack) pairs
    return [[list(k), list(stack)] for k, stack in info]


def _info_from_json(items) -> tuple:
    return tuple((tuple(k), tuple(stack)) for k, stack in items)


def aux_from_json(obj: dict) -> AuxStore:
    return AuxStore(
        var_stacks={name: tuple((i, v) for i, v in stack)
                    for name, stack in obj["variables"].items()},
        branches=tuple((i, v) for i, v in obj["B"]),
        loops=tuple((i, v) for i, v in obj["W"]),
        loop_info=tuple((i, _info_from_json(v)) for i, v in obj["WI"]),
        proc_info=tuple((i, _info_from_json(v)) for i, v in obj["Pr"]),
    )


def counters_to_json(c: Counters) -> dict:
    return {
        "nextId": c.next_id, "prevId": c.prev_id, "nextLoc": c.next_loc,
        "freePool": list(c.free_pool),
        "versions": dict(sorted(c.versions.items())),
    }


def counters_from_json(obj: dict) -> Counters:
    return Counters(obj["nextId"], obj["prevId"], obj["nextLoc"],
                    tuple(obj["freePool"]), dict(obj["versions"]))


def state_dump(env: EnvSet, aux: AuxStore, counters: Counters) -> str:
    payload = {**env_to_json(env), "delta": aux_to_json(aux),
               "counters": counters_to_json(counters)}
    return json.dumps(payload, sort_keys=True, indent=2)


def store_values(env: EnvSet) -> dict[str, int]:
    """Composed view sigma(gamma(X, Bn)) keyed by rendered scope."""
    out = {}
    for (name, scope), loc in env.gamma.items():
        label = name if scope == GLOBAL_SCOPE else f"{name}@{scope}"
        out[label] = env.sigma[loc]
    return out
