"""Configurations, redex identifiers and transition records."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..environments import AuxStore, Counters, EnvSet, RevlangError
from ..syntax.tree import Program

PLAIN = "plain"
ANNOTATED = "annotated"
REVERSE = "reverse"


class EngineError(RevlangError):
    pass


class StuckError(EngineError):
    """A non-terminal configuration with no enabled rule."""


class BudgetExceeded(EngineError):
    """Step budget ran out; the program may diverge."""


@dataclass(frozen=True, slots=True)
class RedexId:
    """A position in the residual program where one rule can fire.

    `path` walks from the root: seqL, parL, parR, then, else, body.
    """

    path: tuple[str, ...]
    rule: str

    def sort_key(self):
        return (self.path, self.rule)

    def label(self) -> str:
        return f"[{self.rule}]"

    def to_json(self) -> dict:
        return {"path": list(self.path), "rule": self.rule}

    @staticmethod
    def from_json(obj: dict) -> "RedexId":
        return RedexId(tuple(obj["path"]), obj["rule"])


@dataclass(frozen=True, slots=True)
class TransitionRecord:
    step_index: int
    rule: str
    redex: RedexId
    ident: Optional[int] = None  # present exactly for (reverse) m-rules
    detail: str = ""

    def to_json(self) -> dict:
        return {"step": self.step_index, "rule": self.rule,
                "redex": self.redex.to_json(), "ident": self.ident,
                "detail": self.detail}

    @staticmethod
    def from_json(obj: dict) -> "TransitionRecord":
        return TransitionRecord(obj["step"], obj["rule"],
                                RedexId.from_json(obj["redex"]),
                                obj.get("ident"), obj.get("detail", ""))


@dataclass(frozen=True, slots=True)
class Configuration:
    """Residual program plus every piece of execution state.

    `origin` keeps the full annotated (or inverted) program tree so the
    executed rendering can be reconstructed after the residual term has
    been consumed.
    """

    program: Program
    env: EnvSet
    aux: AuxStore
    counters: Counters
    table: dict
    origin: Optional[Program]
    mode: str
    eval_count: int = 0

    def advanced(self, program, ctx) -> "Configuration":
        return Configuration(program, ctx.env, ctx.aux, ctx.counters,
                             ctx.table, self.origin, self.mode,
                             self.eval_count + ctx.evals)


class StepCtx:
    """Mutable scratch state threaded through one rule application."""

    __slots__ = ("env", "aux", "counters", "table", "evals", "ident", "detail")

    def __init__(self, config: Configuration):
        self.env = config.env
        self.aux = config.aux
        self.counters = config.counters
        self.table = config.table
        self.evals = 0
        self.ident: Optional[int] = None
        self.detail = ""

    def take_ident(self) -> int:
        ident, self.counters = self.counters.take_next()
        self.ident = ident
        return ident

    def take_reverse_ident(self) -> int:
        ident, self.counters = self.counters.take_previous()
        self.ident = ident
        return ident

    def push_stack(self, key, ident: int):
        stack = self.table.get(key, ())
        self.table = {**self.table, key: stack + (ident,)}

    def pop_stack(self, key, ident: int):
        stack = self.table.get(key, ())
        if not stack:
            raise EngineError(f"statement stack for {key!r} is empty")
        if stack[-1] != ident:
            raise EngineError(
                f"statement stack top {stack[-1]} does not match identifier {ident}")
        self.table = {**self.table, key: stack[:-1]}
