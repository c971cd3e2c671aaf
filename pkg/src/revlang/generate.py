"""Seeded random program generator.

Programs cover every statement form (assignment, conditional, loop, block
with local variables and procedures, calls, skip, parallel composition)
and terminate under every interleaving: each loop counts down a private
counter no other statement may touch, and the static call graph is
acyclic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass


@dataclass
class GenConfig:
    max_depth: int = 4          # nesting depth of compound statements
    max_par_width: int = 3      # arms of one parallel composition
    max_seq: int = 4            # statements per sequence
    max_loop_iters: int = 3
    allow_par: bool = True
    force_top_par: bool = False  # guarantee one parallel composition
    globals_count: int = 3


@dataclass
class _Scope:
    variables: list[str]
    procs: list[str]
    depth: int

    def child(self, extra_vars=(), extra_procs=(), deeper=True) -> "_Scope":
        return _Scope(self.variables + list(extra_vars),
                      self.procs + list(extra_procs),
                      self.depth + (1 if deeper else 0))


class _Gen:
    def __init__(self, rng: random.Random, config: GenConfig):
        self.rng = rng
        self.config = config
        self.locals = 0
        self.counters = 0
        self.proc_names = 0

    def fresh_local(self) -> str:
        self.locals += 1
        return f"v{self.locals}"

    def fresh_counter(self) -> str:
        self.counters += 1
        return f"t{self.counters}"

    def fresh_proc(self) -> str:
        self.proc_names += 1
        return f"f{self.proc_names}"

    # -- expressions -------------------------------------------------------

    def aexpr(self, scope: _Scope, size: int = 2) -> str:
        rng = self.rng
        if size <= 0 or not scope.variables or rng.random() < 0.3:
            return str(rng.randrange(0, 9))
        choice = rng.random()
        if choice < 0.5:
            return rng.choice(scope.variables)
        op = rng.choice(["+", "-", "*"])
        left = self.aexpr(scope, size - 1)
        right = self.aexpr(scope, size - 1)
        if rng.random() < 0.3:
            return f"({left} {op} {right})"
        return f"{left} {op} {right}"

    def bexpr(self, scope: _Scope, size: int = 1) -> str:
        rng = self.rng
        roll = rng.random()
        if roll < 0.1:
            return rng.choice(["true", "false"])
        if roll < 0.2 and size > 0:
            return f"!({self.bexpr(scope, size - 1)})"
        if roll < 0.3 and size > 0:
            return f"({self.bexpr(scope, size - 1)}) && ({self.bexpr(scope, size - 1)})"
        op = rng.choice(["==", ">", ">=", "<", "<=", "!="])
        return f"{self.aexpr(scope, 1)} {op} {self.aexpr(scope, 1)}"

    # -- statements ----------------------------------------------------------

    def sequence(self, scope: _Scope, allow_par: bool) -> list[str]:
        count = self.rng.randint(1, self.config.max_seq)
        lines: list[str] = []
        for _ in range(count):
            lines += self.statement(scope, allow_par)
        return lines or ["skip;"]

    def statement(self, scope: _Scope, allow_par: bool) -> list[str]:
        rng = self.rng
        deep = scope.depth < self.config.max_depth
        forms = ["assign", "assign", "skip"]
        if deep:
            forms += ["if", "while", "block", "block"]
        if scope.procs:
            forms += ["call", "call"]
        if allow_par and deep and self.config.allow_par:
            forms.append("par")
        form = rng.choice(forms)
        if form == "skip":
            return ["skip;"]
        if form == "assign":
            if not scope.variables:
                return ["skip;"]
            name = rng.choice(scope.variables)
            return [f"{name} = {self.aexpr(scope)};"]
        if form == "call":
            return [f"call {rng.choice(scope.procs)};"]
        if form == "if":
            inner = scope.child()
            lines = [f"if ({self.bexpr(scope)}) then"]
            lines += _indent(self.sequence(inner, allow_par))
            if rng.random() < 0.5:
                lines.append("else")
                lines += _indent(self.sequence(inner, allow_par))
            lines.append("end;")
            return lines
        if form == "while":
            # private countdown counter keeps every interleaving finite
            counter = self.fresh_counter()
            iters = rng.randint(0, self.config.max_loop_iters)
            inner = scope.child()
            body = [f"{counter} = {counter} - 1;"]
            body += self.sequence(inner, allow_par=False)
            return [
                "begin",
                f"{_IND}var {counter} = {iters};",
                f"{_IND}while ({counter} > 0) do",
                *_indent(_indent(body)),
                f"{_IND}end;",
                "end;",
            ]
        if form == "par":
            width = rng.randint(2, self.config.max_par_width)
            inner = scope.child()
            lines = ["par {"]
            lines += _indent(self.sequence(inner, allow_par=False))
            if width == 2:
                lines.append("} {")
                lines += _indent(self.sequence(inner, allow_par=False))
                lines.append("}")
            else:
                lines.append("} {")
                lines += _indent(["par {"]
                                 + _indent(self.sequence(inner, False))
                                 + ["} {"]
                                 + _indent(self.sequence(inner, False))
                                 + ["}"])
                lines.append("}")
            lines[-1] += ";"
            return lines
        # block with locals and occasionally a procedure
        var_count = rng.randint(1, 2)
        names = [self.fresh_local() for _ in range(var_count)]
        lines = ["begin"]
        for name in names:
            lines.append(f"{_IND}var {name} = {rng.randrange(0, 9)};")
        inner = scope.child(extra_vars=names)
        procs: list[str] = []
        if rng.random() < 0.45 and scope.depth + 1 < self.config.max_depth:
            pname = self.fresh_proc()
            procs.append(pname)
            body = self.sequence(inner, allow_par=False)
            lines.append(f"{_IND}proc {pname} is")
            lines += _indent(_indent(body))
            lines.append(f"{_IND}end;")
        lines += _indent(self.sequence(inner.child(extra_procs=procs, deeper=False),
                                       allow_par))
        lines.append("end;")
        return lines


_IND = "  "


def _indent(lines: list[str]) -> list[str]:
    return [_IND + line for line in lines]


def generate_source(seed: int, config: GenConfig | None = None) -> tuple[str, dict[str, int]]:
    """Generate (source text, initial global assignments) from a seed."""
    config = config or GenConfig()
    rng = random.Random(seed)
    gen = _Gen(rng, config)
    init = {f"g{i}": rng.randrange(0, 9) for i in range(config.globals_count)}
    scope = _Scope(sorted(init), [], 0)
    top_par = config.allow_par and (config.force_top_par or rng.random() < 0.5)
    if top_par:
        lines = (["par {"] + _indent(gen.sequence(scope, allow_par=False))
                 + ["} {"] + _indent(gen.sequence(scope, allow_par=False)) + ["}"])
    else:
        lines = gen.sequence(scope, allow_par=config.allow_par)
    return "\n".join(lines) + "\n", init


def generate_sequential_source(seed: int, config: GenConfig | None = None):
    config = config or GenConfig()
    from dataclasses import replace as dc_replace
    return generate_source(seed, dc_replace(config, allow_par=False))
