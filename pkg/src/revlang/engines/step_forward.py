"""Forwards-only small-step semantics (no state saving)."""

from __future__ import annotations

from dataclasses import replace

from ..environments import ProcEntry, eval_proc, eval_var
from ..syntax.tree import (
    Block, Par, Program, RunB, RunC, Seq, Single, Skip, is_skip, seq_of,
)
from ..transform import rename_loop_body, rename_proc_body
from .apply import expect_single, rewrite_at
from .config import Configuration, EngineError, RedexId, StepCtx, TransitionRecord
from .exprs import eval_arith, eval_bool


def step_forward(config: Configuration,
                 redex: RedexId) -> tuple[Configuration, TransitionRecord]:
    """Apply one forwards-only rule at the chosen redex."""
    ctx = StepCtx(config)
    handler = _HANDLERS.get(redex.rule)
    if handler is None:
        raise EngineError(f"unknown forward rule {redex.rule!r}")
    program = rewrite_at(config.program, redex.path,
                         lambda prog: handler(prog, ctx))
    record = TransitionRecord(-1, redex.rule, redex, ctx.ident, ctx.detail)
    return config.advanced(program, ctx), record


def block_body(s: Block) -> Program:
    """Splice declarations, body and removals into the runB body."""
    items: list[Program] = [Single(d) for d in s.var_decls]
    items += [Single(d) for d in s.proc_decls]
    items.append(s.body)
    items += [Single(r) for r in s.proc_removes]
    items += [Single(r) for r in s.var_removes]
    return seq_of(items)


def _s2(prog, ctx):
    if not isinstance(prog, Seq) or not is_skip(prog.left):
        raise EngineError("S2 expects a completed first statement")
    return prog.right


def _p3(prog, ctx):
    if not isinstance(prog, Par) or not is_skip(prog.right):
        raise EngineError("P3 expects a completed right component")
    return prog.left


def _p4(prog, ctx):
    if not isinstance(prog, Par) or not is_skip(prog.left):
        raise EngineError("P4 expects a completed left component")
    return prog.right


def _d1(prog, ctx):
    s = expect_single(prog, "D1")
    value = eval_arith(s.expr, s.path, ctx.env)
    ctx.evals += 1
    loc = eval_var(ctx.env.gamma, s.path, s.name)
    ctx.env = ctx.env.write(loc, value)
    ctx.detail = f"{s.name} := {value}"
    return Single(Skip(s.key))


def _i1(prog, ctx):
    s = expect_single(prog, "I1")
    value = eval_bool(s.cond, s.path, ctx.env)
    ctx.evals += 1
    ctx.detail = f"condition {value}"
    return Single(replace(s, resolved=value))


def _i4(prog, ctx):
    s = expect_single(prog, "I4")
    return Single(Skip(s.key))


_i5 = _i4


def _w1(prog, ctx):
    s = expect_single(prog, "W1")
    if s.cid.text() in ctx.env.beta:
        raise EngineError(f"loop {s.cid.text()} already has a stored copy")
    value = eval_bool(s.cond, s.path, ctx.env)
    ctx.evals += 1
    body, ctx.counters = rename_loop_body(s.body, ctx.counters)
    stored = replace(s, body=body, resolved=None)
    ctx.env = ctx.env.bind_loop(s.cid.text(), stored)
    ctx.detail = f"first evaluation {value}"
    return Single(replace(s, body=body, resolved=value))


def _w2(prog, ctx):
    s = expect_single(prog, "W2")
    stored = ctx.env.beta.get(s.cid.text())
    if stored is None:
        raise EngineError(f"loop {s.cid.text()} has no stored copy")
    value = eval_bool(stored.cond, stored.path, ctx.env)
    ctx.evals += 1
    body, ctx.counters = rename_loop_body(stored.body, ctx.counters)
    new_stored = replace(stored, body=body, resolved=None)
    ctx.env = ctx.env.bind_loop(s.cid.text(), new_stored)
    ctx.detail = f"re-evaluation {value}"
    return Single(replace(new_stored, resolved=value))


def _w4(prog, ctx):
    s = expect_single(prog, "W4")
    stored = ctx.env.beta.get(s.cid.text())
    if stored is None:
        raise EngineError(f"loop {s.cid.text()} has no stored copy")
    return Single(stored)


def _w5(prog, ctx):
    s = expect_single(prog, "W5")
    if s.cid.text() not in ctx.env.beta:
        raise EngineError(f"loop {s.cid.text()} has no stored copy")
    ctx.env = ctx.env.unbind_loop(s.cid.text())
    return Single(Skip(s.key))


def _b1(prog, ctx):
    s = expect_single(prog, "B1")
    return Single(RunB(block_body(s)))


def _b3(prog, ctx):
    return Single(Skip())


def _l1(prog, ctx):
    s = expect_single(prog, "L1")
    if not s.path:
        raise EngineError(f"declaration of {s.name} outside any block")
    loc, ctx.counters = ctx.counters.alloc_loc()
    ctx.env = ctx.env.bind_var(s.name, s.path[0].text(), loc, s.value)
    ctx.detail = f"{s.name} at l{loc}"
    return Single(Skip(s.key))


def _l2(prog, ctx):
    s = expect_single(prog, "L2")
    ctx.env = ctx.env.bind_proc(s.cid.text(),
                                ProcEntry(s.name, s.body, s.path, basis=True))
    return Single(Skip(s.key))


def _g1(prog, ctx):
    s = expect_single(prog, "G1")
    basis_key = eval_proc(s.name, s.path, ctx.env.mu)
    entry = ctx.env.mu[basis_key]
    body = rename_proc_body(entry.body, s.cid)
    ctx.env = ctx.env.bind_proc(s.cid.text(),
                                ProcEntry(s.name, body, entry.decl_path, basis=False))
    ctx.detail = f"{s.name} -> {basis_key}"
    return Single(RunC(s.cid, body, s.key))


def _g3(prog, ctx):
    s = expect_single(prog, "G3")
    if s.cid.text() not in ctx.env.mu:
        raise EngineError(f"call {s.cid.text()} has no stored copy")
    ctx.env = ctx.env.unbind_proc(s.cid.text())
    return Single(Skip(s.key))


def _h1(prog, ctx):
    s = expect_single(prog, "H1")
    if not s.path:
        raise EngineError(f"removal of {s.name} outside any block")
    scope = s.path[0].text()
    loc = ctx.env.gamma.get((s.name, scope))
    if loc is None:
        raise EngineError(f"variable {s.name} is not bound in block {scope}")
    ctx.env = ctx.env.write(loc, 0).unbind_var(s.name, scope)
    ctx.counters = ctx.counters.free_loc(loc)
    ctx.detail = f"freed l{loc}"
    return Single(Skip(s.key))


def _h2(prog, ctx):
    s = expect_single(prog, "H2")
    if s.cid.text() not in ctx.env.mu:
        raise EngineError(f"procedure {s.cid.text()} is not declared")
    ctx.env = ctx.env.unbind_proc(s.cid.text())
    return Single(Skip(s.key))


_HANDLERS = {
    "S2": _s2, "P3": _p3, "P4": _p4, "D1": _d1, "I1": _i1, "I4": _i4,
    "I5": _i5, "W1": _w1, "W2": _w2, "W4": _w4, "W5": _w5, "B1": _b1,
    "B3": _b3, "L1": _l1, "L2": _l2, "G1": _g1, "G3": _g3, "H1": _h1,
    "H2": _h2,
}
