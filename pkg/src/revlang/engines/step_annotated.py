"""Annotated forwards semantics: every rule from the forwards-only engine
plus identifier stamping and the state saving that makes a run reversible.

Rules that draw an identifier push it onto the statement's stack in the
annotation table and, where reversal needs data, push an (identifier,
payload) pair onto the matching auxiliary-store stack.
"""

from __future__ import annotations

from dataclasses import replace

from ..environments import (
    ProcEntry, STACK_B, STACK_PR, STACK_W, STACK_WI, eval_proc, eval_var,
)
from ..syntax.tree import RunB, RunC, Seq, Single, Skip, is_skip
from ..transform import (
    get_annotation_info, rename_loop_body, rename_proc_body,
)
from .apply import expect_single, rewrite_at
from .config import Configuration, EngineError, RedexId, StepCtx, TransitionRecord
from .exprs import eval_arith, eval_bool
from .step_forward import block_body


def step_annotated(config: Configuration,
                   redex: RedexId) -> tuple[Configuration, TransitionRecord]:
    """Apply one annotated rule at the chosen redex."""
    ctx = StepCtx(config)
    handler = _HANDLERS.get(redex.rule)
    if handler is None:
        raise EngineError(f"unknown annotated rule {redex.rule!r}")
    program = rewrite_at(config.program, redex.path,
                         lambda prog: handler(prog, ctx))
    record = TransitionRecord(-1, redex.rule, redex, ctx.ident, ctx.detail)
    return config.advanced(program, ctx), record


def _s2(prog, ctx):
    if not isinstance(prog, Seq) or not is_skip(prog.left):
        raise EngineError("S2a expects a completed first statement")
    return prog.right


def _p3(prog, ctx):
    return prog.left


def _p4(prog, ctx):
    return prog.right


def _d1(prog, ctx):
    s = expect_single(prog, "D1a")
    value = eval_arith(s.expr, s.path, ctx.env)
    ctx.evals += 1
    loc = eval_var(ctx.env.gamma, s.path, s.name)
    m = ctx.take_ident()
    ctx.push_stack(s.key, m)
    ctx.aux = ctx.aux.push(s.name, m, ctx.env.sigma[loc])
    ctx.env = ctx.env.write(loc, value)
    ctx.detail = f"{s.name} := {value}, old value saved"
    return Single(Skip(s.key))


def _i1(prog, ctx):
    s = expect_single(prog, "I1a")
    value = eval_bool(s.cond, s.path, ctx.env)
    ctx.evals += 1
    ctx.detail = f"condition {value}"
    return Single(replace(s, resolved=value))


def _i4(prog, ctx):
    s = expect_single(prog, "I4a")
    m = ctx.take_ident()
    ctx.push_stack(s.key, m)
    ctx.aux = ctx.aux.push(STACK_B, m, True)
    ctx.detail = "branch true saved"
    return Single(Skip(s.key))


def _i5(prog, ctx):
    s = expect_single(prog, "I5a")
    m = ctx.take_ident()
    ctx.push_stack(s.key, m)
    ctx.aux = ctx.aux.push(STACK_B, m, False)
    ctx.detail = "branch false saved"
    return Single(Skip(s.key))


def _w1(prog, ctx):
    s = expect_single(prog, "W1a")
    if s.cid.text() in ctx.env.beta:
        raise EngineError(f"loop {s.cid.text()} already has a stored copy")
    value = eval_bool(s.cond, s.path, ctx.env)
    ctx.evals += 1
    m = ctx.take_ident()
    ctx.push_stack(s.key, m)
    body, ctx.counters = rename_loop_body(s.body, ctx.counters)
    stored = replace(s, body=body, resolved=None)
    ctx.env = ctx.env.bind_loop(s.cid.text(), stored)
    ctx.aux = ctx.aux.push(STACK_W, m, False)
    ctx.detail = f"first evaluation {value}"
    return Single(replace(s, body=body, resolved=value))


def _w2(prog, ctx):
    s = expect_single(prog, "W2a")
    stored = ctx.env.beta.get(s.cid.text())
    if stored is None:
        raise EngineError(f"loop {s.cid.text()} has no stored copy")
    value = eval_bool(stored.cond, stored.path, ctx.env)
    ctx.evals += 1
    m = ctx.take_ident()
    ctx.push_stack(s.key, m)
    body, ctx.counters = rename_loop_body(stored.body, ctx.counters)
    new_stored = replace(stored, body=body, resolved=None)
    ctx.env = ctx.env.bind_loop(s.cid.text(), new_stored)
    ctx.aux = ctx.aux.push(STACK_W, m, True)
    ctx.detail = f"re-evaluation {value}"
    return Single(replace(new_stored, resolved=value))


def _w4(prog, ctx):
    s = expect_single(prog, "W4a")
    stored = ctx.env.beta.get(s.cid.text())
    if stored is None:
        raise EngineError(f"loop {s.cid.text()} has no stored copy")
    return Single(stored)


def _w5(prog, ctx):
    s = expect_single(prog, "W5a")
    stored = ctx.env.beta.get(s.cid.text())
    if stored is None:
        raise EngineError(f"loop {s.cid.text()} has no stored copy")
    m = ctx.take_ident()
    ctx.push_stack(s.key, m)
    info = get_annotation_info(stored.body, ctx.table)
    ctx.aux = ctx.aux.push(STACK_WI, m, info)
    ctx.env = ctx.env.unbind_loop(s.cid.text())
    ctx.detail = "loop annotation saved"
    return Single(Skip(s.key))


def _b1(prog, ctx):
    s = expect_single(prog, "B1a")
    return Single(RunB(block_body(s)))


def _b3(prog, ctx):
    return Single(Skip())


def _l1(prog, ctx):
    s = expect_single(prog, "L1a")
    if not s.path:
        raise EngineError(f"declaration of {s.name} outside any block")
    m = ctx.take_ident()
    ctx.push_stack(s.key, m)
    loc, ctx.counters = ctx.counters.alloc_loc()
    ctx.env = ctx.env.bind_var(s.name, s.path[0].text(), loc, s.value)
    ctx.detail = f"{s.name} at l{loc}"
    return Single(Skip(s.key))


def _l2(prog, ctx):
    s = expect_single(prog, "L2a")
    m = ctx.take_ident()
    ctx.push_stack(s.key, m)
    ctx.env = ctx.env.bind_proc(s.cid.text(),
                                ProcEntry(s.name, s.body, s.path, basis=True))
    return Single(Skip(s.key))


def _g1(prog, ctx):
    s = expect_single(prog, "G1a")
    basis_key = eval_proc(s.name, s.path, ctx.env.mu)
    entry = ctx.env.mu[basis_key]
    body = rename_proc_body(entry.body, s.cid)
    ctx.env = ctx.env.bind_proc(s.cid.text(),
                                ProcEntry(s.name, body, entry.decl_path, basis=False))
    ctx.detail = f"{s.name} -> {basis_key}"
    return Single(RunC(s.cid, body, s.key))


def _g3(prog, ctx):
    s = expect_single(prog, "G3a")
    entry = ctx.env.mu.get(s.cid.text())
    if entry is None:
        raise EngineError(f"call {s.cid.text()} has no stored copy")
    m = ctx.take_ident()
    ctx.push_stack(s.key, m)
    info = get_annotation_info(entry.body, ctx.table)
    ctx.aux = ctx.aux.push(STACK_PR, m, info)
    ctx.env = ctx.env.unbind_proc(s.cid.text())
    ctx.detail = "call annotation saved"
    return Single(Skip(s.key))


def _h1(prog, ctx):
    s = expect_single(prog, "H1a")
    if not s.path:
        raise EngineError(f"removal of {s.name} outside any block")
    scope = s.path[0].text()
    loc = ctx.env.gamma.get((s.name, scope))
    if loc is None:
        raise EngineError(f"variable {s.name} is not bound in block {scope}")
    m = ctx.take_ident()
    ctx.push_stack(s.key, m)
    ctx.aux = ctx.aux.push(s.name, m, ctx.env.sigma[loc])
    ctx.env = ctx.env.write(loc, 0).unbind_var(s.name, scope)
    ctx.counters = ctx.counters.free_loc(loc)
    ctx.detail = f"final value of {s.name} saved, freed l{loc}"
    return Single(Skip(s.key))


def _h2(prog, ctx):
    s = expect_single(prog, "H2a")
    if s.cid.text() not in ctx.env.mu:
        raise EngineError(f"procedure {s.cid.text()} is not declared")
    m = ctx.take_ident()
    ctx.push_stack(s.key, m)
    ctx.env = ctx.env.unbind_proc(s.cid.text())
    return Single(Skip(s.key))


_HANDLERS = {
    "S2a": _s2, "P3a": _p3, "P4a": _p4, "D1a": _d1, "I1a": _i1, "I4a": _i4,
    "I5a": _i5, "W1a": _w1, "W2a": _w2, "W4a": _w4, "W5a": _w5, "B1a": _b1,
    "B3a": _b3, "L1a": _l1, "L2a": _l2, "G1a": _g1, "G3a": _g3, "H1a": _h1,
    "H2a": _h2,
}
