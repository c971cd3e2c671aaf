"""Reverse semantics: executes an inverted program forwards, consuming
identifiers in descending order and restoring saved values.

No rule here evaluates an expression; every value comes off the auxiliary
store with a matching identifier.  Rules consuming an identifier check the
statement stack, the reverse counter and the auxiliary stack top agree, so
a corrupted trace fails fast instead of restoring garbage.
"""

from __future__ import annotations

from dataclasses import replace

from ..environments import (
    ProcEntry, STACK_B, STACK_PR, STACK_W, STACK_WI, eval_proc, eval_var,
)
from ..syntax.tree import RunB, RunC, Seq, Single, Skip, is_skip
from ..transform import (
    rename_proc_body, restore_loop_versions, set_annotation_info,
    unrename_loop_body,
)
from .apply import expect_single, rewrite_at
from .config import Configuration, EngineError, RedexId, StepCtx, TransitionRecord
from .step_forward import block_body


def step_reverse(config: Configuration,
                 redex: RedexId) -> tuple[Configuration, TransitionRecord]:
    """Apply one reverse rule at the chosen redex."""
    ctx = StepCtx(config)
    handler = _HANDLERS.get(redex.rule)
    if handler is None:
        raise EngineError(f"unknown reverse rule {redex.rule!r}")
    program = rewrite_at(config.program, redex.path,
                         lambda prog: handler(prog, ctx))
    record = TransitionRecord(-1, redex.rule, redex, ctx.ident, ctx.detail)
    return config.advanced(program, ctx), record


def _s2(prog, ctx):
    if not isinstance(prog, Seq) or not is_skip(prog.left):
        raise EngineError("S2r expects a completed first statement")
    return prog.right


def _p3(prog, ctx):
    return prog.left


def _p4(prog, ctx):
    return prog.right


def _d1(prog, ctx):
    s = expect_single(prog, "D1r")
    m = ctx.take_reverse_ident()
    ctx.pop_stack(s.key, m)
    value, ctx.aux = ctx.aux.pop(s.name, m)
    loc = eval_var(ctx.env.gamma, s.path, s.name)
    ctx.env = ctx.env.write(loc, value)
    ctx.detail = f"{s.name} restored to {value}"
    return Single(Skip(s.key))


def _i1(prog, ctx):
    s = expect_single(prog, "I1r")
    m = ctx.take_reverse_ident()
    ctx.pop_stack(s.key, m)
    value, ctx.aux = ctx.aux.pop(STACK_B, m)
    ctx.detail = f"branch {value} retrieved"
    return Single(replace(s, resolved=value))


def _i4(prog, ctx):
    s = expect_single(prog, "I4r")
    return Single(Skip(s.key))


_i5 = _i4


def _w1(prog, ctx):
    s = expect_single(prog, "W1r")
    if s.cid.text() in ctx.env.beta:
        raise EngineError(f"loop {s.cid.text()} already has a stored copy")
    m = ctx.take_reverse_ident()
    ctx.pop_stack(s.key, m)
    info, ctx.aux = ctx.aux.pop(STACK_WI, m)
    ctx.table = set_annotation_info(s.body, info, ctx.table)
    body = restore_loop_versions(s.body, ctx.counters)
    stored = replace(s, body=body, resolved=None)
    ctx.env = ctx.env.bind_loop(s.cid.text(), stored)
    ctx.detail = "loop annotation restored"
    return Single(stored)


def _w2(prog, ctx):
    s = expect_single(prog, "W2r")
    stored = ctx.env.beta.get(s.cid.text())
    if stored is None:
        raise EngineError(f"loop {s.cid.text()} has no stored copy")
    m = ctx.take_reverse_ident()
    ctx.pop_stack(s.key, m)
    value, ctx.aux = ctx.aux.pop(STACK_W, m)
    body, ctx.counters = unrename_loop_body(stored.body, ctx.counters)
    new_stored = replace(stored, body=body, resolved=None)
    ctx.env = ctx.env.bind_loop(s.cid.text(), new_stored)
    ctx.detail = f"iteration marker {value}"
    return Single(replace(new_stored, resolved=value))


def _w4(prog, ctx):
    s = expect_single(prog, "W4r")
    stored = ctx.env.beta.get(s.cid.text())
    if stored is None:
        raise EngineError(f"loop {s.cid.text()} has no stored copy")
    return Single(stored)


def _w5(prog, ctx):
    s = expect_single(prog, "W5r")
    if s.cid.text() not in ctx.env.beta:
        raise EngineError(f"loop {s.cid.text()} has no stored copy")
    ctx.env = ctx.env.unbind_loop(s.cid.text())
    return Single(Skip(s.key))


def _b1(prog, ctx):
    s = expect_single(prog, "B1r")
    return Single(RunB(block_body(s)))


def _b3(prog, ctx):
    return Single(Skip())


def _l1(prog, ctx):
    # inverse of a variable removal: rebind and restore the final value
    s = expect_single(prog, "L1r")
    if not s.path:
        raise EngineError(f"declaration of {s.name} outside any block")
    m = ctx.take_reverse_ident()
    ctx.pop_stack(s.key, m)
    value, ctx.aux = ctx.aux.pop(s.name, m)
    loc, ctx.counters = ctx.counters.alloc_loc()
    ctx.env = ctx.env.bind_var(s.name, s.path[0].text(), loc, value)
    ctx.detail = f"{s.name} rebound to {value} at l{loc}"
    return Single(Skip(s.key))


def _l2(prog, ctx):
    s = expect_single(prog, "L2r")
    m = ctx.take_reverse_ident()
    ctx.pop_stack(s.key, m)
    ctx.env = ctx.env.bind_proc(s.cid.text(),
                                ProcEntry(s.name, s.body, s.path, basis=True))
    return Single(Skip(s.key))


def _g1(prog, ctx):
    s = expect_single(prog, "G1r")
    m = ctx.take_reverse_ident()
    ctx.pop_stack(s.key, m)
    info, ctx.aux = ctx.aux.pop(STACK_PR, m)
    basis_key = eval_proc(s.name, s.path, ctx.env.mu)
    entry = ctx.env.mu[basis_key]
    body = rename_proc_body(entry.body, s.cid)
    ctx.table = set_annotation_info(body, info, ctx.table)
    ctx.env = ctx.env.bind_proc(s.cid.text(),
                                ProcEntry(s.name, body, entry.decl_path, basis=False))
    ctx.detail = f"{s.name} -> {basis_key}, call annotation restored"
    return Single(RunC(s.cid, body, s.key))


def _g3(prog, ctx):
    s = expect_single(prog, "G3r")
    if s.cid.text() not in ctx.env.mu:
        raise EngineError(f"call {s.cid.text()} has no stored copy")
    ctx.env = ctx.env.unbind_proc(s.cid.text())
    return Single(Skip(s.key))


def _h1(prog, ctx):
    # inverse of a variable declaration: unbind and free the location
    s = expect_single(prog, "H1r")
    if not s.path:
        raise EngineError(f"removal of {s.name} outside any block")
    m = ctx.take_reverse_ident()
    ctx.pop_stack(s.key, m)
    scope = s.path[0].text()
    loc = ctx.env.gamma.get((s.name, scope))
    if loc is None:
        raise EngineError(f"variable {s.name} is not bound in block {scope}")
    ctx.env = ctx.env.write(loc, 0).unbind_var(s.name, scope)
    ctx.counters = ctx.counters.free_loc(loc)
    ctx.detail = f"freed l{loc}"
    return Single(Skip(s.key))


def _h2(prog, ctx):
    s = expect_single(prog, "H2r")
    m = ctx.take_reverse_ident()
    ctx.pop_stack(s.key, m)
    if s.cid.text() not in ctx.env.mu:
        raise EngineError(f"procedure {s.cid.text()} is not declared")
    ctx.env = ctx.env.unbind_proc(s.cid.text())
    return Single(Skip(s.key))


_HANDLERS = {
    "S2r": _s2, "P3r": _p3, "P4r": _p4, "D1r": _d1, "I1r": _i1, "I4r": _i4,
    "I5r": _i5, "W1r": _w1, "W2r": _w2, "W4r": _w4, "W5r": _w5, "B1r": _b1,
    "B3r": _b3, "L1r": _l1, "L2r": _l2, "G1r": _g1, "G3r": _g3, "H1r": _h1,
    "H2r": _h2,
}
