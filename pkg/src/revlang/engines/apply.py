"""Spine rewriting shared by the three engines."""

from __future__ import annotations

from typing import Callable

from ..syntax.tree import If, Par, Program, RunB, RunC, Seq, Single, While
from .config import EngineError


def rewrite_at(prog: Program, path: tuple[str, ...],
               leaf: Callable[[Program], Program]) -> Program:
    """Rebuild `prog` with `leaf` applied to the subterm at `path`."""
    if not path:
        return leaf(prog)
    step, rest = path[0], path[1:]
    if step == "seqL":
        if not isinstance(prog, Seq):
            raise EngineError("redex path expects a sequence")
        return Seq(rewrite_at(prog.left, rest, leaf), prog.right)
    if step == "parL":
        if not isinstance(prog, Par):
            raise EngineError("redex path expects a parallel composition")
        return Par(rewrite_at(prog.left, rest, leaf), prog.right)
    if step == "parR":
        if not isinstance(prog, Par):
            raise EngineError("redex path expects a parallel composition")
        return Par(prog.left, rewrite_at(prog.right, rest, leaf))
    if not isinstance(prog, Single):
        raise EngineError("redex path expects a statement")
    s = prog.stmt
    if step == "then":
        if not isinstance(s, If):
            raise EngineError("redex path expects a conditional")
        return Single(If(s.cid, s.cond, rewrite_at(s.then, rest, leaf),
                         s.orelse, s.path, s.key, s.resolved, pos=s.pos))
    if step == "else":
        if not isinstance(s, If):
            raise EngineError("redex path expects a conditional")
        return Single(If(s.cid, s.cond, s.then,
                         rewrite_at(s.orelse, rest, leaf),
                         s.path, s.key, s.resolved, pos=s.pos))
    if step == "body":
        if isinstance(s, While):
            return Single(While(s.cid, s.cond, rewrite_at(s.body, rest, leaf),
                                s.path, s.key, s.resolved, pos=s.pos))
        if isinstance(s, RunC):
            return Single(RunC(s.cid, rewrite_at(s.body, rest, leaf), s.key))
        if isinstance(s, RunB):
            return Single(RunB(rewrite_at(s.body, rest, leaf)))
        raise EngineError("redex path expects a loop, call or block body")
    raise EngineError(f"unknown path step {step!r}")


def expect_single(prog: Program, what: str):
    if not isinstance(prog, Single):
        raise EngineError(f"rule {what} expects a statement at the redex")
    return prog.stmt


def subprogram_at(prog: Program, path: tuple[str, ...]) -> Program:
    """The subterm a redex path points at."""
    for step in path:
        if step == "seqL":
            prog = prog.left
        elif step == "parL":
            prog = prog.left
        elif step == "parR":
            prog = prog.right
        else:
            s = prog.stmt
            if step == "then":
                prog = s.then
            elif step == "else":
                prog = s.orelse
            else:
                prog = s.body
    return prog
