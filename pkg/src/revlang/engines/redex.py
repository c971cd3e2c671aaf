"""Enabled-redex enumeration for all three engines.

Forward modes list every position whose rule premises hold.  In reverse
mode a rule that consumes an identifier is enabled only when its
statement's stack top equals the reverse counter, so at most one such
position is ever offered; the order-free rules are always listed.
"""

from __future__ import annotations

from ..syntax.tree import (
    Assign, Block, Call, If, Par, ProcDecl, ProcRemove, Program, RunB, RunC,
    Seq, Single, VarDecl, VarRemove, While, is_skip,
)
from .config import ANNOTATED, Configuration, REVERSE, RedexId

# Rules that assign (forward) or consume (reverse) an identifier.
M_RULES = {
    "D1a", "I4a", "I5a", "W1a", "W2a", "W5a", "L1a", "L2a", "G3a", "H1a", "H2a",
}
REVERSE_M_RULES = {
    "D1r", "I1r", "W1r", "W2r", "L1r", "L2r", "G1r", "H1r", "H2r",
}


def _suffix(mode: str) -> str:
    if mode == ANNOTATED:
        return "a"
    if mode == REVERSE:
        return "r"
    return ""


def enabled_redexes(config: Configuration) -> list[RedexId]:
    """All positions where a rule can fire, in canonical order."""
    acc: list[RedexId] = []
    _walk(config, config.program, (), acc)
    if len(acc) > 1:
        acc.sort(key=RedexId.sort_key)
    return acc


def _walk(config, prog: Program, path: tuple, acc: list):
    suffix = _suffix(config.mode)
    if isinstance(prog, Seq):
        if is_skip(prog.left):
            acc.append(RedexId(path, "S2" + suffix))
        else:
            _walk(config, prog.left, path + ("seqL",), acc)
        return
    if isinstance(prog, Par):
        _walk(config, prog.left, path + ("parL",), acc)
        _walk(config, prog.right, path + ("parR",), acc)
        if is_skip(prog.right):
            acc.append(RedexId(path, "P3" + suffix))
        if is_skip(prog.left):
            acc.append(RedexId(path, "P4" + suffix))
        return
    if not isinstance(prog, Single):
        return
    if config.mode == REVERSE:
        _stmt_redexes_reverse(config, prog.stmt, path, acc)
    else:
        _stmt_redexes_forward(config, prog.stmt, path, acc)


def _stmt_redexes_forward(config, s, path, acc):
    suffix = _suffix(config.mode)
    if isinstance(s, Assign):
        acc.append(RedexId(path, "D1" + suffix))
    elif isinstance(s, If):
        if s.resolved is None:
            acc.append(RedexId(path, "I1" + suffix))
        elif s.resolved:
            if is_skip(s.then):
                acc.append(RedexId(path, "I4" + suffix))
            else:
                _walk(config, s.then, path + ("then",), acc)
        else:
            if is_skip(s.orelse):
                acc.append(RedexId(path, "I5" + suffix))
            else:
                _walk(config, s.orelse, path + ("else",), acc)
    elif isinstance(s, While):
        if s.resolved is None:
            rule = "W1" if s.cid.text() not in config.env.beta else "W2"
            acc.append(RedexId(path, rule + suffix))
        elif s.resolved:
            if is_skip(s.body):
                acc.append(RedexId(path, "W4" + suffix))
            else:
                _walk(config, s.body, path + ("body",), acc)
        else:
            acc.append(RedexId(path, "W5" + suffix))
    elif isinstance(s, Block):
        acc.append(RedexId(path, "B1" + suffix))
    elif isinstance(s, RunB):
        if is_skip(s.body):
            acc.append(RedexId(path, "B3" + suffix))
        else:
            _walk(config, s.body, path + ("body",), acc)
    elif isinstance(s, VarDecl):
        acc.append(RedexId(path, "L1" + suffix))
    elif isinstance(s, ProcDecl):
        acc.append(RedexId(path, "L2" + suffix))
    elif isinstance(s, Call):
        acc.append(RedexId(path, "G1" + suffix))
    elif isinstance(s, RunC):
        if is_skip(s.body):
            acc.append(RedexId(path, "G3" + suffix))
        else:
            _walk(config, s.body, path + ("body",), acc)
    elif isinstance(s, VarRemove):
        acc.append(RedexId(path, "H1" + suffix))
    elif isinstance(s, ProcRemove):
        acc.append(RedexId(path, "H2" + suffix))


def _guard(config, key) -> bool:
    """Reverse identifier guard: the statement holds the highest unseen id."""
    if key is None:
        return False
    prev = config.counters.peek_previous()
    if prev < 1:
        return False
    stack = config.table.get(key, ())
    return bool(stack) and stack[-1] == prev


def _stmt_redexes_reverse(config, s, path, acc):
    if isinstance(s, Assign):
        if _guard(config, s.key):
            acc.append(RedexId(path, "D1r"))
    elif isinstance(s, If):
        if s.resolved is None:
            if _guard(config, s.key):
                acc.append(RedexId(path, "I1r"))
        elif s.resolved:
            if is_skip(s.then):
                acc.append(RedexId(path, "I4r"))
            else:
                _walk(config, s.then, path + ("then",), acc)
        else:
            if is_skip(s.orelse):
                acc.append(RedexId(path, "I5r"))
            else:
                _walk(config, s.orelse, path + ("else",), acc)
    elif isinstance(s, While):
        if s.resolved is None:
            if _guard(config, s.key):
                rule = "W1r" if s.cid.text() not in config.env.beta else "W2r"
                acc.append(RedexId(path, rule))
        elif s.resolved:
            if is_skip(s.body):
                acc.append(RedexId(path, "W4r"))
            else:
                _walk(config, s.body, path + ("body",), acc)
        else:
            acc.append(RedexId(path, "W5r"))
    elif isinstance(s, Block):
        acc.append(RedexId(path, "B1r"))
    elif isinstance(s, RunB):
        if is_skip(s.body):
            acc.append(RedexId(path, "B3r"))
        else:
            _walk(config, s.body, path + ("body",), acc)
    elif isinstance(s, VarDecl):
        if _guard(config, s.key):
            acc.append(RedexId(path, "L1r"))
    elif isinstance(s, ProcDecl):
        if _guard(config, s.key):
            acc.append(RedexId(path, "L2r"))
    elif isinstance(s, Call):
        if _guard(config, s.key):
            acc.append(RedexId(path, "G1r"))
    elif isinstance(s, RunC):
        if is_skip(s.body):
            acc.append(RedexId(path, "G3r"))
        else:
            _walk(config, s.body, path + ("body",), acc)
    elif isinstance(s, VarRemove):
        if _guard(config, s.key):
            acc.append(RedexId(path, "H1r"))
    elif isinstance(s, ProcRemove):
        if _guard(config, s.key):
            acc.append(RedexId(path, "H2r"))
