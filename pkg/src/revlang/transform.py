"""Program-to-program transformations.

* annotate / remove_annotation: add or strip the statement keys that tie
  statements to their identifier stacks in the central annotation table.
* invert: turn an executed annotated program into the program that undoes it.
* rename_loop_body / unrename_loop_body / restore_loop_versions: construct
  versioning applied per loop iteration.
* rename_proc_body / unrename_proc_body: call-prefix renaming of procedure
  body copies.
* get_annotation_info / set_annotation_info / reflect_*: snapshotting and
  reinserting identifier stacks for copies stored in the while / procedure
  environments.

A removal statement shares its body subtree with the matching declaration,
so both always carry identical keys.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Callable, Optional

from .environments import Counters, EnvSet
from .syntax.tree import (
    Assign, Block, Call, ConstructId, EmptyProg, If, Key, Par, Path,
    ProcDecl, ProcRemove, Program, RunB, RunC, Seq, Single, Skip, Stmt,
    VarDecl, VarRemove, While, statements,
)

AnnotationInfo = tuple  # ordered ((key, stack), ...) pairs
Table = dict  # Key -> tuple[int, ...]


class TransformError(Exception):
    pass


# --------------------------------------------------------------------------
# Annotation

def annotate(prog: Program) -> tuple[Program, Table]:
    """Return the annotated version of an original program plus its (empty)
    annotation table."""
    for s in statements(prog):
        if getattr(s, "key", None) is not None:
            raise TransformError("program is already annotated")
        if isinstance(s, (RunB, RunC)):
            raise TransformError("cannot annotate intermediate runB/runC forms")
    counter = 0
    table: Table = {}

    def fresh() -> Key:
        nonlocal counter
        counter += 1
        key = (counter,)
        table[key] = ()
        return key

    def ann_stmt(s: Stmt) -> Stmt:
        if isinstance(s, Skip):
            return s
        if isinstance(s, Assign):
            return replace(s, key=fresh())
        if isinstance(s, If):
            return replace(s, key=fresh(), then=ann(s.then), orelse=ann(s.orelse))
        if isinstance(s, While):
            return replace(s, key=fresh(), body=ann(s.body))
        if isinstance(s, VarDecl):
            return replace(s, key=fresh())
        if isinstance(s, ProcDecl):
            return replace(s, key=fresh(), body=ann(s.body))
        if isinstance(s, Call):
            return replace(s, key=fresh())
        if isinstance(s, Block):
            var_decls = tuple(ann_stmt(d) for d in s.var_decls)
            proc_decls = tuple(ann_stmt(d) for d in s.proc_decls)
            by_cid = {d.cid.text(): d for d in proc_decls}
            proc_removes = tuple(
                replace(r, key=fresh(), body=by_cid[r.cid.text()].body)
                if r.cid.text() in by_cid else replace(r, key=fresh(), body=ann(r.body))
                for r in s.proc_removes)
            var_removes = tuple(replace(r, key=fresh()) for r in s.var_removes)
            return replace(s, var_decls=var_decls, proc_decls=proc_decls,
                           body=ann(s.body), proc_removes=proc_removes,
                           var_removes=var_removes)
        raise TransformError(f"cannot annotate {type(s).__name__}")

    def ann(p: Program) -> Program:
        if isinstance(p, Single):
            return Single(ann_stmt(p.stmt))
        if isinstance(p, Seq):
            return Seq(ann(p.left), ann(p.right))
        if isinstance(p, Par):
            return Par(ann(p.left), ann(p.right))
        return p

    return ann(prog), table


def remove_annotation(prog: Program) -> Program:
    """Strip statement keys; inverse of annotate up to key identity."""

    def strip_stmt(s: Stmt) -> Stmt:
        if isinstance(s, Skip):
            return Skip()
        if isinstance(s, (Assign, VarDecl, VarRemove, Call)):
            return replace(s, key=None)
        if isinstance(s, If):
            return replace(s, key=None, then=strip(s.then), orelse=strip(s.orelse))
        if isinstance(s, While):
            return replace(s, key=None, body=strip(s.body))
        if isinstance(s, ProcDecl):
            return replace(s, key=None, body=strip(s.body))
        if isinstance(s, ProcRemove):
            return replace(s, key=None, body=strip(s.body))
        if isinstance(s, Block):
            return replace(
                s,
                var_decls=tuple(strip_stmt(d) for d in s.var_decls),
                proc_decls=tuple(strip_stmt(d) for d in s.proc_decls),
                body=strip(s.body),
                proc_removes=tuple(strip_stmt(r) for r in s.proc_removes),
                var_removes=tuple(strip_stmt(r) for r in s.var_removes))
        if isinstance(s, RunB):
            return RunB(strip(s.body))
        if isinstance(s, RunC):
            return RunC(s.cid, strip(s.body), None)
        raise TransformError(f"cannot strip {type(s).__name__}")

    def strip(p: Program) -> Program:
        if isinstance(p, Single):
            return Single(strip_stmt(p.stmt))
        if isinstance(p, Seq):
            return Seq(strip(p.left), strip(p.right))
        if isinstance(p, Par):
            return Par(strip(p.left), strip(p.right))
        return p

    return strip(prog)


# --------------------------------------------------------------------------
# Inversion

def invert(prog: Program) -> Program:
    """Invert an executed annotated program: statement order reverses,
    declarations swap with removals, identifier stacks travel with their
    statements."""
    if isinstance(prog, EmptyProg):
        return prog
    if isinstance(prog, Seq):
        return Seq(invert(prog.right), invert(prog.left))
    if isinstance(prog, Par):
        return Par(invert(prog.left), invert(prog.right))
    return Single(_invert_stmt(prog.stmt))


def _invert_stmt(s: Stmt) -> Stmt:
    if isinstance(s, (Skip, Assign, Call)):
        return s
    if isinstance(s, If):
        return replace(s, then=invert(s.then), orelse=invert(s.orelse))
    if isinstance(s, While):
        return replace(s, body=invert(s.body))
    if isinstance(s, VarDecl):
        return VarRemove(s.name, s.value, s.path, s.key, pos=s.pos)
    if isinstance(s, VarRemove):
        return VarDecl(s.name, s.value, s.path, s.key, pos=s.pos)
    if isinstance(s, ProcDecl):
        return ProcRemove(s.cid, s.name, invert(s.body), s.path, s.key, pos=s.pos)
    if isinstance(s, ProcRemove):
        return ProcDecl(s.cid, s.name, invert(s.body), s.path, s.key, pos=s.pos)
    if isinstance(s, Block):
        return Block(
            s.cid,
            var_decls=tuple(_invert_stmt(r) for r in reversed(s.var_removes)),
            proc_decls=tuple(_invert_stmt(r) for r in reversed(s.proc_removes)),
            body=invert(s.body),
            proc_removes=tuple(_invert_stmt(d) for d in reversed(s.proc_decls)),
            var_removes=tuple(_invert_stmt(d) for d in reversed(s.var_decls)),
            pos=s.pos)
    if isinstance(s, RunB):
        return RunB(invert(s.body))
    if isinstance(s, RunC):
        return RunC(s.cid, invert(s.body), s.key)
    raise TransformError(f"cannot invert {type(s).__name__}")


# --------------------------------------------------------------------------
# Generic construct-id / key rewriting

def _rewrite(prog: Program,
             cid_fn: Callable[[ConstructId], ConstructId],
             key_fn: Callable[[Key], Key]) -> Program:
    def fix_path(path: Path) -> Path:
        return tuple(cid_fn(b) for b in path)

    def fix_key(key: Optional[Key]) -> Optional[Key]:
        return None if key is None else key_fn(key)

    def fix_stmt(s: Stmt) -> Stmt:
        if isinstance(s, Skip):
            return Skip(fix_key(s.key))
        if isinstance(s, Assign):
            return replace(s, path=fix_path(s.path), key=fix_key(s.key))
        if isinstance(s, If):
            return replace(s, cid=cid_fn(s.cid), path=fix_path(s.path),
                           key=fix_key(s.key), then=fix(s.then), orelse=fix(s.orelse))
        if isinstance(s, While):
            return replace(s, cid=cid_fn(s.cid), path=fix_path(s.path),
                           key=fix_key(s.key), body=fix(s.body))
        if isinstance(s, VarDecl):
            return replace(s, path=fix_path(s.path), key=fix_key(s.key))
        if isinstance(s, VarRemove):
            return replace(s, path=fix_path(s.path), key=fix_key(s.key))
        if isinstance(s, ProcDecl):
            return replace(s, cid=cid_fn(s.cid), path=fix_path(s.path),
                           key=fix_key(s.key), body=fix(s.body))
        if isinstance(s, ProcRemove):
            return replace(s, cid=cid_fn(s.cid), path=fix_path(s.path),
                           key=fix_key(s.key), body=fix(s.body))
        if isinstance(s, Call):
            return replace(s, cid=cid_fn(s.cid), path=fix_path(s.path),
                           key=fix_key(s.key))
        if isinstance(s, Block):
            return replace(
                s, cid=cid_fn(s.cid),
                var_decls=tuple(fix_stmt(d) for d in s.var_decls),
                proc_decls=tuple(fix_stmt(d) for d in s.proc_decls),
                body=fix(s.body),
                proc_removes=tuple(fix_stmt(r) for r in s.proc_removes),
                var_removes=tuple(fix_stmt(r) for r in s.var_removes))
        if isinstance(s, RunB):
            return RunB(fix(s.body))
        if isinstance(s, RunC):
            return RunC(cid_fn(s.cid), fix(s.body), fix_key(s.key))
        raise TransformError(f"cannot rewrite {type(s).__name__}")

    def fix(p: Program) -> Program:
        if isinstance(p, Single):
            return Single(fix_stmt(p.stmt))
        if isinstance(p, Seq):
            return Seq(fix(p.left), fix(p.right))
        if isinstance(p, Par):
            return Par(fix(p.left), fix(p.right))
        return p

    return fix(prog)


def _local_cids(prog: Program) -> list[ConstructId]:
    """Construct ids declared inside the region (removal mirrors excluded)."""
    out = []
    seen = set()
    for s in statements(prog, into_removals=False):
        if isinstance(s, ProcRemove):
            continue
        cid = getattr(s, "cid", None)
        if cid is not None and cid not in seen:
            seen.add(cid)
            out.append(cid)
    return out


# --------------------------------------------------------------------------
# Loop-body versioning

def rename_loop_body(prog: Program, counters: Counters) -> tuple[Program, Counters]:
    """Advance the version of every construct in a loop body by one."""
    mapping: dict[ConstructId, ConstructId] = {}
    for cid in _local_cids(prog):
        version, counters = counters.next_version(cid.counter_key())
        mapping[cid] = cid.with_version(version)
    if not mapping:
        return prog, counters
    return _rewrite(prog, lambda c: mapping.get(c, c), lambda k: k), counters


def unrename_loop_body(prog: Program, counters: Counters) -> tuple[Program, Counters]:
    """Step the version of every construct in a loop body back by one."""
    mapping: dict[ConstructId, ConstructId] = {}
    for cid in _local_cids(prog):
        version, counters = counters.previous_version(cid.counter_key())
        mapping[cid] = cid.with_version(version)
    if not mapping:
        return prog, counters
    return _rewrite(prog, lambda c: mapping.get(c, c), lambda k: k), counters


def restore_loop_versions(prog: Program, counters: Counters) -> Program:
    """Set every construct in a loop body to its final recorded version,
    reconstructing the stored copy a completed loop left behind."""
    mapping = {cid: cid.with_version(counters.current_version(cid.counter_key()))
               for cid in _local_cids(prog)}
    if not mapping:
        return prog
    return _rewrite(prog, lambda c: mapping.get(c, c), lambda k: k)


# --------------------------------------------------------------------------
# Procedure-body renaming

def rename_proc_body(prog: Program, call_id: ConstructId) -> Program:
    """Prefix every construct id in a procedure body copy with the call id;
    paths follow the renamed blocks and statement keys gain the activation
    suffix, reconnecting reverse copies to the stacks their forward twins
    populated."""
    tokens = call_id.tokens()
    suffix = call_id.text()
    local = set(_local_cids(prog))

    def cid_fn(c: ConstructId) -> ConstructId:
        if c in local:
            return replace(c, prefix=tokens + c.prefix)
        return c

    return _rewrite(prog, cid_fn, lambda k: k + (suffix,))


def unrename_proc_body(prog: Program, call_id: ConstructId) -> Program:
    """Strip the call-id prefix added by rename_proc_body."""
    tokens = call_id.tokens()
    suffix = call_id.text()
    n = len(tokens)
    local = set(_local_cids(prog))

    def cid_fn(c: ConstructId) -> ConstructId:
        if c not in local:
            return c
        if c.prefix[:n] != tokens:
            raise TransformError(
                f"construct {c.text()} does not carry prefix {suffix!r}")
        return replace(c, prefix=c.prefix[n:])

    def key_fn(key: Key) -> Key:
        if not key or key[-1] != suffix:
            raise TransformError(f"statement key {key!r} lacks suffix {suffix!r}")
        return key[:-1]

    return _rewrite(prog, cid_fn, key_fn)


# --------------------------------------------------------------------------
# Annotation info

def annotation_keys(prog: Program) -> list[Key]:
    """Keys of annotatable statements in pre-order, each once."""
    out = []
    seen = set()
    for s in statements(prog):
        key = getattr(s, "key", None)
        if key is not None and key not in seen:
            seen.add(key)
            out.append(key)
    return out


def get_annotation_info(prog: Program, table: Table) -> AnnotationInfo:
    """Snapshot the identifier stacks of every statement of `prog`."""
    return tuple((key, table.get(key, ())) for key in annotation_keys(prog))


def set_annotation_info(prog: Program, info: AnnotationInfo, table: Table) -> Table:
    """Write an annotation snapshot back for the statements of `prog`."""
    keys = set(annotation_keys(prog))
    given = {key for key, _ in info}
    if keys != given:
        raise TransformError(
            f"annotation info does not match program: {len(given)} entries "
            f"for {len(keys)} statements")
    new_table = dict(table)
    for key, stack in info:
        new_table[key] = tuple(stack)
    return new_table


def reflect_loop_copy(env: EnvSet, loop_key: str, executing: Program,
                      table: Table) -> Table:
    """Carry annotation changes of an executing loop body into the stored
    copy.  Copies share statement keys with the origin, so under the central
    table this re-asserts the stacks the table already holds."""
    stored = env.beta.get(loop_key)
    if stored is None:
        raise TransformError(f"no loop copy stored for {loop_key}")
    return _reflect(stored.body, executing, table)


def reflect_call_copy(env: EnvSet, call_key: str, executing: Program,
                      table: Table) -> Table:
    """reflect_loop_copy's analogue for an executing procedure body."""
    entry = env.mu.get(call_key)
    if entry is None:
        raise TransformError(f"no procedure copy stored for {call_key}")
    return _reflect(entry.body, executing, table)


def _reflect(stored: Program, executing: Program, table: Table) -> Table:
    stored_keys = set(annotation_keys(stored))
    new_table = dict(table)
    for s in statements(executing):
        key = getattr(s, "key", None)
        if key is None:
            continue
        if key not in stored_keys:
            raise TransformError(f"executing statement key {key!r} is not "
                                 f"part of the stored copy")
        stack = table.get(key, ())
        if stack or key in new_table:
            new_table[key] = stack
    return new_table
