"""Canonical pretty-printer.

Without a table this produces plain source text that re-parses to the same
tree.  With an annotation table it produces the executed-annotated display:
every annotated statement gains a `(path,[i1,...,ik])` suffix, stacks
printed bottom to top.
"""

from __future__ import annotations

from typing import Optional

from .tree import (
    AExpr, AParen, Assign, BCmp, BLit, BNot, BParen, BExpr, Block, Call,
    EmptyProg, If, Num, Par, Path, ProcDecl, ProcRemove, Program, RunB,
    RunC, Seq, Single, Skip, Stmt, Var, VarDecl, VarRemove, While, path_text,
)

INDENT = "  "


def render_aexpr(e: AExpr) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, AParen):
        return f"({render_aexpr(e.inner)})"
    return f"{render_aexpr(e.left)} {e.op} {render_aexpr(e.right)}"


def render_bexpr(e: BExpr) -> str:
    if isinstance(e, BLit):
        return "true" if e.value else "false"
    if isinstance(e, BNot):
        return f"!{render_bexpr(e.inner)}"
    if isinstance(e, BParen):
        return f"({render_bexpr(e.inner)})"
    if isinstance(e, BCmp):
        return f"{render_aexpr(e.left)} {e.op} {render_aexpr(e.right)}"
    return f"{render_bexpr(e.left)} && {render_bexpr(e.right)}"


class _Renderer:
    def __init__(self, table: Optional[dict]):
        self.table = table
        self.lines: list[str] = []

    def emit(self, depth: int, text: str):
        self.lines.append(INDENT * depth + text)

    def suffix(self, path: Path, key) -> str:
        if self.table is None or key is None:
            return ""
        stack = self.table.get(key, ())
        ids = ",".join(str(i) for i in stack)
        return f" ({path_text(path)},[{ids}])"

    def program(self, prog: Program, depth: int):
        for item in _seq_items(prog):
            first = len(self.lines)
            self.unit(item, depth)
            if self.lines and len(self.lines) > first:
                self.lines[-1] += ";"

    def unit(self, prog: Program, depth: int):
        if isinstance(prog, EmptyProg):
            return
        if isinstance(prog, Par):
            self.emit(depth, "par {")
            self.program(prog.left, depth + 1)
            self.emit(depth, "} {")
            self.program(prog.right, depth + 1)
            self.emit(depth, "}")
            return
        if isinstance(prog, Single):
            self.stmt(prog.stmt, depth)
            return
        # nested sequence below a par arm keeps its own lines
        self.program(prog, depth)

    def cond(self, stmt) -> str:
        if stmt.resolved is not None:
            return "true" if stmt.resolved else "false"
        return render_bexpr(stmt.cond)

    def stmt(self, s: Stmt, depth: int):
        if isinstance(s, Skip):
            self.emit(depth, "skip")
        elif isinstance(s, Assign):
            self.emit(depth, f"{s.name} = {render_aexpr(s.expr)}"
                      + self.suffix(s.path, s.key))
        elif isinstance(s, If):
            self.emit(depth, f"if {s.cid.text()} ({self.cond(s)}) then")
            self.program(s.then, depth + 1)
            if not _is_plain_skip(s.orelse):
                self.emit(depth, "else")
                self.program(s.orelse, depth + 1)
            self.emit(depth, "end" + self.suffix(s.path, s.key))
        elif isinstance(s, While):
            self.emit(depth, f"while {s.cid.text()} ({self.cond(s)}) do")
            self.program(s.body, depth + 1)
            self.emit(depth, "end" + self.suffix(s.path, s.key))
        elif isinstance(s, Block):
            self.emit(depth, f"begin {s.cid.text()}")
            for d in s.var_decls:
                self.stmt(d, depth + 1)
                self.lines[-1] += ";"
            for d in s.proc_decls:
                self.stmt(d, depth + 1)
                self.lines[-1] += ";"
            self.program(s.body, depth + 1)
            for r in s.proc_removes:
                self.stmt(r, depth + 1)
                self.lines[-1] += ";"
            for r in s.var_removes:
                self.stmt(r, depth + 1)
                self.lines[-1] += ";"
            self.emit(depth, "end")
        elif isinstance(s, VarDecl):
            self.emit(depth, f"var {s.name} = {s.value}" + self.suffix(s.path, s.key))
        elif isinstance(s, ProcDecl):
            self.emit(depth, f"proc {s.cid.text()} {s.name} is")
            self.program(s.body, depth + 1)
            self.emit(depth, "end" + self.suffix(s.path, s.key))
        elif isinstance(s, Call):
            self.emit(depth, f"call {s.cid.text()} {s.name}" + self.suffix(s.path, s.key))
        elif isinstance(s, VarRemove):
            self.emit(depth, f"remove {s.name} = {s.value}" + self.suffix(s.path, s.key))
        elif isinstance(s, ProcRemove):
            self.emit(depth, f"remove {s.cid.text()} {s.name}" + self.suffix(s.path, s.key))
        elif isinstance(s, RunB):
            self.emit(depth, "runB")
            self.program(s.body, depth + 1)
            self.emit(depth, "end")
        elif isinstance(s, RunC):
            self.emit(depth, f"runC {s.cid.text()}")
            self.program(s.body, depth + 1)
            self.emit(depth, "end" + self.suffix((), s.key))
        else:  # pragma: no cover
            raise TypeError(f"cannot render {s!r}")


def _is_plain_skip(prog: Program) -> bool:
    return isinstance(prog, Single) and isinstance(prog.stmt, Skip)


def _seq_items(prog: Program):
    if isinstance(prog, Seq):
        yield from _seq_items(prog.left)
        yield from _seq_items(prog.right)
    elif not isinstance(prog, EmptyProg):
        yield prog


def render(prog: Program, table: Optional[dict] = None) -> str:
    """Pretty-print a program; pass a table for the annotated display."""
    r = _Renderer(table)
    r.program(prog, 0)
    return "\n".join(r.lines) + ("\n" if r.lines else "")
