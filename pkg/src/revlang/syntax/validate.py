"""Static well-formedness checks for parsed or transformed programs."""

from __future__ import annotations

from .tree import (
    Block, Call, If, Path, ProcDecl, ProcRemove, Program, RunB, RunC,
    Single, Seq, Par, While, statements,
)

_KIND_OF = {
    If: "if", While: "while", Block: "block", ProcDecl: "proc", Call: "call",
    RunC: "call",
}


def validate(prog: Program, allow_run: bool = False) -> list[str]:
    """Return diagnostics; an empty list means the program is well formed."""
    diags: list[str] = []
    seen: dict[str, str] = {}
    for s in statements(prog, into_removals=False):
        if isinstance(s, (RunB, RunC)) and not allow_run:
            diags.append("reserved runB/runC construct present in program")
        if isinstance(s, ProcRemove):
            continue  # mirrors its declaration's id by design
        cid = getattr(s, "cid", None)
        if cid is None:
            continue
        expected = _KIND_OF.get(type(s))
        if expected and cid.kind != expected:
            diags.append(f"construct {cid.text()} has kind {cid.kind!r}, "
                         f"expected {expected!r}")
        text = cid.text()
        if text in seen:
            diags.append(f"duplicate construct identifier {text}")
        else:
            seen[text] = cid.kind
    _check_paths(prog, (), diags)
    _check_blocks(prog, diags)
    return diags


def _check_paths(prog: Program, path: Path, diags: list[str]):
    if isinstance(prog, (Seq, Par)):
        _check_paths(prog.left, path, diags)
        _check_paths(prog.right, path, diags)
        return
    if not isinstance(prog, Single):
        return
    s = prog.stmt
    own = getattr(s, "path", None)
    if own is not None and not isinstance(s, Block) and own != path:
        from .tree import path_text
        diags.append(f"statement has path {path_text(own)}, "
                     f"expected {path_text(path)}")
    if isinstance(s, If):
        _check_paths(s.then, path, diags)
        _check_paths(s.orelse, path, diags)
    elif isinstance(s, While):
        _check_paths(s.body, path, diags)
    elif isinstance(s, Block):
        inner = (s.cid,) + path
        for d in s.var_decls:
            if d.path != inner:
                diags.append(f"declaration of {d.name} has a stale path")
        for d in s.proc_decls:
            if d.path != inner:
                diags.append(f"declaration of {d.name} has a stale path")
            _check_paths(d.body, inner, diags)
        _check_paths(s.body, inner, diags)
        for r in s.proc_removes:
            if r.path != inner:
                diags.append(f"removal of {r.name} has a stale path")
            _check_paths(r.body, inner, diags)
        for r in s.var_removes:
            if r.path != inner:
                diags.append(f"removal of {r.name} has a stale path")
    elif isinstance(s, (ProcDecl, ProcRemove)):
        _check_paths(s.body, path, diags)
    elif isinstance(s, (RunB, RunC)):
        # bodies of intermediate forms already carry their own block paths
        pass


def _check_blocks(prog: Program, diags: list[str]):
    for s in statements(prog, into_removals=False):
        if not isinstance(s, Block):
            continue
        want_rv = [(d.name, d.value) for d in reversed(s.var_decls)]
        got_rv = [(r.name, r.value) for r in s.var_removes]
        if want_rv != got_rv:
            diags.append(f"block {s.cid.text()} variable removals do not "
                         f"mirror its declarations")
        want_rp = [(d.cid, d.name) for d in reversed(s.proc_decls)]
        got_rp = [(r.cid, r.name) for r in s.proc_removes]
        if want_rp != got_rp:
            diags.append(f"block {s.cid.text()} procedure removals do not "
                         f"mirror its declarations")
