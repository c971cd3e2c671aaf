"""AST for the reversible while-language.

One tree type covers all three program flavours: original source programs,
annotated programs (statements carry a key into the central annotation
table) and inverted programs.  `runB` / `runC` are reserved intermediate
forms produced by the engines and never appear in parsed source.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Union

# A statement key identifies one annotatable statement for the lifetime of
# an execution.  Renamed procedure-body copies derive their keys from the
# source statement's key plus the call identifier, so a reverse execution
# reconstructs exactly the keys the forward execution used.
Key = tuple

GLOBAL_SCOPE = "λ"


@dataclass(frozen=True, slots=True)
class ConstructId:
    """Unique name of a conditional, loop, block, procedure or call."""

    kind: str  # 'if' | 'while' | 'block' | 'proc' | 'call'
    base: str
    version: int = 0
    prefix: tuple[str, ...] = ()

    def text(self) -> str:
        head = "".join(p + ":" for p in self.prefix)
        tail = f".{self.version}" if self.version else ""
        return head + self.base + tail

    def tokens(self) -> tuple[str, ...]:
        """Token sequence used when this id prefixes a renamed body."""
        tail = f".{self.version}" if self.version else ""
        return self.prefix + (self.base + tail,)

    def counter_key(self) -> str:
        """Key for the per-base version counter (prefix-qualified)."""
        return "".join(p + ":" for p in self.prefix) + self.base

    def with_version(self, version: int) -> "ConstructId":
        return replace(self, version=version)

    def __str__(self) -> str:  # pragma: no cover - debugging aid
        return self.text()


# Scope path: enclosing block ids, innermost first; () is the global scope.
Path = tuple[ConstructId, ...]


def path_text(path: Path) -> str:
    if not path:
        return GLOBAL_SCOPE
    return "*".join(b.text() for b in path)


# --------------------------------------------------------------------------
# Expressions.  Evaluation is pure; parenthesised nodes are kept so a parsed
# tree renders back to the text it came from.

@dataclass(frozen=True, slots=True)
class Num:
    value: int


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class AParen:
    inner: "AExpr"


@dataclass(frozen=True, slots=True)
class ABin:
    op: str  # '+' | '-' | '*'
    left: "AExpr"
    right: "AExpr"


AExpr = Union[Num, Var, AParen, ABin]


@dataclass(frozen=True, slots=True)
class BLit:
    value: bool


@dataclass(frozen=True, slots=True)
class BNot:
    inner: "BExpr"


@dataclass(frozen=True, slots=True)
class BParen:
    inner: "BExpr"


@dataclass(frozen=True, slots=True)
class BCmp:
    op: str  # '==' | '>'
    left: AExpr
    right: AExpr


@dataclass(frozen=True, slots=True)
class BAnd:
    left: "BExpr"
    right: "BExpr"


BExpr = Union[BLit, BNot, BParen, BCmp, BAnd]


# --------------------------------------------------------------------------
# Statements and programs.
#
# `pos` is the source line/column of the statement (kept through renaming so
# debugger labels can point back at source); it never takes part in
# structural equality.

Pos = Optional[tuple[int, int]]


def _pos_field() -> Pos:
    return field(default=None, compare=False, repr=False)  # type: ignore[return-value]


@dataclass(frozen=True, slots=True)
class Skip:
    # A completed statement leaves `skip` carrying that statement's key.
    key: Optional[Key] = None


@dataclass(frozen=True, slots=True)
class Assign:
    name: str
    expr: AExpr
    path: Path = ()
    key: Optional[Key] = None
    pos: Pos = _pos_field()


@dataclass(frozen=True, slots=True)
class If:
    cid: ConstructId
    cond: BExpr
    then: "Program"
    orelse: "Program"
    path: Path = ()
    key: Optional[Key] = None
    # None until the condition has been consumed in the current activation.
    resolved: Optional[bool] = None
    pos: Pos = _pos_field()


@dataclass(frozen=True, slots=True)
class While:
    cid: ConstructId
    cond: BExpr
    body: "Program"
    path: Path = ()
    key: Optional[Key] = None
    resolved: Optional[bool] = None
    pos: Pos = _pos_field()


@dataclass(frozen=True, slots=True)
class VarDecl:
    name: str
    value: int
    path: Path = ()
    key: Optional[Key] = None
    pos: Pos = _pos_field()


@dataclass(frozen=True, slots=True)
class ProcDecl:
    cid: ConstructId
    name: str
    body: "Program"
    path: Path = ()
    key: Optional[Key] = None
    pos: Pos = _pos_field()


@dataclass(frozen=True, slots=True)
class VarRemove:
    name: str
    value: int
    path: Path = ()
    key: Optional[Key] = None
    pos: Pos = _pos_field()


@dataclass(frozen=True, slots=True)
class ProcRemove:
    cid: ConstructId
    name: str
    body: "Program"
    path: Path = ()
    key: Optional[Key] = None
    pos: Pos = _pos_field()


@dataclass(frozen=True, slots=True)
class Block:
    cid: ConstructId
    var_decls: tuple[VarDecl, ...]
    proc_decls: tuple[ProcDecl, ...]
    body: "Program"
    proc_removes: tuple[ProcRemove, ...]
    var_removes: tuple[VarRemove, ...]
    pos: Pos = _pos_field()


@dataclass(frozen=True, slots=True)
class Call:
    cid: ConstructId
    name: str
    path: Path = ()
    key: Optional[Key] = None
    pos: Pos = _pos_field()


@dataclass(frozen=True, slots=True)
class RunB:
    body: "Program"


@dataclass(frozen=True, slots=True)
class RunC:
    cid: ConstructId
    body: "Program"
    key: Optional[Key] = None


Stmt = Union[
    Skip, Assign, If, While, Block, VarDecl, ProcDecl, Call,
    VarRemove, ProcRemove, RunB, RunC,
]


@dataclass(frozen=True, slots=True)
class EmptyProg:
    pass


@dataclass(frozen=True, slots=True)
class Single:
    stmt: Stmt


@dataclass(frozen=True, slots=True)
class Seq:
    left: "Program"
    right: "Program"


@dataclass(frozen=True, slots=True)
class Par:
    left: "Program"
    right: "Program"


Program = Union[EmptyProg, Single, Seq, Par]

EMPTY = EmptyProg()
SKIP = Single(Skip())


def seq_of(items: list[Program]) -> Program:
    """Right-associated sequence of the non-empty programs in `items`."""
    parts = [p for p in items if not isinstance(p, EmptyProg)]
    if not parts:
        return SKIP
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Seq(p, out)
    return out


def is_skip(prog: Program) -> bool:
    return isinstance(prog, Single) and isinstance(prog.stmt, Skip)


def is_terminal(prog: Program) -> bool:
    return is_skip(prog) or isinstance(prog, EmptyProg)


def statements(prog: Program, into_removals: bool = True):
    """Iterate statements of a program in pre-order (loops into bodies).

    Removal statements share their body subtree with the matching
    declaration; pass into_removals=False to visit each body once.
    """
    if isinstance(prog, Single):
        yield prog.stmt
        yield from _sub_statements(prog.stmt, into_removals)
    elif isinstance(prog, (Seq, Par)):
        yield from statements(prog.left, into_removals)
        yield from statements(prog.right, into_removals)


def _sub_statements(stmt: Stmt, into_removals: bool):
    if isinstance(stmt, If):
        yield from statements(stmt.then, into_removals)
        yield from statements(stmt.orelse, into_removals)
    elif isinstance(stmt, While):
        yield from statements(stmt.body, into_removals)
    elif isinstance(stmt, Block):
        for d in stmt.var_decls:
            yield d
        for p in stmt.proc_decls:
            yield p
            yield from statements(p.body, into_removals)
        yield from statements(stmt.body, into_removals)
        for r in stmt.proc_removes:
            yield r
            if into_removals:
                yield from statements(r.body, into_removals)
        for r in stmt.var_removes:
            yield r
    elif isinstance(stmt, ProcDecl):
        yield from statements(stmt.body, into_removals)
    elif isinstance(stmt, ProcRemove):
        if into_removals:
            yield from statements(stmt.body, into_removals)
    elif isinstance(stmt, (RunB, RunC)):
        yield from statements(stmt.body, into_removals)


def construct_ids(prog: Program) -> list[ConstructId]:
    out = []
    for s in statements(prog, into_removals=False):
        cid = getattr(s, "cid", None)
        if cid is not None:
            out.append(cid)
    return out


# --------------------------------------------------------------------------
# Canonical JSON dump of the AST (one object per node, `kind` field,
# construct ids as strings).  Used by bundles and the `--dump-ast` flag.

def _cid_to_json(cid: ConstructId) -> str:
    return cid.text()


def cid_from_text(kind: str, text: str) -> ConstructId:
    parts = text.split(":")
    base = parts[-1]
    version = 0
    if "." in base:
        base, suffix = base.rsplit(".", 1)
        version = int(suffix)
    return ConstructId(kind, base, version, tuple(parts[:-1]))


def _cid_from_json(kind: str, text: str) -> ConstructId:
    return cid_from_text(kind, text)


def _path_to_json(path: Path) -> list:
    return [_cid_to_json(b) for b in path]


def _path_from_json(items: list) -> Path:
    return tuple(_cid_from_json("block", b) for b in items)


def key_to_json(key: Optional[Key]):
    return None if key is None else list(key)


def key_from_json(obj) -> Optional[Key]:
    return None if obj is None else tuple(obj)


def _aexpr_to_json(e: AExpr) -> dict:
    if isinstance(e, Num):
        return {"kind": "num", "value": e.value}
    if isinstance(e, Var):
        return {"kind": "var", "name": e.name}
    if isinstance(e, AParen):
        return {"kind": "aparen", "inner": _aexpr_to_json(e.inner)}
    return {"kind": "abin", "op": e.op,
            "left": _aexpr_to_json(e.left), "right": _aexpr_to_json(e.right)}


def _aexpr_from_json(o: dict) -> AExpr:
    k = o["kind"]
    if k == "num":
        return Num(o["value"])
    if k == "var":
        return Var(o["name"])
    if k == "aparen":
        return AParen(_aexpr_from_json(o["inner"]))
    return ABin(o["op"], _aexpr_from_json(o["left"]), _aexpr_from_json(o["right"]))


def _bexpr_to_json(e: BExpr) -> dict:
    if isinstance(e, BLit):
        return {"kind": "blit", "value": e.value}
    if isinstance(e, BNot):
        return {"kind": "bnot", "inner": _bexpr_to_json(e.inner)}
    if isinstance(e, BParen):
        return {"kind": "bparen", "inner": _bexpr_to_json(e.inner)}
    if isinstance(e, BCmp):
        return {"kind": "bcmp", "op": e.op,
                "left": _aexpr_to_json(e.left), "right": _aexpr_to_json(e.right)}
    return {"kind": "band",
            "left": _bexpr_to_json(e.left), "right": _bexpr_to_json(e.right)}


def _bexpr_from_json(o: dict) -> BExpr:
    k = o["kind"]
    if k == "blit":
        return BLit(o["value"])
    if k == "bnot":
        return BNot(_bexpr_from_json(o["inner"]))
    if k == "bparen":
        return BParen(_bexpr_from_json(o["inner"]))
    if k == "bcmp":
        return BCmp(o["op"], _aexpr_from_json(o["left"]), _aexpr_from_json(o["right"]))
    return BAnd(_bexpr_from_json(o["left"]), _bexpr_from_json(o["right"]))


def stmt_to_json(s: Stmt) -> dict:
    if isinstance(s, Skip):
        return {"kind": "skip", "key": key_to_json(s.key)}
    if isinstance(s, Assign):
        return {"kind": "assign", "name": s.name, "expr": _aexpr_to_json(s.expr),
                "path": _path_to_json(s.path), "key": key_to_json(s.key)}
    if isinstance(s, If):
        return {"kind": "if", "cid": _cid_to_json(s.cid),
                "cond": _bexpr_to_json(s.cond),
                "then": program_to_json(s.then), "orelse": program_to_json(s.orelse),
                "path": _path_to_json(s.path), "key": key_to_json(s.key),
                "resolved": s.resolved}
    if isinstance(s, While):
        return {"kind": "while", "cid": _cid_to_json(s.cid),
                "cond": _bexpr_to_json(s.cond), "body": program_to_json(s.body),
                "path": _path_to_json(s.path), "key": key_to_json(s.key),
                "resolved": s.resolved}
    if isinstance(s, VarDecl):
        return {"kind": "vardecl", "name": s.name, "value": s.value,
                "path": _path_to_json(s.path), "key": key_to_json(s.key)}
    if isinstance(s, ProcDecl):
        return {"kind": "procdecl", "cid": _cid_to_json(s.cid), "name": s.name,
                "body": program_to_json(s.body),
                "path": _path_to_json(s.path), "key": key_to_json(s.key)}
    if isinstance(s, VarRemove):
        return {"kind": "varremove", "name": s.name, "value": s.value,
                "path": _path_to_json(s.path), "key": key_to_json(s.key)}
    if isinstance(s, ProcRemove):
        return {"kind": "procremove", "cid": _cid_to_json(s.cid), "name": s.name,
                "body": program_to_json(s.body),
                "path": _path_to_json(s.path), "key": key_to_json(s.key)}
    if isinstance(s, Block):
        return {"kind": "block", "cid": _cid_to_json(s.cid),
                "varDecls": [stmt_to_json(d) for d in s.var_decls],
                "procDecls": [stmt_to_json(d) for d in s.proc_decls],
                "body": program_to_json(s.body),
                "procRemoves": [stmt_to_json(d) for d in s.proc_removes],
                "varRemoves": [stmt_to_json(d) for d in s.var_removes]}
    if isinstance(s, Call):
        return {"kind": "call", "cid": _cid_to_json(s.cid), "name": s.name,
                "path": _path_to_json(s.path), "key": key_to_json(s.key)}
    if isinstance(s, RunB):
        return {"kind": "runB", "body": program_to_json(s.body)}
    if isinstance(s, RunC):
        return {"kind": "runC", "cid": _cid_to_json(s.cid),
                "body": program_to_json(s.body), "key": key_to_json(s.key)}
    raise TypeError(f"unknown statement {s!r}")


def stmt_from_json(o: dict) -> Stmt:
    k = o["kind"]
    if k == "skip":
        return Skip(key_from_json(o["key"]))
    if k == "assign":
        return Assign(o["name"], _aexpr_from_json(o["expr"]),
                      _path_from_json(o["path"]), key_from_json(o["key"]))
    if k == "if":
        return If(_cid_from_json("if", o["cid"]), _bexpr_from_json(o["cond"]),
                  program_from_json(o["then"]), program_from_json(o["orelse"]),
                  _path_from_json(o["path"]), key_from_json(o["key"]),
                  o.get("resolved"))
    if k == "while":
        return While(_cid_from_json("while", o["cid"]), _bexpr_from_json(o["cond"]),
                     program_from_json(o["body"]),
                     _path_from_json(o["path"]), key_from_json(o["key"]),
                     o.get("resolved"))
    if k == "vardecl":
        return VarDecl(o["name"], o["value"], _path_from_json(o["path"]),
                       key_from_json(o["key"]))
    if k == "procdecl":
        return ProcDecl(_cid_from_json("proc", o["cid"]), o["name"],
                        program_from_json(o["body"]),
                        _path_from_json(o["path"]), key_from_json(o["key"]))
    if k == "varremove":
        return VarRemove(o["name"], o["value"], _path_from_json(o["path"]),
                         key_from_json(o["key"]))
    if k == "procremove":
        return ProcRemove(_cid_from_json("proc", o["cid"]), o["name"],
                          program_from_json(o["body"]),
                          _path_from_json(o["path"]), key_from_json(o["key"]))
    if k == "block":
        return Block(_cid_from_json("block", o["cid"]),
                     tuple(stmt_from_json(d) for d in o["varDecls"]),
                     tuple(stmt_from_json(d) for d in o["procDecls"]),
                     program_from_json(o["body"]),
                     tuple(stmt_from_json(d) for d in o["procRemoves"]),
                     tuple(stmt_from_json(d) for d in o["varRemoves"]))
    if k == "call":
        return Call(_cid_from_json("call", o["cid"]), o["name"],
                    _path_from_json(o["path"]), key_from_json(o["key"]))
    if k == "runB":
        return RunB(program_from_json(o["body"]))
    if k == "runC":
        return RunC(_cid_from_json("call", o["cid"]), program_from_json(o["body"]),
                    key_from_json(o["key"]))
    raise ValueError(f"unknown statement kind {k!r}")


def program_to_json(p: Program) -> dict:
    if isinstance(p, EmptyProg):
        return {"kind": "empty"}
    if isinstance(p, Single):
        return {"kind": "single", "stmt": stmt_to_json(p.stmt)}
    if isinstance(p, Seq):
        return {"kind": "seq", "left": program_to_json(p.left),
                "right": program_to_json(p.right)}
    return {"kind": "par", "left": program_to_json(p.left),
            "right": program_to_json(p.right)}


def program_from_json(o: dict) -> Program:
    k = o["kind"]
    if k == "empty":
        return EMPTY
    if k == "single":
        return Single(stmt_from_json(o["stmt"]))
    if k == "seq":
        return Seq(program_from_json(o["left"]), program_from_json(o["right"]))
    if k == "par":
        return Par(program_from_json(o["left"]), program_from_json(o["right"]))
    raise ValueError(f"unknown program kind {k!r}")
