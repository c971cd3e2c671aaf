"""Parser for `.rwl` source files.

The grammar is keyword based with `;` separators (see docs/grammar.ebnf).
Construct identifiers may be written explicitly (`while w1.0 (...)`) or left
out, in which case the parser generates them (i1, w1, b1, p1, c1, ... per
kind).  Scope paths are always computed from block nesting, and block
removal statements are synthesised from the declarations when the source
omits them.  Comparison sugar (>=, <, <=, !=, ||) is desugared into the
core ==, >, !, && forms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .tree import (
    ABin, AExpr, AParen, Assign, BAnd, BCmp, BLit, BNot, BParen, BExpr, Block,
    Call, ConstructId, EMPTY, EmptyProg, If, Num, Par, Path, ProcDecl,
    ProcRemove, Program, Seq, Single, Skip, Var, VarDecl, VarRemove, While,
    statements,
)


class SyntaxDiagnostic(Exception):
    """Parse failure with source position."""

    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col


KEYWORDS = {
    "skip", "if", "then", "else", "end", "while", "do", "begin", "var",
    "proc", "is", "call", "remove", "par", "true", "false",
}
RESERVED = {"runB", "runC"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<sym>==|!=|>=|<=|&&|\|\||[=;(){}+\-*!><:.])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str  # 'int' | 'name' | 'sym' | 'eof'
    text: str
    line: int
    col: int


def _lex(source: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise SyntaxDiagnostic(f"unexpected character {source[pos]!r}", line, col)
        text = m.group(0)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _lex(source)
        self.i = 0

    # -- token helpers ----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind in ("name", "sym")

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text:
            raise SyntaxDiagnostic(f"expected {text!r}, found {tok.text or 'end of input'!r}",
                                   tok.line, tok.col)
        return self.next()

    def expect_name(self, what: str = "name") -> Token:
        tok = self.peek()
        if tok.kind != "name" or tok.text in KEYWORDS or tok.text in RESERVED:
            raise SyntaxDiagnostic(f"expected {what}, found {tok.text or 'end of input'!r}",
                                   tok.line, tok.col)
        return self.next()

    def error(self, msg: str):
        tok = self.peek()
        raise SyntaxDiagnostic(msg, tok.line, tok.col)

    # -- construct identifiers ---------------------------------------------

    def _maybe_cid(self, kind: str, stop_on_eq: bool = False) -> ConstructId | None:
        """Parse an optional explicit construct id (`c1:c2:b2.1` form)."""
        tok = self.peek()
        if tok.kind != "name" or tok.text in KEYWORDS or tok.text in RESERVED:
            return None
        if stop_on_eq and self.peek(1).text == "=":
            return None
        parts: list[str] = []
        base = self.next().text
        version = 0
        while True:
            if self.at("."):
                if self.peek(1).kind != "int":
                    self.error("expected version number after '.'")
                self.next()
                version = int(self.next().text)
            if self.at(":"):
                parts.append(base + (f".{version}" if version else ""))
                self.next()
                base = self.expect_name("construct identifier").text
                version = 0
            else:
                break
        return ConstructId(kind, base, version, tuple(parts))

    # -- expressions -------------------------------------------------------

    def parse_aexpr(self) -> AExpr:
        node = self.parse_aterm()
        while self.at("+") or self.at("-"):
            op = self.next().text
            node = ABin(op, node, self.parse_aterm())
        return node

    def parse_aterm(self) -> AExpr:
        node = self.parse_afactor()
        while self.at("*"):
            self.next()
            node = ABin("*", node, self.parse_afactor())
        return node

    def parse_afactor(self) -> AExpr:
        tok = self.peek()
        if tok.kind == "int":
            self.next()
            return Num(int(tok.text))
        if tok.text == "-" and self.peek(1).kind == "int":
            self.next()
            return Num(-int(self.next().text))
        if tok.kind == "name" and tok.text not in KEYWORDS and tok.text not in RESERVED:
            self.next()
            return Var(tok.text)
        if tok.text == "(":
            self.next()
            inner = self.parse_aexpr()
            self.expect(")")
            return AParen(inner)
        self.error("expected arithmetic expression")

    def parse_bexpr(self) -> BExpr:
        node = self.parse_band()
        while self.at("||"):
            self.next()
            right = self.parse_band()
            # p || q desugars into !(!p && !q)
            node = BNot(BParen(BAnd(BNot(node), BNot(right))))
        return node

    def parse_band(self) -> BExpr:
        node = self.parse_batom()
        while self.at("&&"):
            self.next()
            node = BAnd(node, self.parse_batom())
        return node

    def parse_batom(self) -> BExpr:
        tok = self.peek()
        if tok.text == "true":
            self.next()
            return BLit(True)
        if tok.text == "false":
            self.next()
            return BLit(False)
        if tok.text == "!":
            self.next()
            return BNot(self.parse_batom())
        if tok.text == "(":
            # Either a parenthesised boolean or the left arithmetic operand;
            # decide by attempting a comparison after a boolean parse fails.
            save = self.i
            try:
                self.next()
                inner = self.parse_bexpr()
                self.expect(")")
                if self._at_cmp():
                    raise SyntaxDiagnostic("arith", tok.line, tok.col)
                return BParen(inner)
            except SyntaxDiagnostic:
                self.i = save
        return self.parse_bcmp()

    def _at_cmp(self) -> bool:
        return self.peek().text in ("==", "!=", ">", ">=", "<", "<=")

    def parse_bcmp(self) -> BExpr:
        left = self.parse_aexpr()
        tok = self.peek()
        if tok.text not in ("==", "!=", ">", ">=", "<", "<="):
            self.error("expected comparison operator")
        op = self.next().text
        right = self.parse_aexpr()
        # Only == and > are core; the rest desugar.
        if op == "==":
            return BCmp("==", left, right)
        if op == ">":
            return BCmp(">", left, right)
        if op == "!=":
            return BNot(BParen(BCmp("==", left, right)))
        if op == "<":
            return BCmp(">", right, left)
        if op == ">=":
            return BNot(BParen(BCmp(">", right, left)))
        return BNot(BParen(BCmp(">", left, right)))  # <=

    # -- statements and programs --------------------------------------------

    def parse_program(self, closers: tuple[str, ...]) -> Program:
        items: list[Program] = []
        while True:
            tok = self.peek()
            if tok.text in closers or tok.kind == "eof":
                break
            items.append(self.parse_unit())
            if self.at(";"):
                self.next()
            elif self.peek().text not in closers and self.peek().kind != "eof":
                self.error("expected ';'")
        if not items:
            return EMPTY
        out = items[-1]
        for p in reversed(items[:-1]):
            out = Seq(p, out)
        return out

    def parse_unit(self) -> Program:
        if self.at("par"):
            self.next()
            self.expect("{")
            left = self.parse_program(("}",))
            self.expect("}")
            self.expect("{")
            right = self.parse_program(("}",))
            self.expect("}")
            return Par(left, right)
        return Single(self.parse_stmt())

    def parse_stmt(self):
        tok = self.peek()
        if tok.text in RESERVED:
            self.error(f"{tok.text!r} is reserved and cannot appear in source")
        pos = (tok.line, tok.col)
        if tok.text == "skip":
            self.next()
            return Skip()
        if tok.text == "if":
            self.next()
            cid = self._maybe_cid("if")
            self.expect("(")
            cond = self.parse_bexpr()
            self.expect(")")
            self.expect("then")
            then = self.parse_program(("else", "end"))
            orelse: Program = Single(Skip())
            if self.at("else"):
                self.next()
                orelse = self.parse_program(("end",))
            self.expect("end")
            if isinstance(then, EmptyProg):
                then = Single(Skip())
            if isinstance(orelse, EmptyProg):
                orelse = Single(Skip())
            return If(cid or _PENDING_IF, cond, then, orelse, pos=pos)
        if tok.text == "while":
            self.next()
            cid = self._maybe_cid("while")
            self.expect("(")
            cond = self.parse_bexpr()
            self.expect(")")
            self.expect("do")
            body = self.parse_program(("end",))
            self.expect("end")
            if isinstance(body, EmptyProg):
                body = Single(Skip())
            return While(cid or _PENDING_WHILE, cond, body, pos=pos)
        if tok.text == "begin":
            return self.parse_block(pos)
        if tok.text == "call":
            self.next()
            cid = None
            first = self.expect_name("procedure name")
            second = self.peek()
            if second.kind == "name" and second.text not in KEYWORDS and second.text not in RESERVED:
                cid = ConstructId("call", first.text)
                name = self.next().text
            else:
                name = first.text
            return Call(cid or _PENDING_CALL, name, pos=pos)
        if tok.kind == "name" and tok.text not in KEYWORDS:
            name = self.next().text
            self.expect("=")
            expr = self.parse_aexpr()
            return Assign(name, expr, pos=pos)
        self.error(f"expected statement, found {tok.text or 'end of input'!r}")

    def parse_block(self, pos) -> Block:
        self.expect("begin")
        cid = self._maybe_cid("block", stop_on_eq=True) or _PENDING_BLOCK
        var_decls: list[VarDecl] = []
        proc_decls: list[ProcDecl] = []
        while self.at("var"):
            dpos = (self.peek().line, self.peek().col)
            self.next()
            name = self.expect_name("variable name").text
            self.expect("=")
            value = self._parse_int_literal()
            self._eat_semi()
            var_decls.append(VarDecl(name, value, pos=dpos))
        while self.at("proc"):
            dpos = (self.peek().line, self.peek().col)
            self.next()
            pcid = None
            first = self.expect_name("procedure name")
            if not self.at("is"):
                pcid = ConstructId("proc", first.text)
                name = self.expect_name("procedure name").text
            else:
                name = first.text
            self.expect("is")
            body = self.parse_program(("end",))
            self.expect("end")
            self._eat_semi()
            if isinstance(body, EmptyProg):
                body = Single(Skip())
            proc_decls.append(ProcDecl(pcid or _PENDING_PROC, name, body, pos=dpos))
        if self.at("var"):
            self.error("variable declarations must precede procedure declarations")
        body = self.parse_program(("remove", "end"))
        if isinstance(body, EmptyProg):
            body = Single(Skip())
        proc_removes: list[ProcRemove] = []
        var_removes: list[VarRemove] = []
        while self.at("remove"):
            self.next()
            first = self.expect_name("name")
            if self.at("="):
                self.next()
                value = self._parse_int_literal()
                var_removes.append(VarRemove(first.text, value))
            else:
                rcid = None
                name = first.text
                nxt = self.peek()
                if nxt.kind == "name" and nxt.text not in KEYWORDS and nxt.text not in RESERVED:
                    rcid = ConstructId("proc", first.text)
                    name = self.next().text
                proc_removes.append(ProcRemove(rcid or _PENDING_PROC, name, EMPTY))
            self._eat_semi()
        self.expect("end")
        return Block(cid, tuple(var_decls), tuple(proc_decls), body,
                     tuple(proc_removes), tuple(var_removes), pos=pos)

    def _parse_int_literal(self) -> int:
        neg = False
        if self.at("-"):
            self.next()
            neg = True
        tok = self.peek()
        if tok.kind != "int":
            self.error("expected integer literal")
        self.next()
        return -int(tok.text) if neg else int(tok.text)

    def _eat_semi(self):
        if self.at(";"):
            self.next()


# Placeholders replaced during the identifier pass.
_PENDING_IF = ConstructId("if", "?")
_PENDING_WHILE = ConstructId("while", "?")
_PENDING_BLOCK = ConstructId("block", "?")
_PENDING_PROC = ConstructId("proc", "?")
_PENDING_CALL = ConstructId("call", "?")

_KIND_PREFIX = {"if": "i", "while": "w", "block": "b", "proc": "p", "call": "c"}


def parse(source: str) -> Program:
    """Parse source text into an original-syntax program.

    Generates omitted construct identifiers, computes scope paths from
    block nesting, and completes block removal sections from the
    declarations (reverse order).
    """
    parser = _Parser(source)
    prog = parser.parse_program(())
    tok = parser.peek()
    if tok.kind != "eof":
        raise SyntaxDiagnostic(f"unexpected {tok.text!r}", tok.line, tok.col)
    prog = _assign_ids(prog)
    prog = _resolve_blocks(prog)
    prog = _assign_paths(prog, ())
    return prog


# --------------------------------------------------------------------------
# Identifier generation: explicit ids are kept (duplicates rejected), omitted
# ids take the first unused base per kind.

class _IdGen:
    def __init__(self, used: set[str]):
        self.used = used
        self.counters = {k: 0 for k in _KIND_PREFIX}

    def fresh(self, kind: str) -> ConstructId:
        while True:
            self.counters[kind] += 1
            base = f"{_KIND_PREFIX[kind]}{self.counters[kind]}"
            if base not in self.used:
                self.used.add(base)
                return ConstructId(kind, base)


def _assign_ids(prog: Program) -> Program:
    explicit: list[ConstructId] = []

    def collect(p: Program):
        for s in statements(p, into_removals=False):
            if isinstance(s, ProcRemove):
                continue  # removals deliberately repeat the declaration id
            cid = getattr(s, "cid", None)
            if cid is not None and cid.base != "?":
                explicit.append(cid)

    collect(prog)
    seen: set[str] = set()
    for cid in explicit:
        if cid.text() in seen:
            raise SyntaxDiagnostic(f"duplicate construct identifier {cid.text()!r}", 1, 1)
        seen.add(cid.text())
    gen = _IdGen({c.base for c in explicit})

    def fix_stmt(s):
        if isinstance(s, If):
            cid = s.cid if s.cid.base != "?" else gen.fresh("if")
            return If(cid, s.cond, fix(s.then), fix(s.orelse), s.path, s.key, s.resolved, pos=s.pos)
        if isinstance(s, While):
            cid = s.cid if s.cid.base != "?" else gen.fresh("while")
            return While(cid, s.cond, fix(s.body), s.path, s.key, s.resolved, pos=s.pos)
        if isinstance(s, Block):
            cid = s.cid if s.cid.base != "?" else gen.fresh("block")
            return Block(cid,
                         s.var_decls,
                         tuple(fix_stmt(d) for d in s.proc_decls),
                         fix(s.body),
                         tuple(fix_stmt(r) for r in s.proc_removes),
                         s.var_removes, pos=s.pos)
        if isinstance(s, ProcDecl):
            cid = s.cid if s.cid.base != "?" else gen.fresh("proc")
            return ProcDecl(cid, s.name, fix(s.body), s.path, s.key, pos=s.pos)
        if isinstance(s, ProcRemove):
            # keep '?' for unnamed removals; matched to declarations later
            return ProcRemove(s.cid, s.name, fix(s.body), s.path, s.key, pos=s.pos)
        if isinstance(s, Call):
            cid = s.cid if s.cid.base != "?" else gen.fresh("call")
            return Call(cid, s.name, s.path, s.key, pos=s.pos)
        return s

    def fix(p: Program) -> Program:
        if isinstance(p, Single):
            return Single(fix_stmt(p.stmt))
        if isinstance(p, Seq):
            return Seq(fix(p.left), fix(p.right))
        if isinstance(p, Par):
            return Par(fix(p.left), fix(p.right))
        return p

    return fix(prog)


# --------------------------------------------------------------------------
# Removal completion: every block ends by removing its procedures then its
# variables, mirroring the declarations in reverse order.

def _resolve_blocks(prog: Program) -> Program:
    def fix_stmt(s):
        if isinstance(s, If):
            return If(s.cid, s.cond, fix(s.then), fix(s.orelse), s.path, s.key, s.resolved, pos=s.pos)
        if isinstance(s, While):
            return While(s.cid, s.cond, fix(s.body), s.path, s.key, s.resolved, pos=s.pos)
        if isinstance(s, ProcDecl):
            return ProcDecl(s.cid, s.name, fix(s.body), s.path, s.key, pos=s.pos)
        if isinstance(s, Block):
            decls_p = tuple(fix_stmt(d) for d in s.proc_decls)
            want_rp = [ProcRemove(d.cid, d.name, d.body, pos=d.pos) for d in reversed(decls_p)]
            want_rv = [VarRemove(d.name, d.value, pos=d.pos) for d in reversed(s.var_decls)]
            if s.proc_removes:
                given = [(r.cid.base if r.cid.base != "?" else None, r.name)
                         for r in s.proc_removes]
                expect = [(d.cid.base, d.name) for d in reversed(decls_p)]
                for (gb, gn), (eb, en) in zip(given, expect):
                    if gn != en or (gb is not None and gb != eb):
                        raise SyntaxDiagnostic(
                            f"procedure removals must mirror declarations (expected {en!r})", 1, 1)
                if len(given) != len(expect):
                    raise SyntaxDiagnostic("procedure removals must mirror declarations", 1, 1)
            if s.var_removes:
                given_v = [(r.name, r.value) for r in s.var_removes]
                expect_v = [(d.name, d.value) for d in reversed(s.var_decls)]
                if given_v != expect_v:
                    raise SyntaxDiagnostic("variable removals must mirror declarations", 1, 1)
            return Block(s.cid, s.var_decls, decls_p, fix(s.body),
                         tuple(want_rp), tuple(want_rv), pos=s.pos)
        return s

    def fix(p: Program) -> Program:
        if isinstance(p, Single):
            return Single(fix_stmt(p.stmt))
        if isinstance(p, Seq):
            return Seq(fix(p.left), fix(p.right))
        if isinstance(p, Par):
            return Par(fix(p.left), fix(p.right))
        return p

    return fix(prog)


def _assign_paths(prog: Program, path: Path) -> Program:
    def fix_stmt(s, pa: Path):
        if isinstance(s, Assign):
            return Assign(s.name, s.expr, pa, s.key, pos=s.pos)
        if isinstance(s, If):
            return If(s.cid, s.cond, _assign_paths(s.then, pa),
                      _assign_paths(s.orelse, pa), pa, s.key, s.resolved, pos=s.pos)
        if isinstance(s, While):
            return While(s.cid, s.cond, _assign_paths(s.body, pa), pa, s.key,
                         s.resolved, pos=s.pos)
        if isinstance(s, Block):
            inner = (s.cid,) + pa
            return Block(s.cid,
                         tuple(fix_stmt(d, inner) for d in s.var_decls),
                         tuple(fix_stmt(d, inner) for d in s.proc_decls),
                         _assign_paths(s.body, inner),
                         tuple(fix_stmt(r, inner) for r in s.proc_removes),
                         tuple(fix_stmt(r, inner) for r in s.var_removes),
                         pos=s.pos)
        if isinstance(s, VarDecl):
            return VarDecl(s.name, s.value, pa, s.key, pos=s.pos)
        if isinstance(s, ProcDecl):
            return ProcDecl(s.cid, s.name, _assign_paths(s.body, pa), pa, s.key, pos=s.pos)
        if isinstance(s, VarRemove):
            return VarRemove(s.name, s.value, pa, s.key, pos=s.pos)
        if isinstance(s, ProcRemove):
            return ProcRemove(s.cid, s.name, _assign_paths(s.body, pa), pa, s.key, pos=s.pos)
        if isinstance(s, Call):
            return Call(s.cid, s.name, pa, s.key, pos=s.pos)
        return s

    if isinstance(prog, Single):
        return Single(fix_stmt(prog.stmt, path))
    if isinstance(prog, Seq):
        return Seq(_assign_paths(prog.left, path), _assign_paths(prog.right, path))
    if isinstance(prog, Par):
        return Par(_assign_paths(prog.left, path), _assign_paths(prog.right, path))
    return prog
