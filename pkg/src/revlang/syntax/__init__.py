from .tree import (  # noqa: F401
    ABin, AExpr, AParen, Assign, BAnd, BCmp, BExpr, BLit, BNot, BParen,
    Block, Call, ConstructId, EMPTY, EmptyProg, GLOBAL_SCOPE, If, Key, Num,
    Par, Path, ProcDecl, ProcRemove, Program, RunB, RunC, SKIP, Seq, Single,
    Skip, Stmt, Var, VarDecl, VarRemove, While, construct_ids, is_skip,
    is_terminal, path_text, program_from_json, program_to_json, seq_of,
    statements, stmt_from_json, stmt_to_json, key_from_json, key_to_json,
)
from .parser import SyntaxDiagnostic, parse  # noqa: F401
from .render import render, render_aexpr, render_bexpr  # noqa: F401
from .validate import validate  # noqa: F401
