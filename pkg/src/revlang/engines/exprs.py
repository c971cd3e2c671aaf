"""Pure, atomic expression evaluation.

A whole expression is evaluated inside the rule that owns it, so the
interleaving granularity of the engines is one rule application.
"""

from __future__ import annotations

from ..environments import EnvSet, check_int, eval_var
from ..syntax.tree import (
    AExpr, AParen, BAnd, BCmp, BLit, BNot, BParen, BExpr, Num, Path, Var,
)


def eval_arith(expr: AExpr, path: Path, env: EnvSet) -> int:
    if isinstance(expr, Num):
        return check_int(expr.value)
    if isinstance(expr, Var):
        return env.sigma[eval_var(env.gamma, path, expr.name)]
    if isinstance(expr, AParen):
        return eval_arith(expr.inner, path, env)
    left = eval_arith(expr.left, path, env)
    right = eval_arith(expr.right, path, env)
    if expr.op == "+":
        return check_int(left + right)
    if expr.op == "-":
        return check_int(left - right)
    if expr.op == "*":
        return check_int(left * right)
    raise ValueError(f"unknown arithmetic operator {expr.op!r}")


def eval_bool(expr: BExpr, path: Path, env: EnvSet) -> bool:
    if isinstance(expr, BLit):
        return expr.value
    if isinstance(expr, BNot):
        return not eval_bool(expr.inner, path, env)
    if isinstance(expr, BParen):
        return eval_bool(expr.inner, path, env)
    if isinstance(expr, BCmp):
        left = eval_arith(expr.left, path, env)
        right = eval_arith(expr.right, path, env)
        return left == right if expr.op == "==" else left > right
    if isinstance(expr, BAnd):
        return eval_bool(expr.left, path, env) and eval_bool(expr.right, path, env)
    raise ValueError(f"unknown boolean expression {expr!r}")
