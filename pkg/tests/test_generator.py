"""The random program generator feeding the property suites."""

import pytest

from revlang.generate import GenConfig, generate_sequential_source, generate_source
from revlang.syntax import Par, parse, statements, validate
from revlang.syntax.tree import Assign, Block, Call, If, ProcDecl, Skip, While


@pytest.mark.parametrize("seed", range(60))
def test_generated_programs_parse_and_validate(seed):
    src, init = generate_source(seed)
    prog = parse(src)
    assert validate(prog) == []
    assert init


def test_generation_is_deterministic():
    assert generate_source(123) == generate_source(123)
    assert generate_source(123) != generate_source(124)


def test_statement_form_coverage():
    kinds = set()
    has_par = False
    for seed in range(120):
        src, _ = generate_source(seed)
        prog = parse(src)
        for s in statements(prog, into_removals=False):
            kinds.add(type(s).__name__)
        has_par = has_par or _has_par(prog)
    for expected in ("Assign", "If", "While", "Block", "VarDecl", "ProcDecl",
                     "Call", "VarRemove", "ProcRemove", "Skip"):
        assert expected in kinds, f"generator never produced {expected}"
    assert has_par


def _has_par(prog):
    from revlang.syntax.tree import Seq, Single
    if isinstance(prog, Par):
        return True
    if isinstance(prog, Seq):
        return _has_par(prog.left) or _has_par(prog.right)
    if isinstance(prog, Single):
        s = prog.stmt
        for attr in ("then", "orelse", "body"):
            sub = getattr(s, attr, None)
            if sub is not None and _has_par(sub):
                return True
        if isinstance(s, Block):
            return _has_par(s.body)
    return False


def test_sequential_generator_avoids_par():
    for seed in range(40):
        src, _ = generate_sequential_source(seed)
        assert not _has_par(parse(src))


def test_depth_stays_bounded():
    config = GenConfig(max_depth=4)
    for seed in range(40):
        src, _ = generate_source(seed, config)
        prog = parse(src)
        assert _depth(prog) <= 10  # syntactic depth incl. generated wrappers


def _depth(prog, d=0):
    from revlang.syntax.tree import Seq, Single
    if isinstance(prog, (Seq, Par)):
        return max(_depth(prog.left, d), _depth(prog.right, d))
    if isinstance(prog, Single):
        s = prog.stmt
        subs = []
        for attr in ("then", "orelse", "body"):
            sub = getattr(s, attr, None)
            if sub is not None:
                subs.append(sub)
        if not subs:
            return d
        return max(_depth(sub, d + 1) for sub in subs)
    return d
