"""Annotation, inversion and the renaming/annotation-info helpers."""

import pytest

from revlang.engines import annotated_configuration, run_to_completion
from revlang.generate import generate_sequential_source, generate_source
from revlang.scheduler import LeftmostFirst, SeededRandom
from revlang.syntax import (
    Block, Call, EMPTY, Par, Single, Skip, parse, statements,
)
from revlang.syntax.tree import ConstructId
from revlang.transform import (
    TransformError, annotate, annotation_keys, get_annotation_info, invert,
    reflect_call_copy, reflect_loop_copy, remove_annotation, rename_loop_body,
    rename_proc_body, restore_loop_versions, set_annotation_info,
    unrename_loop_body, unrename_proc_body,
)
from revlang.environments import Counters

from conftest import FIB_INIT, FIB_SRC


def _annotatable(prog):
    return [s for s in statements(prog)
            if getattr(s, "key", None) is not None]


def test_annotate_assigns_keys(fib):
    annotated, table = annotate(fib)
    keys = annotation_keys(annotated)
    assert len(keys) == len(set(keys))
    assert set(keys) == set(table)
    assert all(table[k] == () for k in keys)
    # removal statements reuse the declaration's body (and thus its keys)
    block = annotated.stmt
    assert block.proc_removes[0].body is block.proc_decls[0].body


def test_annotate_empty_and_par():
    assert annotate(EMPTY)[0] == EMPTY
    prog = parse("par { x = 1; } { y = 2; }")
    annotated, _ = annotate(prog)
    assert isinstance(annotated, Par)
    assert annotated.left.stmt.key is not None
    assert annotated.right.stmt.key is not None


@pytest.mark.parametrize("seed", range(20))
def test_annotate_distributes_over_par_random(seed):
    # structural oracle: annotation never changes the program skeleton
    src, _ = generate_source(seed + 300)
    prog = parse(src)
    annotated, _ = annotate(prog)
    assert remove_annotation(annotated) == prog


def test_annotate_rejects_annotated(fib):
    annotated, _ = annotate(fib)
    with pytest.raises(TransformError):
        annotate(annotated)


@pytest.mark.parametrize("seed", range(100))
def test_remove_annotation_roundtrip(seed):
    src, _ = generate_source(seed + 900)
    prog = parse(src)
    annotated, _ = annotate(prog)
    assert remove_annotation(annotated) == prog


def test_remove_annotation_on_skip():
    assert remove_annotation(Single(Skip(key=(5,)))) == Single(Skip())


def _executed_fib():
    prog = parse(FIB_SRC)
    config = annotated_configuration(prog, FIB_INIT)
    result = run_to_completion(config, LeftmostFirst())
    return result.config.origin, result.config.table


def test_invert_fibonacci_swaps_declaration_and_removal():
    origin, table = _executed_fib()
    inverted = invert(origin)
    block = inverted.stmt
    assert isinstance(block, Block)
    # the procedure declaration of the inverted program carries the stack
    # the removal collected, and vice versa
    decl = block.proc_decls[0]
    removal = block.proc_removes[0]
    assert table[decl.key] == (22,)
    assert table[removal.key] == (1,)
    call = block.body.stmt
    assert isinstance(call, Call)
    assert table[call.key] == (21,)


def test_invert_reverses_branch_order():
    origin, _ = _executed_fib()
    inverted = invert(origin)
    basis = inverted.stmt.proc_decls[0].body.stmt
    branch = basis.body.stmt.then
    names = [type(s).__name__ for s in statements(branch)]
    assert names[0] == "Call", "the recursive call comes first after inversion"


@pytest.mark.parametrize("seed", range(25))
def test_invert_is_involution(seed):
    src, init = generate_source(seed + 40)
    prog = parse(src)
    config = annotated_configuration(prog, init)
    result = run_to_completion(config, SeededRandom(seed))
    origin = result.config.origin
    assert invert(invert(origin)) == origin


def test_rename_loop_body_versions():
    body = parse("if i1 (x > 0) then x = 1; end")
    renamed, counters = rename_loop_body(body, Counters())
    assert renamed.stmt.cid.text() == "i1.1"
    again, counters = rename_loop_body(renamed, counters)
    assert again.stmt.cid.text() == "i1.2"


def test_rename_loop_body_identity_without_constructs():
    body = parse("x = x + 1")
    renamed, counters = rename_loop_body(body, Counters())
    assert renamed == body
    assert counters == Counters()


def test_rename_unrename_loop_roundtrip():
    body = parse("begin b9 var z = 1; if i7 (z > 0) then z = 0; end; end")
    counters = Counters()
    current = body
    for _ in range(3):
        current, counters = rename_loop_body(current, counters)
    for _ in range(3):
        current, counters = unrename_loop_body(current, counters)
    assert current == body
    assert counters.versions == {}


def test_restore_loop_versions_uses_counters():
    body = parse("if i1 (x > 0) then skip end")
    _, counters = rename_loop_body(body, Counters())
    _, counters = rename_loop_body(body, counters)
    restored = restore_loop_versions(body, counters)
    assert restored.stmt.cid.text() == "i1.2"


def test_rename_proc_body_prefixes_and_paths():
    body = parse("begin b2 var T = 0; call c2 fib; end")
    call_id = ConstructId("call", "c2", 0, ("c1",))  # rendered c1:c2
    renamed = rename_proc_body(body, call_id)
    block = renamed.stmt
    assert block.cid.text() == "c1:c2:b2"
    decl = block.var_decls[0]
    assert [b.text() for b in decl.path] == ["c1:c2:b2"]
    inner_call = block.body.stmt
    assert inner_call.cid.text() == "c1:c2:c2"


def test_rename_proc_body_keeps_outer_path_elements(fib):
    annotated, _ = annotate(fib)
    basis = annotated.stmt.proc_decls[0].body
    renamed = rename_proc_body(basis, ConstructId("call", "c1"))
    assigns = [s for s in statements(renamed) if type(s).__name__ == "Assign"]
    paths = {tuple(b.text() for b in s.path) for s in assigns}
    assert paths == {("c1:b2", "b1")}


def test_unrename_proc_body_roundtrip():
    body = parse("begin b2 var T = 0; if i1 (T > 0) then call c2 f; end; end")
    annotated, _ = annotate(body)
    cn = ConstructId("call", "c9")
    assert unrename_proc_body(rename_proc_body(annotated, cn), cn) == annotated


def test_unrename_proc_body_requires_prefix():
    body, _ = annotate(parse("begin b2 skip end"))
    with pytest.raises(TransformError):
        unrename_proc_body(body, ConstructId("call", "c9"))


def test_rename_makes_keys_and_ids_fresh():
    body, _ = annotate(parse("begin b2 var T = 0; skip; end"))
    cn = ConstructId("call", "c1")
    renamed = rename_proc_body(body, cn)
    assert set(annotation_keys(renamed)).isdisjoint(annotation_keys(body))
    before = {c.text() for s in statements(body)
              if (c := getattr(s, "cid", None)) is not None}
    after = {c.text() for s in statements(renamed)
             if (c := getattr(s, "cid", None)) is not None}
    assert before.isdisjoint(after)


def test_get_annotation_info_second_call():
    # executed second-call copy: the snapshot pairs each statement with the
    # identifiers it collected
    origin, table = _executed_fib()
    second_keys = {k: v for k, v in table.items()
                   if len(k) == 2 and k[1] == "c1:c2"}
    stacks = sorted(v[0] for v in second_keys.values() if v)
    assert stacks == [7, 8, 9, 10, 11, 15, 16, 17]


def test_get_set_annotation_info_roundtrip_on_goldens():
    origin, table = _executed_fib()
    info = get_annotation_info(origin, table)
    assert set(k for k, _ in info) <= set(table)
    assert set_annotation_info(origin, info, table) == table


@pytest.mark.parametrize("seed", range(100))
def test_set_get_annotation_identity_random(seed):
    src, init = generate_sequential_source(seed + 4000)
    prog = parse(src)
    config = annotated_configuration(prog, init)
    result = run_to_completion(config, SeededRandom(seed))
    origin, table = result.config.origin, result.config.table
    info = get_annotation_info(origin, table)
    assert set_annotation_info(origin, info, table) == table


def test_set_annotation_info_arity_mismatch():
    prog, table = annotate(parse("x = 1; y = 2"))
    info = get_annotation_info(prog, table)
    with pytest.raises(TransformError):
        set_annotation_info(prog, info[:1], table)


def test_getai_of_unexecuted_program_is_empty_stacks():
    prog, table = annotate(parse("x = 1; y = 2"))
    info = get_annotation_info(prog, table)
    assert all(stack == () for _, stack in info)


def test_reflect_loop_copy_matches_executing():
    src = "while w1 (g > 0) do g = g - 1; end"
    config = annotated_configuration(parse(src), {"g": 2})
    result = run_to_completion(config, LeftmostFirst())
    # replay: after the run the table holds the loop body's stacks; a
    # reflect on a mid-run snapshot must leave the table unchanged
    mid = annotated_configuration(parse(src), {"g": 2})
    from revlang.engines import enabled_redexes, step
    for _ in range(3):
        mid, _rec = step(mid, enabled_redexes(mid)[0])
    loop_key = "w1"
    assert loop_key in mid.env.beta
    stored_body = mid.env.beta[loop_key].body
    table = reflect_loop_copy(mid.env, loop_key, stored_body, mid.table)
    assert table == mid.table
    info_stored = get_annotation_info(mid.env.beta[loop_key].body, table)
    info_exec = get_annotation_info(stored_body, mid.table)
    assert info_stored == info_exec


def test_reflect_call_copy_after_full_body():
    prog = parse(FIB_SRC)
    config = annotated_configuration(prog, dict(FIB_INIT))
    from revlang.engines import enabled_redexes, step
    seen = None
    while True:
        enabled = enabled_redexes(config)
        if not enabled:
            break
        config, record = step(config, enabled[0])
        if record.rule == "G3a":
            break
        if "c1" in config.env.mu:
            entry = config.env.mu["c1"]
            table = reflect_call_copy(config.env, "c1", entry.body, config.table)
            assert table == config.table
            seen = True
    assert seen


def test_reflect_missing_key_errors():
    from revlang.environments import EnvSet
    with pytest.raises(TransformError):
        reflect_loop_copy(EnvSet(), "w9", EMPTY, {})
