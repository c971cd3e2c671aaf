"""Annotated engine: identifier stamping and state saving."""

import pytest

from revlang.checker import audit_identifier_order, env_equiv
from revlang.engines import (
    annotated_configuration, enabled_redexes, executed_program,
    plain_configuration, run_to_completion, step,
)
from revlang.environments import store_values
from revlang.generate import generate_source
from revlang.scheduler import LeftmostFirst, Schedule, Scripted, SeededRandom
from revlang.syntax import parse, render
from revlang.transform import remove_annotation

from conftest import FIB_INIT, RESTAURANT_INIT, drive, race_schedule_picker


def _stack_of(table, origin, predicate):
    from revlang.syntax import statements
    for s in statements(origin):
        key = getattr(s, "key", None)
        if key is not None and predicate(s):
            return table.get(key, ())
    raise AssertionError("statement not found")


def test_restaurant_golden_stacks(restaurant):
    config = annotated_configuration(restaurant, RESTAURANT_INIT)
    final, trace, _ = drive(config, race_schedule_picker())
    assert store_values(final.env) == {"m": 4, "c": 3, "r": 2}
    origin, table = executed_program(final)
    from revlang.syntax.tree import Assign, While
    assert _stack_of(table, origin,
                     lambda s: isinstance(s, While)) == (1, 3, 5, 8, 9)
    assert _stack_of(table, origin,
                     lambda s: isinstance(s, Assign) and s.name == "c") == (2, 4, 7)
    assert _stack_of(table, origin,
                     lambda s: isinstance(s, Assign) and s.name == "r") == (6,)
    assert [r.ident for r in trace if r.ident is not None] == list(range(1, 10))


def test_restaurant_aux_contents(restaurant):
    config = annotated_configuration(restaurant, RESTAURANT_INIT)
    final, _, _ = drive(config, race_schedule_picker())
    aux = final.aux
    assert aux.var_stacks["c"] == ((2, 0), (4, 1), (7, 2))
    assert aux.var_stacks["r"] == ((6, 0),)
    # the loop marker sequence: one False pushed first, then True per
    # re-evaluation; the final snapshot entry closes the loop
    assert aux.loops == ((1, False), (3, True), (5, True), (8, True))
    assert [i for i, _ in aux.loop_info] == [9]


def test_fib_golden_identifiers(fib):
    config = annotated_configuration(fib, FIB_INIT)
    result = run_to_completion(config, LeftmostFirst())
    assert store_values(result.config.env) == {"F": 7, "S": 11, "N": 2}
    assert result.config.counters.next_id == 23
    assert result.identifier_trace == list(range(1, 23))
    origin, table = executed_program(result.config)
    block = origin.stmt
    assert table[block.proc_decls[0].key] == (1,)
    assert table[block.body.stmt.key] == (21,)
    assert table[block.proc_removes[0].key] == (22,)
    # the basis body never runs, so its stacks stay empty
    from revlang.transform import annotation_keys
    basis_keys = annotation_keys(block.proc_decls[0].body)
    assert all(table[k] == () for k in basis_keys)


def test_fib_copy_stacks(fib):
    config = annotated_configuration(fib, FIB_INIT)
    result = run_to_completion(config, LeftmostFirst())
    table = result.config.table
    first = sorted(v[0] for k, v in table.items()
                   if len(k) == 2 and k[1] == "c1" and v)
    second = sorted(v[0] for k, v in table.items()
                    if len(k) == 2 and k[1] == "c1:c2" and v)
    third = sorted(v[0] for k, v in table.items()
                   if len(k) == 2 and k[1] == "c1:c2:c2" and v)
    assert first == [2, 3, 4, 5, 6, 18, 19, 20]
    assert second == [7, 8, 9, 10, 11, 15, 16, 17]
    assert third == [12, 13, 14]


def test_fib_aux_after_run(fib):
    config = annotated_configuration(fib, FIB_INIT)
    result = run_to_completion(config, LeftmostFirst())
    aux = result.config.aux
    assert [i for i, _ in aux.var_stacks["T"]] == [3, 8, 14, 17, 20]
    assert [i for i, _ in aux.branches] == [13, 16, 19]
    assert [(i, v) for i, v in aux.branches] == [(13, False), (16, True), (19, True)]
    assert [i for i, _ in aux.proc_info] == [15, 18, 21]


def test_skip_only_program_saves_nothing():
    config = annotated_configuration(parse("skip"), {})
    result = run_to_completion(config, LeftmostFirst())
    assert result.identifier_trace == []
    assert result.config.aux.is_empty()


def test_executed_program_requires_completion(fib):
    config = annotated_configuration(fib, FIB_INIT)
    with pytest.raises(ValueError):
        executed_program(config)


def test_executed_rendering_matches_figures(restaurant):
    config = annotated_configuration(restaurant, RESTAURANT_INIT)
    final, _, _ = drive(config, race_schedule_picker())
    text = render(*executed_program(final))
    assert "c = c + 1 (λ,[2,4,7]);" in text
    assert "end (λ,[1,3,5,8,9]);" in text
    assert "r = 2 (λ,[6]);" in text


@pytest.mark.parametrize("seed", range(30))
def test_ascending_identifiers_random(seed):
    src, init = generate_source(seed + 70)
    config = annotated_configuration(parse(src), init)
    result = run_to_completion(config, SeededRandom(seed))
    assert audit_identifier_order(result.trace, "forward").ok
    idents = result.identifier_trace
    assert idents == list(range(1, len(idents) + 1))


@pytest.mark.parametrize("seed", [0, 1, 2, 3, 4, 5, 6, 11])
def test_lockstep_with_plain_engine(seed):
    # the two forward engines agree step for step: same enabled shapes,
    # stripping annotations from the annotated residual gives the plain
    # one, and their environments stay equivalent throughout
    src, init = generate_source(seed + 500)
    program = parse(src)
    plain = plain_configuration(program, init)
    annotated = annotated_configuration(program, init)
    rng = SeededRandom(seed)
    steps = 0
    while True:
        enabled_p = enabled_redexes(plain)
        enabled_a = enabled_redexes(annotated)
        assert [r.path for r in enabled_p] == [r.path for r in enabled_a]
        assert [r.rule.rstrip("a") for r in enabled_a] == [r.rule for r in enabled_p]
        if not enabled_p:
            break
        idx = rng.choose(enabled_p, steps)
        plain, _ = step(plain, enabled_p[idx])
        annotated, _ = step(annotated, enabled_a[idx])
        if steps % 4 == 0:
            assert remove_annotation(annotated.program) == plain.program
            report = env_equiv(plain.env, annotated.env)
            assert report.overall, report
        steps += 1
    assert remove_annotation(annotated.program) == plain.program
    assert env_equiv(plain.env, annotated.env).overall
    assert store_values(plain.env) == store_values(annotated.env)


def test_replay_by_recorded_schedule(fib):
    config = annotated_configuration(fib, FIB_INIT)
    first = run_to_completion(config, SeededRandom(3))
    replayed = run_to_completion(annotated_configuration(fib, FIB_INIT),
                                 Scripted(Schedule(first.schedule)))
    assert [r.to_json() for r in replayed.trace] == [r.to_json() for r in first.trace]
    assert store_values(replayed.config.env) == store_values(first.config.env)
