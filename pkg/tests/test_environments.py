"""Environments, scope resolution, the auxiliary store and counters."""

import pytest
from hypothesis import given, settings, strategies as st

from revlang.environments import (
    ArithmeticOverflow, AuxStore, Counters, CounterError, ProcEntry,
    AuxStoreError, UnboundProcedure, UnboundVariable, check_int, eval_proc,
    eval_var, initial_env,
)
from revlang.syntax import SKIP
from revlang.syntax.tree import ConstructId


def _block(base, prefix=()):
    return ConstructId("block", base, 0, prefix)


def _brute_force_eval_var(gamma, path, name):
    # independent oracle for scope resolution: walk the path one block at
    # a time, falling back to the global scope
    for block in list(path) + [None]:
        scope = "λ" if block is None else block.text()
        if (name, scope) in gamma:
            return gamma[(name, scope)]
    raise KeyError(name)


def test_eval_var_renamed_block():
    inner = _block("b2", ("c1", "c2"))
    outer = _block("b1")
    gamma = {("T", "c1:c2:b2"): 5}
    assert eval_var(gamma, (inner, outer), "T") == 5


def test_eval_var_global_fallback():
    gamma = {("x", "λ"): 0}
    assert eval_var(gamma, (_block("b1"),), "x") == 0


def test_eval_var_innermost_wins():
    b1, b2 = _block("b1"), _block("b2")
    gamma = {("x", "b1"): 1, ("x", "λ"): 0}
    path = (b2, b1)
    assert eval_var(gamma, path, "x") == 1
    assert eval_var(gamma, path, "x") == _brute_force_eval_var(gamma, path, "x")


def test_eval_var_unbound():
    with pytest.raises(UnboundVariable):
        eval_var({}, (_block("b1"),), "ghost")


@given(st.integers(0, 2 ** 32))
@settings(max_examples=50, deadline=None)
def test_eval_var_matches_brute_force(seed):
    import random
    rng = random.Random(seed)
    blocks = [_block(f"b{i}") for i in range(4)]
    gamma = {}
    loc = 0
    for name in "xyz":
        for scope in rng.sample(["λ"] + [b.text() for b in blocks],
                                rng.randint(0, 4)):
            gamma[(name, scope)] = loc
            loc += 1
    path = tuple(rng.sample(blocks, rng.randint(0, 4)))
    for name in "xyz":
        try:
            expected = _brute_force_eval_var(gamma, path, name)
        except KeyError:
            with pytest.raises(UnboundVariable):
                eval_var(gamma, path, name)
        else:
            assert eval_var(gamma, path, name) == expected


def test_eval_proc_resolves_to_declaration():
    b1, b2 = _block("b1"), _block("b2")
    mu = {"p1": ProcEntry("fib", SKIP, (b1,))}
    assert eval_proc("fib", (b2, b1), mu) == "p1"


def test_eval_proc_innermost_declaration_wins():
    b1, b2 = _block("b1"), _block("b2")
    mu = {
        "p1": ProcEntry("fib", SKIP, (b1,)),
        "p2": ProcEntry("fib", SKIP, (b2, b1)),
    }
    assert eval_proc("fib", (b2, b1), mu) == "p2"
    assert eval_proc("fib", (b1,), mu) == "p1"


def test_eval_proc_ignores_call_copies():
    b1 = _block("b1")
    mu = {
        "p1": ProcEntry("fib", SKIP, (b1,)),
        "c1": ProcEntry("fib", SKIP, (b1,), basis=False),
    }
    assert eval_proc("fib", (b1,), mu) == "p1"


def test_eval_proc_unbound():
    with pytest.raises(UnboundProcedure):
        eval_proc("ghost", (), {})


def test_location_allocation_monotone():
    counters = Counters()
    locs = []
    for _ in range(3):
        loc, counters = counters.alloc_loc()
        locs.append(loc)
    assert locs == [0, 1, 2]


def test_location_reuse_is_lifo():
    counters = Counters()
    l0, counters = counters.alloc_loc()
    l1, counters = counters.alloc_loc()
    counters = counters.free_loc(l0)
    counters = counters.free_loc(l1)
    first, counters = counters.alloc_loc()
    second, counters = counters.alloc_loc()
    assert (first, second) == (l1, l0)


def test_location_pool_model():
    # model-based oracle: a list used as the free pool
    import random
    rng = random.Random(5)
    counters = Counters()
    model_pool, model_next, live = [], 0, set()
    for _ in range(200):
        if live and rng.random() < 0.4:
            victim = rng.choice(sorted(live))
            live.remove(victim)
            counters = counters.free_loc(victim)
            model_pool.append(victim)
        else:
            loc, counters = counters.alloc_loc()
            expected = model_pool.pop() if model_pool else model_next
            if expected == model_next:
                model_next += 1
            assert loc == expected
            live.add(loc)


def test_identifier_counters():
    counters = Counters()
    one, counters = counters.take_next()
    two, counters = counters.take_next()
    assert (one, two) == (1, 2)
    with pytest.raises(CounterError):
        counters.take_previous()


def test_aux_push_pop():
    aux = AuxStore()
    aux = aux.push("c", 2, 0)
    value, aux = aux.pop("c", 2)
    assert value == 0
    assert aux.is_empty()


def test_aux_pop_identifier_mismatch():
    aux = AuxStore().push("c", 2, 0)
    with pytest.raises(AuxStoreError):
        aux.pop("c", 3)
    with pytest.raises(AuxStoreError):
        AuxStore().pop("c", 1)


def test_aux_interleaved_stacks_stay_ascending():
    # pushes for two variables interleave while each stack stays ordered
    aux = AuxStore()
    for ident, name, value in [(2, "c", 0), (4, "c", 1), (6, "r", 0), (7, "c", 2)]:
        aux = aux.push(name, ident, value)
    assert [i for i, _ in aux.var_stacks["c"]] == [2, 4, 7]
    assert [i for i, _ in aux.var_stacks["r"]] == [6]
    with pytest.raises(AuxStoreError):
        aux.push("c", 5, 9)  # would break ascending order


@given(st.lists(st.tuples(st.sampled_from("xy"), st.integers(0, 100)), max_size=30))
@settings(max_examples=60, deadline=None)
def test_aux_stacks_ascending_property(entries):
    aux = AuxStore()
    ident = 0
    for name, value in entries:
        ident += 1
        aux = aux.push(name, ident, value)
    for name, stack in aux.var_stacks.items():
        idents = [i for i, _ in stack]
        assert idents == sorted(idents)


def test_overflow_detection():
    check_int(2 ** 63 - 1)
    with pytest.raises(ArithmeticOverflow):
        check_int(2 ** 63)


def test_initial_env_binds_globals():
    env, counters = initial_env({"m": 4, "c": 0})
    assert env.sigma[eval_var(env.gamma, (), "m")] == 4
    assert env.sigma[eval_var(env.gamma, (), "c")] == 0
    assert counters.next_loc == 2
