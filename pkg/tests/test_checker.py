"""Equivalence checks, identifier audits and the conformance harness."""

from hypothesis import given, settings, strategies as st

from revlang.checker import (
    audit_identifier_order, aux_equiv, enumerate_final_stores,
    proc_equiv, roundtrip, store_equiv, while_equiv,
)
from revlang.engines import (
    TransitionRecord, annotated_configuration, plain_configuration,
    step, enabled_redexes,
)
from revlang.engines.config import RedexId
from revlang.environments import AuxStore, EnvSet, ProcEntry, initial_env
from revlang.scheduler import LeftmostFirst, SeededRandom
from revlang.syntax import parse
from revlang.transform import annotate

from conftest import FIB_INIT, FIB_SRC, RESTAURANT_INIT, RESTAURANT_SRC


def test_store_equiv_identical():
    env, _ = initial_env({"x": 1})
    assert store_equiv(env, env).ok


def test_store_equiv_is_location_agnostic():
    # same composed values through different location assignments
    a = EnvSet(gamma={("x", "λ"): 0, ("y", "λ"): 1}, sigma={0: 5, 1: 6})
    b = EnvSet(gamma={("x", "λ"): 9, ("y", "λ"): 3}, sigma={9: 5, 3: 6})
    assert store_equiv(a, b).ok


def test_store_equiv_witness():
    a = EnvSet(gamma={("x", "λ"): 0}, sigma={0: 5})
    b = EnvSet(gamma={("x", "λ"): 0}, sigma={0: 7})
    result = store_equiv(a, b)
    assert not result.ok and "x" in result.witness


def test_store_equiv_domain_mismatch():
    a = EnvSet(gamma={("x", "λ"): 0}, sigma={0: 5})
    b = EnvSet()
    assert not store_equiv(a, b).ok


@st.composite
def _env_pairs(draw):
    names = draw(st.lists(st.sampled_from("abcd"), unique=True, min_size=1))
    values = {n: draw(st.integers(-5, 5)) for n in names}
    perm = draw(st.permutations(range(len(names))))
    a = EnvSet(gamma={(n, "λ"): i for i, n in enumerate(names)},
               sigma={i: values[n] for i, n in enumerate(names)})
    b = EnvSet(gamma={(n, "λ"): perm[i] for i, n in enumerate(names)},
               sigma={perm[i]: values[n] for i, n in enumerate(names)})
    return a, b


@given(_env_pairs())
@settings(max_examples=50, deadline=None)
def test_store_equiv_equivalence_relation(pair):
    a, b = pair
    assert store_equiv(a, a).ok                      # reflexive
    assert store_equiv(a, b).ok == store_equiv(b, a).ok  # symmetric
    assert store_equiv(a, b).ok                      # by construction


def test_proc_equiv_empty():
    assert proc_equiv({}, {}).ok
    assert while_equiv({}, {}).ok


def test_proc_equiv_modulo_annotation():
    body = parse("x = 1")
    annotated, _ = annotate(body)
    plain_mu = {"p1": ProcEntry("f", body, ())}
    ann_mu = {"p1": ProcEntry("f", annotated, ())}
    assert proc_equiv(plain_mu, ann_mu).ok
    other = {"p1": ProcEntry("f", parse("x = 2"), ())}
    assert not proc_equiv(plain_mu, other).ok


def test_while_equiv_modulo_annotation():
    loop = parse("while w1 (x > 0) do x = x - 1; end").stmt
    annotated, _ = annotate(parse("while w1 (x > 0) do x = x - 1; end"))
    assert while_equiv({"w1": loop}, {"w1": annotated.stmt}).ok


def test_proc_equiv_lockstep_snapshots():
    # plain and annotated procedure environments stay equivalent while a
    # recursive program runs
    program = parse(FIB_SRC)
    plain = plain_configuration(program, dict(FIB_INIT))
    annotated = annotated_configuration(program, dict(FIB_INIT))
    for step_index in range(200):
        enabled_p = enabled_redexes(plain)
        if not enabled_p:
            break
        enabled_a = enabled_redexes(annotated)
        plain, _ = step(plain, enabled_p[0])
        annotated, _ = step(annotated, enabled_a[0])
        assert proc_equiv(plain.env.mu, annotated.env.mu).ok
        assert while_equiv(plain.env.beta, annotated.env.beta).ok


def test_aux_equiv_empty_and_witness():
    assert aux_equiv(AuxStore(), AuxStore()).ok
    one = AuxStore().push("W", 1, True)
    result = aux_equiv(one, AuxStore())
    assert not result.ok and "W" in result.witness


def test_aux_equiv_treats_absent_stack_as_empty():
    a = AuxStore(var_stacks={})
    b = AuxStore(var_stacks={"x": ()})
    assert aux_equiv(a, b).ok


def _record(ident):
    return TransitionRecord(0, "D1a", RedexId((), "D1a"), ident)


def test_audit_identifier_order():
    ups = [_record(i) for i in range(1, 10)]
    downs = [_record(i) for i in range(22, 0, -1)]
    assert audit_identifier_order(ups, "forward").ok
    assert audit_identifier_order(downs, "reverse").ok
    gap = [_record(1), _record(3)]
    result = audit_identifier_order(gap, "forward")
    assert not result.ok and "3" in result.witness


def test_audit_ignores_non_identifier_transitions():
    mixed = [_record(1), _record(None), _record(2)]
    assert audit_identifier_order(mixed, "forward").ok


def test_roundtrip_fib():
    report = roundtrip(parse(FIB_SRC), FIB_INIT, LeftmostFirst())
    assert report.ok
    assert report.sequential
    assert report.reverse_eval_count == 0


def test_roundtrip_restaurant_flagged_extended():
    report = roundtrip(parse(RESTAURANT_SRC), RESTAURANT_INIT, SeededRandom(3))
    assert report.ok
    assert not report.sequential  # parallel program: extended check
    blob = report.to_json()
    assert blob["ok"] and not blob["sequential"]


def test_roundtrip_report_shape():
    report = roundtrip(parse("x = 1; x = x + 1"), {"x": 0}, LeftmostFirst())
    blob = report.to_json()
    for field in ("ascendingIdentifiers", "behaviourPreserved",
                  "descendingIdentifiers", "restoration", "auxGarbageFree",
                  "singleReverseMRedex", "reverseEvalCount", "timings"):
        assert field in blob


def test_enumerate_final_stores_race():
    finals = enumerate_final_stores(parse(RESTAURANT_SRC), RESTAURANT_INIT)
    c_values = {dict(k)["c"] for k in finals}
    assert 3 in c_values        # the racy outcome the debugger hunts
    assert len(c_values) >= 2   # schedule-dependent results

    fixed = enumerate_final_stores(
        parse(open("programs/restaurant_fixed.rwl").read()), RESTAURANT_INIT)
    for key in fixed:
        values = dict(key)
        assert values["c"] + values["r"] <= values["m"]
