"""Executable forms of the equivalence definitions and the four results:
ascending/descending identifier audits, behaviour preservation between the
plain and annotated engines, and full restoration after reversal.

Used by the test suite and by the `roundtrip` CLI command.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from .engines import (
    Configuration, RunResult, TransitionRecord, annotated_configuration,
    enabled_redexes, plain_configuration, reverse_configuration,
    run_to_completion, step,
)
from .engines.redex import REVERSE_M_RULES
from .environments import AuxStore, EnvSet
from .scheduler import Schedule, SchedulePolicy, Scripted, SeededRandom
from .syntax.tree import Program, is_terminal
from .transform import invert, remove_annotation


@dataclass
class CheckResult:
    ok: bool
    witness: str = ""

    def __bool__(self):
        return self.ok


@dataclass
class EquivalenceReport:
    store: CheckResult
    procs: CheckResult
    loops: CheckResult
    aux: Optional[CheckResult] = None

    @property
    def overall(self) -> bool:
        # the store/procedure/loop equivalences; aux is reported separately
        return bool(self.store and self.procs and self.loops)


def store_equiv(env_a: EnvSet, env_b: EnvSet) -> CheckResult:
    """Location-agnostic comparison: same bound names per scope, and the
    composed values agree."""
    if set(env_a.gamma) != set(env_b.gamma):
        only_a = set(env_a.gamma) - set(env_b.gamma)
        only_b = set(env_b.gamma) - set(env_a.gamma)
        return CheckResult(False, f"gamma domains differ: {only_a or only_b}")
    for key in env_a.gamma:
        va = env_a.sigma[env_a.gamma[key]]
        vb = env_b.sigma[env_b.gamma[key]]
        if va != vb:
            name, scope = key
            return CheckResult(False, f"{name}@{scope}: {va} != {vb}")
    return CheckResult(True)


def _body_shape(prog: Program) -> Program:
    return remove_annotation(prog)


def proc_equiv(mu_a: dict, mu_b: dict, via_inverse: bool = False) -> CheckResult:
    """Domain equality plus body equality modulo annotation (or modulo
    inversion when comparing against a reverse-run environment)."""
    if set(mu_a) != set(mu_b):
        return CheckResult(False, f"mu domains differ: "
                                  f"{set(mu_a) ^ set(mu_b)}")
    for key in mu_a:
        ea, eb = mu_a[key], mu_b[key]
        if ea.name != eb.name:
            return CheckResult(False, f"{key}: names {ea.name} != {eb.name}")
        body_b = invert(eb.body) if via_inverse else eb.body
        if _body_shape(ea.body) != _body_shape(body_b):
            return CheckResult(False, f"{key}: bodies differ")
    return CheckResult(True)


def while_equiv(beta_a: dict, beta_b: dict, via_inverse: bool = False) -> CheckResult:
    if set(beta_a) != set(beta_b):
        return CheckResult(False, f"beta domains differ: {set(beta_a) ^ set(beta_b)}")
    for key in beta_a:
        body_b = beta_b[key].body
        if via_inverse:
            body_b = invert(body_b)
        if _body_shape(beta_a[key].body) != _body_shape(body_b):
            return CheckResult(False, f"{key}: loop copies differ")
    return CheckResult(True)


def aux_equiv(aux_a: AuxStore, aux_b: AuxStore) -> CheckResult:
    """Element-wise stack comparison; a stack absent on one side counts as
    empty."""
    names = set(aux_a.var_stacks) | set(aux_b.var_stacks) | {"B", "W", "WI", "Pr"}
    for name in sorted(names):
        sa, sb = aux_a._get(name), aux_b._get(name)
        if sa != sb:
            return CheckResult(False, f"stack {name}: {sa} != {sb}")
    return CheckResult(True)


def env_equiv(env_a: EnvSet, env_b: EnvSet, via_inverse: bool = False) -> EquivalenceReport:
    return EquivalenceReport(
        store=store_equiv(env_a, env_b),
        procs=proc_equiv(env_a.mu, env_b.mu, via_inverse),
        loops=while_equiv(env_a.beta, env_b.beta, via_inverse),
    )


def audit_identifier_order(trace: list[TransitionRecord], direction: str) -> CheckResult:
    """Consecutive identifier transitions must step by +1 (forward) or -1
    (reverse); non-identifier transitions in between are ignored."""
    delta = 1 if direction == "forward" else -1
    idents = [r.ident for r in trace if r.ident is not None]
    for prev, cur in zip(idents, idents[1:]):
        if cur != prev + delta:
            return CheckResult(False, f"identifier {cur} follows {prev}")
    return CheckResult(True)


# --------------------------------------------------------------------------
# Conformance harness

@dataclass
class PhaseError(Exception):
    phase: str
    error: Exception

    def __str__(self):
        return f"{self.phase}: {self.error}"


@dataclass
class ConformanceReport:
    ascending: CheckResult
    behaviour: EquivalenceReport
    descending: CheckResult
    restoration: EquivalenceReport
    aux_garbage_free: CheckResult
    single_reverse_m_redex: CheckResult
    reverse_eval_count: int
    sequential: bool  # restoration is guaranteed for sequential programs
    timings: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return bool(self.ascending and self.behaviour.overall
                    and self.descending and self.restoration.overall
                    and self.aux_garbage_free and self.single_reverse_m_redex
                    and self.reverse_eval_count == 0)

    @property
    def core_ok(self) -> bool:
        """The identifier-order, behaviour-preservation and zero-evaluation
        results hold for any program; full restoration is stated for
        sequential programs only, so on parallel programs it counts as an
        extended check."""
        general = bool(self.ascending and self.behaviour.overall
                       and self.descending and self.single_reverse_m_redex
                       and self.reverse_eval_count == 0)
        if not self.sequential:
            return general
        return general and bool(self.restoration.overall
                                and self.aux_garbage_free)

    def to_json(self) -> dict:
        def cr(c: CheckResult):
            return {"ok": c.ok, "witness": c.witness}

        def eq(e: EquivalenceReport):
            out = {"store": cr(e.store), "procs": cr(e.procs),
                   "loops": cr(e.loops), "overall": e.overall}
            if e.aux is not None:
                out["aux"] = cr(e.aux)
            return out

        return {
            "ok": self.ok,
            "sequential": self.sequential,
            "ascendingIdentifiers": cr(self.ascending),
            "behaviourPreserved": eq(self.behaviour),
            "descendingIdentifiers": cr(self.descending),
            "restoration": eq(self.restoration),
            "auxGarbageFree": cr(self.aux_garbage_free),
            "singleReverseMRedex": cr(self.single_reverse_m_redex),
            "reverseEvalCount": self.reverse_eval_count,
            "timings": self.timings,
        }


def _contains_par(prog: Program) -> bool:
    from .syntax.tree import Par, Seq, Single, If, While, Block, ProcDecl, RunB, RunC
    if isinstance(prog, Par):
        return True
    if isinstance(prog, Seq):
        return _contains_par(prog.left) or _contains_par(prog.right)
    if isinstance(prog, Single):
        s = prog.stmt
        if isinstance(s, If):
            return _contains_par(s.then) or _contains_par(s.orelse)
        if isinstance(s, (While, ProcDecl, RunB, RunC)):
            return _contains_par(s.body)
        if isinstance(s, Block):
            return (_contains_par(s.body)
                    or any(_contains_par(d.body) for d in s.proc_decls))
    return False


def run_reverse_checked(config: Configuration, policy: SchedulePolicy,
                        budget: int = 100_000) -> tuple[RunResult, CheckResult]:
    """Reverse run that also verifies at most one identifier-consuming redex
    is ever enabled."""
    trace = []
    schedule = []
    at_most_one = CheckResult(True)
    for step_index in range(budget):
        enabled = enabled_redexes(config)
        if not enabled:
            if is_terminal(config.program):
                return RunResult(config, trace, schedule), at_most_one
            raise PhaseError("reverse", Exception("stuck configuration"))
        m_count = sum(1 for r in enabled if r.rule in REVERSE_M_RULES)
        if m_count > 1 and at_most_one.ok:
            at_most_one = CheckResult(False, f"{m_count} reverse identifier "
                                             f"redexes at step {step_index}")
        idx = policy.choose(enabled, step_index)
        config, record = step(config, enabled[idx])
        trace.append(record)
        schedule.append(idx)
    raise PhaseError("reverse", Exception(f"budget of {budget} steps exceeded"))


def enumerate_final_stores(program: Program, init: dict[str, int],
                           max_steps: int = 10_000,
                           max_interleavings: int = 100_000) -> dict[tuple, int]:
    """Exhaustively explore every interleaving of a (bounded) program with
    the plain engine; returns final composed stores with their counts."""
    from .environments import store_values

    finals: dict[tuple, int] = {}
    start = plain_configuration(program, init)
    stack = [(start, 0)]
    explored = 0
    while stack:
        config, depth = stack.pop()
        if depth > max_steps:
            raise PhaseError("enumerate", Exception("interleaving too long"))
        enabled = enabled_redexes(config)
        if not enabled:
            if not is_terminal(config.program):
                raise PhaseError("enumerate", Exception("stuck configuration"))
            key = tuple(sorted(store_values(config.env).items()))
            finals[key] = finals.get(key, 0) + 1
            explored += 1
            if explored > max_interleavings:
                raise PhaseError("enumerate",
                                 Exception("too many interleavings"))
            continue
        for redex in enabled:
            next_config, _ = step(config, redex)
            stack.append((next_config, depth + 1))
    return finals


def roundtrip(program: Program, init: dict[str, int], policy: SchedulePolicy,
              budget: int = 100_000,
              reverse_policy: Optional[SchedulePolicy] = None) -> ConformanceReport:
    """Run annotated and plain engines on one schedule, invert, reverse, and
    check the four results."""
    timings = {}
    t0 = time.perf_counter()
    try:
        annotated = annotated_configuration(program, init)
        initial_env = annotated.env
        fwd = run_to_completion(annotated, policy, budget)
    except Exception as exc:  # noqa: BLE001 - reported with its phase
        raise PhaseError("annotated-forward", exc) from exc
    timings["annotatedForward"] = time.perf_counter() - t0

    ascending = audit_identifier_order(fwd.trace, "forward")

    t0 = time.perf_counter()
    try:
        plain = plain_configuration(program, init)
        plain_result = run_to_completion(plain, Scripted(Schedule(fwd.schedule)), budget)
    except Exception as exc:  # noqa: BLE001
        raise PhaseError("plain-forward", exc) from exc
    timings["plainForward"] = time.perf_counter() - t0

    behaviour = env_equiv(plain_result.config.env, fwd.config.env)

    t0 = time.perf_counter()
    try:
        rev_cfg = reverse_configuration(fwd.config)
        rev, single_m = run_reverse_checked(
            rev_cfg, reverse_policy or SeededRandom(0), budget)
    except PhaseError:
        raise
    except Exception as exc:  # noqa: BLE001
        raise PhaseError("reverse", exc) from exc
    timings["reverse"] = time.perf_counter() - t0

    descending = audit_identifier_order(rev.trace, "reverse")
    restoration = env_equiv(rev.config.env, initial_env)
    restoration.aux = aux_equiv(rev.config.aux, AuxStore())
    garbage_free = CheckResult(
        rev.config.aux.is_empty() and rev.config.counters.prev_id == 0,
        "" if rev.config.aux.is_empty() else "auxiliary store not empty")
    reverse_evals = rev.config.eval_count - rev_cfg.eval_count

    return ConformanceReport(
        ascending=ascending,
        behaviour=behaviour,
        descending=descending,
        restoration=restoration,
        aux_garbage_free=garbage_free,
        single_reverse_m_redex=single_m,
        reverse_eval_count=reverse_evals,
        sequential=not _contains_par(program),
        timings=timings,
    )
