"""Command-line front door.

Exit codes: 0 ok, 1 usage, 2 parse error, 3 runtime error, 4 conformance
failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .checker import PhaseError, roundtrip
from .engines import (
    BudgetExceeded, DEFAULT_BUDGET, EngineError, annotated_configuration,
    bundle_from_run, executed_program, load_bundle, plain_configuration,
    reverse_configuration_from_bundle, run_to_completion, save_bundle,
)
from .environments import RevlangError, state_dump, store_values
from .scheduler import Schedule, SchedulePolicy, SeededRandom, policy_from_spec
from .syntax import SyntaxDiagnostic, parse, program_to_json, render, validate
from .transform import invert

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_RUNTIME = 3
EXIT_CONFORMANCE = 4


def _parse_init(text: str | None) -> dict[str, int]:
    init: dict[str, int] = {}
    if not text:
        return init
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ValueError(f"--init entries look like name=value, got {item!r}")
        name, value = item.split("=", 1)
        init[name.strip()] = int(value.strip())
    return init


def _load_program(path: str):
    with open(path, encoding="utf-8") as fh:
        source = fh.read()
    program = parse(source)
    diags = validate(program)
    if diags:
        raise SyntaxDiagnostic("; ".join(diags), 1, 1)
    return source, program


def _policy(spec: str) -> SchedulePolicy:
    return policy_from_spec(spec)


def _print_store(env, out):
    values = store_values(env)
    if not values:
        print("  (empty store)", file=out)
    for name in sorted(values):
        print(f"  {name} = {values[name]}", file=out)


def cmd_parse(args, out) -> int:
    _, program = _load_program(args.file)
    if args.dump_ast:
        json.dump(program_to_json(program), out, indent=2, sort_keys=True)
        out.write("\n")
    else:
        out.write(render(program))
    return EXIT_OK


def cmd_run(args, out) -> int:
    source, program = _load_program(args.file)
    init = _parse_init(args.init)
    policy = _policy(args.schedule)
    seed = policy.seed if isinstance(policy, SeededRandom) else None
    if args.mode == "plain":
        config = plain_configuration(program, init)
    else:
        config = annotated_configuration(program, init)
    result = run_to_completion(config, policy, args.budget)
    print(f"terminated after {len(result.trace)} steps "
          f"({len(result.identifier_trace)} identifier steps)", file=out)
    print("final store:", file=out)
    _print_store(result.config.env, out)
    if args.mode == "annotated":
        origin, table = executed_program(result.config)
        print("executed annotated program:", file=out)
        out.write(render(origin, table))
        if args.dump_bundle:
            bundle = bundle_from_run(source, init, result, seed)
            save_bundle(bundle, args.dump_bundle)
            print(f"bundle written to {args.dump_bundle}", file=out)
    elif args.dump_bundle:
        raise ValueError("--dump-bundle needs --mode=annotated")
    if args.dump_state:
        with open(args.dump_state, "w", encoding="utf-8") as fh:
            fh.write(state_dump(result.config.env, result.config.aux,
                                result.config.counters))
        print(f"state written to {args.dump_state}", file=out)
    if args.dump_trace:
        with open(args.dump_trace, "w", encoding="utf-8") as fh:
            for record in result.trace:
                fh.write(json.dumps(record.to_json()) + "\n")
        print(f"trace written to {args.dump_trace}", file=out)
    return EXIT_OK


def cmd_invert(args, out) -> int:
    bundle = load_bundle(args.bundle)
    config = reverse_configuration_from_bundle(bundle)
    text = render(config.program, config.table)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"inverted program written to {args.output}", file=out)
    else:
        out.write(text)
    return EXIT_OK


def cmd_reverse(args, out) -> int:
    from .checker import aux_equiv, store_equiv
    from .environments import AuxStore, initial_env

    bundle = load_bundle(args.bundle)
    config = reverse_configuration_from_bundle(bundle)
    result = run_to_completion(config, _policy(args.schedule), args.budget)
    print(f"reverse execution finished after {len(result.trace)} steps", file=out)
    print("restored store:", file=out)
    _print_store(result.config.env, out)
    initial, _ = initial_env(bundle["init"])
    stores = store_equiv(result.config.env, initial)
    garbage = aux_equiv(result.config.aux, AuxStore())
    print(f"restored-state equivalence: {'ok' if stores.ok else stores.witness}",
          file=out)
    print(f"auxiliary store empty: {'ok' if garbage.ok else garbage.witness}",
          file=out)
    if args.dump_state:
        with open(args.dump_state, "w", encoding="utf-8") as fh:
            fh.write(state_dump(result.config.env, result.config.aux,
                                result.config.counters))
    return EXIT_OK if stores.ok and garbage.ok else EXIT_CONFORMANCE


def cmd_roundtrip(args, out) -> int:
    _, program = _load_program(args.file)
    init = _parse_init(args.init)
    failures = 0
    gate_failures = 0
    reports = []
    for trial in range(args.trials):
        policy = SeededRandom(args.seed + trial)
        report = roundtrip(program, init, policy, args.budget)
        reports.append(report)
        if not report.ok:
            failures += 1
            kind = "core" if report.core_ok is False else "extended"
            print(f"trial {trial}: FAIL ({kind})", file=out)
            print(json.dumps(report.to_json(), indent=2), file=out)
        if not report.core_ok:
            gate_failures += 1
    kind = "core" if reports and reports[0].sequential else "extended"
    print(f"{args.trials - failures}/{args.trials} trials passed ({kind} checks)",
          file=out)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump([r.to_json() for r in reports], fh, indent=2)
    return EXIT_OK if gate_failures == 0 else EXIT_CONFORMANCE


def cmd_serve(args, out) -> int:
    from .service import serve
    serve(port=args.port, ui_dir=args.ui_dir, ttl=args.ttl, out=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="revlang",
        description="Reversible interpreter and reverse debugger for an "
                    "imperative language with blocks, procedures and "
                    "interleaving parallelism.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse, validate and pretty-print")
    p.add_argument("file")
    p.add_argument("--dump-ast", action="store_true",
                   help="print the canonical JSON tree instead of source")
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("run", help="execute a program forwards")
    p.add_argument("file")
    p.add_argument("--mode", choices=["plain", "annotated"], default="annotated")
    p.add_argument("--init", default="", help="initial globals, e.g. F=3,S=4,N=4")
    p.add_argument("--schedule", default="seed:0",
                   help="seed:N, leftmost, or a schedule file")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--dump-state", metavar="PATH")
    p.add_argument("--dump-trace", metavar="PATH")
    p.add_argument("--dump-bundle", metavar="PATH",
                   help="write the executed-run bundle consumed by "
                        "invert/reverse")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("invert", help="render the inverted program of a bundle")
    p.add_argument("bundle")
    p.add_argument("--output", metavar="PATH")
    p.set_defaults(fn=cmd_invert)

    p = sub.add_parser("reverse", help="reverse-execute a bundle and compare "
                                       "against its initial state")
    p.add_argument("bundle")
    p.add_argument("--schedule", default="seed:0")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--dump-state", metavar="PATH")
    p.set_defaults(fn=cmd_reverse)

    p = sub.add_parser("roundtrip", help="forward + reverse conformance checks")
    p.add_argument("file")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--init", default="")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--report", metavar="PATH", help="write a JSON report")
    p.set_defaults(fn=cmd_roundtrip)

    p = sub.add_parser("serve", help="start the interactive stepping service")
    p.add_argument("--port", type=int, default=8712)
    p.add_argument("--ui-dir", default=None,
                   help="directory of static debugger UI files to serve")
    p.add_argument("--ttl", type=float, default=3600.0,
                   help="idle seconds before a session is evicted")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.fn(args, out)
    except SyntaxDiagnostic as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EngineError, RevlangError, PhaseError, BudgetExceeded) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
