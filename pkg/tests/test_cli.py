"""CLI flows and exit codes."""

import io
import json

from revlang.cli import EXIT_OK, EXIT_PARSE, EXIT_RUNTIME, EXIT_USAGE, main


def run_cli(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_parse_command():
    code, out = run_cli("parse", "programs/fib.rwl")
    assert code == EXIT_OK
    assert "proc p1 fib is" in out


def test_parse_dump_ast():
    code, out = run_cli("parse", "programs/fib.rwl", "--dump-ast")
    assert code == EXIT_OK
    tree = json.loads(out)
    assert tree["kind"] == "single"


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.rwl"
    bad.write_text("x = ;")
    code, _ = run_cli("parse", str(bad))
    assert code == EXIT_PARSE


def test_run_fib_annotated(tmp_path):
    bundle = tmp_path / "fib.bundle.json"
    code, out = run_cli("run", "programs/fib.rwl", "--mode=annotated",
                        "--init", "F=3,S=4,N=4",
                        "--dump-bundle", str(bundle))
    assert code == EXIT_OK
    assert "F = 7" in out and "S = 11" in out and "N = 2" in out
    assert "(b1,[22])" in out
    assert bundle.exists()


def test_run_skip_program(tmp_path):
    src = tmp_path / "skip.rwl"
    src.write_text("skip")
    code, out = run_cli("run", str(src))
    assert code == EXIT_OK
    assert "terminated" in out


def test_run_plain_mode():
    code, out = run_cli("run", "programs/fib.rwl", "--mode=plain",
                        "--init", "F=3,S=4,N=4")
    assert code == EXIT_OK
    assert "F = 7" in out


def test_run_budget_error(tmp_path):
    src = tmp_path / "spin.rwl"
    src.write_text("while w1 (true) do skip; end")
    code, _ = run_cli("run", str(src), "--budget", "50")
    assert code == EXIT_RUNTIME


def test_invert_and_reverse_flow(tmp_path):
    bundle = tmp_path / "b.json"
    code, _ = run_cli("run", "programs/fib.rwl", "--init", "F=3,S=4,N=4",
                      "--dump-bundle", str(bundle))
    assert code == EXIT_OK

    inverted = tmp_path / "fib.inv.rwl"
    code, out = run_cli("invert", str(bundle), "--output", str(inverted))
    assert code == EXIT_OK
    text = inverted.read_text()
    assert "remove p1 fib (b1,[1])" in text
    assert "end (b1,[22])" in text

    code, out = run_cli("reverse", str(bundle))
    assert code == EXIT_OK
    assert "F = 3" in out and "S = 4" in out and "N = 4" in out
    assert "restored-state equivalence: ok" in out
    assert "auxiliary store empty: ok" in out


def test_reverse_rejects_truncated_bundle(tmp_path):
    bundle = tmp_path / "trunc.json"
    bundle.write_text(json.dumps({"schemaVersion": 1, "source": "skip"}))
    code, _ = run_cli("reverse", str(bundle))
    assert code in (EXIT_USAGE, EXIT_RUNTIME)


def test_roundtrip_command(tmp_path):
    report = tmp_path / "report.json"
    code, out = run_cli("roundtrip", "programs/restaurant.rwl",
                        "--trials", "20", "--seed", "7",
                        "--init", "m=4,c=0,r=0", "--report", str(report))
    assert code == EXIT_OK
    assert "20/20 trials passed" in out
    blob = json.loads(report.read_text())
    assert len(blob) == 20 and all(r["ok"] for r in blob)


def test_roundtrip_single_trial_sequential():
    code, out = run_cli("roundtrip", "programs/fib.rwl",
                        "--trials", "1", "--init", "F=3,S=4,N=4")
    assert code == EXIT_OK
    assert "1/1 trials passed (core checks)" in out


def test_init_parsing_error():
    code, _ = run_cli("run", "programs/fib.rwl", "--init", "oops")
    assert code == EXIT_USAGE


def test_missing_file():
    code, _ = run_cli("run", "no-such-file.rwl")
    assert code == EXIT_USAGE


def test_usage_error():
    code, _ = run_cli("frobnicate")
    assert code == EXIT_USAGE


def test_run_dump_state_and_trace(tmp_path):
    state = tmp_path / "state.json"
    trace = tmp_path / "trace.jsonl"
    code, _ = run_cli("run", "programs/fib.rwl", "--init", "F=3,S=4,N=4",
                      "--dump-state", str(state), "--dump-trace", str(trace))
    assert code == EXIT_OK
    blob = json.loads(state.read_text())
    assert blob["counters"]["nextId"] == 23
    lines = [json.loads(line) for line in trace.read_text().splitlines()]
    idents = [rec["ident"] for rec in lines if rec["ident"] is not None]
    assert idents == list(range(1, 23))


def test_run_with_schedule_file():
    code, out = run_cli("run", "programs/restaurant.rwl",
                        "--init", "m=4,c=0,r=0",
                        "--schedule", "programs/restaurant_race_schedule.json")
    assert code == EXIT_OK
    assert "[2,4,7]" in out and "[1,3,5,8,9]" in out and "[6]" in out
    assert "c = 3" in out and "r = 2" in out
