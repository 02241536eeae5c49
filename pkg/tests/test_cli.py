import json
import subprocess
import sys
from pathlib import Path

import pytest

from bid import engine, stdlib
from bid.cli import RunConfig, build_operator, library, main, make_parser
from bid.tm import corpus, run_via_id

AXIOM_DIR = Path(stdlib.__file__).parent / "axioms"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


def test_iterate(capsys):
    assert run(capsys, "iterate", "not", "--width", "3", "-n", "5") == (0, "0b111", "")
    assert run(capsys, "iterate", "not", "-x", "3", "-n", "0", "--start", "0b101")[1] == "0b101"


def test_fixpoint_and_period(capsys):
    assert run(capsys, "fixpoint", "shift", "-x", "4")[1] == "k=4 fixpoint=0b1111"
    assert run(capsys, "period", "not", "-x", "3")[1] == "u=0 v=2 U=0b0 V=0b10"
    assert run(capsys, "period", "identity", "-x", "3")[1].startswith("u=0 v=1")
    code, out, _ = run(capsys, "fixpoint", "not", "-x", "3")
    assert code == 1 and out == "no fixpoint: u=0 v=2"


def test_classify(capsys, tmp_path):
    code, out, _ = run(capsys, "classify", *sorted(str(p) for p in AXIOM_DIR.glob("*.bid")))
    assert code == 0 and out
    assert all(line.endswith("SigmaB(0)") for line in out.splitlines())
    sample = tmp_path / "s1.bid"
    sample.write_text("def s1(X) := (exists Y <= 3) (forall j < 3) (Y(j) -> X(j));\n")
    assert run(capsys, "classify", str(sample))[1] == "s1: SigmaB(1)"
    bad = tmp_path / "bad.bid"
    bad.write_text("def f(i, Y) :=\n  Y(i) &&;\n")
    code, _, err = run(capsys, "classify", str(bad))
    assert code == 2 and f"{bad}:2:10:" in err


def test_run_tm(capsys, tmp_path):
    code, out, _ = run(capsys, "run-tm", "inc", "0b1011", "--flavor", "ptime")
    assert code == 0 and out.split()[0] == "0b1100"
    code, out, _ = run(capsys, "run-tm", "counter", "0b111111", "--format", "json")
    payload = json.loads(out)
    assert payload["iterations"] > 64 and payload["flavor"] == "pspace"
    machine = json.loads((Path(stdlib.__file__).parent / "tm" / "corpus" / "inc.json").read_text())
    machine["bound"]["poly"] = [1]
    path = tmp_path / "tight.json"
    path.write_text(json.dumps(machine))
    assert run(capsys, "run-tm", str(path), "0b1")[0] == 4
    assert run(capsys, "run-tm", str(path), "0b111")[0] == 4


def test_budget_exit_flushes_partial_trace(capsys, tmp_path):
    out = tmp_path / "t.jsonl"
    code, _, err = run(capsys, "iterate", "counter", "-x", "4", "-n", "100", "--budget", "5",
                       "--trace-out", str(out))
    assert code == 3 and "budget" in err
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 6


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "iterate", "nosuch", "-x", "3", "-n", "1")[0] == 2
    assert run(capsys, "iterate", "not", "-x", "3", "-n", "1", "--start", "0bxy")[0] == 2
    defs = tmp_path / "d.bid"
    defs.write_text("def strong(i, Y) := (exists Z <= 2) Z = Y;\n")
    assert run(capsys, "iterate", "strong", "-x", "3", "-n", "1", "--defs", str(defs))[0] == 2
    with pytest.raises(SystemExit):
        main(["iterate", "not", "-x", "0", "-n", "1"])


def test_extra_definitions_with_width_parameter(capsys, tmp_path):
    assert run(capsys, "iterate", "rotate", "-x", "4", "-n", "1", "--start", "0b1000")[1] == "0b1"


def test_json_is_deterministic(capsys):
    a = run(capsys, "period", "counter", "-x", "5", "--format", "json", "--seed", "7")
    b = run(capsys, "period", "counter", "-x", "5", "--format", "json", "--seed", "7")
    assert a == b and json.loads(a[1])["v"] == 32


def test_dual_subcommand(capsys):
    code, out, _ = run(capsys, "dual", "--cases", "50", "--seed", "2", "--format", "json")
    assert code == 0 and json.loads(out)["mismatches"] == {}


def test_cli_equals_library(capsys):
    args = make_parser().parse_args(["period", "counter", "-x", "4"])
    r = engine.find_period(build_operator(args))
    assert run(capsys, "period", "counter", "-x", "4")[1] == f"u={r.u} v={r.v} U={r.U} V={r.V}"
    direct = run_via_id(corpus()["inc"], 0b111, "ptime")
    assert run(capsys, "run-tm", "inc", "0b111")[1] == (
        f"{direct.output} iterations={direct.iterations} width={direct.width}")


def test_library_names():
    assert {"not", "identity", "shift", "counter", "fill", "rotate"} <= set(library())


def test_run_config_invariants():
    with pytest.raises(ValueError):
        RunConfig("iterate", budget=0)
    with pytest.raises(ValueError):
        RunConfig("iterate", width=0)


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "bid.cli", "iterate", "not", "-x", "3", "-n", "5"],
                       capture_output=True, text=True, check=False)
    assert p.returncode == 0 and p.stdout.strip() == "0b111"


def test_env_budget_default(monkeypatch, capsys):
    monkeypatch.setenv("BID_BUDGET", "3")
    code, _, _ = run(capsys, "iterate", "counter", "-x", "4", "-n", "10")
    assert code == 3
