import json
import subprocess
import sys

import pytest

from plts import cli
from plts.architecture import A1, A2, Architecture
from plts.machine import TransitionSystem


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, "--json", *argv)
    report = json.loads(out)
    assert cli.validate_report(report) == []
    return code, report


@pytest.fixture
def arch_files(tmp_path):
    paths = {}
    for name, a in [("a1", A1), ("a2", A2),
                    ("server", Architecture.build(["req"], {"p": (["req"], ["resp"])})),
                    ("single", Architecture.build([], {"p": ([], ["o"])}))]:
        paths[name] = tmp_path / f"{name}.json"
        paths[name].write_text(json.dumps(a.to_json()))
    return paths


@pytest.fixture
def echo(tmp_path):
    path = tmp_path / "echo.json"
    TransitionSystem(["a"], ["y"], [[0, 1], [0, 1]], [set(), {"y"}]).dump(path)
    return str(path)


def test_parse_and_rewrite(capsys, tmp_path):
    code, out, _ = run(capsys, "parse", "!(a U b)")
    assert code == 0 and out.strip() == "(!a R !b)"
    code, out, _ = run(capsys, "rewrite", "--color", "r", "G a")
    assert code == 0 and "r" in out
    f = tmp_path / "f.ltl"
    f.write_text("F a\n")
    code, report = run_json(capsys, "parse", "--file", str(f))
    assert code == 0 and report["status"] == "ok" and report["formula"] == "F a"


def test_parse_errors(capsys):
    code, _, err = run(capsys, "parse", "a &")
    assert code == 2 and "unexpected" in err
    code, _, err = run(capsys, "parse", "!Fp a")
    assert code == 2
    code, _, err = run(capsys, "parse")
    assert code == 2 and "missing input formula" in err
    code, _, err = run(capsys, "parse", "--file", "/nonexistent/f.ltl")
    assert code == 3 and "cannot read" in err
    with pytest.raises(SystemExit) as info:
        cli.main(["synth", "sync", "--arch", "x", "--cap", "0"])
    assert info.value.code == 2


def test_fork(capsys, arch_files):
    code, out, _ = run(capsys, "fork", str(arch_files["a1"]))
    assert code == 0 and out.strip() == "({env}, {}, p1, p2)"
    code, out, _ = run(capsys, "fork", str(arch_files["a2"]))
    assert out.strip() == "weakly ordered"
    code, report = run_json(capsys, "fork", str(arch_files["a2"]), "--color", "r")
    assert report["fork"] is None
    code, report = run_json(capsys, "fork", str(arch_files["a1"]))
    assert report["fork"] == {"procs": ["env"], "variables": [], "p": "p1", "p2": "p2"}


def test_fork_rejects_bad_json(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "fork", str(bad))[0] == 2
    bad.write_text(json.dumps({"processes": []}))
    assert run(capsys, "fork", str(bad))[0] == 2


def test_mc(capsys, echo):
    code, out, _ = run(capsys, "mc", "--ts", echo, "--assume", "G Fp a", "--spec", "G Fp y",
                       "--bound", "2")
    assert code == 0 and out.splitlines() == ["PASS", "guarantee bound at assumption bound 2: 3"]
    code, out, _ = run(capsys, "mc", "--ts", echo, "--spec", "G Fp y")
    lines = out.splitlines()
    assert code == 1 and lines[0] == "FAIL" and lines[2].startswith("stem:")
    code, report = run_json(capsys, "mc", "--ts", echo, "--assume", "G F a", "--spec", "G Fp y")
    assert code == 1 and report["status"] == "FAIL" and report["witness"]["loop"]
    assert report["colors"] == ["r", "rp"]


def test_mc_errors(capsys, echo, tmp_path):
    assert run(capsys, "mc", "--ts", echo, "--spec", "G Fp zz")[0] == 2
    assert run(capsys, "mc", "--ts", echo)[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"inputs": [], "outputs": ["y"], "states": [0], "init": 0,
                               "labels": {"0": []}, "delta": []}))
    assert run(capsys, "mc", "--ts", str(bad), "--spec", "true")[0] == 2


@pytest.mark.usefixtures("needs_solver")
def test_synth_sync_round_trip(capsys, arch_files, tmp_path):
    out_dir = tmp_path / "out"
    code, report = run_json(capsys, "synth", "sync", "--arch", str(arch_files["server"]),
                            "--spec", "G(req -> Fp resp)", "--out", str(out_dir))
    assert code == 0 and report["status"] == "Realized"
    assert report["family"] == {"p": 1, "p_r": 2} and report["realized_bound"] == 2
    assert [b["answer"] for b in report["bounds"]] == ["unsat", "sat"]
    assert set(report["timings"]) == {"total", "bounds (1,1)", "bounds (1,2)"}
    # the written implementation passes the model checker
    code, out, _ = run(capsys, "mc", "--ts", str(out_dir / "p.json"), "--spec", "G(req -> Fp resp)")
    assert code == 0 and out.startswith("PASS")


@pytest.mark.usefixtures("needs_solver")
def test_synth_sync_pltl_and_exhaustion(capsys, arch_files, tmp_path):
    code, out, _ = run(capsys, "synth", "sync", "--arch", str(arch_files["server"]),
                       "--spec", "G(req -> F<=x resp)")
    assert code == 0 and "valuation: x=2" in out
    smt = tmp_path / "last.smt2"
    code, report = run_json(capsys, "synth", "sync", "--arch", str(arch_files["server"]),
                            "--spec", "G((resp -> X req) & (!resp -> X !req))", "--cap", "3",
                            "--emit-smt", str(smt))
    assert code == 1 and report["status"] == "ExhaustedBounds" and report["family"] is None
    assert smt.read_text().startswith("(set-logic QF_UFLIA)")


@pytest.mark.usefixtures("needs_solver")
def test_synth_async(capsys, arch_files, tmp_path):
    out_dir = tmp_path / "out"
    code, report = run_json(capsys, "synth", "async", "--arch", str(arch_files["single"]),
                            "--assume", "G Fp sched_p", "--spec", "G Fp o & G Fp !o",
                            "--cap", "3", "--bound", "2", "--out", str(out_dir))
    assert code == 0 and report["family"] == {"p": 2}
    assert report["assumption_bound"] == 2 and report["realized_bound"] == 3
    code, out, _ = run(capsys, "mc", "--ts", str(out_dir / "p.json"), "--assume", "G Fp sched_p",
                       "--spec", "G Fp o & G Fp !o")
    assert code == 0


def test_solver_missing(capsys, arch_files):
    code, report = run_json(capsys, "synth", "sync", "--arch", str(arch_files["server"]),
                            "--spec", "G resp", "--solver", "no-such-solver-binary")
    assert code == 3 and report["status"] == "SolverError"


def test_validate_report():
    assert cli.validate_report({}) == [
        "missing field 'status'", "missing field 'bounds'", "missing field 'realized_bound'",
        "missing field 'witness'", "missing field 'timings'"]
    bad = {"status": "ok", "bounds": [{"bounds": "(1)"}], "realized_bound": True,
           "witness": None, "timings": {"total": "x"}}
    assert len(cli.validate_report(bad)) == 3


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "plts.cli", "parse", "G(a -> Fp b)"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "G (!a | Fp b)"
