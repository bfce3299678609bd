from __future__ import annotations

import csv
import io
import subprocess
import sys

import pytest

from stipulate.cli import main
from stipulate.machines import path as machine_path

WORKED, PARTNER = "1100+10110", "1100+10111"
SET_A = ["110+101010", "1101110+10", "1100+10110", "1010+10100"]


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def test_run_without_rewrites_halts(capsys):
    code, out, _ = run_cli(capsys, "run", "--problem", "pr", "--input", WORKED, "--interval", "inf")
    assert code == 0
    assert "outcome: accept" in out and "f_n: 0" in out and "case: I\n" in out
    assert "rewrites: 0" in out


def test_run_with_unit_interval_does_not_halt(capsys):
    code, out, _ = run_cli(
        capsys, "run", "--problem", "pr", "--input", WORKED, "--stream", PARTNER,
        "--interval", "1", "--budget", "5000",
    )
    assert code == 2
    assert "outcome: budget" in out or "outcome: cycle" in out


def test_run_symbolic_interval_and_csv(capsys, tmp_path):
    out_file = tmp_path / "run.csv"
    code, out, _ = run_cli(
        capsys, "run", "--problem", "pr", "--input", WORKED, "--stream", PARTNER,
        "--interval", "N", "--out", str(out_file),
    )
    assert code == 0
    assert "T: 629" in out and "case: III" in out and "f(P,T): 1258" in out
    assert rows(out_file.read_text())[0]["outcome"] == "accept"


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "--machine-file", "/nonexistent/m.tm", "--input", "1"],
        ["run", "--config", "/nonexistent/exp.cfg"],
        ["run", "--problem", "pr"],
        ["run", "--problem", "pr", "--input", "12+1"],
        ["classify", "48", "0"],
    ],
)
def test_errors_exit_one(capsys, argv):
    code, _, err = run_cli(capsys, *argv)
    assert code == 1 and "error" in err


@pytest.mark.parametrize("argv", [["sweep", "--bogus"], ["run", "--problem", "nope", "--input", "1"]])
def test_usage_errors_exit_one(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 1


def test_sweep_csv(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--problem", "pr", "--input", WORKED, "--budget", "20000")
    assert code == 0
    header = [l for l in out.splitlines() if not l.startswith("#")][0]
    assert header == "T,fn,f,case,outcome,steps,rewrites"
    table = rows(out)
    Ts = [r["T"] for r in table]
    assert Ts[0] == "inf"
    finite = [int(t) for t in Ts[1:]]
    assert finite == sorted(finite, reverse=True)
    by_T = {r["T"]: r for r in table}
    assert by_T["inf"]["f"] == "629" and by_T["inf"]["case"] == "I"
    assert by_T["629"]["f"] == "1258" and by_T["629"]["case"] == "III"
    assert by_T["630"]["outcome"] == "accept" and by_T["1"]["outcome"] in ("cycle", "budget")
    assert "# inflection: T=629" in out and "# transition:" in out


def test_sweep_adds_the_inflection_row(capsys):
    code, out, _ = run_cli(
        capsys, "sweep", "--problem", "pr", "--input", WORKED, "--interval-list", "inf,1",
        "--budget", "2000",
    )
    assert [r["T"] for r in rows(out)] == ["inf", "629", "1"]


def test_sweep_empty_interval_list_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "sweep", "--problem", "pr", "--input", WORKED, "--interval-list", ",")
    assert code == 1


def test_grid_matches_bare_verdicts_and_is_reproducible(capsys, tmp_path):
    argv = ["grid", "--problem", "pr", "--budget", "5000", "--seed", "11"]
    for x in SET_A:
        argv += ["--input", x]
    code, first, _ = run_cli(capsys, *argv)
    assert code == 0
    _, second, _ = run_cli(capsys, *argv)
    assert first == second
    table = rows(first)
    assert len(table) == 4 and list(table[0]) == ["n", "input", "bare", "inf", "N+1", "1"]
    assert all(r["inf"] == r["bare"] == "accept" for r in table)
    assert "# seed: 11" in first


def test_grid_needs_two_inputs(capsys):
    code, _, err = run_cli(capsys, "grid", "--problem", "pr", "--input", SET_A[0], "--interval-list", "inf,1")
    assert code == 1 and "two inputs" in err


@pytest.mark.parametrize(
    "N, T, expect",
    [("48", "inf", ["f_n: 0", "case: I"]), ("48", "96", ["f_n: 1/2", "case: II"]), ("48", "16", ["f_n: 3", "case: IV"])],
)
def test_classify(capsys, N, T, expect):
    code, out, _ = run_cli(capsys, "classify", N, T)
    assert code == 0
    for fragment in expect:
        assert fragment in out


def test_parse_check(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "parse-check", str(machine_path("accept")))
    assert code == 0 and out.startswith("ok:")
    bad = tmp_path / "bad.tm"
    bad.write_text(machine_path("accept").read_text().replace("q0 _ -> accept _ R\n", ""))
    code, _, err = run_cli(capsys, "parse-check", str(bad))
    assert code == 1 and "partial transition table" in err


def test_machine_file_run(capsys):
    code, out, _ = run_cli(capsys, "run", "--machine-file", str(machine_path("loop")), "--input", "01", "--budget", "100")
    assert code == 2 and "cycle" in out


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("problem: p4\nu: 1011\nk: 2\ninterval: inf\n")
    code, out, _ = run_cli(capsys, "run", "--config", str(cfg))
    assert code == 0 and "output: 3" in out


def test_module_entry_point():
    done = subprocess.run(
        [sys.executable, "-m", "stipulate", "classify", "10", "20"], capture_output=True, text=True
    )
    assert done.returncode == 0 and "case: II" in done.stdout
