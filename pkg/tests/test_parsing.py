from __future__ import annotations

import pytest
from hypothesis import given, settings

from stipulate.errors import ConfigError, MachineParseError
from stipulate.machine import tm_run
from stipulate.machines import NAMES
from stipulate.machines import path as machine_path
from stipulate.parsing import (
    ExperimentConfig,
    format_machine,
    load_config,
    load_machine,
    parse_config,
    parse_machine,
    split_list,
)
from stipulate.problems import get_problem

from test_machine import random_machines

ACCEPT = """\
states: q0 accept reject
input_alphabet: 1
tape_alphabet: 1 _
blank: _
start: q0
accept: accept
reject: reject
q0 1 -> accept 1 R
q0 _ -> accept _ R
"""


def test_minimal_machine_parses():
    spec = parse_machine(ACCEPT)
    assert spec.start_state == "q0" and spec.blank == "_"
    assert tm_run(spec, "1").outcome.verdict == "accept"


def _error(text):
    with pytest.raises(MachineParseError) as info:
        parse_machine(text)
    return info.value


def test_missing_entry_is_a_partial_table():
    err = _error(ACCEPT.replace("q0 _ -> accept _ R\n", ""))
    assert "partial transition table" in str(err)
    assert err.line == 1


@pytest.mark.parametrize(
    "bad_line, message",
    [
        ("q9 1 -> accept 1 R", "unknown state"),
        ("q0 7 -> accept 1 R", "unknown symbol"),
        ("q0 1 -> accept 1 R", "duplicate transition"),
        ("q0 1 -> accept 1 S", "move must be L or R"),
        ("accept 1 -> q0 1 R", "halting state"),
        ("q0 1 accept 1 R", "expected"),
    ],
)
def test_bad_transition_lines_report_their_line(bad_line, message):
    text = ACCEPT.replace("q0 1 -> accept 1 R\n", "") + bad_line + "\n"
    if message == "duplicate transition":
        text = ACCEPT + bad_line + "\n"
    err = _error(text)
    assert message in str(err)
    assert err.line == len(text.splitlines())
    assert f"line {err.line}" in str(err)


def test_missing_header():
    err = _error(ACCEPT.replace("blank: _\n", ""))
    assert "missing header 'blank:'" in str(err)


def test_comments_and_hash_symbols():
    text = "# leading comment\n" + ACCEPT.replace("1 _", "1 # _").replace(
        "q0 _ -> accept _ R", "q0 _ -> accept _ R  # trailing\nq0 # -> reject # L"
    )
    spec = parse_machine(text)
    assert ("q0", "#") in spec.transitions


def test_restart_header():
    text = ACCEPT.replace("reject: reject\n", "reject: reject\nrestart: q0\n")
    assert parse_machine(text).restart_state == "q0"
    with pytest.raises(MachineParseError, match="restart state"):
        parse_machine(ACCEPT.replace("reject: reject\n", "reject: reject\nrestart: nope\n"))


@pytest.mark.parametrize("name", ["pr", "p4"])
def test_shipped_files_match_built_machines(name):
    spec = load_machine(machine_path(name))
    built = get_problem(name).machine
    assert spec.transitions == built.transitions
    assert spec.start_state == built.start_state and spec.restart_state == built.restart_state


def test_shipped_binary_sum_accepts_small_even_sum():
    assert tm_run(load_machine(machine_path("pr")), "100+10").outcome.verdict == "accept"


def test_every_shipped_file_parses():
    for name in NAMES:
        load_machine(machine_path(name))


@settings(max_examples=60, deadline=None)
@given(random_machines())
def test_format_round_trip(case):
    spec, _ = case
    again = parse_machine(format_machine(spec))
    assert again.transitions == spec.transitions
    assert again.states == spec.states and again.tape_alphabet == spec.tape_alphabet


# -- configs -----------------------------------------------------------------


def test_split_list():
    assert split_list("[inf, 4N, N+1]") == ["inf", "4N", "N+1"]
    assert split_list('[[1,2],[3,4]], "[[1]]"') == ["[[1,2],[3,4]]", "[[1]]"]
    with pytest.raises(ConfigError):
        split_list("[[1,2]")


def test_config_fields():
    cfg = parse_config(
        "problem: pr\nlhs: 1100\nrhs: 10110\ninputs: [1100+10111]\n"
        "intervals: [inf, N, 1]\nbudget: 500\nseed: 3\nregion-start: 2\n"
    )
    assert cfg.inputs == ["1100+10110", "1100+10111"]
    assert cfg.intervals == ["inf", "N", "1"]
    assert (cfg.budget, cfg.seed, cfg.region_start) == (500, 3, 2)
    cfg.validate()


@pytest.mark.parametrize(
    "problem, fields, text",
    [
        ("p1", "assign: TTTTTTTT", "TTTTTTTT"),
        ("p2", "matrix_a: [[1]]\nmatrix_b: [[2]]", "[[[1]],[[2]]]"),
        ("p5", "matrix: [[2,1],[1,1]]", "[[2,1],[1,1]]"),
        ("p4", "u: 1011\nk: 2", "1011#11"),
    ],
)
def test_variant_fields(problem, fields, text):
    assert parse_config(f"problem: {problem}\n{fields}\n").inputs == [text]


@pytest.mark.parametrize(
    "text, message",
    [
        ("colour: red", "unknown key"),
        ("budget: lots", "integer"),
        ("problem: pr\nproblem: p1", "twice"),
        ("just words", "key: value"),
        ("lhs: 1", "without a problem"),
        ("problem: p1\nlhs: 1", "do not form"),
    ],
)
def test_config_errors(text, message):
    with pytest.raises(ConfigError, match=message):
        parse_config(text)


def test_config_validation():
    with pytest.raises(ConfigError, match="exactly one"):
        ExperimentConfig().validate()
    with pytest.raises(ConfigError, match="not found"):
        ExperimentConfig(machine_file="/nonexistent.tm").validate()
    with pytest.raises(ConfigError, match="budget"):
        ExperimentConfig(problem="pr", budget=0).validate()


def test_machine_file_is_relative_to_config(tmp_path):
    (tmp_path / "m.tm").write_text(ACCEPT)
    (tmp_path / "exp.cfg").write_text("machine_file: m.tm\ninput: 1\n")
    cfg = load_config(tmp_path / "exp.cfg").validate()
    assert cfg.machine_file == str(tmp_path / "m.tm")
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.cfg")
