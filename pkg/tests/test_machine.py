from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reference import ReferenceTM, engine_cells
from stipulate.errors import ContractViolation, InputEncodingError, InvalidMachineError
from stipulate.machine import (
    INF,
    L,
    R,
    Configuration,
    MachineSpec,
    Status,
    Tape,
    check_tick,
    run_time,
    tm_run,
    tm_step,
)
from stipulate.parsing import load_machine
from stipulate.machines import path as machine_path
from stipulate.problems import get_problem
from stipulate.problems.binary_sum import decode as decode_sum
from stipulate.problems.corpus import corpus
from stipulate.problems.ones import CountInput


def machine(transitions, states=("q0", "accept", "reject"), alphabet="1", blank="_"):
    return MachineSpec(
        states=set(states),
        input_alphabet=set(alphabet),
        tape_alphabet=set(alphabet) | {blank},
        blank=blank,
        transitions=transitions,
        start_state="q0",
        accept_state="accept",
        reject_state="reject",
    )


RIGHT_THEN_ACCEPT = machine({("q0", "1"): ("q0", "1", R), ("q0", "_"): ("accept", "_", R)})


def test_step_follows_the_single_rule():
    cfg = Configuration.initial(RIGHT_THEN_ACCEPT, "11")
    nxt = tm_step(RIGHT_THEN_ACCEPT, cfg)
    assert (nxt.state, nxt.tape, nxt.head, nxt.steps) == ("q0", ("1", "1"), 1, 1)


def test_step_on_blank_tape_accepts_immediately():
    cfg = Configuration.initial(RIGHT_THEN_ACCEPT, "")
    nxt = tm_step(RIGHT_THEN_ACCEPT, cfg)
    assert nxt.state == "accept" and nxt.steps == 1


def test_stepping_a_halted_configuration_is_reported():
    cfg = Configuration("accept", (), 0, 0, 3)
    with pytest.raises(ContractViolation):
        tm_step(RIGHT_THEN_ACCEPT, cfg)


def test_binary_sum_first_step_matches_reference_interpreter():
    spec = get_problem("pr").machine
    ref = ReferenceTM.from_spec(spec)
    c = ref.step(ref.boot("110+101010"))
    cfg = tm_step(spec, Configuration.initial(spec, "110+101010"))
    assert (cfg.state, cfg.head, cfg.steps) == (c["state"], c["head"], c["steps"])
    assert engine_cells(cfg) == ref.cells(c)


@pytest.mark.parametrize("problem", ["pr", "p4"])
def test_tape_machines_agree_with_reference_on_every_step(problem):
    spec = get_problem(problem).machine
    ref = ReferenceTM.from_spec(spec)
    for case in corpus():
        if case.problem != problem:
            continue
        word = case.instance.encode(case.input)
        cfg, c = Configuration.initial(spec, word), ref.boot(word)
        while not ref.halted(c):
            cfg, c = tm_step(spec, cfg), ref.step(c)
            assert (cfg.state, cfg.head) == (c["state"], c["head"])
            assert engine_cells(cfg) == ref.cells(c)
        result = tm_run(spec, word)
        assert result.outcome.steps == c["steps"]
        assert result.configuration == cfg


def test_binary_sum_accepts_even_sum():
    out = get_problem("pr").run(decode_sum("110+101010")).outcome
    assert out.status is Status.HALTED and out.verdict == "accept"


def test_always_accept_machine_halts_after_one_step():
    spec = load_machine(machine_path("accept"))
    for word in ("", "0", "0110"):
        out = tm_run(spec, word).outcome
        assert (out.verdict, out.steps, out.ticks) == ("accept", 1, 1)


def test_loop_machine_exhausts_its_budget():
    out = tm_run(load_machine(machine_path("loop")), "01", budget=1000).outcome
    assert out.status is Status.BUDGET and out.budget == 1000 and out.steps == 1000
    assert not out.halted and out.code == "budget"


def test_input_outside_alphabet_is_an_encoding_error():
    with pytest.raises(InputEncodingError):
        tm_run(RIGHT_THEN_ACCEPT, "12")


def test_budget_must_be_positive():
    with pytest.raises(ValueError):
        tm_run(RIGHT_THEN_ACCEPT, "1", budget=0)


def test_run_time_is_steps_in_ticks():
    assert run_time(0) == 0
    assert run_time(7) == 7
    out = get_problem("p4").run(CountInput("1011", 2)).outcome
    assert run_time(out.steps) == out.steps == out.ticks
    with pytest.raises(ValueError):
        run_time(INF)


def test_check_tick():
    assert check_tick(INF) == INF
    assert check_tick(5) == 5
    with pytest.raises(ValueError):
        check_tick(-1)
    with pytest.raises(TypeError):
        check_tick(1.5)


@pytest.mark.parametrize(
    "change, message",
    [
        (dict(blank="1"), "blank"),
        (dict(accept_state="reject"), "differ"),
        (dict(start_state="nowhere"), "start_state"),
        (dict(transitions={("q0", "1"): ("q0", "1", R)}), "partial transition table"),
        (
            dict(transitions={("q0", "1"): ("q0", "1", 0), ("q0", "_"): ("accept", "_", R)}),
            "move",
        ),
        (
            dict(
                transitions={
                    ("q0", "1"): ("q0", "1", R),
                    ("q0", "_"): ("accept", "_", R),
                    ("accept", "_"): ("q0", "_", R),
                    ("accept", "1"): ("q0", "_", R),
                }
            ),
            "halting state",
        ),
    ],
)
def test_machine_invariants_are_enforced(change, message):
    fields = dict(
        states={"q0", "accept", "reject"},
        input_alphabet={"1"},
        tape_alphabet={"1", "_"},
        blank="_",
        transitions=RIGHT_THEN_ACCEPT.transitions,
        start_state="q0",
        accept_state="accept",
        reject_state="reject",
    )
    fields.update(change)
    with pytest.raises(InvalidMachineError, match=message):
        MachineSpec(**fields)


def test_runs_are_deterministic():
    spec = get_problem("pr").machine
    a, b = tm_run(spec, "1100+10110"), tm_run(spec, "1100+10110")
    assert a == b


def test_tape_fingerprint_tracks_contents():
    t1, t2 = Tape("_"), Tape("_")
    t1.load(0, "ab")
    t1.write(0, "_")
    t1.write(5, "c")
    t2.write(5, "c")
    t2.write(1, "b")
    assert t1.snapshot() == t2.snapshot()
    assert t1.fingerprint == t2.fingerprint


def test_configuration_trims_blanks():
    assert Configuration("q", ("_", "a", "_"), 4, 0, 0) == Configuration("q", ("a",), 5, 0, 0)
    assert Configuration("q", ("_",), 3).offset == 0


# -- random machines -------------------------------------------------------

SYMBOLS = ("0", "1", "_")


@st.composite
def random_machines(draw):
    n = draw(st.integers(1, 4))
    states = [f"s{i}" for i in range(n)]
    targets = st.sampled_from(states + ["accept", "reject"])
    table = {
        (q, s): (draw(targets), draw(st.sampled_from(SYMBOLS)), draw(st.sampled_from((L, R))))
        for q in states
        for s in SYMBOLS
    }
    spec = MachineSpec(
        states=set(states) | {"accept", "reject"},
        input_alphabet={"0", "1"},
        tape_alphabet=set(SYMBOLS),
        blank="_",
        transitions=table,
        start_state="s0",
        accept_state="accept",
        reject_state="reject",
    )
    word = draw(st.text(alphabet="01", max_size=6))
    return spec, word


@settings(max_examples=150, deadline=None)
@given(random_machines())
def test_random_machines_match_reference_and_stay_local(case):
    spec, word = case
    ref = ReferenceTM.from_spec(spec)
    c = ref.boot(word)
    cfg = Configuration.initial(spec, word)
    for _ in range(60):
        if ref.halted(c):
            break
        prev = cfg
        cfg, c = tm_step(spec, cfg), ref.step(c)
        assert cfg.steps == prev.steps + 1
        assert abs(cfg.head - prev.head) == 1
        before, after = dict(engine_cells(prev)), dict(engine_cells(cfg))
        changed = {i for i in before.keys() | after.keys() if before.get(i) != after.get(i)}
        assert changed <= {prev.head}
        assert (cfg.state, cfg.head, engine_cells(cfg)) == (c["state"], c["head"], ref.cells(c))
    result = tm_run(spec, word, budget=60)
    assert result.outcome.steps == c["steps"]
    assert engine_cells(result.configuration) == ref.cells(c)
