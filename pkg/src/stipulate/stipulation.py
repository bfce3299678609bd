"""Co-simulation of a machine and the device that keeps rewriting its input.

Timeline of a run with variation interval ``T``:

* tick 0: the first stream entry is written into the input region, the
  machine sits in its start state with the head on ``region_start``;
* tick ``t >= 1``: the machine takes its ``t``-th transition.  When ``t`` is a
  multiple of ``T`` the next stream entry first overwrites the region
  (rewrite before transition), leaving control state, head and every cell
  outside the region untouched;
* once the machine halts nothing is rewritten again.

A run ends halted, proven diverging (a repeated key of configuration,
``steps mod T`` and stream position, certified by :class:`CycleCertificate`),
or with its step budget exhausted.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Any, Hashable, Iterable

from .errors import ContractViolation, ScheduleError
from .machine import (
    DEFAULT_BUDGET,
    INF,
    Configuration,
    RunOutcome,
    Status,
    Tape,
    TraceDigest,
    is_inf,
)


@dataclass(frozen=True)
class StipulationSchedule:
    """Variation interval, cyclic input stream and input-region position."""

    interval: int | float
    inputs: tuple
    region_start: int = 0

    def __post_init__(self) -> None:
        inputs = tuple(tuple(e) if not isinstance(e, str) else e for e in self.inputs)
        object.__setattr__(self, "inputs", inputs)
        t = self.interval
        if is_inf(t):
            object.__setattr__(self, "interval", INF)
        elif isinstance(t, bool) or not isinstance(t, int):
            raise ScheduleError(f"interval must be a positive int or inf, got {t!r}")
        elif t < 1:
            raise ScheduleError(f"interval must be at least 1 tick, got {t}")
        if not inputs:
            raise ScheduleError("input stream is empty")
        if any(len(e) == 0 for e in inputs):
            raise ScheduleError("input region would be empty")
        width = len(inputs[0])
        for k, e in enumerate(inputs):
            if len(e) != width:
                raise ScheduleError(
                    f"stream entry {k} has length {len(e)}, first entry has {width} "
                    "(recurring inputs must all have equal length)"
                )
        if len(inputs) == 1:
            if not is_inf(self.interval):
                raise ScheduleError(
                    "a single-entry stream cannot be rewritten: consecutive inputs "
                    "would be identical; use interval inf or add entries"
                )
        else:
            for k, e in enumerate(inputs):
                if e == inputs[(k + 1) % len(inputs)]:
                    raise ScheduleError(
                        f"stream entries {k} and {(k + 1) % len(inputs)} are identical "
                        "(consecutive inputs must differ)"
                    )

    @property
    def finite(self) -> bool:
        return not is_inf(self.interval)

    @property
    def width(self) -> int:
        return len(self.inputs[0])


def next_input(schedule: StipulationSchedule, position: int) -> tuple[Any, int]:
    """Stream entry at ``position`` and the cyclic position after it."""
    n = len(schedule.inputs)
    return schedule.inputs[position % n], (position + 1) % n


@dataclass(frozen=True)
class CycleCertificate:
    first_occurrence_tick: int
    second_occurrence_tick: int
    witness: tuple

    @property
    def period(self) -> int:
        return self.second_occurrence_tick - self.first_occurrence_tick


def detect_cycle(keys: Iterable[Hashable]) -> CycleCertificate | None:
    """Certificate for the first key that repeats in ``keys``, if any.

    ``keys[t]`` is the key after ``t`` transitions.  Soundness rests on the
    caller: the key must determine all future evolution.
    """
    seen: dict[Hashable, int] = {}
    for tick, key in enumerate(keys):
        first = seen.setdefault(key, tick)
        if first != tick:
            return CycleCertificate(first, tick, key)
    return None


@dataclass(frozen=True)
class StipulatedRunRecord:
    outcome: RunOutcome
    rewrite_ticks: tuple[int, ...]
    trace_digest: str
    stream_position_at_end: int
    written: tuple[int, ...]
    configuration: Configuration

    @property
    def rewrite_count(self) -> int:
        return len(self.rewrite_ticks)


class _CoSimulation:
    """Mutable state of one stipulated run; advanced one tick at a time."""

    def __init__(self, machine: Any, schedule: StipulationSchedule, digest: bool = True):
        self.machine = machine
        self.schedule = schedule
        self.interval = schedule.interval
        self.finite = schedule.finite
        self.tape = Tape(machine.blank)
        self.trace = TraceDigest() if digest else None
        entry, self.position = next_input(schedule, 0)
        self.tape.load(schedule.region_start, entry)
        if self.trace is not None:
            self.trace.load(0, schedule.region_start, entry)
        self.state = machine.start
        self.head = schedule.region_start
        self.steps = 0
        self.restarts = 0
        self.rewrite_ticks: list[int] = []
        self.written = [0]

    @property
    def halted(self) -> bool:
        return self.machine.halted(self.state)

    def advance(self) -> None:
        tick = self.steps + 1
        if self.finite and tick % self.interval == 0:
            idx = self.position
            entry, self.position = next_input(self.schedule, idx)
            self.tape.load(self.schedule.region_start, entry)
            self.rewrite_ticks.append(tick)
            self.written.append(idx)
            if self.trace is not None:
                self.trace.load(tick, self.schedule.region_start, entry)
        machine = self.machine
        sym = self.tape.read(self.head)
        nxt, write, move = machine.step(self.state, sym)
        self.tape.write(self.head, write)
        if self.trace is not None:
            self.trace.step(machine.label(nxt), self.head, sym, write)
        if machine.is_restart(nxt) and not machine.is_restart(self.state):
            self.restarts += 1
        self.state = nxt
        self.head += move
        self.steps = tick

    def _phase(self) -> tuple:
        if self.finite:
            return (self.steps % self.interval, self.position)
        return (None, None)

    def fast_key(self) -> tuple:
        return (self.state, self.head, self.tape.fingerprint) + self._phase()

    def exact_key(self) -> tuple:
        return (self.state, self.head, self.tape.snapshot()) + self._phase()

    def witness(self) -> tuple:
        state, head, cells, phase, position = self.exact_key()
        digest = hashlib.blake2b(repr((state, head, cells)).encode(), digest_size=16)
        return (digest.hexdigest(), phase, position)

    def configuration(self) -> Configuration:
        return self.tape.configuration(self.state, self.head, self.steps)


def _locate_cycle(machine: Any, schedule: StipulationSchedule, period: int) -> CycleCertificate:
    """Find the earliest tick whose key recurs ``period`` ticks later."""
    lead = _CoSimulation(machine, schedule, digest=False)
    for _ in range(period):
        lead.advance()
    lag = _CoSimulation(machine, schedule, digest=False)
    while not (lag.fast_key() == lead.fast_key() and lag.exact_key() == lead.exact_key()):
        lag.advance()
        lead.advance()
    return CycleCertificate(lag.steps, lead.steps, lag.witness())


def stip_run(
    machine: Any,
    schedule: StipulationSchedule,
    budget: int = DEFAULT_BUDGET,
    *,
    detect_cycles: bool = True,
) -> StipulatedRunRecord:
    """Run ``machine`` under ``schedule`` for at most ``budget`` transitions."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    for entry in schedule.inputs:
        machine.check_input(entry)

    sim = _CoSimulation(machine, schedule)
    certificate = None
    # Brent's cycle finding: compare against a checkpoint refreshed at powers of two.
    saved_fast, saved_exact, power, lam = sim.fast_key(), None, 1, 0
    while not sim.halted and sim.steps < budget:
        sim.advance()
        if not detect_cycles or sim.halted:
            continue
        lam += 1
        key = sim.fast_key()
        if key == saved_fast:
            if saved_exact is None:
                saved_exact = _CoSimulation(machine, schedule, digest=False).exact_key()
            if sim.exact_key() == saved_exact:
                certificate = _locate_cycle(machine, schedule, lam)
                break
        if lam == power:
            saved_fast, saved_exact, power, lam = key, sim.exact_key(), power * 2, 0

    if sim.halted:
        outcome = RunOutcome(
            Status.HALTED, sim.steps, verdict=machine.verdict(sim.state), restarts=sim.restarts
        )
    elif certificate is not None:
        outcome = RunOutcome(
            Status.DIVERGING, sim.steps, certificate=certificate, restarts=sim.restarts
        )
    else:
        outcome = RunOutcome(Status.BUDGET, sim.steps, budget=budget, restarts=sim.restarts)
    return StipulatedRunRecord(
        outcome=outcome,
        rewrite_ticks=tuple(sim.rewrite_ticks),
        trace_digest=sim.trace.hexdigest(),
        stream_position_at_end=sim.position,
        written=tuple(sim.written),
        configuration=sim.configuration(),
    )


def replay_key(machine: Any, schedule: StipulationSchedule, tick: int) -> tuple:
    """Witness key of the stipulated run after exactly ``tick`` transitions."""
    sim = _CoSimulation(machine, schedule, digest=False)
    while sim.steps < tick:
        if sim.halted:
            raise ContractViolation(f"run halts at tick {sim.steps}, before tick {tick}")
        sim.advance()
    return sim.witness()


def conformance_violations(
    record: StipulatedRunRecord, schedule: StipulationSchedule
) -> list[str]:
    """Check a run record against the rewrite postulates; empty means conformant."""
    problems = []
    end = record.outcome.steps
    if schedule.finite:
        t = schedule.interval
        expected = tuple(range(t, end + 1, t))
    else:
        expected = ()
    if record.rewrite_ticks != expected:
        problems.append(
            f"rewrites at {record.rewrite_ticks[:8]}..., expected multiples of the "
            f"interval up to tick {end}"
        )
    if record.outcome.halted and any(t > end for t in record.rewrite_ticks):
        problems.append("rewrite after the halting tick")
    n = len(schedule.inputs)
    if record.written != tuple(k % n for k in range(1 + record.rewrite_count)):
        problems.append("stream entries were not written in cyclic order")
    entries = [schedule.inputs[i] for i in record.written]
    if any(len(e) != len(entries[0]) for e in entries):
        problems.append("written inputs differ in length")
    if any(a == b for a, b in zip(entries, entries[1:])):
        problems.append("two consecutive written inputs are identical")
    if record.stream_position_at_end != (len(record.written)) % n:
        problems.append("stream position does not match the number of writes")
    return problems
