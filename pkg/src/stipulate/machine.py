"""Deterministic single-tape machine engine.

A machine is anything exposing the small stepping protocol used below
(``start``, ``blank``, ``step``, ``halted``, ``verdict``, ``is_restart``,
``check_input``, ``label``).  :class:`MachineSpec` is the classical
transition-table Turing machine; :class:`stipulate.scanner.ScannerMachine`
is a register-assisted finite control that still touches one cell per step.
Every step costs exactly one tick.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Any, Hashable, Iterable, Mapping, Sequence

from .errors import ContractViolation, InputEncodingError, InvalidMachineError

INF = math.inf
L, STAY, R = -1, 0, 1
MOVE_NAMES = {L: "L", R: "R", STAY: "S"}

# Unit time per transition.  Everything is measured in ticks, so T_t == 1.
STEP_TIME = 1
DEFAULT_BUDGET = 10**6

_FP_MASK = (1 << 64) - 1


def is_inf(t: Any) -> bool:
    return isinstance(t, float) and math.isinf(t) and t > 0


def check_tick(t: Any, *, name: str = "tick") -> int | float:
    """Validate a tick value: a nonnegative integer or INF."""
    if is_inf(t):
        return INF
    if isinstance(t, bool) or not isinstance(t, int):
        raise TypeError(f"{name} must be an int or INF, got {t!r}")
    if t < 0:
        raise ValueError(f"{name} must be nonnegative, got {t}")
    return t


def run_time(n: int) -> int:
    """Duration of an ``n``-step run in ticks."""
    if is_inf(n):
        raise ValueError("run_time needs a finite step count")
    return check_tick(n, name="step count") * STEP_TIME


@dataclass(frozen=True)
class MachineSpec:
    """Finite control of a single-tape Turing machine.

    ``transitions`` maps ``(state, symbol)`` to ``(state, symbol, move)`` with
    ``move`` in ``{L, R}``; it must be total on the non-halting states.
    """

    states: frozenset[str]
    input_alphabet: frozenset[str]
    tape_alphabet: frozenset[str]
    blank: str
    transitions: Mapping[tuple[str, str], tuple[str, str, int]]
    start_state: str
    accept_state: str
    reject_state: str
    restart_state: str | None = None
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "input_alphabet", frozenset(self.input_alphabet))
        object.__setattr__(self, "tape_alphabet", frozenset(self.tape_alphabet))
        object.__setattr__(self, "transitions", MappingProxyType(dict(self.transitions)))
        for problem in self.problems():
            raise InvalidMachineError(problem)

    def problems(self) -> Iterable[str]:
        """Yield a description of every violated invariant."""
        if not self.input_alphabet <= self.tape_alphabet:
            yield "input alphabet is not a subset of the tape alphabet"
        if self.blank not in self.tape_alphabet:
            yield f"blank {self.blank!r} is not in the tape alphabet"
        if self.blank in self.input_alphabet:
            yield f"blank {self.blank!r} must not be an input symbol"
        for role in ("start_state", "accept_state", "reject_state"):
            if getattr(self, role) not in self.states:
                yield f"{role} {getattr(self, role)!r} is not a declared state"
        if self.restart_state is not None and self.restart_state not in self.states:
            yield f"restart state {self.restart_state!r} is not a declared state"
        if self.accept_state == self.reject_state:
            yield "accept and reject states must differ"
        halting = {self.accept_state, self.reject_state}
        for (q, s), (q2, w, m) in self.transitions.items():
            if q in halting:
                yield f"transition defined out of halting state {q!r}"
            if q not in self.states or q2 not in self.states:
                yield f"unknown state in transition ({q}, {s})"
            if s not in self.tape_alphabet or w not in self.tape_alphabet:
                yield f"unknown symbol in transition ({q}, {s})"
            if m not in (L, R):
                yield f"move must be L or R in transition ({q}, {s})"
        missing = [
            (q, s)
            for q in sorted(self.states - halting)
            for s in sorted(self.tape_alphabet)
            if (q, s) not in self.transitions
        ]
        if missing:
            q, s = missing[0]
            yield f"partial transition table: no entry for ({q}, {s}) and {len(missing) - 1} more"

    # -- stepping protocol -------------------------------------------------

    @property
    def start(self) -> str:
        return self.start_state

    def step(self, state: str, symbol: str) -> tuple[str, str, int]:
        return self.transitions[(state, symbol)]

    def halted(self, state: str) -> bool:
        return state == self.accept_state or state == self.reject_state

    def verdict(self, state: str) -> str:
        if state == self.accept_state:
            return "accept"
        if state == self.reject_state:
            return "reject"
        raise ContractViolation(f"state {state!r} is not halting")

    def is_restart(self, state: str) -> bool:
        return state == self.restart_state

    def label(self, state: str) -> str:
        return state

    def check_input(self, symbols: Sequence[str]) -> None:
        for i, s in enumerate(symbols):
            if s not in self.input_alphabet:
                raise InputEncodingError(
                    f"symbol {s!r} at position {i} is not in the input alphabet"
                )


class Tape:
    """Two-way infinite tape backed by a dict of non-blank cells.

    Keeps an additive fingerprint of its contents so cycle detection can
    compare tapes in O(1) before falling back to an exact snapshot.
    """

    __slots__ = ("cells", "blank", "fingerprint")

    def __init__(self, blank: Hashable):
        self.cells: dict[int, Any] = {}
        self.blank = blank
        self.fingerprint = 0

    def read(self, i: int) -> Any:
        return self.cells.get(i, self.blank)

    def write(self, i: int, symbol: Any) -> None:
        cells, blank = self.cells, self.blank
        old = cells.get(i, blank)
        fp = self.fingerprint
        if old != blank:
            fp -= hash((i, old))
        if symbol == blank:
            cells.pop(i, None)
        else:
            cells[i] = symbol
            fp += hash((i, symbol))
        self.fingerprint = fp & _FP_MASK

    def load(self, start: int, symbols: Iterable[Any]) -> None:
        for k, s in enumerate(symbols):
            self.write(start + k, s)

    def snapshot(self) -> tuple[tuple[int, Any], ...]:
        return tuple(sorted(self.cells.items(), key=lambda kv: kv[0]))

    def configuration(self, state: Hashable, head: int, steps: int) -> "Configuration":
        if not self.cells:
            return Configuration(state, (), 0, head, steps, self.blank)
        lo, hi = min(self.cells), max(self.cells)
        tape = tuple(self.cells.get(i, self.blank) for i in range(lo, hi + 1))
        return Configuration(state, tape, lo, head, steps, self.blank)


@dataclass(frozen=True)
class Configuration:
    """Instantaneous description: control state, tape, head and step count.

    ``tape[k]`` holds cell ``offset + k``; every other cell is blank.  The
    stored span is trimmed of blanks so equal configurations compare equal.
    """

    state: Hashable
    tape: tuple = ()
    offset: int = 0
    head: int = 0
    steps: int = 0
    blank: Hashable = "_"

    def __post_init__(self) -> None:
        tape = tuple(self.tape)
        lo, hi = 0, len(tape)
        while lo < hi and tape[lo] == self.blank:
            lo += 1
        while hi > lo and tape[hi - 1] == self.blank:
            hi -= 1
        object.__setattr__(self, "tape", tape[lo:hi])
        object.__setattr__(self, "offset", self.offset + lo if hi > lo else 0)

    @classmethod
    def initial(cls, machine: Any, symbols: Sequence[Any], at: int = 0) -> "Configuration":
        return cls(machine.start, tuple(symbols), at, at, 0, machine.blank)

    def read(self, i: int) -> Any:
        k = i - self.offset
        if 0 <= k < len(self.tape):
            return self.tape[k]
        return self.blank

    def window(self, start: int, length: int) -> tuple:
        return tuple(self.read(i) for i in range(start, start + length))

    def with_cell(self, i: int, symbol: Any) -> tuple[tuple, int]:
        """Return ``(tape, offset)`` with cell ``i`` replaced by ``symbol``."""
        lo = min(self.offset, i) if self.tape else i
        hi = max(self.offset + len(self.tape), i + 1) if self.tape else i + 1
        cells = [self.read(j) for j in range(lo, hi)]
        cells[i - lo] = symbol
        return tuple(cells), lo


class Status(str, Enum):
    HALTED = "halted"
    DIVERGING = "cycle"
    BUDGET = "budget"


@dataclass(frozen=True)
class RunOutcome:
    """Tagged run result: halted, proven-diverging or budget-exhausted."""

    status: Status
    steps: int
    verdict: str | None = None
    budget: int | None = None
    certificate: Any = None
    restarts: int = 0

    @property
    def halted(self) -> bool:
        return self.status is Status.HALTED

    @property
    def ticks(self) -> int:
        return run_time(self.steps)

    @property
    def code(self) -> str:
        return self.verdict if self.halted else self.status.value


@dataclass(frozen=True)
class RunResult:
    outcome: RunOutcome
    configuration: Configuration
    trace_digest: str = field(repr=False, default="")


class TraceDigest:
    """Running BLAKE2 commitment to a run's event sequence.

    The initial input load, every rewrite and every transition feed the hash,
    so two runs share a digest exactly when their traces coincide.
    """

    __slots__ = ("_h",)

    def __init__(self) -> None:
        self._h = hashlib.blake2b(digest_size=32)

    def load(self, tick: int, start: int, symbols: Sequence[Any]) -> None:
        self._h.update(f"W{tick}\x1f{start}\x1f{tuple(symbols)!r}\x1e".encode())

    def step(self, label: str, head: int, read: Any, write: Any) -> None:
        self._h.update(f"S{label}\x1f{head}\x1f{read!r}\x1f{write!r}\x1e".encode())

    def hexdigest(self) -> str:
        return self._h.hexdigest()


def tm_step(machine: Any, cfg: Configuration) -> Configuration:
    """Take one transition from ``cfg``."""
    if machine.halted(cfg.state):
        raise ContractViolation(f"cannot step halted configuration in state {cfg.state!r}")
    state, write, move = machine.step(cfg.state, cfg.read(cfg.head))
    tape, offset = cfg.with_cell(cfg.head, write)
    return Configuration(state, tape, offset, cfg.head + move, cfg.steps + 1, cfg.blank)


def tm_run(machine: Any, symbols: Sequence[Any], budget: int = DEFAULT_BUDGET) -> RunResult:
    """Run ``machine`` on ``symbols`` (loaded at cell 0, head at 0) without rewrites."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    machine.check_input(symbols)
    tape = Tape(machine.blank)
    tape.load(0, symbols)
    trace = TraceDigest()
    trace.load(0, 0, symbols)

    step, halted, is_restart, label = machine.step, machine.halted, machine.is_restart, machine.label
    cells, blank = tape.cells, tape.blank
    state, head, steps, restarts = machine.start, 0, 0, 0
    while not halted(state):
        if steps >= budget:
            outcome = RunOutcome(Status.BUDGET, steps, budget=budget, restarts=restarts)
            return RunResult(outcome, tape.configuration(state, head, steps), trace.hexdigest())
        sym = cells.get(head, blank)
        nxt, write, move = step(state, sym)
        tape.write(head, write)
        trace.step(label(nxt), head, sym, write)
        if is_restart(nxt) and not is_restart(state):
            restarts += 1
        state = nxt
        head += move
        steps += 1
    outcome = RunOutcome(Status.HALTED, steps, verdict=machine.verdict(state), restarts=restarts)
    return RunResult(outcome, tape.configuration(state, head, steps), trace.hexdigest())
