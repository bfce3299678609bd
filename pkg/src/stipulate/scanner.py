"""Scanner machines: a finite program with scalar registers and one tape head.

Hand-encoding matrix inversion as a raw transition table is impractical, so
these machines carry a handful of registers in their control state.  The
tape discipline is kept: each step sees only the symbol under the head,
writes at most that one cell and moves the head by at most one position.
Operands are therefore re-read from the tape every time they are needed,
which is what lets a rewrite of the input region leak into a computation
that is already under way.

A program is assembled with :class:`Program`; every instruction costs one
tick, and a ``seek`` costs one tick per cell travelled.
"""

from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

from .errors import ContractViolation, InvalidMachineError
from .machine import L, R, STAY

SEEK, READ, WRITE, SET, JUMP, BRANCH, HALT = range(7)

Control = tuple  # (pc, registers)


def _noop_check(symbols: Sequence[Any]) -> None:
    return None


class Program:
    """Assembler for scanner-machine code.

    ``pos`` is always the first register; the VM keeps it equal to the head
    offset from where the machine started, so programs address cells
    relative to the input region.
    """

    def __init__(self, name: str, **registers: Any):
        self.name = name
        self.Regs = namedtuple(f"{name}_registers", ("pos",) + tuple(registers))
        self.initial = self.Regs(0, *registers.values())
        self.code: list[tuple] = []
        self.labels: dict[str, int] = {}

    def label(self, name: str) -> None:
        if name in self.labels:
            raise InvalidMachineError(f"duplicate label {name!r}")
        self.labels[name] = len(self.code)

    def seek(self, target: Callable) -> None:
        self.code.append((SEEK, target, None))

    def read(self, update: Callable, move: int = STAY) -> None:
        self.code.append((READ, update, move))

    def write(self, value: Callable, move: int = STAY) -> None:
        self.code.append((WRITE, value, move))

    def set(self, **updates: Callable) -> None:
        self.code.append((SET, tuple(updates.items()), None))

    def jump(self, label: str) -> None:
        self.code.append((JUMP, label, None))

    def branch(self, cond: Callable, label: str) -> None:
        self.code.append((BRANCH, cond, label))

    def halt(self, verdict: str) -> None:
        self.code.append((HALT, verdict, None))

    def build(
        self,
        *,
        decode: Callable[[Any], Any] = lambda s: s,
        check_input: Callable[[Sequence[Any]], None] = _noop_check,
        blank: Any = "_",
        restart: str | None = "restart",
    ) -> "ScannerMachine":
        code = []
        for kind, a, b in self.code:
            if kind == JUMP:
                a = self._resolve(a)
            elif kind == BRANCH:
                b = self._resolve(b)
            code.append((kind, a, b))
        if not code or code[-1][0] not in (JUMP, HALT):
            raise InvalidMachineError(f"{self.name}: program may fall off the end")
        restart_pc = self._resolve(restart) if restart is not None else None
        return ScannerMachine(
            name=self.name,
            code=tuple(code),
            labels=dict(self.labels),
            start=(0, self.initial),
            blank=blank,
            decode=decode,
            validator=check_input,
            restart_pc=restart_pc,
        )

    def _resolve(self, label: str) -> int:
        try:
            return self.labels[label]
        except KeyError:
            raise InvalidMachineError(f"{self.name}: undefined label {label!r}") from None


@dataclass(frozen=True, eq=False)
class ScannerMachine:
    name: str
    code: tuple
    labels: Mapping[str, int]
    start: Control
    blank: Any
    decode: Callable[[Any], Any] = field(repr=False)
    validator: Callable[[Sequence[Any]], None] = field(repr=False)
    restart_pc: int | None = None

    def step(self, control: Control, symbol: Any) -> tuple[Control, Any, int]:
        pc, r = control
        kind, a, b = self.code[pc]
        if kind == SEEK:
            target, p = a(r), r.pos
            if p < target:
                return (pc if p + 1 < target else pc + 1, r._replace(pos=p + 1)), symbol, R
            if p > target:
                return (pc if p - 1 > target else pc + 1, r._replace(pos=p - 1)), symbol, L
            return (pc + 1, r), symbol, STAY
        if kind == READ:
            r = a(r, self.decode(symbol))
            if b:
                r = r._replace(pos=r.pos + b)
            return (pc + 1, r), symbol, b
        if kind == WRITE:
            value = a(r)
            if b:
                r = r._replace(pos=r.pos + b)
            return (pc + 1, r), value, b
        if kind == SET:
            return (pc + 1, r._replace(**{k: fn(r) for k, fn in a})), symbol, STAY
        if kind == JUMP:
            return (a, r), symbol, STAY
        if kind == BRANCH:
            return (b if a(r) else pc + 1, r), symbol, STAY
        raise ContractViolation(f"{self.name}: cannot step a halted scanner machine")

    def halted(self, control: Control) -> bool:
        return self.code[control[0]][0] == HALT

    def verdict(self, control: Control) -> str:
        op = self.code[control[0]]
        if op[0] != HALT:
            raise ContractViolation(f"{self.name}: control at pc {control[0]} is not halting")
        return op[1]

    def is_restart(self, control: Control) -> bool:
        return control[0] == self.restart_pc

    def label(self, control: Control) -> str:
        return str(control[0])

    def check_input(self, symbols: Sequence[Any]) -> None:
        self.validator(symbols)

    def registers(self, control: Control) -> Any:
        return control[1]
