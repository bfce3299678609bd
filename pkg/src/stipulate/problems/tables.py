"""Builder for hand-encoded transition tables.

The machines built here keep their whole tape as one contiguous non-blank
block: the input region followed by a scratch area.  Any (state, symbol)
pair without an explicit rule falls back to the restart state, moving the
head back into the block so the restart sweep can find both ends.
"""

from __future__ import annotations

from typing import Iterable

from ..errors import InvalidMachineError
from ..machine import L, R, MachineSpec

BLANK = "_"


class TableBuilder:
    def __init__(
        self,
        input_alphabet: str,
        work_symbols: str,
        *,
        start: str,
        accept: str = "accept",
        reject: str = "reject",
        restart: str = "reset",
    ):
        self.input_alphabet = frozenset(input_alphabet)
        self.tape_alphabet = frozenset(input_alphabet) | frozenset(work_symbols) | {BLANK}
        self.start, self.accept, self.reject, self.restart = start, accept, reject, restart
        self.rules: dict[tuple[str, str], tuple[str, str, int]] = {}
        self.heading: dict[str, int] = {}

    def state(self, name: str, heading: int) -> str:
        """Declare a state and the direction it normally travels in."""
        self.heading.setdefault(name, heading)
        return name

    def rule(self, state: str, symbols: Iterable[str], nxt: str, move: int, write: str | None = None) -> None:
        for s in symbols:
            if (state, s) in self.rules:
                raise InvalidMachineError(f"duplicate rule for ({state}, {s})")
            self.rules[(state, s)] = (nxt, s if write is None else write, move)

    def sweep(self, state: str, symbols: Iterable[str], move: int) -> None:
        """Travel over ``symbols`` unchanged."""
        self.rule(state, symbols, state, move)

    def nonblank(self) -> list[str]:
        return sorted(self.tape_alphabet - {BLANK})

    def build(self, name: str) -> MachineSpec:
        states = set(self.heading) | {self.accept, self.reject, self.restart}
        for (q, _), (q2, _, _) in self.rules.items():
            states |= {q, q2}
        transitions = dict(self.rules)
        for q in sorted(states - {self.accept, self.reject}):
            for s in sorted(self.tape_alphabet):
                if (q, s) in transitions:
                    continue
                if s == BLANK:
                    # Stepped off one end of the block: step back onto it.
                    back = R if self.heading.get(q, L) == L else L
                    transitions[(q, s)] = (self.restart, s, back)
                else:
                    transitions[(q, s)] = (self.restart, s, L)
        return MachineSpec(
            states=frozenset(states),
            input_alphabet=self.input_alphabet,
            tape_alphabet=self.tape_alphabet,
            blank=BLANK,
            transitions=transitions,
            start_state=self.start,
            accept_state=self.accept,
            reject_state=self.reject,
            restart_state=self.restart,
            name=name,
        )

    def restart_sweep(self, work: str, normalize: dict[str, str], then: str) -> None:
        """Rules for the restart routine.

        Walk to the left end, then to the right end, erase scratch symbols
        right to left, undo input marks and hand over to ``then`` at cell 0.
        """
        every = self.nonblank()
        r = self.state(self.restart, L)
        right = self.state(self.restart + ".right", R)
        erase = self.state(self.restart + ".erase", L)
        norm = self.state(self.restart + ".norm", L)
        self.sweep(r, every, L)
        self.rule(r, BLANK, right, R)
        self.sweep(right, every, R)
        self.rule(right, BLANK, erase, L)
        self.rule(erase, work, erase, L, write=BLANK)
        inputish = [s for s in every if s not in work]
        for s in inputish:
            self.rule(erase, s, norm, L, write=normalize.get(s, s))
            self.rule(norm, s, norm, L, write=normalize.get(s, s))
        self.rule(erase, BLANK, then, R)
        self.rule(norm, BLANK, then, R)
