from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from ..machine import DEFAULT_BUDGET, Configuration, RunOutcome, RunResult, tm_run
from ..stipulation import StipulatedRunRecord, StipulationSchedule, stip_run

DECISION = "decision"
FUNCTION = "function"


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    """A runnable example problem with its encoder and host-side oracle.

    ``oracle`` never touches a tape: it answers with plain arithmetic.  For
    decision problems answers are ``"accept"``/``"reject"``; for function
    problems they are the output value itself.
    """

    id: str
    variant: str  # "tm" or "scanner"
    kind: str
    machine: Any
    encode: Callable[[Any], Sequence]
    decode: Callable[[Sequence], Any]
    oracle: Callable[[Any], Any]
    parse: Callable[[str], Any]
    format: Callable[[Any], str]
    partner: Callable[[Any], Any]
    repeats: Callable[[Any], int]
    read_output: Callable[[Configuration, int, int], Any] | None = field(default=None, repr=False)
    label: str = ""

    @property
    def name(self) -> str:
        """Registry key: the id, or a distinguishing label for alternate machines."""
        return self.label or self.id

    def answer(self, outcome: RunOutcome, configuration: Configuration, width: int, region_start: int = 0) -> Any:
        """Verdict or output of a halted run; ``None`` when it did not halt."""
        if not outcome.halted:
            return None
        if self.kind == DECISION:
            return outcome.verdict
        return self.read_output(configuration, region_start, width)

    def code(self, outcome: RunOutcome) -> str:
        """Short outcome code used in reports."""
        if outcome.halted:
            return outcome.verdict if self.kind == DECISION else "halt"
        return outcome.status.value

    def run(self, x: Any, budget: int = DEFAULT_BUDGET) -> RunResult:
        return tm_run(self.machine, self.encode(x), budget)

    def run_stipulated(
        self, stream: Sequence[Any], interval, budget: int = DEFAULT_BUDGET, region_start: int = 0
    ) -> StipulatedRunRecord:
        schedule = StipulationSchedule(interval, tuple(self.encode(x) for x in stream), region_start)
        return stip_run(self.machine, schedule, budget)

    def bare_answer(self, x: Any, budget: int = DEFAULT_BUDGET) -> Any:
        r = self.run(x, budget)
        return self.answer(r.outcome, r.configuration, len(self.encode(x)))
