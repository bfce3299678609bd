"""Single runs, interval sweeps, input-by-interval grids and their reports."""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .errors import ConfigError, DomainError, ScheduleError
from .machine import DEFAULT_BUDGET, INF, MachineSpec, RunResult, is_inf, tm_run
from .problems import DECISION, ProblemInstance
from .problems.matrices import format_matrix
from .stipulation import StipulatedRunRecord, StipulationSchedule, stip_run
from .transform import (
    Case,
    Interval,
    TransformParams,
    classify_case,
    f_normalized,
    f_transform,
    inflection_threshold,
)

SYMBOLIC_INTERVALS = ("inf", "4N", "2N", "N+1", "N", "N-1", "N/2", "1")
_TOKEN = re.compile(r"^(?:(\d*)N([+-]\d+)?|N/(\d+)|(\d+))$")
DECIMALS = 20


def file_problem(spec: MachineSpec) -> ProblemInstance:
    """Wrap a parsed machine file so it runs like a shipped decision problem."""

    def ident(s):
        return "".join(s) if not isinstance(s, str) else s

    return ProblemInstance(
        id=spec.name or "machine",
        variant="tm",
        kind=DECISION,
        machine=spec,
        encode=ident,
        decode=ident,
        oracle=None,
        parse=str.strip,
        format=ident,
        partner=None,
        repeats=lambda x: 1,
    )


# -- interval tokens --------------------------------------------------------


def parse_interval(token: str | int | float, N: int | None = None) -> int | float:
    """Resolve ``inf``, an integer, or a form in ``N`` (``4N``, ``N+1``, ``N/2``).

    Symbolic values are floored and clamped to the one-tick minimum.
    """
    if not isinstance(token, str):
        if is_inf(token):
            return INF
        if isinstance(token, int) and not isinstance(token, bool) and token >= 1:
            return token
        raise ConfigError(f"bad interval {token!r}")
    t = token.strip().replace(" ", "")
    if t.lower() in ("inf", "infinity"):
        return INF
    m = _TOKEN.match(t)
    if not m:
        raise ConfigError(f"bad interval {token!r}: use an integer, inf, or a form like 2N, N+1, N/2")
    if m.group(4) is not None:
        value = int(m.group(4))
        if value < 1:
            raise ScheduleError(f"interval must be at least 1 tick, got {value}")
        return value
    if N is None:
        raise ConfigError(f"interval {token!r} needs the bare step count N")
    if m.group(3) is not None:
        value = N // int(m.group(3))
    else:
        factor = int(m.group(1)) if m.group(1) else 1
        value = factor * N + int(m.group(2) or 0)
    return max(1, value)


def interval_text(T) -> str:
    return "inf" if is_inf(T) else str(T)


# -- number formatting ------------------------------------------------------


def fraction_text(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _decimal(q: Fraction, up: bool) -> str:
    scale = 10**DECIMALS
    n = math.ceil(q * scale) if up else math.floor(q * scale)
    sign = "-" if n < 0 else ""
    whole, frac = divmod(abs(n), scale)
    return f"{sign}{whole}.{frac:0{DECIMALS}d}"


def value_text(v) -> str:
    """Exact rationals as ``p/q``; enclosures as outward-rounded ``lo..hi``."""
    if isinstance(v, Interval):
        return f"{_decimal(v.lo, False)}..{_decimal(v.hi, True)}"
    if is_inf(v):
        return "inf"
    return fraction_text(v)


def output_text(v) -> str:
    if isinstance(v, tuple):
        return format_matrix(v)
    return str(v)


# -- transform summary ------------------------------------------------------


@dataclass(frozen=True)
class TransformSummary:
    N: int
    T: Any
    c: Fraction
    fP: Fraction
    fn: Fraction
    region: str
    f: Any  # Fraction or Interval
    case: Case | None

    @property
    def f_text(self) -> str:
        return value_text(self.f)

    @property
    def case_text(self) -> str:
        return self.case.name if self.case is not None else "-"


def classify(N: int, T, c=None) -> TransformSummary:
    """Pure arithmetic: f_n, f(P,T) and the case, with ``c = N*T_t`` by default."""
    if not is_inf(T) and Fraction(T) == 0:
        raise DomainError("T = 0 is outside the domain (0, inf]")
    if c is None:
        params = TransformParams.step_scaled(N, T)
    else:
        params = TransformParams(N, T, c=Fraction(c))
    fv = f_transform(params)
    fn = f_normalized(params)
    case = None
    if params.c == params.bare_time and N >= 1:
        case = classify_case(fn, fv, params.bare_time)
    f = fv.value if fv.exact else fv.bounds
    return TransformSummary(N, params.T, params.c, params.bare_time, fn.value, fn.region.value, f, case)


# -- single runs ------------------------------------------------------------


@dataclass(frozen=True)
class RunReport:
    problem: ProblemInstance
    stream: tuple
    interval: Any
    bare: RunResult
    record: StipulatedRunRecord
    transform: TransformSummary | None

    @property
    def N(self) -> int | None:
        return self.bare.outcome.steps if self.bare.outcome.halted else None

    @property
    def width(self) -> int:
        return len(self.problem.encode(self.stream[0]))

    @property
    def bare_code(self) -> str:
        return self.problem.code(self.bare.outcome)

    @property
    def code(self) -> str:
        return self.problem.code(self.record.outcome)

    def answer(self, region_start: int = 0) -> Any:
        return self.problem.answer(
            self.record.outcome, self.record.configuration, self.width, region_start
        )

    def lines(self, region_start: int = 0) -> list[str]:
        p, rec, t = self.problem, self.record, self.transform
        out = [
            f"problem: {p.name}",
            f"input: {p.format(self.stream[0])}",
        ]
        if len(self.stream) > 1:
            out.append("stream: " + " | ".join(p.format(x) for x in self.stream))
        out.append(f"bare: {self.bare_code} after N = {self.bare.outcome.steps} steps")
        out.append(f"T: {interval_text(self.interval)}")
        if t is not None:
            out += [
                f"f(P): {fraction_text(t.fP)}",
                f"f(P,T): {t.f_text}  (c = {fraction_text(t.c)})",
                f"f_n: {fraction_text(t.fn)}  ({t.region})",
                f"case: {t.case_text}",
            ]
        out.append(f"outcome: {self.code} after {rec.outcome.steps} steps")
        out.append(f"rewrites: {rec.rewrite_count}")
        if rec.outcome.halted and p.kind != DECISION:
            out.append(f"output: {output_text(self.answer(region_start))}")
        cert = rec.outcome.certificate
        if cert is not None:
            out.append(
                f"cycle: ticks {cert.first_occurrence_tick} -> {cert.second_occurrence_tick} "
                f"(period {cert.period})"
            )
        return out

    def csv_text(self) -> str:
        t = self.transform
        row = {
            "problem": self.problem.name,
            "T": interval_text(self.interval),
            "N": self.N if self.N is not None else "",
            "fn": fraction_text(t.fn) if t else "",
            "f": t.f_text if t else "",
            "case": t.case_text if t else "",
            "outcome": self.code,
            "steps": self.record.outcome.steps,
            "rewrites": self.record.rewrite_count,
        }
        return _csv([], list(row), [list(row.values())])


def _schedule(problem: ProblemInstance, stream: Sequence, interval, region_start: int) -> StipulationSchedule:
    try:
        return StipulationSchedule(interval, tuple(problem.encode(x) for x in stream), region_start)
    except ScheduleError as exc:
        raise ConfigError(str(exc)) from None


def default_stream(problem: ProblemInstance, x) -> tuple:
    """The input plus one same-length partner, so finite intervals are legal."""
    if problem.partner is None:
        raise ConfigError("give a stream of at least two inputs for a finite interval")
    return (x, problem.partner(x))


def run_experiment(
    problem: ProblemInstance,
    stream: Sequence,
    interval,
    *,
    budget: int = DEFAULT_BUDGET,
    region_start: int = 0,
    c=None,
) -> RunReport:
    stream = tuple(stream)
    if not stream:
        raise ConfigError("no input given")
    bare = tm_run(problem.machine, problem.encode(stream[0]), budget)
    N = bare.outcome.steps if bare.outcome.halted else None
    interval = parse_interval(interval, N)
    if not is_inf(interval) and len(stream) == 1:
        stream = default_stream(problem, stream[0])
    transform = None
    if bare.outcome.halted and bare.outcome.steps >= 1:
        transform = classify(bare.outcome.steps, interval, c)
    record = stip_run(problem.machine, _schedule(problem, stream, interval, region_start), budget)
    return RunReport(problem, stream, interval, bare, record, transform)


# -- sweeps -----------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    T: Any
    summary: TransformSummary
    outcome: str
    halted: bool
    steps: int
    rewrites: int

    def cells(self) -> list:
        s = self.summary
        return [interval_text(self.T), fraction_text(s.fn), s.f_text, s.case_text, self.outcome, self.steps, self.rewrites]


SWEEP_HEADER = ["T", "fn", "f", "case", "outcome", "steps", "rewrites"]


@dataclass(frozen=True)
class SweepReport:
    problem: ProblemInstance
    stream: tuple
    N: int
    rows: tuple[SweepRow, ...]
    seed: int | None

    @property
    def inflection(self) -> int:
        return inflection_threshold(self.N)

    @property
    def monotone(self) -> bool:
        """Halting intervals form an upward-closed set (rows run from large T down)."""
        seen_failure = False
        for row in self.rows:
            if row.halted and seen_failure:
                return False
            seen_failure = seen_failure or not row.halted
        return True

    @property
    def transition(self) -> tuple[Any, Any] | None:
        """(smallest halting T above the first failure, first non-halting T)."""
        previous = None
        for row in self.rows:
            if not row.halted:
                return (previous, row.T)
            previous = row.T
        return None

    def csv_text(self) -> str:
        tr = self.transition
        if tr is None:
            transition = "none (halted at every interval)"
        else:
            transition = f"halts at T={interval_text(tr[0]) if tr[0] is not None else '-'}, not at T={interval_text(tr[1])}"
        comments = [
            f"seed: {self.seed if self.seed is not None else '-'}",
            f"problem: {self.problem.name}",
            "stream: " + " | ".join(self.problem.format(x) for x in self.stream),
            f"N: {self.N}",
            f"inflection: T={self.inflection}",
            f"transition: {transition}",
            f"monotone: {'yes' if self.monotone else 'NO (halting set is not upward-closed)'}",
        ]
        return _csv(comments, SWEEP_HEADER, [r.cells() for r in self.rows])


def _sort_key(T) -> tuple:
    return (1, 0) if is_inf(T) else (0, T)


def sweep(
    problem: ProblemInstance,
    stream: Sequence,
    tokens: Sequence[str] = SYMBOLIC_INTERVALS,
    *,
    budget: int = DEFAULT_BUDGET,
    region_start: int = 0,
    seed: int | None = None,
) -> SweepReport:
    """One stipulated run per interval, largest first; always includes T = N."""
    if not tokens:
        raise ConfigError("interval list is empty")
    stream = tuple(stream)
    if len(stream) == 1:
        stream = default_stream(problem, stream[0])
    bare = tm_run(problem.machine, problem.encode(stream[0]), budget)
    if not bare.outcome.halted or bare.outcome.steps < 1:
        raise ConfigError("the bare run must halt within the budget to measure N")
    N = bare.outcome.steps
    intervals = {parse_interval(t, N) for t in tokens} | {inflection_threshold(N)}
    rows = []
    for T in sorted(intervals, key=_sort_key, reverse=True):
        record = stip_run(problem.machine, _schedule(problem, stream, T, region_start), budget)
        rows.append(
            SweepRow(
                T,
                classify(N, T),
                problem.code(record.outcome),
                record.outcome.halted,
                record.outcome.steps,
                record.rewrite_count,
            )
        )
    return SweepReport(problem, stream, N, tuple(rows), seed)


# -- grids ------------------------------------------------------------------


@dataclass(frozen=True)
class GridReport:
    problem: ProblemInstance
    inputs: tuple
    tokens: tuple[str, ...]
    bare: tuple[str, ...]
    cells: tuple[tuple[str, ...], ...]
    seed: int | None

    def column(self, token: str) -> tuple[str, ...]:
        k = self.tokens.index(token)
        return tuple(row[k] for row in self.cells)

    def csv_text(self) -> str:
        comments = [
            f"seed: {self.seed if self.seed is not None else '-'}",
            f"problem: {self.problem.name}",
            "row n runs the input stream rotated to start at input n",
        ]
        header = ["n", "input", "bare"] + list(self.tokens)
        rows = [
            [n, self.problem.format(x), self.bare[n]] + list(self.cells[n])
            for n, x in enumerate(self.inputs)
        ]
        return _csv(comments, header, rows)


def grid(
    problem: ProblemInstance,
    inputs: Sequence,
    tokens: Sequence[str],
    *,
    budget: int = DEFAULT_BUDGET,
    region_start: int = 0,
    seed: int | None = None,
) -> GridReport:
    """Outcome code for each (input, interval); symbolic intervals use that row's N."""
    inputs = tuple(inputs)
    if len(inputs) < 2:
        raise ConfigError("a grid needs at least two inputs (consecutive rewrites must differ)")
    if len(tokens) < 2:
        raise ConfigError("a grid needs at least two intervals")
    tokens = tuple(str(t) for t in tokens)
    _schedule(problem, inputs, INF, region_start)  # equal lengths, distinct neighbours
    bare_codes, cells = [], []
    for n in range(len(inputs)):
        stream = inputs[n:] + inputs[:n]
        bare = tm_run(problem.machine, problem.encode(stream[0]), budget)
        bare_codes.append(problem.code(bare.outcome))
        N = bare.outcome.steps if bare.outcome.halted else None
        row = []
        for token in tokens:
            T = parse_interval(token, N)
            record = stip_run(problem.machine, _schedule(problem, stream, T, region_start), budget)
            row.append(problem.code(record.outcome))
        cells.append(tuple(row))
    return GridReport(problem, inputs, tokens, tuple(bare_codes), tuple(cells), seed)


# -- csv --------------------------------------------------------------------


def _csv(comments: list[str], header: list, rows: list[list]) -> str:
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()
