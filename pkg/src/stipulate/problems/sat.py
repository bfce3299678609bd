"""P_1: evaluate a fixed 3-CNF formula twice on an 8-variable assignment.

The formula is fixed; the input is the assignment written as eight ``T``/``F``
cells.  Both evaluations true accepts, both false rejects, and a
disagreement starts over.
"""

from __future__ import annotations

from itertools import product

from ..errors import InputEncodingError
from ..machine import R
from ..scanner import Program
from .base import DECISION, ProblemInstance

VARIABLES = 8
# Literal (i, True) is x_i, (i, False) is its negation.
CLAUSES = (
    ((1, True), (5, False), (7, True)),
    ((2, False), (4, False), (8, True)),
    ((2, False), (3, False), (6, True)),
)


def formula(assignment) -> bool:
    """Truth value of the formula; ``assignment[i - 1]`` is the value of x_i."""
    return all(any(assignment[i - 1] == positive for i, positive in clause) for clause in CLAUSES)


def all_assignments():
    return [tuple(bits) for bits in product((False, True), repeat=VARIABLES)]


def _validate(x) -> tuple[bool, ...]:
    x = tuple(x)
    if len(x) != VARIABLES or any(not isinstance(v, bool) for v in x):
        raise InputEncodingError(f"assignment must give a bool for each of x1..x{VARIABLES}")
    return x


def encode(x) -> str:
    return "".join("T" if v else "F" for v in _validate(x))


def decode(s) -> tuple[bool, ...]:
    s = "".join(s)
    if len(s) != VARIABLES or set(s) - {"T", "F"}:
        raise InputEncodingError(f"expected {VARIABLES} cells of T/F, got {s!r}")
    return tuple(c == "T" for c in s)


def oracle(x) -> str:
    """Brute truth-table evaluation, clause by clause."""
    x = _validate(x)
    value = True
    for clause in CLAUSES:
        satisfied = False
        for i, positive in clause:
            literal = x[i - 1] if positive else not x[i - 1]
            satisfied = satisfied or literal
        value = value and satisfied
    return "accept" if value else "reject"


def partner(x):
    x = _validate(x)
    return (not x[0],) + x[1:]


def _check(symbols) -> None:
    decode(symbols)


def _program():
    p = Program("sat", pas=0, first=False, bits=())
    p.label("restart")
    p.set(pas=lambda r: 0)
    p.label("pass")
    p.seek(lambda r: 0)
    p.set(bits=lambda r: ())
    p.label("scan")
    p.read(lambda r, v: r._replace(bits=r.bits + (v == "T",)), R)
    p.branch(lambda r: len(r.bits) < VARIABLES, "scan")
    p.branch(lambda r: r.pas == 1, "second")
    p.set(first=lambda r: formula(r.bits), pas=lambda r: 1)
    p.jump("pass")
    p.label("second")
    p.branch(lambda r: r.first != formula(r.bits), "restart")
    p.branch(lambda r: r.first, "accept")
    p.halt("reject")
    p.label("accept")
    p.halt("accept")
    return p.build(check_input=_check)


def build_p1() -> ProblemInstance:
    return ProblemInstance(
        id="p1",
        variant="scanner",
        kind=DECISION,
        machine=_program(),
        encode=encode,
        decode=decode,
        oracle=oracle,
        parse=lambda text: decode(text.strip()),
        format=encode,
        partner=partner,
        repeats=lambda x: 2,
    )
