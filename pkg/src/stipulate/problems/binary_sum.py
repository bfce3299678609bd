"""P_r: add two binary numerals twice and compare the two sums.

Accept when both sums are equal and even, reject when equal and odd,
otherwise start over.

Tape machine layout (``a+b`` in the input region)::

    a + b = s1 ; s2

Sums are written least significant bit first as ``o``/``i``.  Pass one
consumes input digits by marking them (``0 -> X``, ``1 -> Y``); pass two
consumes the marks by turning them back into digits, so a completed
double pass leaves the input region as it found it.  The two sums are then
compared bit by bit, crossing them out with ``x``.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InputEncodingError
from ..machine import L, R
from ..scanner import Program
from .base import DECISION, ProblemInstance
from .tables import BLANK, TableBuilder

FRESH = {1: {"0": 0, "1": 1}, 2: {"X": 0, "Y": 1}}
CONSUMED = {1: "XY", 2: "01"}
DIGITS = "01XY"
WORK = "=;oix"


@dataclass(frozen=True)
class BinarySum:
    lhs: str
    rhs: str

    def __post_init__(self) -> None:
        for side in (self.lhs, self.rhs):
            if not side or set(side) - {"0", "1"}:
                raise InputEncodingError(f"not a binary numeral: {side!r}")

    @property
    def total(self) -> int:
        return int(self.lhs, 2) + int(self.rhs, 2)


def encode(x: BinarySum) -> str:
    return f"{x.lhs}+{x.rhs}"


def decode(s) -> BinarySum:
    s = "".join(s)
    if s.count("+") != 1:
        raise InputEncodingError(f"expected exactly one '+' in {s!r}")
    lhs, rhs = s.split("+")
    return BinarySum(lhs, rhs)


def oracle(x: BinarySum) -> str:
    return "accept" if x.total % 2 == 0 else "reject"


def partner(x: BinarySum) -> BinarySum:
    """Same-length input differing in the last digit of the right operand."""
    flipped = "1" if x.rhs[-1] == "0" else "0"
    return BinarySum(x.lhs, x.rhs[:-1] + flipped)


def _check(symbols) -> None:
    decode(symbols)


def _table():
    b = TableBuilder("01+", "XY" + WORK, start="init")

    init = b.state("init", R)
    b.sweep(init, DIGITS + "+", R)
    b.rule(init, BLANK, "p1c0.toplus", L, write="=")

    for p in (1, 2):
        fresh, used = FRESH[p], CONSUMED[p]
        for c in (0, 1):
            toplus = b.state(f"p{p}c{c}.toplus", L)
            finda = b.state(f"p{p}c{c}.finda", L)
            b.sweep(toplus, DIGITS + "=;oi", L)
            b.rule(toplus, "+", finda, L)
            b.sweep(finda, used, L)
            for d, v in fresh.items():
                b.rule(finda, d, b.state(f"p{p}c{c}a{v}.tob", R), R, write=used[v])
            b.rule(finda, BLANK, b.state(f"p{p}c{c}aE.tob", R), R)
            for da in "01E":
                tob = f"p{p}c{c}a{da}.tob"
                findb = b.state(f"p{p}c{c}a{da}.findb", L)
                b.sweep(tob, DIGITS + "+", R)
                b.rule(tob, "=", findb, L)
                b.sweep(findb, used, L)
                for d, v in fresh.items():
                    b.rule(findb, d, b.state(f"p{p}c{c}a{da}b{v}.app", R), R, write=used[v])
                b.rule(findb, "+", b.state(f"p{p}c{c}a{da}bE.app", R), R)
                for db in "01E":
                    app = f"p{p}c{c}a{da}b{db}.app"
                    b.sweep(app, DIGITS + "+=;oi", R)
                    if da == "E" and db == "E":
                        if p == 1 and c == 0:
                            b.rule(app, BLANK, "p2c0.toplus", L, write=";")
                        elif p == 1:
                            b.rule(app, BLANK, b.state("p1.semi", R), R, write="i")
                        else:
                            b.rule(app, BLANK, b.state("cmp.start", L), L, write="i" if c else BLANK)
                    else:
                        s = (0 if da == "E" else int(da)) + (0 if db == "E" else int(db)) + c
                        b.rule(app, BLANK, f"p{p}c{s // 2}.toplus", L, write="oi"[s % 2])
    b.rule("p1.semi", BLANK, "p2c0.toplus", L, write=";")

    b.sweep("cmp.start", "oix;", L)
    b.rule("cmp.start", "=", b.state("cmp.get?", R), R)
    for par in "?01":
        get = b.state(f"cmp.get{par}", R)
        back = b.state(f"cmp.back{par}", L)
        end = b.state(f"cmp.end{par}", R)
        b.sweep(get, "x", R)
        b.rule(get, ";", end, R)
        for bit, sym in enumerate("oi"):
            newpar = str(bit) if par == "?" else par
            seek = b.state(f"cmp.seek{bit}{newpar}", R)
            b.rule(get, sym, seek, R, write="x")
        b.sweep(back, "oix;", L)
        b.rule(back, "=", get, R)
        b.sweep(end, "x", R)
        b.rule(end, BLANK, "reject" if par == "1" else "accept", R)
    for bit in (0, 1):
        for par in "01":
            seek = f"cmp.seek{bit}{par}"
            match = b.state(f"cmp.match{bit}{par}", R)
            b.sweep(seek, "oix", R)
            b.rule(seek, ";", match, R)
            b.sweep(match, "x", R)
            b.rule(match, "oi"[bit], f"cmp.back{par}", L, write="x")

    b.restart_sweep(WORK, {"X": "0", "Y": "1"}, then="init")
    return b.build("binary-sum")


def _program():
    p = Program("binary_sum", pas=0, a=0, b=0, side=0, ch="", s1=0)
    p.label("restart")
    p.set(pas=lambda r: 0, s1=lambda r: 0)
    p.label("pass")
    p.seek(lambda r: 0)
    p.set(a=lambda r: 0, b=lambda r: 0, side=lambda r: 0)
    p.label("scan")
    p.read(lambda r, v: r._replace(ch=v), R)
    p.branch(lambda r: r.ch == "+", "plus")
    p.branch(lambda r: r.ch in ("0", "1"), "digit")
    p.jump("end")
    p.label("plus")
    p.set(side=lambda r: 1)
    p.jump("scan")
    p.label("digit")
    p.set(
        a=lambda r: 2 * r.a + int(r.ch) if r.side == 0 else r.a,
        b=lambda r: 2 * r.b + int(r.ch) if r.side == 1 else r.b,
    )
    p.jump("scan")
    p.label("end")
    p.branch(lambda r: r.pas == 1, "second")
    p.set(s1=lambda r: r.a + r.b, pas=lambda r: 1)
    p.jump("pass")
    p.label("second")
    p.branch(lambda r: r.s1 != r.a + r.b, "restart")
    p.branch(lambda r: r.s1 % 2 == 0, "accept")
    p.halt("reject")
    p.label("accept")
    p.halt("accept")
    return p.build(check_input=_check)


def _instance(variant: str, machine, label: str = "") -> ProblemInstance:
    return ProblemInstance(
        id="pr",
        variant=variant,
        kind=DECISION,
        machine=machine,
        encode=encode,
        decode=decode,
        oracle=oracle,
        parse=lambda text: decode(text.strip()),
        format=encode,
        partner=partner,
        repeats=lambda x: 2,
        label=label,
    )


def build_pr() -> ProblemInstance:
    """Hand-encoded transition table."""
    return _instance("tm", _table())


def build_pr_scanner() -> ProblemInstance:
    return _instance("scanner", _program(), "pr-scanner")
