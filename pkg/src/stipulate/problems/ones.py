"""P_4: count the ones of a binary string ``K`` times and output the count.

The input is encoded as ``u#1^K``.  The tape machine keeps one unary block
per round to the right of the input::

    u # 1^K = | c..c | c..c ...

A round marks one of the ``K`` tally ones (``1 -> k``), counts the ones of
``u`` into a fresh block (marking them ``I`` while counting), then checks
the new block against the previous one by pairing cells off.  After ``K``
agreeing rounds the machine halts; the output is the length of the last
block.  A disagreement restarts from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InputEncodingError
from ..machine import L, R, Configuration
from ..scanner import Program
from .base import FUNCTION, ProblemInstance
from .tables import BLANK, TableBuilder

WORK = "=|cdx"


@dataclass(frozen=True)
class CountInput:
    u: str
    k: int

    def __post_init__(self) -> None:
        if not self.u or set(self.u) - {"0", "1"}:
            raise InputEncodingError(f"u must be a non-empty binary string, got {self.u!r}")
        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 1:
            raise InputEncodingError(f"K must be a positive integer, got {self.k!r}")


def encode(x: CountInput) -> str:
    return f"{x.u}#{'1' * x.k}"


def decode(s) -> CountInput:
    s = "".join(s)
    if s.count("#") != 1:
        raise InputEncodingError(f"expected exactly one '#' in {s!r}")
    u, tally = s.split("#")
    if set(tally) - {"1"}:
        raise InputEncodingError(f"K must be written in unary, got {tally!r}")
    return CountInput(u, len(tally))


def oracle(x: CountInput) -> int:
    return x.u.count("1")


def partner(x: CountInput) -> CountInput:
    """Same-length input whose last digit of ``u`` is flipped."""
    last = "1" if x.u[-1] == "0" else "0"
    return CountInput(x.u[:-1] + last, x.k)


def parse(text: str) -> CountInput:
    return decode(text.strip())


def _check(symbols) -> None:
    decode(symbols)


def _table():
    b = TableBuilder("01#", "kI" + WORK, start="init")
    every = b.nonblank()

    init = b.state("init", R)
    b.sweep(init, "01#", R)
    b.rule(init, BLANK, b.state("round", L), L, write="=")

    b.sweep("round", every, L)
    b.rule("round", BLANK, b.state("round.seek", R), R)
    b.sweep("round.seek", "01", R)
    b.rule("round.seek", "#", b.state("round.tick", R), R)
    b.sweep("round.tick", "k", R)
    b.rule("round.tick", "1", b.state("round.open", R), R, write="k")
    b.rule("round.tick", "=", "accept", R)
    b.sweep("round.open", every, R)
    b.rule("round.open", BLANK, b.state("count.home", L), L, write="|")

    b.sweep("count.home", every, L)
    b.rule("count.home", BLANK, b.state("count.scan", R), R)
    b.sweep("count.scan", "0I", R)
    b.rule("count.scan", "1", b.state("count.app", R), R, write="I")
    b.rule("count.scan", "#", b.state("count.unmark", L), L)
    b.sweep("count.app", every, R)
    b.rule("count.app", BLANK, "count.home", L, write="c")
    b.sweep("count.unmark", "0", L)
    b.rule("count.unmark", "I", "count.unmark", L, write="1")
    b.rule("count.unmark", BLANK, b.state("cmp.start", R), R)

    # Pair off the newest block against the one before it, right to left.
    b.sweep("cmp.start", every, R)
    b.rule("cmp.start", BLANK, b.state("cmp.cur", L), L)
    b.sweep("cmp.cur", "d", L)
    b.rule("cmp.cur", "c", b.state("cmp.tosep", L), L, write="d")
    b.rule("cmp.cur", "|", b.state("cmp.chk.enter", L), L)
    b.sweep("cmp.tosep", "cd", L)
    b.rule("cmp.tosep", "|", b.state("cmp.prev.enter", L), L)
    b.rule("cmp.prev.enter", "=", b.state("cmp.restore", R), R)
    b.rule("cmp.prev.enter", "c", "cmp.start", R, write="x")
    b.rule("cmp.prev.enter", "x", b.state("cmp.prev", L), L)
    b.sweep("cmp.prev", "x", L)
    b.rule("cmp.prev", "c", "cmp.start", R, write="x")
    b.rule("cmp.chk.enter", "=|", "cmp.restore", R)
    b.rule("cmp.chk.enter", "x", b.state("cmp.chk", L), L)
    b.sweep("cmp.chk", "x", L)
    b.rule("cmp.chk", "|", "cmp.restore", R)
    b.rule("cmp.restore", "d", "cmp.restore", R, write="c")
    b.sweep("cmp.restore", [s for s in every if s != "d"], R)
    b.rule("cmp.restore", BLANK, "round", L)

    b.restart_sweep(WORK, {"k": "1", "I": "1"}, then="init")
    return b.build("count-ones")


def read_blocks(cfg: Configuration, region_start: int, width: int) -> int:
    """Length of the last unary block written after the input region."""
    start = region_start + width
    cells = cfg.window(start, max(0, cfg.offset + len(cfg.tape) - start))
    scratch = "".join(s for s in cells if s != cfg.blank)
    return len(scratch.rsplit("|", 1)[-1]) if "|" in scratch else 0


def _program():
    p = Program("count_ones", rounds=0, prev=-1, ones=0, k=0, side=0, ch="", width=0)
    p.label("restart")
    p.set(rounds=lambda r: 0, prev=lambda r: -1)
    p.label("round")
    p.seek(lambda r: 0)
    p.set(ones=lambda r: 0, k=lambda r: 0, side=lambda r: 0)
    p.label("scan")
    p.read(lambda r, v: r._replace(ch=v), R)
    p.branch(lambda r: r.ch == "#", "hash")
    p.branch(lambda r: r.ch != "1", "other")
    p.set(ones=lambda r: r.ones + (r.side == 0), k=lambda r: r.k + (r.side == 1))
    p.jump("scan")
    p.label("hash")
    p.set(side=lambda r: 1)
    p.jump("scan")
    p.label("other")
    p.branch(lambda r: r.ch == "0", "scan")
    p.set(width=lambda r: r.pos - 1)
    p.branch(lambda r: r.prev >= 0 and r.prev != r.ones, "restart")
    p.set(prev=lambda r: r.ones, rounds=lambda r: r.rounds + 1)
    p.branch(lambda r: r.rounds < r.k, "round")
    p.seek(lambda r: r.width)
    p.write(lambda r: r.ones)
    p.halt("halt")
    return p.build(check_input=_check)


def _read_scanner(cfg: Configuration, region_start: int, width: int) -> int:
    return cfg.read(region_start + width)


def _instance(variant: str, machine, reader, label: str = "") -> ProblemInstance:
    return ProblemInstance(
        id="p4",
        variant=variant,
        kind=FUNCTION,
        machine=machine,
        encode=encode,
        decode=decode,
        oracle=oracle,
        parse=parse,
        format=encode,
        partner=partner,
        repeats=lambda x: x.k,
        read_output=reader,
        label=label,
    )


def build_p4() -> ProblemInstance:
    """Hand-encoded transition table; the accept state means "halt"."""
    return _instance("tm", _table(), read_blocks)


def build_p4_scanner() -> ProblemInstance:
    return _instance("scanner", _program(), _read_scanner, "p4-scanner")
