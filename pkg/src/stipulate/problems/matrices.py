"""Matrix problems P_2, P_3, P_5 and P_6 as scanner machines.

Every input is a flat token sequence ``n, entries...`` with one token per
cell (``"3"``, ``"-1/2"``).  The scanner works in a scratch area after the
input region and re-reads operands from the tape each time it needs them,
so a rewrite of the input shows up in the middle of a pass.

Host-side linear algebra used by the oracles lives here too; it shares no
code with the scanner programs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from ..errors import DomainError, InputEncodingError
from ..machine import Configuration
from ..scanner import Program
from .base import DECISION, FUNCTION, ProblemInstance

Matrix = tuple  # tuple of row tuples


# -- host linear algebra ----------------------------------------------------

def as_matrix(rows, kind=Fraction) -> Matrix:
    rows = tuple(tuple(kind(v) for v in row) for row in rows)
    n = len(rows)
    if n == 0 or any(len(row) != n for row in rows):
        raise InputEncodingError("matrix must be square and non-empty")
    return rows


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def _minor(a: Matrix, row: int, col: int) -> Matrix:
    return tuple(tuple(v for j, v in enumerate(r) if j != col) for i, r in enumerate(a) if i != row)


def determinant(a: Matrix) -> Fraction:
    """Cofactor expansion along the first row."""
    if len(a) == 1:
        return Fraction(a[0][0])
    return sum(
        (-1) ** j * Fraction(a[0][j]) * determinant(_minor(a, 0, j)) for j in range(len(a)) if a[0][j]
    ) or Fraction(0)


def inverse_adjugate(a: Matrix) -> Matrix:
    det = determinant(a)
    if det == 0:
        raise DomainError("matrix is singular")
    n = len(a)
    if n == 1:
        return ((1 / det,),)
    return tuple(
        tuple((-1) ** (i + j) * determinant(_minor(a, j, i)) / det for j in range(n)) for i in range(n)
    )


def inverse_gauss(a: Matrix) -> Matrix:
    n = len(a)
    m = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise DomainError("matrix is singular")
        m[col], m[pivot] = m[pivot], m[col]
        scale = m[col][col]
        m[col] = [v / scale for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [v - factor * w for v, w in zip(m[r], m[col])]
    return tuple(tuple(row[n:]) for row in m)


def rank(a: Matrix) -> int:
    m = [[Fraction(v) for v in row] for row in a]
    rows, cols, r = len(m), len(m[0]), 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(r + 1, rows):
            factor = m[i][c] / m[r][c]
            m[i] = [v - factor * w for v, w in zip(m[i], m[r])]
        r += 1
    return r


# -- tokens ---------------------------------------------------------------

def _token(v) -> str:
    return str(Fraction(v))


def _untoken(s) -> Fraction:
    try:
        return Fraction(s)
    except (TypeError, ValueError, ZeroDivisionError):
        raise InputEncodingError(f"not a rational number: {s!r}") from None


def _flatten(*ms: Matrix) -> tuple[str, ...]:
    return (str(len(ms[0])),) + tuple(_token(v) for m in ms for row in m for v in row)


def _unflatten(tokens: Sequence, count: int) -> list[list[list[Fraction]]]:
    tokens = list(tokens)
    if not tokens:
        raise InputEncodingError("empty matrix encoding")
    n = _untoken(tokens[0])
    if n.denominator != 1 or n < 1:
        raise InputEncodingError(f"bad dimension token {tokens[0]!r}")
    n = int(n)
    if len(tokens) != 1 + count * n * n:
        raise InputEncodingError(f"expected {1 + count * n * n} cells for n={n}, got {len(tokens)}")
    values = [_untoken(t) for t in tokens[1:]]
    return [[values[m * n * n + i * n: m * n * n + (i + 1) * n] for i in range(n)] for m in range(count)]


def _decode_cell(v):
    if v == "_":
        return Fraction(0)
    return v if isinstance(v, Fraction) else Fraction(v)


def _json_value(v):
    v = Fraction(v)
    return int(v) if v.denominator == 1 else str(v)


def format_matrix(m: Matrix) -> str:
    return json.dumps([[_json_value(v) for v in row] for row in m], separators=(",", ":"))


def parse_matrix(text, kind=Fraction) -> Matrix:
    rows = json.loads(text) if isinstance(text, str) else text
    try:
        return as_matrix(rows, kind)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputEncodingError(f"bad matrix {text!r}: {exc}") from None


# -- structured inputs ----------------------------------------------------

def _integral(m: Matrix, what: str) -> Matrix:
    if any(Fraction(v).denominator != 1 for row in m for v in row):
        raise InputEncodingError(f"{what} must have integer entries")
    return tuple(tuple(int(v) for v in row) for row in m)


@dataclass(frozen=True)
class MatrixPair:
    a: Matrix
    b: Matrix

    def __post_init__(self) -> None:
        a = _integral(as_matrix(self.a), "A")
        b = _integral(as_matrix(self.b), "B")
        if len(a) != len(b):
            raise InputEncodingError("A and B must have the same dimension")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


def _nonzero_pair(x: MatrixPair) -> MatrixPair:
    for name, m in (("A", x.a), ("B", x.b)):
        if all(v == 0 for row in m for v in row):
            raise DomainError(f"{name} must be a non-zero matrix")
    return x


def _bump(m: Matrix, ok: Callable[[Matrix], bool], kind=int) -> Matrix:
    """Change the top-left entry as little as possible while keeping ``ok``."""
    for delta in (1, 2, 3):
        first = (kind(m[0][0] + delta),) + tuple(m[0][1:])
        out = (first,) + tuple(m[1:])
        if ok(out):
            return out
    raise DomainError("no nearby partner input")


def _pair_encode(x: MatrixPair) -> tuple[str, ...]:
    return _flatten(x.a, x.b)


def _pair_decode(tokens) -> MatrixPair:
    a, b = _unflatten(tokens, 2)
    return MatrixPair(tuple(map(tuple, a)), tuple(map(tuple, b)))


def _pair_parse(text: str) -> MatrixPair:
    data = json.loads(text)
    if not isinstance(data, list) or len(data) != 2:
        raise InputEncodingError("expected a JSON list [A, B]")
    return MatrixPair(parse_matrix(data[0]), parse_matrix(data[1]))


def _pair_format(x: MatrixPair) -> str:
    return f"[{format_matrix(x.a)},{format_matrix(x.b)}]"


def _pair_partner(x: MatrixPair) -> MatrixPair:
    a = _bump(x.a, lambda m: any(v for row in m for v in row))
    return MatrixPair(a, x.b)


def p2_oracle(x: MatrixPair) -> str:
    x = _nonzero_pair(x)
    c = matmul(x.a, x.b)
    n = len(c)
    return "accept" if c[0][0] * c[0][n - 1] >= c[n - 1][n - 1] * c[n - 1][0] else "reject"


def p3_oracle(x: MatrixPair) -> str:
    return "accept" if matmul(x.a, x.b) == identity(len(x.a)) else "reject"


def _invertible(m: Matrix) -> bool:
    return rank(m) == len(m)


def _p5_input(m) -> Matrix:
    m = as_matrix(m)
    if not _invertible(m):
        raise DomainError("A must be invertible")
    return m


def _p6_input(m) -> Matrix:
    m = _integral(as_matrix(m), "Q")
    if any(v < 0 for row in m for v in row):
        raise InputEncodingError("Q must have natural-number entries")
    if not _invertible(m):
        raise DomainError("Q must have full rank")
    return m


def p5_oracle(a: Matrix) -> Matrix:
    a = _p5_input(a)
    return inverse_adjugate(a) if len(a) <= 4 else inverse_gauss(a)


def p6_oracle(q: Matrix) -> Matrix:
    """The double inverse of a full-rank matrix is the matrix itself."""
    return _p6_input(q)


# -- scanner programs -----------------------------------------------------

class _Emitter:
    """Thin wrapper over :class:`Program` with counted loops."""

    def __init__(self, name: str):
        self.p = Program(
            name, n=0, i=0, j=0, k=0, col=0, row=0, x=0, y=0, f=0, piv=0, acc=0, ok=True, flags=()
        )
        self._labels = 0

    def fresh(self, hint: str) -> str:
        self._labels += 1
        return f"{hint}.{self._labels}"

    def loop(self, var: str, body: Callable[[str], None], upto: Callable = lambda r: r.n) -> None:
        """``for var in range(upto(r))``; ``body`` gets a continue label."""
        p, tag = self.p, self.fresh(var)
        p.set(**{var: lambda r: 0})
        p.label(tag)
        p.branch(lambda r: getattr(r, var) >= upto(r), tag + ".end")
        body(tag + ".next")
        p.label(tag + ".next")
        p.set(**{var: lambda r: getattr(r, var) + 1})
        p.jump(tag)
        p.label(tag + ".end")

    def load(self, address: Callable, reg: str) -> None:
        self.p.seek(address)
        self.p.read(lambda r, v: r._replace(**{reg: v}))

    def store(self, address: Callable, value: Callable) -> None:
        self.p.seek(address)
        self.p.write(value)

    def read_dimension(self) -> None:
        self.p.seek(lambda r: 0)
        self.p.read(lambda r, v: r._replace(n=int(v)))

    def multiply(self, a: Callable, b: Callable, c: Callable) -> None:
        """``C = A B`` with all three given by address functions ``(r, i, j)``."""
        p = self.p

        def inner(_):
            self.load(lambda r: a(r, r.i, r.k), "x")
            p.seek(lambda r: b(r, r.k, r.j))
            p.read(lambda r, v: r._replace(acc=r.acc + r.x * v))

        def entry(_):
            p.set(acc=lambda r: 0)
            self.loop("k", inner)
            self.store(lambda r: c(r, r.i, r.j), lambda r: r.acc)

        self.loop("i", lambda _: self.loop("j", entry))

    def invert(self, source: Callable, base: Callable, fail: str) -> None:
        """Gauss-Jordan on ``[source | I]`` stored row-major (width 2n) at ``base``."""
        p = self.p
        at = lambda r, i, j: base(r) + i * 2 * r.n + j  # noqa: E731
        width = lambda r: 2 * r.n  # noqa: E731

        def copy(_):
            self.load(lambda r: source(r, r.i, r.j), "x")
            self.store(lambda r: at(r, r.i, r.j), lambda r: r.x)
            self.store(lambda r: at(r, r.i, r.n + r.j), lambda r: Fraction(int(r.i == r.j)))

        self.loop("i", lambda _: self.loop("j", copy))

        def swap(_):
            self.load(lambda r: at(r, r.col, r.j), "x")
            self.load(lambda r: at(r, r.row, r.j), "y")
            p.write(lambda r: r.x)
            self.store(lambda r: at(r, r.col, r.j), lambda r: r.y)

        def normalize(_):
            self.load(lambda r: at(r, r.col, r.j), "x")
            p.write(lambda r: r.x / r.piv)

        def reduce(_):
            self.load(lambda r: at(r, r.col, r.j), "x")
            self.load(lambda r: at(r, r.row, r.j), "y")
            p.write(lambda r: r.y - r.f * r.x)

        def eliminate(skip):
            p.branch(lambda r: r.row == r.col, skip)
            self.load(lambda r: at(r, r.row, r.col), "f")
            p.branch(lambda r: r.f == 0, skip)
            self.loop("j", reduce, width)

        def column(_):
            search, found, placed = self.fresh("search"), self.fresh("found"), self.fresh("placed")
            p.set(row=lambda r: r.col)
            p.label(search)
            p.branch(lambda r: r.row >= r.n, fail)
            self.load(lambda r: at(r, r.row, r.col), "x")
            p.branch(lambda r: r.x != 0, found)
            p.set(row=lambda r: r.row + 1)
            p.jump(search)
            p.label(found)
            p.branch(lambda r: r.row == r.col, placed)
            self.loop("j", swap, width)
            p.label(placed)
            self.load(lambda r: at(r, r.col, r.col), "piv")
            self.loop("j", normalize, width)
            self.loop("row", eliminate)

        self.loop("col", column)


def _a_addr(r, i, j):
    return 1 + i * r.n + j


def _b_addr(r, i, j):
    return 1 + r.n * r.n + i * r.n + j


def _c_addr(r, i, j):
    return 1 + 2 * r.n * r.n + i * r.n + j


def _repeated_flag(name: str, passes: int, flag: Callable[[_Emitter], None]):
    """Compute ``C = AB`` and a flag ``passes`` times; agree or start over."""
    e = _Emitter(name)
    p = e.p
    p.label("restart")
    p.set(flags=lambda r: ())
    p.label("pass")
    e.read_dimension()
    e.multiply(_a_addr, _b_addr, _c_addr)
    flag(e)
    p.set(flags=lambda r: r.flags + (r.ok,))
    p.branch(lambda r: len(r.flags) < passes, "pass")
    p.branch(lambda r: all(r.flags), "accept")
    p.branch(lambda r: any(r.flags), "restart")
    p.halt("reject")
    p.label("accept")
    p.halt("accept")
    return p.build(decode=_decode_cell, check_input=_pair_decode)


def _corner_flag(e: _Emitter) -> None:
    last = lambda r: r.n - 1  # noqa: E731
    e.load(lambda r: _c_addr(r, 0, 0), "x")
    e.load(lambda r: _c_addr(r, 0, last(r)), "y")
    e.load(lambda r: _c_addr(r, last(r), last(r)), "f")
    e.load(lambda r: _c_addr(r, last(r), 0), "acc")
    e.p.set(ok=lambda r: r.x * r.y >= r.f * r.acc)


def _identity_flag(e: _Emitter) -> None:
    e.p.set(ok=lambda r: True)

    def check(_):
        e.load(lambda r: _c_addr(r, r.i, r.j), "x")
        e.p.set(ok=lambda r: r.ok and r.x == (r.i == r.j))

    e.loop("i", lambda _: e.loop("j", check))


def _m1(r) -> int:
    return 1 + r.n * r.n


def _m2(r) -> int:
    return _m1(r) + 2 * r.n * r.n


def _right_half(base: Callable):
    return lambda r, i, j: base(r) + i * 2 * r.n + r.n + j


def _p5_program():
    e = _Emitter("invert")
    p = e.p
    p.label("restart")
    e.read_dimension()
    e.invert(_a_addr, _m1, "restart")

    def check(_):
        p.set(acc=lambda r: 0)

        def term(_):
            e.load(lambda r: _a_addr(r, r.i, r.k), "x")
            p.seek(lambda r: _right_half(_m1)(r, r.k, r.j))
            p.read(lambda r, v: r._replace(acc=r.acc + r.x * v))

        e.loop("k", term)
        p.branch(lambda r: r.acc != (r.i == r.j), "restart")

    e.loop("i", lambda _: e.loop("j", check))
    p.halt("halt")
    return p.build(decode=_decode_cell, check_input=_p5_decode)


def _p6_program():
    e = _Emitter("double_invert")
    p = e.p
    p.label("restart")
    e.read_dimension()
    e.invert(_a_addr, _m1, "restart")
    e.invert(_right_half(_m1), _m2, "restart")

    def compare(_):
        e.load(lambda r: _right_half(_m2)(r, r.i, r.j), "x")
        e.load(lambda r: _a_addr(r, r.i, r.j), "y")
        p.branch(lambda r: r.x != r.y, "restart")

    e.loop("i", lambda _: e.loop("j", compare))
    p.halt("halt")
    return p.build(decode=_decode_cell, check_input=_p6_decode)


def _reader(base: Callable[[int], int]):
    def read(cfg: Configuration, region_start: int, width: int) -> Matrix:
        n = int(Fraction(cfg.read(region_start)))
        origin = region_start + base(n)
        return tuple(
            tuple(_decode_cell(cfg.read(origin + i * 2 * n + n + j)) for j in range(n)) for i in range(n)
        )

    return read


def _p5_decode(tokens) -> Matrix:
    (a,) = _unflatten(tokens, 1)
    return _p5_input(a)


def _p6_decode(tokens) -> Matrix:
    (q,) = _unflatten(tokens, 1)
    return _p6_input(q)


def build_p2() -> ProblemInstance:
    return ProblemInstance(
        id="p2",
        variant="scanner",
        kind=DECISION,
        machine=_repeated_flag("corners", 4, _corner_flag),
        encode=lambda x: _pair_encode(_nonzero_pair(x)),
        decode=lambda t: _nonzero_pair(_pair_decode(t)),
        oracle=p2_oracle,
        parse=lambda text: _nonzero_pair(_pair_parse(text)),
        format=_pair_format,
        partner=_pair_partner,
        repeats=lambda x: 4,
    )


def build_p3() -> ProblemInstance:
    return ProblemInstance(
        id="p3",
        variant="scanner",
        kind=DECISION,
        machine=_repeated_flag("product_is_identity", 3, _identity_flag),
        encode=_pair_encode,
        decode=_pair_decode,
        oracle=p3_oracle,
        parse=_pair_parse,
        format=_pair_format,
        partner=lambda x: MatrixPair(_bump(x.a, lambda m: True), x.b),
        repeats=lambda x: 3,
    )


def build_p5() -> ProblemInstance:
    return ProblemInstance(
        id="p5",
        variant="scanner",
        kind=FUNCTION,
        machine=_p5_program(),
        encode=lambda a: _flatten(_p5_input(a)),
        decode=_p5_decode,
        oracle=p5_oracle,
        parse=lambda text: _p5_input(parse_matrix(text)),
        format=format_matrix,
        partner=lambda a: _bump(_p5_input(a), _invertible, Fraction),
        repeats=lambda x: 1,
        read_output=_reader(lambda n: 1 + n * n),
    )


def build_p6() -> ProblemInstance:
    return ProblemInstance(
        id="p6",
        variant="scanner",
        kind=FUNCTION,
        machine=_p6_program(),
        encode=lambda q: _flatten(_p6_input(q)),
        decode=_p6_decode,
        oracle=p6_oracle,
        parse=lambda text: _p6_input(parse_matrix(text)),
        format=format_matrix,
        partner=lambda q: _bump(_p6_input(q), _invertible),
        repeats=lambda x: 1,
        read_output=_reader(lambda n: 1 + 3 * n * n),
    )
