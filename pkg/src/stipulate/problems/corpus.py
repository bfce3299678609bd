"""The shipped test corpus: fixed cases plus seeded random matrices."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from . import get_problem
from .binary_sum import decode as decode_sum
from .matrices import MatrixPair, identity, rank
from .ones import CountInput

DEFAULT_SEED = 20240601

# Members of the even-sum set used as the running example, plus the worked input.
EVEN_SUMS = ("110+101010", "1100+100", "1010+110", "100+10", "1101110+10")
WORKED_INPUT = "1100+10110"

# Equal-length inputs (10 cells) for grids; consecutive entries all differ.
GRID_INPUTS = ("110+101010", "1101110+10", "1100+10110", "1010+10100")


@dataclass(frozen=True)
class Case:
    problem: str
    input: Any
    label: str = ""

    @property
    def instance(self):
        return get_problem(self.problem)


def random_matrix(rng: random.Random, n: int, lo: int, hi: int, ok=lambda m: True):
    while True:
        m = tuple(tuple(rng.randint(lo, hi) for _ in range(n)) for _ in range(n))
        if ok(m):
            return m


def _full_rank(m) -> bool:
    return rank(m) == len(m)


def corpus(seed: int = DEFAULT_SEED) -> list[Case]:
    rng = random.Random(seed)
    cases = []
    for s in EVEN_SUMS + (WORKED_INPUT, "101+10", "111+1010"):
        cases.append(Case("pr", decode_sum(s), s))
    for s in ("110+101010", WORKED_INPUT, "101+10"):
        cases.append(Case("pr-scanner", decode_sum(s), s))

    true8, false8 = (True,) * 8, (False,) * 8
    rejecting = (False, True, True, True, True, True, False, False)
    for name, x in (("all-true", true8), ("clause-2-false", rejecting), ("all-false", false8)):
        cases.append(Case("p1", x, name))

    i2 = identity(2)
    r3 = (random_matrix(rng, 3, -3, 3, lambda m: any(any(r) for r in m)),
          random_matrix(rng, 3, -3, 3, lambda m: any(any(r) for r in m)))
    cases += [
        Case("p2", MatrixPair(i2, i2), "identity"),
        Case("p2", MatrixPair(((1, 2), (3, 4)), ((5, 6), (7, 8))), "2x2 reject"),
        Case("p2", MatrixPair(*r3), f"seeded 3x3 ({seed})"),
        Case("p3", MatrixPair(i2, i2), "identity"),
        Case("p3", MatrixPair(((1, 1), (0, 1)), ((1, -1), (0, 1))), "shear inverse"),
        Case("p3", MatrixPair(((2, 0), (0, 2)), i2), "scaled identity"),
    ]

    for variant in ("p4", "p4-scanner"):
        for u, k in (("1011", 2), ("0000", 3), ("1", 1)):
            cases.append(Case(variant, CountInput(u, k), f"u={u} K={k}"))

    half = random_matrix(rng, 3, -4, 4, _full_rank)
    a3 = tuple(tuple(Fraction(v, 2) for v in row) for row in half)
    cases += [
        Case("p5", identity(2), "identity"),
        Case("p5", ((2, 1), (1, 1)), "unimodular"),
        Case("p5", ((1, 2), (3, 4)), "2x2"),
        Case("p5", a3, f"seeded 3x3 halves ({seed})"),
        Case("p6", identity(2), "identity"),
        Case("p6", ((1, 2), (3, 4)), "2x2"),
        Case("p6", random_matrix(rng, 3, 0, 5, _full_rank), f"seeded 3x3 naturals ({seed})"),
    ]
    return cases
