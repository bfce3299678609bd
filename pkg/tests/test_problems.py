from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stipulate.errors import ConfigError, DomainError, InputEncodingError
from stipulate.problems import BUILDERS, get_problem
from stipulate.problems.binary_sum import BinarySum
from stipulate.problems.corpus import EVEN_SUMS, WORKED_INPUT, corpus
from stipulate.problems.matrices import (
    MatrixPair,
    as_matrix,
    determinant,
    format_matrix,
    inverse_adjugate,
    inverse_gauss,
    parse_matrix,
    rank,
)
from stipulate.problems.ones import CountInput
from stipulate.problems.sat import CLAUSES, VARIABLES, all_assignments, formula


def mul(a, b):
    """Test-local product, written out with explicit index loops."""
    n = len(a)
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                out[i][j] += Fraction(a[i][k]) * Fraction(b[k][j])
    return out


def eye(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def rows(m):
    return [[Fraction(v) for v in row] for row in m]


# -- binary sums ------------------------------------------------------------


@pytest.mark.parametrize("text", EVEN_SUMS + (WORKED_INPUT,))
def test_listed_sums_are_even_and_accepted(text):
    lhs, rhs = text.split("+")
    assert (int(lhs, 2) + int(rhs, 2)) % 2 == 0
    pr = get_problem("pr")
    assert pr.bare_answer(pr.parse(text)) == "accept"


def test_worked_sum():
    x = get_problem("pr").parse("1100+10110")
    assert x.total == 12 + 22 == 34


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 200), st.integers(0, 200))
def test_binary_sum_machine_decides_parity(a, b):
    pr = get_problem("pr")
    x = BinarySum(format(a, "b"), format(b, "b"))
    assert pr.bare_answer(x) == ("accept" if (a + b) % 2 == 0 else "reject")


@pytest.mark.parametrize("bad", ["110", "1+1+1", "12+1", "+1"])
def test_binary_sum_encoding_errors(bad):
    with pytest.raises(InputEncodingError):
        get_problem("pr").parse(bad)


# -- satisfiability -------------------------------------------------------------


def test_formula_has_the_three_listed_clauses():
    assert CLAUSES == (((1, True), (5, False), (7, True)), ((2, False), (4, False), (8, True)), ((2, False), (3, False), (6, True)))
    assert VARIABLES == 8


def test_satisfiability_examples():
    p1 = get_problem("p1")
    T, F = True, False
    assert p1.bare_answer((T,) * 8) == "accept"
    assert p1.bare_answer((F, T, T, T, T, T, F, F)) == "reject"
    assert p1.bare_answer((F,) * 8) == "accept"


def test_every_assignment_matches_both_evaluators():
    p1 = get_problem("p1")
    assert len(all_assignments()) == 256
    for x in product((False, True), repeat=8):
        expected = "accept" if formula(x) else "reject"
        assert p1.oracle(x) == expected
        assert p1.bare_answer(x) == expected


def test_assignment_encoding():
    p1 = get_problem("p1")
    x = (True, False) * 4
    assert p1.encode(x) == "TFTFTFTF"
    assert p1.decode("TFTFTFTF") == x
    with pytest.raises(InputEncodingError):
        p1.decode("TFT")
    with pytest.raises(InputEncodingError):
        p1.encode((1,) * 8)


# -- matrix products ------------------------------------------------------------


def test_identity_product_corner_check_accepts():
    p2 = get_problem("p2")
    x = MatrixPair(((1, 0), (0, 1)), ((1, 0), (0, 1)))
    assert p2.oracle(x) == p2.bare_answer(x) == "accept"


def test_corner_check_rejects_example():
    p2 = get_problem("p2")
    x = MatrixPair(((1, 2), (3, 4)), ((5, 6), (7, 8)))
    c = mul(x.a, x.b)
    assert c == [[19, 22], [43, 50]]
    assert 19 * 22 < 50 * 43
    assert p2.oracle(x) == p2.bare_answer(x) == "reject"


def test_corner_check_requires_nonzero_matrices():
    with pytest.raises(DomainError):
        get_problem("p2").oracle(MatrixPair(((0, 0), (0, 0)), ((1, 0), (0, 1))))


@pytest.mark.parametrize(
    "a, b, verdict",
    [
        (((1, 0), (0, 1)), ((1, 0), (0, 1)), "accept"),
        (((1, 1), (0, 1)), ((1, -1), (0, 1)), "accept"),
        (((2, 0), (0, 2)), ((1, 0), (0, 1)), "reject"),
    ],
)
def test_identity_product_examples(a, b, verdict):
    p3 = get_problem("p3")
    x = MatrixPair(a, b)
    assert p3.oracle(x) == p3.bare_answer(x) == verdict


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 3), st.randoms(use_true_random=False))
def test_matrix_decisions_match_direct_products(n, rng):
    a = tuple(tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n))
    b = tuple(tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n))
    x = MatrixPair(a, b)
    c = mul(a, b)
    assert get_problem("p3").bare_answer(x) == ("accept" if c == eye(n) else "reject")
    if any(any(r) for r in a) and any(any(r) for r in b):
        corner = c[0][0] * c[0][n - 1] >= c[n - 1][n - 1] * c[n - 1][0]
        assert get_problem("p2").bare_answer(x) == ("accept" if corner else "reject")


def test_pairs_must_be_integral_and_square_alike():
    with pytest.raises(InputEncodingError):
        MatrixPair(((Fraction(1, 2),),), ((1,),))
    with pytest.raises(InputEncodingError):
        MatrixPair(((1,),), ((1, 0), (0, 1)))


# -- counting ones ------------------------------------------------------------


@pytest.mark.parametrize("u, k, count", [("1011", 2, 3), ("0000", 3, 0), ("1", 1, 1)])
def test_count_examples(u, k, count):
    for name in ("p4", "p4-scanner"):
        p = get_problem(name)
        assert p.oracle(CountInput(u, k)) == p.bare_answer(CountInput(u, k)) == count


@pytest.mark.parametrize("bad", ["1011", "10#", "1#11#1", "12#1", "#11", "10#101"])
def test_count_encoding_errors(bad):
    with pytest.raises(InputEncodingError):
        get_problem("p4").parse(bad)


# -- inverses -------------------------------------------------------------------


@pytest.mark.parametrize(
    "a, inv",
    [
        ([[1, 0], [0, 1]], [[1, 0], [0, 1]]),
        ([[2, 1], [1, 1]], [[1, -1], [-1, 2]]),
        ([[1, 2], [3, 4]], [[-2, 1], [Fraction(3, 2), Fraction(-1, 2)]]),
    ],
)
def test_inverse_examples(a, inv):
    p5 = get_problem("p5")
    assert rows(p5.oracle(a)) == rows(inv) == rows(p5.bare_answer(a))
    assert mul(a, inv) == eye(2)


def test_singular_matrix_has_no_inverse():
    with pytest.raises(DomainError):
        get_problem("p5").oracle([[1, 2], [2, 4]])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.randoms(use_true_random=False))
def test_adjugate_and_elimination_agree(n, rng):
    m = as_matrix([[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)])
    if rank(m) < n:
        assert determinant(m) == 0
        return
    assert determinant(m) != 0
    inv = inverse_gauss(m)
    if n <= 4:
        assert inverse_adjugate(m) == inv
    assert mul(m, inv) == eye(n)


def test_double_inverse_examples():
    p6 = get_problem("p6")
    for q in ([[1, 0], [0, 1]], [[1, 2], [3, 4]]):
        assert rows(p6.bare_answer(q)) == rows(q) == rows(p6.oracle(q))


def test_double_inverse_of_seeded_three_by_three():
    rng = random.Random(7)
    while True:
        q = [[rng.randint(0, 9) for _ in range(3)] for _ in range(3)]
        if rank(as_matrix(q)) == 3:
            break
    p6 = get_problem("p6")
    assert rows(p6.bare_answer(q)) == rows(q)


def test_double_inverse_domain():
    p6 = get_problem("p6")
    with pytest.raises(InputEncodingError):
        p6.parse("[[-1,0],[0,1]]")
    with pytest.raises(DomainError):
        p6.parse("[[1,1],[1,1]]")


def test_matrix_text_round_trip():
    m = as_matrix([[1, Fraction(-3, 2)], [0, 4]])
    assert parse_matrix(format_matrix(m)) == m
    assert format_matrix(m) == '[[1,"-3/2"],[0,4]]'


# -- registry, corpus, partners ---------------------------------------------------


def test_registry():
    assert set(BUILDERS) == {"pr", "pr-scanner", "p1", "p2", "p3", "p4", "p4-scanner", "p5", "p6"}
    for name in BUILDERS:
        assert get_problem(name).name == name
    with pytest.raises(ConfigError):
        get_problem("p7")


@pytest.mark.parametrize("case", corpus(), ids=lambda c: f"{c.problem}-{c.label}")
def test_corpus_case_round_trips_and_answers(case):
    p = case.instance
    x = case.input
    tokens = p.encode(x)
    assert p.encode(p.decode(tokens)) == tokens
    assert p.encode(p.parse(p.format(x))) == tokens
    result = p.run(x)
    assert result.outcome.halted and result.outcome.restarts == 0
    answer = p.answer(result.outcome, result.configuration, len(tokens))
    expected = p.oracle(x)
    if isinstance(expected, tuple):
        assert rows(answer) == rows(expected)
    else:
        assert answer == expected
    partner = p.partner(x)
    assert len(p.encode(partner)) == len(tokens) and p.encode(partner) != tokens


@pytest.mark.parametrize("name", ["pr", "p1", "p4", "p5"])
def test_rewrites_occur_below_bare_time(name):
    p = get_problem(name)
    x = next(c.input for c in corpus() if c.problem == name)
    N = p.run(x).outcome.steps
    rec = p.run_stipulated([x, p.partner(x)], max(1, N // 2), budget=4 * N)
    assert rec.rewrite_count > 0
    above = p.run_stipulated([x, p.partner(x)], N + 1, budget=4 * N)
    assert above.rewrite_count == 0 and above.outcome.halted


@settings(max_examples=50, deadline=None)
@given(st.text(alphabet="01", min_size=1, max_size=8), st.text(alphabet="01", min_size=1, max_size=8))
def test_binary_sum_encoding_round_trip(lhs, rhs):
    pr = get_problem("pr")
    x = BinarySum(lhs, rhs)
    assert pr.decode(pr.encode(x)) == x
    assert len(pr.encode(pr.partner(x))) == len(pr.encode(x))


@settings(max_examples=50, deadline=None)
@given(st.text(alphabet="01", min_size=1, max_size=8), st.integers(1, 6))
def test_count_encoding_round_trip(u, k):
    p4 = get_problem("p4")
    x = CountInput(u, k)
    assert p4.decode(p4.encode(x)) == x
    assert p4.repeats(x) == k
