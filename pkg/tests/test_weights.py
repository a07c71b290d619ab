"""Exact radical-weight arithmetic."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from advwb.weights import (
    ONE,
    ZERO,
    ExactWeight,
    MixedRadicandError,
    exact_sum,
    squarefree_split,
)

rationals = st.fractions(
    min_value=Fraction(-50), max_value=Fraction(50), max_denominator=30
)
positive_rationals = st.fractions(
    min_value=Fraction(1, 30), max_value=Fraction(50), max_denominator=30
)
radicands = st.sampled_from([1, 2, 3, 5, 6, 7, 10, 13, 39])


def w(p, q=1, u=1):
    return ExactWeight(p, q, u)


def test_canonical_form():
    assert w(4, 8) == w(1, 2)
    assert str(w(4, 8)) == "1/2"
    assert str(w(3)) == "3"
    assert str(w(1, 2, 39)) == "1/2*sqrt(39)"
    assert str(w(1, 1, 2)) == "sqrt(2)"
    assert str(ZERO) == "0"


def test_radicand_squarefree_reduction():
    # sqrt(8) = 2 sqrt(2); the constructor normalizes through Fraction input
    assert ExactWeight.sqrt_of(Fraction(8)) == w(2, 1, 2)
    assert ExactWeight.sqrt_of(Fraction(9, 4)) == w(3, 2)
    assert ExactWeight.sqrt_of(Fraction(9, 2)) == w(3, 2, 2)
    assert squarefree_split(72) == (6, 2)
    assert squarefree_split(1) == (1, 1)


def test_multiplication_merges_radicands():
    assert w(1, 1, 2) * w(1, 1, 2) == w(2)
    assert w(1, 1, 2) * w(1, 1, 3) == w(1, 1, 6)
    assert w(2, 3, 2) * w(3, 4, 6) == w(1, 1, 3)
    assert w(5, 2) * ZERO == ZERO


def test_division_and_pow():
    assert w(3, 2, 2) / w(1, 1, 2) == w(3, 2)
    assert (w(5, 2) ** 5) == w(3125, 32)
    assert (w(1, 1, 2) ** 2) == w(2)
    with pytest.raises(ZeroDivisionError):
        w(1) / ZERO


def test_addition_same_radicand_only():
    assert w(1, 3, 2) + w(2, 3, 2) == w(1, 1, 2)
    assert w(1, 2) + w(1, 2) == ONE
    assert ZERO + w(7, 1, 5) == w(7, 1, 5)
    with pytest.raises(MixedRadicandError):
        w(1, 1, 2) + w(1, 1, 3)


def test_comparison_crosses_radicands():
    # sqrt(2) < 3/2 < sqrt(3), decided by squaring, not floats
    assert w(1, 1, 2) < w(3, 2) < w(1, 1, 3)
    assert w(2, 39, 39) == ExactWeight.sqrt_of(Fraction(4, 39))
    assert not w(5, 2) < w(5, 2)
    assert w(5, 2) <= w(5, 2)


def test_parse_round_trip():
    for s in ["0", "3", "5/2", "1/2*sqrt(39)", "sqrt(2)", "100000/243"]:
        assert str(ExactWeight.parse(s)) == s
    with pytest.raises(ValueError):
        ExactWeight.parse("banana")
    with pytest.raises(ValueError):
        ExactWeight.parse("1/0")


def test_squared_and_rational():
    assert w(3, 2, 2).squared() == Fraction(9, 2)
    assert w(5, 3).rational == Fraction(5, 3)
    with pytest.raises(MixedRadicandError):
        _ = w(1, 1, 2).rational


def test_decimal_places():
    assert w(5, 2).decimal(6) == "2.500000"
    assert w(1, 2, 39).decimal(6) == "3.122499"


@given(positive_rationals, positive_rationals, radicands)
def test_mul_div_round_trip(a, b, u):
    x = ExactWeight(a.numerator, a.denominator, u)
    y = ExactWeight(b.numerator, b.denominator)
    assert (x * y) / y == x
    assert (x / y) * y == x


@given(positive_rationals, positive_rationals, radicands, radicands)
def test_order_matches_floats(a, b, u1, u2):
    x = ExactWeight(a.numerator, a.denominator, u1)
    y = ExactWeight(b.numerator, b.denominator, u2)
    fx, fy = float(x), float(y)
    if abs(fx - fy) > 1e-9:
        assert (x < y) == (fx < fy)


@given(positive_rationals, radicands)
def test_sqrt_of_squared_is_identity(a, u):
    x = ExactWeight(a.numerator, a.denominator, u)
    assert ExactWeight.sqrt_of(x.squared()) == x


@given(st.lists(st.tuples(positive_rationals, radicands), min_size=1, max_size=12))
def test_exact_sum_matches_float_sum(items):
    vals = [ExactWeight(a.numerator, a.denominator, u) for a, u in items]
    total = exact_sum(vals)
    assert abs(float(total) - sum(float(v) for v in vals)) < 1e-9


def test_exact_sum_counts_duplicates_exactly():
    vals = [w(2, 3)] * 1000 + [w(1, 3)] * 500
    assert exact_sum(vals) == w(2500, 3)
    mixed = [w(1, 1, 2)] * 4 + [w(1, 1, 3)] * 9
    total = exact_sum(mixed)
    assert isinstance(total, float)
    assert abs(total - (4 * 2**0.5 + 9 * 3**0.5)) < 1e-9


def test_zero_and_one_constants():
    assert ZERO.is_zero and not ONE.is_zero
    assert ONE * w(7, 3, 5) == w(7, 3, 5)
