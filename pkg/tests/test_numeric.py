from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chebytower.numeric import (
    as_integer,
    binomial,
    ceil_log2,
    epsilon,
    format_rational,
    is_exact,
    parse_int,
    parse_rational,
    pow2,
)


def test_binomial_is_total_in_k():
    assert binomial(6, 3) == 20
    assert binomial(6, -1) == 0
    assert binomial(6, 7) == 0
    with pytest.raises(ValueError):
        binomial(-1, 0)


@pytest.mark.parametrize("k, expected", [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (16, 4), (17, 5)])
def test_ceil_log2(k, expected):
    assert ceil_log2(k) == expected


def test_pow2_and_epsilon():
    assert pow2(0) == 1
    assert pow2(80) == 1 << 80
    with pytest.raises(ValueError):
        pow2(-1)
    assert [epsilon(k) for k in range(5)] == [1, 0, 1, 0, 1]


def test_format_rational_keeps_unit_denominator():
    assert format_rational(Fraction(-1)) == "-1/1"
    assert format_rational(Fraction(-1, 560)) == "-1/560"
    assert format_rational(Fraction(2, 4)) == "1/2"


def test_parse_rejects_malformed_text():
    with pytest.raises(ValueError):
        parse_int("1e5")
    with pytest.raises(ValueError):
        parse_rational("1/0")
    assert parse_rational("7") == 7
    with pytest.raises(ValueError):
        parse_rational(-1)
    with pytest.raises(ValueError):
        parse_int(None)


def test_as_integer():
    assert as_integer(Fraction(12, 3)) == 4
    with pytest.raises(ArithmeticError):
        as_integer(Fraction(1, 3))


def test_is_exact():
    assert is_exact(3)
    assert is_exact(Fraction(1, 3))
    assert not is_exact(0.5)
    assert not is_exact(True)


@given(st.fractions())
def test_rational_text_is_lossless(value):
    assert parse_rational(format_rational(value)) == value


@given(st.integers(min_value=0, max_value=60), st.integers(min_value=0, max_value=60))
def test_binomial_pascal_rule(n, k):
    assert binomial(n + 1, k + 1) == binomial(n, k) + binomial(n, k + 1)


def test_binomial_published_values():
    assert binomial(4, 2) == 6
    assert binomial(16, 1) == 16
    assert pow2(12) == 4096
