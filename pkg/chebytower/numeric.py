"""
Exact arithmetic primitives shared by every other module.

Integers are Python ints (arbitrary precision) and rationals are
``fractions.Fraction``, which normalizes on construction: the denominator
is positive and coprime to the numerator, so equality between results of
independent algorithms is plain ``==``.
"""

import math
from fractions import Fraction
from typing import Union

BigInt = int
BigRational = Fraction
Exact = Union[int, Fraction]


def binomial(n: int, k: int) -> int:
    """
    C(n, k), total on k: returns 0 when k < 0 or k > n.

    Raises:
        ValueError: if n is negative
    """
    if n < 0:
        raise ValueError(f"binomial requires n >= 0, got n={n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def pow2(e: int) -> int:
    """2**e for e >= 0."""
    if e < 0:
        raise ValueError(f"pow2 requires e >= 0, got e={e}")
    return 1 << e


def epsilon(k: int) -> int:
    """Parity indicator: 1 if k is even, 0 if odd."""
    return 1 if k % 2 == 0 else 0


def ceil_log2(k: int) -> int:
    """Smallest e with k <= 2**e, for k >= 1."""
    if k < 1:
        raise ValueError(f"ceil_log2 requires k >= 1, got k={k}")
    return (k - 1).bit_length()


def is_exact(value) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def as_integer(value: Exact, what: str = "value") -> int:
    """
    Return value as an int, raising ArithmeticError if it has a denominator.
    """
    value = Fraction(value)
    if value.denominator != 1:
        raise ArithmeticError(f"{what} is not an integer: {format_rational(value)}")
    return value.numerator


def format_int(value: int) -> str:
    return str(int(value))


def format_rational(value: Exact) -> str:
    """Render as "numerator/denominator", e.g. "-1/560" or "-1/1"."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_int(text: str) -> int:
    if not isinstance(text, str):
        raise ValueError(f"expected a decimal string, got {type(text).__name__}")
    text = text.strip()
    if not text or not text.lstrip("+-").isdigit():
        raise ValueError(f"not a decimal integer: {text!r}")
    return int(text)


def parse_rational(text: str) -> Fraction:
    """Inverse of format_rational; a bare integer is accepted too."""
    if not isinstance(text, str):
        raise ValueError(f"expected a p/q string, got {type(text).__name__}")
    numerator, sep, denominator = text.strip().partition("/")
    if not sep:
        return Fraction(parse_int(numerator))
    den = parse_int(denominator)
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(parse_int(numerator), den)
