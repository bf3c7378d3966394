"""Exact rational arithmetic and binomial coefficients.

Every quantity in the recursions is an exact rational. ``Rational`` is the
standard library's :class:`fractions.Fraction`, which already keeps values in
lowest terms with a positive denominator.
"""
from __future__ import annotations

import math
from fractions import Fraction

Rational = Fraction


class IntegralityError(ArithmeticError):
    """A value expected to be an integer carried a nontrivial denominator."""


def binomial(m: int, k: int) -> int:
    """Return C(m, k), or 0 when k lies outside 0..m."""
    if m < 0:
        raise ValueError(f"binomial: m must be nonnegative, got {m}")
    if k < 0 or k > m:
        return 0
    return math.comb(m, k)


def normalize(x: int | Fraction) -> Fraction:
    return Fraction(x)


def as_integer(x: int | Fraction, what: str = "value") -> int:
    """Return ``x`` as an int, raising :class:`IntegralityError` otherwise.

    Used at module boundaries: intermediate sums divide by d and d**2 and
    only the final invariants are guaranteed integral.
    """
    if isinstance(x, int):
        return x
    x = Fraction(x)
    if x.denominator != 1:
        raise IntegralityError(f"{what} is not an integer: {x}")
    return x.numerator


def exact_div(a: int, b: int, what: str = "quotient") -> int:
    q, r = divmod(a, b)
    if r:
        raise IntegralityError(f"{what}: {a} is not divisible by {b}")
    return q
