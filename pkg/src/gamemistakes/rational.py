"""Exact rational numbers.

Every solver path works on :data:`Rational`, an immutable arbitrary-precision
fraction kept in lowest terms with a positive denominator.  Values are backed
by GMP through :mod:`gmpy2`, which keeps pivoting on dense tableaux fast.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC

import gmpy2

Rational = type(gmpy2.mpq())
ZERO = gmpy2.mpq(0)
ONE = gmpy2.mpq(1)


def from_decimal_string(text: str) -> Rational:
    """Parse a fraction (``"p/q"``) or finite decimal (``"-0.25"``) exactly."""
    if not isinstance(text, str):
        raise TypeError(f"expected str, got {type(text).__name__}")
    try:
        value = Fraction(text.strip())
    except ZeroDivisionError as exc:
        raise ValueError(f"zero denominator in {text!r}") from exc
    except ValueError as exc:
        raise ValueError(f"malformed rational literal {text!r}") from exc
    return gmpy2.mpq(value.numerator, value.denominator)


def as_rational(value) -> Rational:
    """Convert ints, fractions, floats (exactly) or literals to a Rational."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, str):
        return from_decimal_string(value)
    if isinstance(value, bool):
        raise TypeError("booleans are not payoffs")
    if isinstance(value, (int, _RationalABC)):
        return gmpy2.mpq(value.numerator, value.denominator)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite value {value!r}")
        # exact dyadic conversion, no rounding
        return gmpy2.mpq(value)
    raise TypeError(f"cannot convert {type(value).__name__} to Rational")


def render(value) -> str:
    """Render as ``p/q``, or as a plain integer when the denominator is 1."""
    value = as_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def render_decimal(value, digits: int = 6) -> str:
    """Render rounded half-away-from-zero to ``digits`` decimal places."""
    if digits < 0:
        raise ValueError("digits must be non-negative")
    value = as_rational(value)
    sign = "-" if value < 0 else ""
    scaled = abs(value) * 10**digits
    whole, rem = divmod(scaled.numerator, scaled.denominator)
    if 2 * rem >= scaled.denominator:
        whole += 1
    if whole == 0:
        sign = ""
    text = str(whole).rjust(digits + 1, "0")
    if digits == 0:
        return sign + text
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


def to_fraction(value) -> Fraction:
    value = as_rational(value)
    return Fraction(int(value.numerator), int(value.denominator))
