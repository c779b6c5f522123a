from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gamemistakes.rational import (ONE, ZERO, Rational, as_rational, from_decimal_string,
                                   render, render_decimal, to_fraction)

fractions = st.fractions(max_denominator=10**6).map(as_rational)
nonzero = fractions.filter(lambda r: r != 0)


@pytest.mark.parametrize("text, expected", [
    ("1/3", Fraction(1, 3)), ("-0.5", Fraction(-1, 2)), ("2/4", Fraction(1, 2)),
    ("0.25", Fraction(1, 4)), ("7", Fraction(7)), (" -3/9 ", Fraction(-1, 3)),
])
def test_parse(text, expected):
    assert to_fraction(from_decimal_string(text)) == expected


@pytest.mark.parametrize("text", ["", "abc", "1/", "1//2", "0.5.1", "nan?"])
def test_parse_malformed(text):
    with pytest.raises(ValueError):
        from_decimal_string(text)


def test_zero_denominator():
    with pytest.raises(ValueError, match="zero denominator"):
        from_decimal_string("3/0")


def test_examples():
    assert as_rational("1/3") + as_rational("1/6") == as_rational("1/2")
    assert as_rational("1/3") * 0 == ZERO
    assert as_rational("2/3") < as_rational("3/4")
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_render():
    assert render(as_rational("4/2")) == "2"
    assert render(as_rational("-6/4")) == "-3/2"
    assert render_decimal(as_rational("2/3"), 4) == "0.6667"
    assert render_decimal(as_rational("-1/18"), 3) == "-0.056"
    assert render_decimal(as_rational("-1/2000"), 2) == "0.00"
    assert render_decimal(as_rational("5/2"), 0) == "3"
    assert render_decimal(as_rational("-5/2"), 0) == "-3"


def test_float_conversion_is_exact():
    assert as_rational(0.1) == Fraction(0.1)
    with pytest.raises(ValueError):
        as_rational(float("inf"))
    with pytest.raises(TypeError):
        as_rational(True)


@given(fractions)
def test_canonical_form(a):
    assert a.denominator > 0
    assert Fraction(int(a.numerator), int(a.denominator)).denominator == a.denominator


@given(fractions)
def test_round_trip(a):
    assert from_decimal_string(render(a)) == a
    assert isinstance(from_decimal_string(render(a)), Rational)


@given(fractions, fractions, fractions)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a + (-a) == ZERO


@given(nonzero)
def test_inverse(a):
    assert a * (ONE / a) == ONE


@given(fractions, fractions)
def test_order_matches_fractions(a, b):
    assert (a < b) == (to_fraction(a) < to_fraction(b))
    assert (a == b) == (to_fraction(a) == to_fraction(b))
