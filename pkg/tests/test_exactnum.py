from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from sphdist.errors import DivisionByZero, FieldMismatch, ParseError, ZeroDenominator
from sphdist.exactnum import (
    RATIONAL,
    FieldTag,
    QuadExt,
    canonicalize,
    format_scalar,
    parse_scalar,
    qext_arith,
    sign,
)


def test_canonicalize_examples():
    assert canonicalize(2, 4) == F(1, 2)
    assert canonicalize(3, -6) == F(-1, 2)
    c = canonicalize(0, 7)
    assert (c.numerator, c.denominator) == (0, 1)
    with pytest.raises(ZeroDenominator):
        canonicalize(1, 0)


def test_sign_examples():
    assert sign(QuadExt(F(1, 2), 0, 5)) == 1
    assert sign(QuadExt(-1, 1, 5)) == 1
    assert sign(QuadExt(2, -1, 5)) == -1
    assert sign(QuadExt(0, 0, 5)) == 0
    assert sign(F(-3, 4)) == -1


def test_arith_examples():
    phi = QuadExt(F(1, 2), F(1, 2), 5)
    assert qext_arith(phi, QuadExt(F(-1, 2), F(1, 2), 5), "*") == 1
    r5 = QuadExt(0, 1, 5)
    assert r5 * r5 == 5
    assert phi + QuadExt(F(1, 2), F(-1, 2), 5) == 1
    assert 1 / phi == phi - 1


def test_arith_errors():
    with pytest.raises(FieldMismatch):
        QuadExt(1, 1, 5) + QuadExt(1, 1, 2)
    with pytest.raises(DivisionByZero):
        qext_arith(QuadExt(1, 0, 5), QuadExt(0, 0, 5), "/")
    with pytest.raises(ValueError):
        QuadExt(1, 1, 4)


@pytest.mark.parametrize(
    "text, value",
    [
        ("3/4", F(3, 4)),
        ("-2", F(-2)),
        ("1/2+1/2*sqrt(5)", QuadExt(F(1, 2), F(1, 2), 5)),
        ("1/2 + -1/2 * sqrt(5)", QuadExt(F(1, 2), F(-1, 2), 5)),
        ("0/1-1/3*sqrt(5)", QuadExt(0, F(-1, 3), 5)),
        ("-1/3*sqrt(5)", QuadExt(0, F(-1, 3), 5)),
    ],
)
def test_parse(text, value):
    assert parse_scalar(text) == value


@pytest.mark.parametrize("bad", ["", "1/0", "abc", "1/2+1/2*sqrt(4)", "1/2*sqrt(1)"])
def test_parse_rejects(bad):
    with pytest.raises((ParseError, ZeroDenominator)):
        parse_scalar(bad)


def test_parse_field_context():
    assert parse_scalar("1/3", 5) == QuadExt(F(1, 3), 0, 5)
    with pytest.raises(FieldMismatch):
        parse_scalar("1+1*sqrt(2)", 5)


def test_field_tag_header():
    assert RATIONAL.header() == "Q"
    assert FieldTag(5).header() == "Q sqrt 5"


rats = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 1000)
quads = st.builds(lambda a, b: QuadExt(a, b, 5), rats, rats)


@given(quads, quads, quads)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x
    if x != 0:
        assert x * x.inverse() == 1


@given(quads, quads)
def test_sign_multiplicative(x, y):
    assert sign(x * y) == sign(x) * sign(y)
    assert (sign(x) == 0) == (x == 0)
    assert (x < y) == (sign(y - x) > 0)


@given(quads)
def test_sign_matches_float(x):
    # far from zero the float value is a safe oracle
    f = float(x)
    if abs(f) > 1e-6:
        assert sign(x) == (1 if f > 0 else -1)


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_canonicalize_idempotent(p, q):
    c = canonicalize(p, q)
    assert canonicalize(c.numerator, c.denominator) == c
    assert c.denominator > 0


@given(quads)
def test_format_roundtrip(x):
    assert parse_scalar(format_scalar(x)) == x


@given(rats)
def test_format_roundtrip_rational(x):
    assert parse_scalar(format_scalar(x)) == x
