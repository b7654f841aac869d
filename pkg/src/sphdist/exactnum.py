"""Exact scalars: rationals (``fractions.Fraction``) and elements of Q(sqrt d).

Every comparison in the package bottoms out here, and nothing in this module
ever touches a float except ``QuadExt.__float__`` (display only).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Optional, Union

from .errors import DivisionByZero, FieldMismatch, ParseError, ZeroDenominator

__all__ = [
    "Fraction",
    "QuadExt",
    "FieldTag",
    "RATIONAL",
    "Scalar",
    "canonicalize",
    "sign",
    "qext_arith",
    "parse_scalar",
    "format_scalar",
    "field_of",
    "promote",
    "is_square_free",
]


def canonicalize(num: int, den: int) -> Fraction:
    if den == 0:
        raise ZeroDenominator(f"{num}/0")
    return Fraction(num, den)


@lru_cache(maxsize=None)
def is_square_free(d: int) -> bool:
    if d < 2:
        return d == 1
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def _rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"not a rational: {x!r}")


def _sign_ab(a: Fraction, b: Fraction, d: int) -> int:
    # sign of a + b*sqrt(d) without leaving Q
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 with b^2 d
    lhs, rhs = a * a, b * b * d
    if lhs == rhs:
        return 0
    return sa if lhs > rhs else sb


class QuadExt:
    """``a + b*sqrt(d)`` with rational ``a, b`` and square-free ``d > 1``."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = 5):
        if not isinstance(d, int) or d < 2 or not is_square_free(d):
            raise ValueError(f"d must be a square-free integer > 1, got {d!r}")
        self.a = _rat(a)
        self.b = _rat(b)
        self.d = d

    # -- coercion -----------------------------------------------------------
    def _coerce(self, other) -> Optional["QuadExt"]:
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise FieldMismatch(f"Q(sqrt{self.d}) vs Q(sqrt{other.d})")
            return other
        if isinstance(other, (int, Fraction, Rational)) and not isinstance(other, bool):
            return QuadExt(other, 0, self.d)
        if isinstance(other, bool):
            return QuadExt(int(other), 0, self.d)
        return None

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a * o.a + self.b * o.b * self.d, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if n == 0:
            # norm vanishes only at zero because sqrt(d) is irrational
            raise DivisionByZero("division by zero in Q(sqrt d)")
        return QuadExt(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadExt(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- order --------------------------------------------------------------
    def sign(self) -> int:
        return _sign_ab(self.a, self.b, self.d)

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction, Rational)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot compare QuadExt with {type(other).__name__}")
        return (self - o).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.a) + float(self.b) * self.d ** 0.5

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b}, {self.d})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[Fraction, QuadExt]


def sign(x) -> int:
    if isinstance(x, QuadExt):
        return x.sign()
    return (x > 0) - (x < 0)


def qext_arith(x: QuadExt, y: QuadExt, op: str) -> QuadExt:
    if x.d != y.d:
        raise FieldMismatch(f"Q(sqrt{x.d}) vs Q(sqrt{y.d})")
    if op == "+":
        return x + y
    if op == "-":
        return x - y
    if op in ("*", "x", "×"):
        return x * y
    if op in ("/", "÷"):
        if not y:
            raise DivisionByZero("division by zero in Q(sqrt d)")
        return x / y
    raise ValueError(f"unknown operator {op!r}")


@dataclass(frozen=True)
class FieldTag:
    """``d is None`` means Q; otherwise Q(sqrt d)."""

    d: Optional[int] = None

    def __post_init__(self):
        if self.d is not None and (self.d < 2 or not is_square_free(self.d)):
            raise ValueError(f"field parameter must be square-free > 1, got {self.d}")

    @property
    def is_rational(self) -> bool:
        return self.d is None

    def header(self) -> str:
        return "Q" if self.d is None else f"Q sqrt {self.d}"

    def __str__(self):
        return "Q" if self.d is None else f"Q(sqrt{self.d})"


RATIONAL = FieldTag()


def field_of(x) -> FieldTag:
    if isinstance(x, QuadExt):
        return FieldTag(x.d)
    return RATIONAL


def promote(x, field: FieldTag):
    """Embed ``x`` into ``field``; rationals are promoted, foreign fields rejected."""
    if field.d is None:
        if isinstance(x, QuadExt):
            if x.b != 0:
                raise FieldMismatch(f"{x} is not rational")
            return x.a
        return _rat(x)
    if isinstance(x, QuadExt):
        if x.d != field.d:
            raise FieldMismatch(f"Q(sqrt{x.d}) vs {field}")
        return x
    return QuadExt(x, 0, field.d)


# grammar: p/q  |  p/q+r/s*sqrt(d)  (whitespace-insensitive; r/s may be negative)
_RAT = r"[+-]?\d+(?:/\d+)?"
_RAT_RE = re.compile(rf"^{_RAT}$")
_SQRT_RE = re.compile(r"^(.*?)(?:\*)?sqrt\((\d+)\)$")


def _parse_rational(tok: str) -> Fraction:
    if not _RAT_RE.match(tok):
        raise ParseError(f"bad rational {tok!r}")
    if "/" in tok:
        p, q = tok.split("/")
        return canonicalize(int(p), int(q))
    return Fraction(int(tok))


def parse_scalar(text: str, d: Optional[int] = None) -> Scalar:
    """Parse ``p/q`` or ``p/q+r/s*sqrt(d)``.

    When ``d`` is given the result is always a ``QuadExt`` in Q(sqrt d) and a
    different radicand raises ``FieldMismatch``.
    """
    s = "".join(text.split())
    if not s:
        raise ParseError("empty scalar")
    m = _SQRT_RE.match(s)
    if m is None:
        a = _parse_rational(s)
        return a if d is None else QuadExt(a, 0, d)
    head, rad = m.group(1), int(m.group(2))
    if d is not None and rad != d:
        raise FieldMismatch(f"sqrt({rad}) in a Q(sqrt{d}) context")
    if rad < 2 or not is_square_free(rad):
        raise ParseError(f"radicand must be square-free > 1: {rad}")
    # split at the last sign that follows a digit: "a+b", "a-b", "a+-b"
    cut = next((i for i in range(len(head) - 1, 0, -1) if head[i] in "+-" and head[i - 1].isdigit()), 0)
    a_tok, b_tok = head[:cut], head[cut:]
    if len(b_tok) > 1 and b_tok[0] == "+" and b_tok[1] in "+-":
        b_tok = b_tok[1:]
    if b_tok in ("", "+"):
        b = Fraction(1)
    elif b_tok == "-":
        b = Fraction(-1)
    else:
        b = _parse_rational(b_tok)
    a = _parse_rational(a_tok) if a_tok else Fraction(0)
    return QuadExt(a, b, rad)


def _fmt_rat(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def format_scalar(x) -> str:
    """Inverse of :func:`parse_scalar`; always emits the ``p/q`` long form."""
    if isinstance(x, QuadExt):
        return f"{_fmt_rat(x.a)}{'+' if x.b >= 0 else ''}{_fmt_rat(x.b)}*sqrt({x.d})"
    return _fmt_rat(_rat(x))
