"""Exact dense matrices over Q or Q(sqrt d).

A matrix is stored as ``(a + b*sqrt(d)) / den`` with integer numerator arrays
``a`` and ``b`` (``b is None`` over Q) and one positive common denominator.
Arrays stay ``int64`` while they provably fit and silently widen to Python
``int`` object arrays otherwise; every result is kept in lowest terms so that
equality is plain componentwise comparison.

Products are formed with :func:`int_matmul`, which splits integers into limbs
small enough that a float64 BLAS product is exact, then recombines.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import FieldMismatch
from .exactnum import FieldTag, QuadExt, promote

_I64_SAFE = 1 << 62
_F64_EXACT = 1 << 53


def _maxabs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        return max(abs(int(x)) for x in arr.flat)
    return int(max(abs(int(arr.max())), abs(int(arr.min()))))


def _shrink(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object and _maxabs(arr) < _I64_SAFE:
        return arr.astype(np.int64)
    return arr


def _widen(arr: np.ndarray) -> np.ndarray:
    return arr if arr.dtype == object else arr.astype(object)


def _iarr(arr) -> np.ndarray:
    arr = np.asarray(arr)
    if arr.dtype == object:
        return _shrink(np.vectorize(int, otypes=[object])(arr)) if arr.size else arr.astype(np.int64)
    if arr.dtype.kind in "iub":
        return arr.astype(np.int64)
    raise TypeError(f"integer array expected, got {arr.dtype}")


def _scale(arr: np.ndarray, k: int) -> np.ndarray:
    if k == 1:
        return arr
    if arr.dtype != object and _maxabs(arr) * abs(k) < _I64_SAFE:
        return arr * k
    return _shrink(_widen(arr) * k)


def _add(x: np.ndarray, y: np.ndarray, sub: bool = False) -> np.ndarray:
    if x.dtype != object and y.dtype != object and _maxabs(x) + _maxabs(y) < _I64_SAFE:
        return x - y if sub else x + y
    return _shrink(_widen(x) - _widen(y) if sub else _widen(x) + _widen(y))


def _emul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if x.dtype != object and y.dtype != object and _maxabs(x) * _maxabs(y) < _I64_SAFE:
        return x * y
    return _shrink(_widen(x) * _widen(y))


def _exact_sum(arr: np.ndarray) -> int:
    if arr.dtype != object and _maxabs(arr) * max(arr.size, 1) < _I64_SAFE:
        return int(arr.sum())
    return int(_widen(arr).sum())


def _gcd_arr(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        return reduce(math.gcd, (int(v) for v in arr.flat), 0)
    return int(np.gcd.reduce(arr.ravel()))


def _div_exact(arr: np.ndarray, g: int) -> np.ndarray:
    if g == 1:
        return arr
    return _shrink(arr // g)


def _limbs(arr: np.ndarray, bits: int):
    """Signed limbs l_i with arr = sum l_i * 2**(bits*i) and |l_i| < 2**bits."""
    neg = arr < 0
    mag = np.where(neg, -arr, arr)
    mask = (1 << bits) - 1
    out = []
    top = _maxabs(arr)
    shift = 0
    while (top >> shift) > 0:
        digit = ((mag >> shift) & mask).astype(np.int64)
        out.append(np.where(neg, -digit, digit))
        shift += bits
    return out


def int_matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Exact product of two integer matrices."""
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    inner = max(A.shape[1], 1)
    ma, mb = _maxabs(A), _maxabs(B)
    if ma == 0 or mb == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    if ma * mb * inner < _F64_EXACT:
        return np.rint(A.astype(np.float64) @ B.astype(np.float64)).astype(np.int64)
    bits = max(1, (53 - inner.bit_length()) // 2)
    la = [x.astype(np.float64) for x in _limbs(A, bits)]
    lb = [x.astype(np.float64) for x in _limbs(B, bits)]
    partial: dict[int, np.ndarray] = {}
    for i, Ai in enumerate(la):
        for j, Bj in enumerate(lb):
            P = np.rint(Ai @ Bj).astype(np.int64)
            # at most len(la) * 2**53 before recombination
            partial[i + j] = partial[i + j] + P if (i + j) in partial else P
    nterms = len(partial)
    if ma * mb * inner * nterms < _I64_SAFE:
        out = np.zeros_like(next(iter(partial.values())))
        for k, P in partial.items():
            out += P << (bits * k)
        return out
    out = np.zeros(partial[0].shape, dtype=object)
    for k, P in partial.items():
        out = out + (P.astype(object) << (bits * k))
    return _shrink(out)


class ExactMatrix:
    """Dense matrix over Q or Q(sqrt d); immutable by convention."""

    __slots__ = ("a", "b", "den", "d")

    def __init__(self, a, b=None, den: int = 1, d: Optional[int] = None, *, _normalized: bool = False):
        a = _iarr(a)
        if b is not None:
            b = _iarr(b)
            if b.shape != a.shape:
                raise ValueError("numerator shapes differ")
            if d is None:
                raise ValueError("irrational part requires d")
        den = int(den)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            a, den = -a, -den
            if b is not None:
                b = -b
        self.a, self.b, self.den, self.d = a, b, den, d
        if not _normalized:
            self._normalize()

    def _normalize(self):
        if self.d is not None and self.b is None:
            self.b = np.zeros_like(self.a)
        g = math.gcd(_gcd_arr(self.a), self.den)
        if self.b is not None:
            g = math.gcd(g, _gcd_arr(self.b))
        if g > 1:
            self.a = _div_exact(self.a, g)
            if self.b is not None:
                self.b = _div_exact(self.b, g)
            self.den //= g

    # -- constructors ---------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: FieldTag = FieldTag()) -> "ExactMatrix":
        vals = [[promote(x, field) for x in row] for row in rows]
        nr = len(vals)
        nc = len(vals[0]) if nr else 0
        if any(len(r) != nc for r in vals):
            raise ValueError("ragged rows")
        flat = [x for r in vals for x in r]
        idx = np.arange(len(flat), dtype=np.int64).reshape(nr, nc)
        return cls.from_lookup(flat, idx, field)

    @classmethod
    def from_lookup(cls, values: Sequence, index: np.ndarray, field: FieldTag = FieldTag()) -> "ExactMatrix":
        """Matrix whose (x, y) entry is ``values[index[x, y]]``."""
        vals = [promote(v, field) for v in values]
        if field.d is None:
            den = reduce(math.lcm, (v.denominator for v in vals), 1)
            an = [v.numerator * (den // v.denominator) for v in vals]
            bn = None
        else:
            den = reduce(math.lcm, (q.denominator for v in vals for q in (v.a, v.b)), 1)
            an = [v.a.numerator * (den // v.a.denominator) for v in vals]
            bn = [v.b.numerator * (den // v.b.denominator) for v in vals]

        def table(nums):
            big = any(abs(x) >= _I64_SAFE for x in nums)
            return np.array(nums, dtype=object if big else np.int64)

        a = table(an)[index] if vals else np.zeros(index.shape, dtype=np.int64)
        b = table(bn)[index] if bn is not None else None
        return cls(a, b, den, field.d)

    @classmethod
    def identity(cls, n: int, field: FieldTag = FieldTag()) -> "ExactMatrix":
        return cls(np.eye(n, dtype=np.int64), None, 1, field.d)

    @classmethod
    def zeros(cls, n: int, m: Optional[int] = None, field: FieldTag = FieldTag()) -> "ExactMatrix":
        return cls(np.zeros((n, n if m is None else m), dtype=np.int64), None, 1, field.d)

    @classmethod
    def ones(cls, n: int, m: Optional[int] = None, field: FieldTag = FieldTag()) -> "ExactMatrix":
        return cls(np.ones((n, n if m is None else m), dtype=np.int64), None, 1, field.d)

    # -- basic queries --------------------------------------------------------
    @property
    def shape(self):
        return self.a.shape

    @property
    def field(self) -> FieldTag:
        return FieldTag(self.d)

    def entry(self, i: int, j: int):
        a = Fraction(int(self.a[i, j]), self.den)
        if self.d is None:
            return a
        return QuadExt(a, Fraction(int(self.b[i, j]), self.den), self.d)

    def tolist(self):
        return [[self.entry(i, j) for j in range(self.shape[1])] for i in range(self.shape[0])]

    def diagonal(self):
        return [self.entry(i, i) for i in range(min(self.shape))]

    def _scalar(self, a_num: int, b_num: int = 0):
        a = Fraction(a_num, self.den)
        if self.d is None:
            return a
        return QuadExt(a, Fraction(b_num, self.den), self.d)

    def trace(self):
        a = sum(int(x) for x in np.diagonal(self.a))
        b = sum(int(x) for x in np.diagonal(self.b)) if self.b is not None else 0
        return self._scalar(a, b)

    def total(self):
        """Sum of all entries."""
        b = _exact_sum(self.b) if self.b is not None else 0
        return self._scalar(_exact_sum(self.a), b)

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(self.a.T, None if self.b is None else self.b.T, self.den, self.d, _normalized=True)

    def is_symmetric(self) -> bool:
        if self.shape[0] != self.shape[1]:
            return False
        ok = np.array_equal(self.a, self.a.T)
        return ok and (self.b is None or np.array_equal(self.b, self.b.T))

    def is_zero(self) -> bool:
        return not np.any(self.a) and (self.b is None or not np.any(self.b))

    def classes(self):
        """Distinct entry values (unsorted) and the index array mapping entries onto them."""
        if self.b is None:
            uniq, inv = np.unique(self.a, return_inverse=True)
            values = [Fraction(int(x), self.den) for x in uniq]
        else:
            stacked = np.stack([self.a.ravel(), self.b.ravel()], axis=1)
            uniq, inv = np.unique(stacked, axis=0, return_inverse=True)
            values = [QuadExt(Fraction(int(p), self.den), Fraction(int(q), self.den), self.d) for p, q in uniq]
        return values, np.asarray(inv).reshape(self.shape)

    # -- field handling -------------------------------------------------------
    def _joint(self, other: "ExactMatrix"):
        if self.d is not None and other.d is not None and self.d != other.d:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return self.d if self.d is not None else other.d

    def _parts(self, d):
        b = self.b if self.b is not None else np.zeros_like(self.a)
        return self.a, (b if d is not None else None)

    # -- arithmetic -----------------------------------------------------------
    def _combine(self, other: "ExactMatrix", sub: bool) -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        d = self._joint(other)
        den = math.lcm(self.den, other.den)
        sa, sb = self._parts(d)
        oa, ob = other._parts(d)
        ks, ko = den // self.den, den // other.den
        a = _add(_scale(sa, ks), _scale(oa, ko), sub)
        b = None if d is None else _add(_scale(sb, ks), _scale(ob, ko), sub)
        return ExactMatrix(a, b, den, d)

    def __add__(self, other):
        return self._combine(other, False)

    def __sub__(self, other):
        return self._combine(other, True)

    def __neg__(self):
        return ExactMatrix(_scale(self.a, -1), None if self.b is None else _scale(self.b, -1), self.den, self.d, _normalized=True)

    def scale(self, c) -> "ExactMatrix":
        """Multiply every entry by the scalar ``c``."""
        if isinstance(c, QuadExt):
            if self.d is not None and self.d != c.d:
                raise FieldMismatch(f"{self.field} vs Q(sqrt{c.d})")
            d = c.d
            den = math.lcm(c.a.denominator, c.b.denominator)
            ca, cb = int(c.a * den), int(c.b * den)
            sa, sb = self._parts(d)
            a = _add(_scale(sa, ca), _scale(sb, cb * d))
            b = _add(_scale(sa, cb), _scale(sb, ca))
            return ExactMatrix(a, b, self.den * den, d)
        c = Fraction(c)
        a = _scale(self.a, c.numerator)
        b = None if self.b is None else _scale(self.b, c.numerator)
        return ExactMatrix(a, b, self.den * c.denominator, self.d)

    def __mul__(self, c):
        if isinstance(c, ExactMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        d = self._joint(other)
        den = self.den * other.den
        if d is None:
            return ExactMatrix(int_matmul(self.a, other.a), None, den, None)
        sa, sb = self._parts(d)
        oa, ob = other._parts(d)
        a = _add(int_matmul(sa, oa), _scale(int_matmul(sb, ob), d))
        b = _add(int_matmul(sa, ob), int_matmul(sb, oa))
        return ExactMatrix(a, b, den, d)

    def hadamard(self, other: "ExactMatrix") -> "ExactMatrix":
        """Entrywise product."""
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        d = self._joint(other)
        den = self.den * other.den
        if d is None:
            return ExactMatrix(_emul(self.a, other.a), None, den, None)
        sa, sb = self._parts(d)
        oa, ob = other._parts(d)
        a = _add(_emul(sa, oa), _scale(_emul(sb, ob), d))
        b = _add(_emul(sa, ob), _emul(sb, oa))
        return ExactMatrix(a, b, den, d)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape or self.den != other.den:
            return False
        if not np.array_equal(self.a, other.a):
            return False
        sb = self.b if self.b is not None else None
        ob = other.b if other.b is not None else None
        if sb is None and ob is None:
            return True
        zs = sb if sb is not None else np.zeros_like(self.a)
        zo = ob if ob is not None else np.zeros_like(other.a)
        return np.array_equal(zs, zo)

    __hash__ = None

    def __repr__(self):
        return f"ExactMatrix(shape={self.shape}, field={self.field}, den={self.den})"

    # -- elimination inputs ---------------------------------------------------
    def integer_form(self) -> np.ndarray:
        """Object array of Python ints whose Q-rank equals the rank of ``self``.

        Over Q(sqrt d) this is the real form [[a, d*b], [b, a]] whose rank is
        twice the rank over the extension field.
        """
        a = _widen(self.a)
        if self.d is None:
            return a.copy()
        b = _widen(self.b)
        return np.block([[a, b * self.d], [b, a]])

    def scalar_array(self) -> np.ndarray:
        out = np.empty(self.shape, dtype=object)
        for i in range(self.shape[0]):
            for j in range(self.shape[1]):
                out[i, j] = self.entry(i, j)
        return out


def bareiss_rank(M: np.ndarray) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination.

    ``M`` is an object array of Python ints and is consumed.  Every
    intermediate entry is a minor of the input, so the divisions are exact.
    """
    rows, cols = M.shape
    rank = 0
    prev = 1
    for col in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(M[rank:, col])[0]
        if nz.size == 0:
            continue
        p = rank + int(nz[0])
        if p != rank:
            M[[rank, p]] = M[[p, rank]]
        piv = M[rank, col]
        if rank + 1 < rows and col + 1 < cols:
            below = M[rank + 1:, col]
            sub = M[rank + 1:, col + 1:]
            M[rank + 1:, col + 1:] = (sub * piv - np.outer(below, M[rank, col + 1:])) // prev
        M[rank + 1:, col] = 0
        prev = piv
        rank += 1
    return rank


def psd_rank(S: np.ndarray):
    """Symmetric elimination on diagonal pivots.

    ``S`` is an object array of exact scalars (``Fraction`` or ``QuadExt``).
    Returns ``(is_psd, rank)``; ``rank`` is only meaningful when ``is_psd``.
    """
    S = S.copy()
    n = S.shape[0]
    active = list(range(n))
    rank = 0
    while active:
        k = active.pop(0)
        p = S[k, k]
        if p < 0:
            return False, rank
        if p == 0:
            if any(S[k, j] != 0 for j in active):
                return False, rank
            continue
        rank += 1
        if active:
            idx = np.array(active)
            col = S[idx, k]
            S[np.ix_(idx, idx)] = S[np.ix_(idx, idx)] - np.outer(col, col) / p
    return True, rank
