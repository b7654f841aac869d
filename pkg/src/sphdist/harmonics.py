"""Gegenbauer polynomials for S^{m-1} and everything built from them.

Polynomials are tuples of coefficients in ascending degree.  Coefficients of
the basis are always ``Fraction``; products with configuration data may carry
``QuadExt`` coefficients, which every routine here passes through unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence, Tuple

from .errors import DegenerateValue, RangeError

Poly = Tuple


def harm_dim(m: int, i: int) -> int:
    """Dimension h_{i,m} of degree-i harmonic polynomials in m variables."""
    if m < 2 or i < 0:
        raise RangeError(f"harm_dim needs m >= 2 and i >= 0, got m={m}, i={i}")
    second = comb(m + i - 3, i - 2) if i >= 2 else 0
    return comb(m + i - 1, i) - second


def recurrence_lambda(m: int, k: int) -> Fraction:
    # lambda_0 = 0 for every m (the formula is 0/0 at m = 2)
    if k <= 0:
        return Fraction(0)
    return Fraction(k, m + 2 * k - 2)


# -- polynomial helpers ---------------------------------------------------------

def trim(p: Sequence) -> Poly:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p) if p else (Fraction(0),)


def degree(p: Sequence) -> int:
    p = trim(p)
    return -1 if len(p) == 1 and p[0] == 0 else len(p) - 1


def poly_add(p: Sequence, q: Sequence) -> Poly:
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def poly_sub(p: Sequence, q: Sequence) -> Poly:
    return poly_add(p, [-c for c in q])


def poly_scale(p: Sequence, c) -> Poly:
    return trim([c * x for x in p])


def poly_mul(p: Sequence, q: Sequence) -> Poly:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return trim(out)


def eval_poly(p: Sequence, x):
    """Horner evaluation; field promotion is delegated to the scalar types."""
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


# -- Gegenbauer basis -------------------------------------------------------------

@lru_cache(maxsize=None)
def _gegenbauer_polys(m: int, K: int) -> Tuple[Poly, ...]:
    if K < 0:
        return ()
    if K == 0:
        return ((Fraction(1),),)
    prev = _gegenbauer_polys(m, K - 1)
    if K == 1:
        return prev + ((Fraction(0), Fraction(m)),)
    k = K - 1
    # x G_k = lam_{k+1} G_{k+1} + (1 - lam_{k-1}) G_{k-1}
    xgk = (Fraction(0),) + prev[k]
    rest = poly_sub(xgk, poly_scale(prev[k - 1], 1 - recurrence_lambda(m, k - 1)))
    return prev + (poly_scale(rest, 1 / recurrence_lambda(m, k + 1)),)


@dataclass(frozen=True)
class GegenbauerBasis:
    m: int
    K: int
    polys: Tuple[Poly, ...]

    def __getitem__(self, k: int) -> Poly:
        return self.polys[k]

    def __len__(self):
        return len(self.polys)

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(harm_dim(self.m, k) for k in range(self.K + 1))

    def recurrence_residual(self, k: int) -> Poly:
        """x G_k - lam_{k+1} G_{k+1} - (1 - lam_{k-1}) G_{k-1}; identically zero."""
        m = self.m
        lhs = (Fraction(0),) + tuple(self.polys[k])
        rhs = poly_scale(self.polys[k + 1], recurrence_lambda(m, k + 1))
        if k >= 1:
            rhs = poly_add(rhs, poly_scale(self.polys[k - 1], 1 - recurrence_lambda(m, k - 1)))
        return poly_sub(lhs, rhs)


def gegenbauer_basis(m: int, K: int) -> GegenbauerBasis:
    if m < 2 or K < 0:
        raise RangeError(f"gegenbauer_basis needs m >= 2 and K >= 0, got m={m}, K={K}")
    return GegenbauerBasis(m, K, _gegenbauer_polys(m, K))


def gegenbauer(m: int, k: int) -> Poly:
    return gegenbauer_basis(m, k).polys[k]


@dataclass(frozen=True)
class GegenbauerExpansion:
    m: int
    coeffs: Tuple

    def __getitem__(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __len__(self):
        return len(self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def reconstruct(self) -> Poly:
        basis = gegenbauer_basis(self.m, max(self.degree, 0))
        out: Poly = (Fraction(0),)
        for k, f in enumerate(self.coeffs):
            out = poly_add(out, poly_scale(basis[k], f))
        return out


def expand_in_gegenbauer(p: Sequence, m: int) -> GegenbauerExpansion:
    """Coefficients f_k with p = sum f_k G_k, by back-substitution from the top degree."""
    rem = list(trim(p))
    s = len(rem) - 1
    basis = gegenbauer_basis(m, s)
    coeffs = [Fraction(0)] * (s + 1)
    for k in range(s, -1, -1):
        gk = basis[k]
        f = rem[k] / gk[k]
        coeffs[k] = f
        if f != 0:
            for i, c in enumerate(gk):
                rem[i] = rem[i] - f * c
    return GegenbauerExpansion(m, tuple(coeffs))


def linearization(m: int, i: int, j: int) -> Tuple[Fraction, ...]:
    """c_{i,j}^0 .. c_{i,j}^{i+j} with G_i G_j = sum_k c^k G_k."""
    basis = gegenbauer_basis(m, i + j)
    prod = poly_mul(basis[i], basis[j])
    exp = expand_in_gegenbauer(prod, m)
    return tuple(exp[k] for k in range(i + j + 1))


def annihilator(values: Sequence, tau0=1) -> Poly:
    """prod (t - a)/(tau0 - a) over ``values``: 1 at tau0, 0 on every value."""
    vals = list(values)
    if not vals:
        raise DegenerateValue("empty value set")
    for a in vals:
        if a == tau0:
            raise DegenerateValue(f"value {a} equals tau0")
    for x in range(len(vals)):
        for y in range(x):
            if vals[x] == vals[y]:
                raise DegenerateValue(f"repeated value {vals[x]}")
    out: Poly = (Fraction(1),)
    for a in vals:
        c = 1 / (tau0 - a)
        out = poly_mul(out, (-a * c, c))
    return out


def shifted_product_expansion(F: GegenbauerExpansion, l: int) -> GegenbauerExpansion:
    """Expansion of G_l * F / h_l; its constant coefficient equals F's l-th coefficient."""
    basis = gegenbauer_basis(F.m, l)
    prod = poly_scale(poly_mul(basis[l], F.reconstruct()), Fraction(1, harm_dim(F.m, l)))
    return expand_in_gegenbauer(prod, F.m)
