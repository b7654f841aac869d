"""Symmetric association schemes, their idempotents and Krein parameters.

All spectral work happens inside the Bose-Mesner algebra: an element is a
coordinate vector over the adjacency basis A_0..A_s, multiplied through the
intersection numbers p_{ij}^k.  Because the A_i have disjoint supports, the
coordinate c_i of an element is also its matrix entry on relation i, so the
n x n matrices are only materialised on request.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import bounds as _bounds
from .errors import (
    InputError,
    InvariantViolation,
    NegativeKrein,
    NonConstantDiagonal,
    NonRationalSpectrum,
    NotAScheme,
    NotQPolynomial,
    RepeatedRows,
)
from .exactnum import RATIONAL
from .harmonics import harm_dim
from .matrix import ExactMatrix
from .pointset import SphericalConfig, inner_product_set, rank_exact, strength

Vec = Tuple[Fraction, ...]


@dataclass
class AssociationScheme:
    n: int
    s: int
    relation: np.ndarray
    p: List[List[List[int]]]  # p[i][j][k], A_i A_j = sum_k p_ij^k A_k

    @property
    def valencies(self) -> Tuple[int, ...]:
        return tuple(self.p[i][i][0] for i in range(self.s + 1))

    def adjacency(self, i: int) -> np.ndarray:
        return (self.relation == i).astype(np.int64)

    # algebra coordinates ----------------------------------------------------
    def mul(self, x: Sequence, y: Sequence) -> Vec:
        s = self.s
        out = [Fraction(0)] * (s + 1)
        for i in range(s + 1):
            if x[i] == 0:
                continue
            for j in range(s + 1):
                if y[j] == 0:
                    continue
                xy = x[i] * y[j]
                pij = self.p[i][j]
                for k in range(s + 1):
                    if pij[k]:
                        out[k] += xy * pij[k]
        return tuple(out)

    def unit(self) -> Vec:
        return tuple(Fraction(int(i == 0)) for i in range(self.s + 1))

    def to_matrix(self, coords: Sequence) -> ExactMatrix:
        return ExactMatrix.from_lookup(list(coords), self.relation, RATIONAL)


def verify_scheme(relation) -> AssociationScheme:
    """Check the four axioms exactly and record the intersection numbers."""
    R = np.asarray(relation)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise InputError(f"relation matrix must be square, got shape {R.shape}")
    if R.dtype.kind not in "iu":
        raise InputError("relation matrix must be integer")
    R = R.astype(np.int64)
    n = R.shape[0]
    if n < 2:
        raise InputError("need at least two vertices")
    if R.min() < 0:
        x, y = map(int, np.argwhere(R < 0)[0])
        raise NotAScheme(2, (x, y), f"negative relation index at {(x, y)}")
    s = int(R.max())
    diag = np.diagonal(R)
    if np.any(diag != 0):
        x = int(np.nonzero(diag)[0][0])
        raise NotAScheme(1, (x, x), f"diagonal entry ({x},{x}) is not relation 0")
    off = R == 0
    np.fill_diagonal(off, False)
    if off.any():
        x, y = map(int, np.argwhere(off)[0])
        raise NotAScheme(1, (x, y), f"off-diagonal pair {(x, y)} in relation 0")
    present = np.bincount(R.ravel(), minlength=s + 1)
    for i in range(s + 1):
        if present[i] == 0:
            raise NotAScheme(2, (i,), f"relation {i} is empty")
    asym = R != R.T
    if asym.any():
        x, y = map(int, np.argwhere(asym)[0])
        raise NotAScheme(3, (x, y), f"relation not symmetric at {(x, y)}")
    flat = R.ravel()
    classes = [np.nonzero(flat == k)[0] for k in range(s + 1)]
    adj = [(R == i).astype(np.float64) for i in range(s + 1)]
    p = [[[0] * (s + 1) for _ in range(s + 1)] for _ in range(s + 1)]
    for i in range(s + 1):
        for j in range(i, s + 1):
            # 0/1 products stay far below 2**53: exact in float64
            P = (adj[i] @ adj[j]).ravel()
            for k in range(s + 1):
                vals = P[classes[k]]
                lo, hi = vals.min(), vals.max()
                if lo != hi:
                    a = classes[k][int(np.argmin(vals))]
                    b = classes[k][int(np.argmax(vals))]
                    wit = (i, j, k, divmod(int(a), n), divmod(int(b), n))
                    raise NotAScheme(4, wit, f"A_{i}A_{j} not constant on relation {k}: {int(lo)} vs {int(hi)}")
                p[i][j][k] = p[j][i][k] = int(round(lo))
    return AssociationScheme(n, s, R, p)


def from_distance_classes(config: SphericalConfig) -> AssociationScheme:
    """Relation i+1 for the i-th smallest inner product; may raise NotAScheme."""
    dist = inner_product_set(config)
    values, index = config.classes()
    label = np.zeros(len(values), dtype=np.int64)
    order = {v: r + 1 for r, v in enumerate(dist.values)}
    for k, v in enumerate(values):
        label[k] = 0 if v == 1 else order[v]
    return verify_scheme(label[index])


# -- spectral data ---------------------------------------------------------------

def _charpoly(M: List[List[Fraction]]) -> List[Fraction]:
    """Ascending coefficients of det(xI - M) (Faddeev-LeVerrier)."""
    N = len(M)
    coeffs = [Fraction(0)] * (N + 1)
    coeffs[N] = Fraction(1)
    Mk = [[Fraction(0)] * N for _ in range(N)]
    c = Fraction(1)
    for k in range(1, N + 1):
        # Mk = M @ Mk_prev + c_prev I
        prod = [[sum(M[i][t] * Mk[t][j] for t in range(N)) for j in range(N)] for i in range(N)]
        for i in range(N):
            prod[i][i] += c
        Mk = prod
        AM = [[sum(M[i][t] * Mk[t][j] for t in range(N)) for j in range(N)] for i in range(N)]
        c = -sum(AM[i][i] for i in range(N)) / k
        coeffs[N - k] = c
    return coeffs


def _peval(coeffs: Sequence, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deflate(coeffs: List[Fraction], r) -> List[Fraction]:
    # synthetic division by (x - r); remainder assumed zero
    out = [Fraction(0)] * (len(coeffs) - 1)
    acc = Fraction(0)
    for i in range(len(coeffs) - 1, 0, -1):
        acc = acc * r + coeffs[i]
        out[i - 1] = acc
    return out


def _integer_roots(coeffs: List[Fraction], bound: int):
    """Integer roots in [-bound, bound] with multiplicity, plus the unsplit remainder."""
    roots = []
    rem = list(coeffs)
    for x in range(-bound, bound + 1):
        while len(rem) > 1 and _peval(rem, x) == 0:
            roots.append(x)
            rem = _deflate(rem, x)
    return roots, rem


@dataclass
class SpectralData:
    scheme: AssociationScheme
    coords: List[Vec]  # coords[k][i]: entry of E_k on relation i
    multiplicities: Tuple[int, ...]
    eigenvalues: List[Tuple[int, ...]]  # eigenvalues[k][j]: A_j E_k = P_k(j) E_k
    labels: Tuple[int, ...]  # construction index of each idempotent

    @property
    def s(self) -> int:
        return self.scheme.s

    @property
    def n(self) -> int:
        return self.scheme.n

    def matrix(self, k: int) -> ExactMatrix:
        return self.scheme.to_matrix(self.coords[k])

    def reorder(self, order: Sequence[int]) -> "SpectralData":
        if order[0] != 0 or sorted(order) != list(range(self.s + 1)):
            raise InputError(f"bad ordering {order}")
        return SpectralData(
            self.scheme,
            [self.coords[k] for k in order],
            tuple(self.multiplicities[k] for k in order),
            [self.eigenvalues[k] for k in order],
            tuple(self.labels[k] for k in order),
        )

    def verify(self) -> None:
        sch = self.scheme
        total = [Fraction(0)] * (self.s + 1)
        for k, e in enumerate(self.coords):
            for l, f in enumerate(self.coords):
                prod = sch.mul(e, f)
                want = e if k == l else (Fraction(0),) * (self.s + 1)
                if tuple(prod) != tuple(want):
                    raise InvariantViolation(f"E_{k} E_{l} != delta E_{k}")
            total = [a + b for a, b in zip(total, e)]
        if tuple(total) != sch.unit():
            raise InvariantViolation("sum of idempotents is not the identity")
        if any(c != Fraction(1, self.n) for c in self.coords[0]):
            raise InvariantViolation("E_0 != J/n")
        if sum(self.multiplicities) != self.n:
            raise InvariantViolation("multiplicities do not sum to n")


def _generic_weights(s: int, base: int) -> List[int]:
    return [0] + [base ** (j - 1) for j in range(1, s + 1)]


def idempotents(scheme: AssociationScheme) -> SpectralData:
    """Primitive idempotents from eigenprojectors of a generic algebra element.

    Eigenvalues of each A_j are integers (algebraic integers that are
    rational) bounded by the valency, so the spectrum is located by exact
    evaluation; a remainder that does not split raises NonRationalSpectrum.
    """
    s, n = scheme.s, scheme.n
    val = scheme.valencies
    # regular representation: (L_j)[k][i] = p_{j i}^k
    L = [[[Fraction(scheme.p[j][i][k]) for i in range(s + 1)] for k in range(s + 1)] for j in range(s + 1)]
    root_sets = []
    for j in range(1, s + 1):
        cp = _charpoly(L[j])
        roots, rem = _integer_roots(cp, val[j])
        if len(rem) > 1:
            raise NonRationalSpectrum([1] * len(roots) + [len(rem) - 1])
        root_sets.append(sorted(set(roots)))
    for base in (n + 1, 2 * n + 1):
        r = _generic_weights(s, base)
        B = [[sum(r[j] * L[j][k][i] for j in range(s + 1)) for i in range(s + 1)] for k in range(s + 1)]
        cp = _charpoly(B)
        thetas = set()
        for combo in itertools.product(*root_sets):
            th = sum(r[j] * combo[j - 1] for j in range(1, s + 1))
            if _peval(cp, th) == 0:
                thetas.add(th)
        if len(thetas) != s + 1:
            continue
        thetas = sorted(thetas, reverse=True)
        gen = tuple(Fraction(x) for x in r)
        coords = []
        for th in thetas:
            e = scheme.unit()
            for mu in thetas:
                if mu == th:
                    continue
                ge = scheme.mul(gen, e)
                e = tuple((a - mu * b) / (th - mu) for a, b in zip(ge, e))
            coords.append(e)
        # eigen-check against every A_j; failure means the element was not generic
        eig = []
        ok = True
        for e in coords:
            row = []
            for j in range(s + 1):
                aj = tuple(Fraction(int(i == j)) for i in range(s + 1))
                ae = scheme.mul(aj, e)
                lam = ae[0] / e[0] if e[0] != 0 else None
                if lam is None or any(x != lam * y for x, y in zip(ae, e)) or lam.denominator != 1:
                    ok = False
                    break
                row.append(int(lam))
            if not ok:
                break
            eig.append(tuple(row))
        if not ok:
            continue
        # E_0 (the all-ones projector) first, remaining order by decreasing theta
        j0 = next(k for k, e in enumerate(coords) if all(c == Fraction(1, n) for c in e))
        order = [j0] + [k for k in range(s + 1) if k != j0]
        mult = []
        for k in order:
            m = coords[k][0] * n
            if m.denominator != 1 or m <= 0:
                raise InvariantViolation(f"non-integral multiplicity {m}")
            mult.append(int(m))
        spec = SpectralData(scheme, [coords[k] for k in order], tuple(mult), [eig[k] for k in order], tuple(range(s + 1)))
        spec.verify()
        return spec
    raise InvariantViolation("generic element failed to split the Bose-Mesner algebra")


# -- Krein parameters -----------------------------------------------------------

@dataclass
class KreinData:
    q: List[List[List[Fraction]]]  # q[i][j][k]
    multiplicities: Tuple[int, ...]
    n: int
    ordering: Optional[Tuple[int, ...]] = None  # set once a Q-polynomial order is fixed

    @property
    def s(self) -> int:
        return len(self.multiplicities) - 1

    @property
    def B1star(self) -> List[List[Fraction]]:
        """Krein matrix, row j and column k holding q_{1,j}^k."""
        s = self.s
        return [[self.q[1][j][k] for k in range(s + 1)] for j in range(s + 1)]

    def _need_order(self):
        if self.ordering is None:
            raise NotQPolynomial("no Q-polynomial ordering fixed")

    @property
    def a_star(self) -> List[Fraction]:
        self._need_order()
        return [self.q[1][i][i] for i in range(self.s + 1)]

    @property
    def b_star(self) -> List[Fraction]:
        self._need_order()
        return [self.q[1][i + 1][i] for i in range(self.s)] + [Fraction(0)]

    @property
    def c_star(self) -> List[Fraction]:
        self._need_order()
        return [Fraction(0)] + [self.q[1][i - 1][i] for i in range(1, self.s + 1)]

    @property
    def m(self) -> int:
        return self.multiplicities[1]

    def reorder(self, order: Sequence[int]) -> "KreinData":
        order = tuple(order)
        s = self.s
        q = [[[self.q[order[i]][order[j]][order[k]] for k in range(s + 1)] for j in range(s + 1)] for i in range(s + 1)]
        base = self.ordering or tuple(range(s + 1))
        kd = KreinData(q, tuple(self.multiplicities[k] for k in order), self.n, tuple(base[k] for k in order))
        if not _is_q_polynomial(kd.q):
            raise NotQPolynomial(f"ordering {order} is not Q-polynomial")
        kd.check_invariants()
        return kd

    def check_invariants(self) -> None:
        a, b, c, m = self.a_star, self.b_star, self.c_star, self.m
        s = self.s
        if a[0] != 0 or c[1] != 1:
            raise InvariantViolation("a_0* != 0 or c_1* != 1")
        for i in range(s + 1):
            if a[i] + b[i] + c[i] != m:
                raise InvariantViolation(f"a*+b*+c* != m at i={i}")
        for i in range(s):
            if b[i] * self.multiplicities[i] != c[i + 1] * self.multiplicities[i + 1]:
                raise InvariantViolation(f"b*_i m_i != c*_(i+1) m_(i+1) at i={i}")


def krein(spectral: SpectralData) -> KreinData:
    """q_{ij}^k = n trace((E_i o E_j) E_k) / m_k, with the trace summed relation by relation."""
    s, n = spectral.s, spectral.n
    val = spectral.scheme.valencies
    e = spectral.coords
    m = spectral.multiplicities
    q = [[[Fraction(0)] * (s + 1) for _ in range(s + 1)] for _ in range(s + 1)]
    for i in range(s + 1):
        for j in range(i, s + 1):
            for k in range(s + 1):
                tr = sum(n * val[l] * e[i][l] * e[j][l] * e[k][l] for l in range(s + 1))
                v = n * tr / m[k]
                if v < 0:
                    raise NegativeKrein(f"q_{i}{j}^{k} = {v}")
                q[i][j][k] = q[j][i][k] = v
    for i in range(s + 1):
        for j in range(s + 1):
            if q[i][j][0] != (m[i] if i == j else 0):
                raise InvariantViolation(f"q_{i}{j}^0 != m_i delta_ij")
            for k in range(s + 1):
                if q[0][j][k] != (1 if j == k else 0):
                    raise InvariantViolation(f"q_0{j}^{k} != delta")
    return KreinData(q, tuple(m), n)


def _is_q_polynomial(q) -> bool:
    s = len(q) - 1
    for j in range(s + 1):
        for k in range(s + 1):
            v = q[1][j][k]
            if abs(k - j) == 1 and not v > 0:
                return False
            if abs(k - j) > 1 and v != 0:
                return False
    return True


def q_polynomial_ordering(kd: KreinData) -> List[Tuple[int, ...]]:
    """Every re-indexing (E_0 fixed) that makes B1* irreducible tridiagonal."""
    s = kd.s
    found = []
    for perm in itertools.permutations(range(1, s + 1)):
        order = (0,) + perm
        q = [[[kd.q[order[i]][order[j]][order[k]] for k in range(s + 1)] for j in range(s + 1)] for i in range(s + 1)]
        if _is_q_polynomial(q):
            found.append(order)
    return found


def primary_ordering(kd: KreinData, orderings: Sequence[Tuple[int, ...]]) -> Tuple[int, ...]:
    """Smallest m_1 first, then lexicographic."""
    if not orderings:
        raise NotQPolynomial("scheme has no Q-polynomial ordering")
    return min(orderings, key=lambda o: (kd.multiplicities[o[1]], o))


def q_polynomial(spectral: SpectralData, order: Optional[Sequence[int]] = None):
    """Fix a Q-polynomial ordering; returns (KreinData, SpectralData) re-indexed."""
    kd = krein(spectral)
    if order is None:
        order = primary_ordering(kd, q_polynomial_ordering(kd))
    return kd.reorder(order), spectral.reorder(order)


def l_index(kd: KreinData) -> int:
    a = kd.a_star
    l = 0
    while l + 1 <= kd.s and a[l + 1] == 0:
        l += 1
    return l


def sho_design_check(kd: KreinData, t: int) -> bool:
    """Krein-parameter characterisation of the embedding being a spherical t-design."""
    a, c, m, s = kd.a_star, kd.c_star, kd.m, kd.s
    if t <= 0:
        return True
    ia, jc = (t - 1) // 2, -((1 - t) // 2)
    if ia > s or jc > s:
        return False
    if any(a[i] != 0 for i in range(ia + 1)):
        return False
    for j in range(1, jc + 1):
        if c[j] != Fraction(m * j, m + 2 * j - 2):
            return False
    return True


def embedding_gram(spectral: SpectralData, index: int = 1) -> SphericalConfig:
    """The Gram matrix (n/m_1) E_1 as a configuration on S^{m_1 - 1}."""
    n = spectral.n
    m1 = spectral.multiplicities[index]
    vals = [Fraction(n, m1) * c for c in spectral.coords[index]]
    if vals[0] != 1:
        raise NonConstantDiagonal(f"diagonal of (n/m)E is {vals[0]}")
    for l in range(1, spectral.s + 1):
        if vals[l] == vals[0]:
            raise RepeatedRows(f"relation {l} maps to a repeated point")
    gram = ExactMatrix.from_lookup(vals, spectral.scheme.relation, RATIONAL)
    return SphericalConfig(m1, gram=gram, name="embedding")


def hadamard_rank_check(spectral: SpectralData, h: int, index: int = 1, allow_large: bool = False) -> dict:
    """rank(E^{oh}) <= C(m+h-1, h), and equality propagates to every j <= h."""
    if h < 0:
        raise InputError("h must be >= 0")
    m1 = spectral.multiplicities[index]
    e = spectral.coords[index]

    def rank_at(j):
        mat = spectral.scheme.to_matrix([c ** j for c in e])
        return rank_exact(mat, allow_large), comb(m1 + j - 1, j)

    r, bound = rank_at(h)
    if r > bound:
        raise InvariantViolation(f"rank of E^o{h} = {r} exceeds {bound}")
    report = {"h": h, "m": m1, "rank": r, "bound": bound, "attained": r == bound, "downward": {}}
    if r == bound:
        for j in range(h):
            rj, bj = rank_at(j)
            report["downward"][j] = (rj, bj)
            if rj != bj:
                raise InvariantViolation(f"equality at h={h} but not at j={j}")
    return report


def predicted_multiplicities(m: int, s: int, l: int) -> Tuple[int, List[int]]:
    """(case, m_0..m_s) forced when the scheme meets its bound with equality."""
    case = _bounds.s0_case(s, l)
    h = lambda i: harm_dim(m, i)
    if case == 1:
        out = [h(i) for i in range(s)] + [comb(m + s - 2, s - 1) - comb(m + s - 3, s - 2)]
        return case, out
    out = [1, m]
    for i in range(2, s + 1):
        if i <= l + 1:
            out.append(h(i))
        elif case == 2 or i <= 2 * l + 2:
            out.append(sum(h(i - 2 * k) - h(i - 2 * k - 1) for k in range(i - l - 1)))
        else:
            out.append(comb(m + i - 1, i) - comb(m + i - 2, i - 1))
    return case, out[: s + 1]


def s0_audit(kd: KreinData, spectral: Optional[SpectralData] = None) -> dict:
    s, n, m = kd.s, kd.n, kd.m
    l = l_index(kd)
    case, bound = _bounds.s0_bound(m, s, l)
    report = {
        "s": s,
        "l": l,
        "m": m,
        "case": case,
        "bound": bound,
        "hsum_bound": _bounds.s0_hsum(m, s, l),
        "n": n,
        "attained": n == bound,
        "multiplicities": list(kd.multiplicities),
    }
    if n > bound:
        raise InvariantViolation(f"|X| = {n} exceeds the Q-polynomial bound {bound}")
    _, pred = predicted_multiplicities(m, s, l)
    report["predicted_multiplicities"] = pred
    if n == bound:
        report["multiplicities_match"] = list(kd.multiplicities) == pred
        if not report["multiplicities_match"]:
            raise InvariantViolation(f"equality case but multiplicities {kd.multiplicities} != {pred}")
        design_t = 2 * s - 1 if case == 1 else 2 * l + 2
        report["design_claim_t"] = design_t
        report["design_claim"] = sho_design_check(kd, design_t)
        if spectral is not None and spectral.n <= 4096:
            emb_t = strength(embedding_gram(spectral)).strength
            report["embedding_strength"] = emb_t
            report["design_claim"] = report["design_claim"] and emb_t >= design_t
        if not report["design_claim"]:
            raise InvariantViolation(f"equality case but not a spherical {design_t}-design")
    return report


def same_partition(r1: np.ndarray, r2: np.ndarray) -> bool:
    """True when two relation matrices agree up to relabelling of the classes."""
    if r1.shape != r2.shape:
        return False
    pairs = np.unique(np.stack([r1.ravel(), r2.ravel()], axis=1), axis=0)
    return len(pairs) == len(np.unique(r1)) == len(np.unique(r2))


def scheme_report(scheme: AssociationScheme, spectral: Optional[SpectralData] = None) -> dict:
    """Spectral data, Krein parameters and (when Q-polynomial) the s0 audit.

    Rationals are left as ``Fraction``; serialisation is the caller's job.
    """
    spectral = spectral or idempotents(scheme)
    kd = krein(spectral)
    orders = q_polynomial_ordering(kd)
    report = {
        "n": scheme.n,
        "s": scheme.s,
        "multiplicities": list(kd.multiplicities),
        "krein_tensor": kd.q,
        "B1star": None,
        "orderings": [list(o) for o in orders],
        "l": None,
        "sho_results": {},
        "s0_case": None,
        "s0_bound": None,
        "s0_attained": None,
        "predicted_multiplicities": None,
    }
    if not orders:
        return report
    order = primary_ordering(kd, orders)
    kd, spectral = kd.reorder(order), spectral.reorder(order)
    audit = s0_audit(kd, spectral)
    report.update(
        multiplicities=list(kd.multiplicities),
        krein_tensor=kd.q,
        B1star=kd.B1star,
        l=audit["l"],
        sho_results={t: sho_design_check(kd, t) for t in range(1, 2 * kd.s + 1)},
        s0_case=audit["case"],
        s0_bound=audit["bound"],
        s0_attained=audit["attained"],
        predicted_multiplicities=audit["predicted_multiplicities"],
    )
    return report
