"""Deterministic constructors for every witness object.

The Leech lattice is handled in the integer scaling where minimal vectors
have squared norm 32; normalised inner products are ``ip / 32`` and the
unit sphere is only reached in Gram space.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import ConstructionInvariantViolated, RangeError
from .exactnum import RATIONAL, FieldTag, QuadExt
from .matrix import ExactMatrix
from .pointset import SphericalConfig, affine_section, load_config
from .schemes import AssociationScheme, verify_scheme

# Extended binary Golay code: cyclic shifts of g(x) = 1 + x^2 + x^4 + x^5 + x^6
# + x^10 + x^11 over 23 coordinates, followed by an overall parity bit.
GOLAY_GENERATOR = (
    "101011100011000000000001",
    "010101110001100000000001",
    "001010111000110000000001",
    "000101011100011000000001",
    "000010101110001100000001",
    "000001010111000110000001",
    "000000101011100011000001",
    "000000010101110001100001",
    "000000001010111000110001",
    "000000000101011100011001",
    "000000000010101110001101",
    "000000000001010111000111",
)

GOLAY_WEIGHTS = {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}
LEECH_NORM_SQ = 32
LEECH_KISSING = 196560
LEECH_SHAPE_COUNTS = (1104, 97152, 98304)


@dataclass(frozen=True)
class GolayCode:
    generator: np.ndarray
    codewords: np.ndarray

    def weight_enumerator(self) -> dict:
        w, c = np.unique(self.codewords.sum(axis=1), return_counts=True)
        return {int(a): int(b) for a, b in zip(w, c)}


@lru_cache(maxsize=None)
def golay() -> GolayCode:
    G = np.array([[int(ch) for ch in row] for row in GOLAY_GENERATOR], dtype=np.int64)
    msgs = np.array(list(itertools.product((0, 1), repeat=12)), dtype=np.int64)
    words = (msgs @ G) % 2
    code = GolayCode(G, words)
    if code.weight_enumerator() != GOLAY_WEIGHTS:
        raise ConstructionInvariantViolated(f"Golay weight enumerator {code.weight_enumerator()}")
    return code


@dataclass(frozen=True)
class LatticeVectorSet:
    vectors: np.ndarray
    norm_sq: int
    shape_counts: tuple

    def __len__(self):
        return len(self.vectors)


def leech_member(V: np.ndarray, code: GolayCode) -> np.ndarray:
    """Congruence test for the integer-scaled Leech lattice, row by row.

    x is in the lattice iff all x_i share a parity m, the positions with
    x_i = 2 + m (mod 4) form a Golay codeword, and sum x_i = 4m (mod 8).
    """
    weights = 1 << np.arange(23, -1, -1, dtype=np.int64)
    codeset = set((code.codewords @ weights).tolist())
    m = V[:, 0] & 1
    same_parity = ((V & 1) == m[:, None]).all(axis=1)
    support = ((V - 2 - m[:, None]) % 4 == 0).astype(np.int64) @ weights
    in_code = np.fromiter((int(k) in codeset for k in support), dtype=bool, count=len(V))
    sum_ok = (V.sum(axis=1) - 4 * m) % 8 == 0
    return same_parity & in_code & sum_ok


def _shape_candidates(code: GolayCode):
    # (+-4, +-4, 0^22)
    s1 = []
    for i, j in itertools.combinations(range(24), 2):
        for a, b in itertools.product((4, -4), repeat=2):
            v = np.zeros(24, dtype=np.int64)
            v[i], v[j] = a, b
            s1.append(v)
    # (+-2^8, 0^16) on octads, every sign pattern
    signs = np.array(list(itertools.product((2, -2), repeat=8)), dtype=np.int64)
    s2 = []
    for word in code.codewords[code.codewords.sum(axis=1) == 8]:
        V = np.zeros((len(signs), 24), dtype=np.int64)
        V[:, np.nonzero(word)[0]] = signs
        s2.append(V)
    # (-+3, +-1^23): sign pattern from a codeword, both signs of the 3
    base = np.where(code.codewords == 1, -1, 1)
    s3 = np.repeat(base, 48, axis=0)
    pos = np.tile(np.repeat(np.arange(24), 2), len(base))
    val = np.tile(np.array([3, -3]), 24 * len(base))
    s3[np.arange(len(s3)), pos] = val
    return np.array(s1), np.vstack(s2), s3


@lru_cache(maxsize=None)
def leech_minimal_vectors() -> LatticeVectorSet:
    """All 196560 minimal vectors, sorted lexicographically."""
    code = golay()
    kept = []
    for cand in _shape_candidates(code):
        kept.append(cand[leech_member(cand, code)])
    counts = tuple(len(k) for k in kept)
    V = np.vstack(kept)
    if len(V) != LEECH_KISSING or np.any((V * V).sum(axis=1) != LEECH_NORM_SQ):
        raise ConstructionInvariantViolated(f"Leech minimal vectors: {len(V)} (shapes {counts})")
    V = V[np.lexsort(V.T[::-1])]
    V.setflags(write=False)
    return LatticeVectorSet(V, LEECH_NORM_SQ, counts)


def leech_inner_products(rows: Sequence[int]) -> set:
    """Inner products (in units of 1/32) of the given rows against every minimal vector."""
    V = leech_minimal_vectors().vectors
    out = set()
    for r in rows:
        out |= set(np.unique(V @ V[r]).tolist())
    return out


def leech_section_pair(u_index: int = 0, v_choice: int = 0):
    """Indices (u, v) with <u, v> = -1/4; v is the v_choice-th admissible partner of u."""
    V = leech_minimal_vectors().vectors
    partners = np.nonzero(V @ V[u_index] == -LEECH_NORM_SQ // 4)[0]
    if v_choice >= len(partners):
        raise RangeError(f"u has only {len(partners)} partners at inner product -1/4")
    return u_index, int(partners[v_choice])


def leech_derived_2025(u_index: int = 0, v_choice: int = 0) -> SphericalConfig:
    """{x : <x,u> = 1/2, <x,v> = 0} projected onto the orthogonal complement of u, v."""
    V = leech_minimal_vectors().vectors
    ui, vi = leech_section_pair(u_index, v_choice)
    ambient = SphericalConfig(24, coords=ExactMatrix(V, None, 1, None, _normalized=True), norm_sq=LEECH_NORM_SQ)
    cfg = affine_section(ambient, V[ui].tolist(), V[vi].tolist(), Fraction(1, 2), Fraction(0), name="leech-derived-2025")
    if cfg.n != 2025:
        raise ConstructionInvariantViolated(f"section has {cfg.n} points")
    return cfg


def dodecahedron() -> SphericalConfig:
    """20 vertices over Q(sqrt 5); raw squared norm 3."""
    d = 5
    phi = QuadExt(Fraction(1, 2), Fraction(1, 2), d)
    inv_phi = phi - 1
    one = QuadExt(1, 0, d)
    zero = QuadExt(0, 0, d)
    rows = [[one * a, one * b, one * c] for a, b, c in itertools.product((1, -1), repeat=3)]
    for sa, sb in itertools.product((1, -1), repeat=2):
        base = [zero, inv_phi * sa, phi * sb]
        for shift in range(3):
            rows.append(base[-shift:] + base[:-shift] if shift else list(base))
    return load_config(rows, "coords", 3, FieldTag(d), name="dodecahedron")


def simplex(m: int) -> SphericalConfig:
    if m < 2:
        raise RangeError("simplex needs m >= 2")
    n = m + 1
    rows = [[Fraction(1) if x == y else Fraction(-1, m) for y in range(n)] for x in range(n)]
    return load_config(rows, "gram", m, RATIONAL, name=f"simplex-{m}")


def cross_polytope(m: int) -> SphericalConfig:
    if m < 2:
        raise RangeError("cross_polytope needs m >= 2")
    rows = []
    for i in range(m):
        for sgn in (1, -1):
            rows.append([Fraction(sgn if j == i else 0) for j in range(m)])
    return load_config(rows, "coords", m, RATIONAL, name=f"cross-polytope-{m}")


def cube(m: int) -> SphericalConfig:
    if m < 2:
        raise RangeError("cube needs m >= 2")
    rows = [[Fraction(x) for x in pt] for pt in itertools.product((1, -1), repeat=m)]
    return load_config(rows, "coords", m, RATIONAL, name=f"cube-{m}")


def triangular_relations(n: int) -> np.ndarray:
    """Pairs of 2-subsets: 0 equal, 1 sharing one element, 2 disjoint."""
    if n < 4:
        raise RangeError("triangular scheme needs n >= 4")
    verts = list(itertools.combinations(range(n), 2))
    N = len(verts)
    R = np.zeros((N, N), dtype=np.int64)
    for x, a in enumerate(verts):
        for y, b in enumerate(verts):
            if x != y:
                R[x, y] = 1 if set(a) & set(b) else 2
    return R


def cycle_relations(n: int) -> np.ndarray:
    if n < 3:
        raise RangeError("cycle scheme needs n >= 3")
    idx = np.arange(n)
    diff = np.abs(idx[:, None] - idx[None, :])
    return np.minimum(diff, n - diff).astype(np.int64)


def grid_relations(a: int, b: int) -> np.ndarray:
    """Direct product K_a x K_b: same row, same column, or neither."""
    if a < 2 or b < 2:
        raise RangeError("grid scheme needs a, b >= 2")
    cells = list(itertools.product(range(a), range(b)))
    N = len(cells)
    R = np.zeros((N, N), dtype=np.int64)
    for x, (r1, c1) in enumerate(cells):
        for y, (r2, c2) in enumerate(cells):
            if x != y:
                R[x, y] = 1 if r1 == r2 else 2 if c1 == c2 else 3
    return R


def triangular(n: int) -> AssociationScheme:
    return verify_scheme(triangular_relations(n))


def cycle(n: int) -> AssociationScheme:
    return verify_scheme(cycle_relations(n))


def grid(a: int, b: int) -> AssociationScheme:
    return verify_scheme(grid_relations(a, b))


CONFIGS = {
    "leech-derived-2025": leech_derived_2025,
    "dodecahedron": dodecahedron,
    "simplex": simplex,
    "cross-polytope": cross_polytope,
    "cube": cube,
}

SCHEMES = {
    "triangular": triangular,
    "cycle": cycle,
    "grid": grid,
}


def baselines(name: str, *params):
    """Configuration or scheme by catalog name."""
    key = name.replace("_", "-")
    if key in CONFIGS:
        return CONFIGS[key](*params)
    if key in SCHEMES:
        return SCHEMES[key](*params)
    raise RangeError(f"unknown catalog entry {name!r}")
