"""Finite spherical configurations analysed through their exact Gram matrix.

Everything degree-dependent goes through the addition formula: the matrix
``D_i = H_i H_i^t`` has entries ``G_i(<x, y>)``, so harmonic bases are never
built.  Moments are taken from the distance distribution rather than from
n^2 polynomial evaluations.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DegenerateValue,
    EmptySection,
    InconsistentNorm,
    InputError,
    InvariantViolation,
    NonUnitNorm,
    NotADesign,
    NotSymmetric,
    PreconditionViolated,
    SizeLimitExceeded,
    StrengthTooLow,
)
from .exactnum import RATIONAL, FieldTag, QuadExt, promote, sign
from .harmonics import (
    GegenbauerExpansion,
    annihilator,
    eval_poly,
    expand_in_gegenbauer,
    gegenbauer,
    harm_dim,
    shifted_product_expansion,
)
from .matrix import ExactMatrix, bareiss_rank, psd_rank

DEFAULT_RANK_CAP = 512
RANK_CAP_ENV = "SPHDIST_EXACT_RANK_CAP"
# full PSD/rank validation of an input Gram matrix is skipped above this size
VALIDATE_CAP = 256


def exact_rank_cap() -> int:
    raw = os.environ.get(RANK_CAP_ENV)
    return int(raw) if raw else DEFAULT_RANK_CAP


class SphericalConfig:
    """Point set on S^{m-1}.

    ``coords`` (optional) satisfies ``coords @ coords.T == norm_sq * gram``;
    coordinates need not be unit vectors because normalising would leave the
    field (the dodecahedron has squared norm 3).  The Gram matrix is derived
    from the coordinates on first use when not supplied.
    """

    def __init__(
        self,
        m: int,
        gram: Optional[ExactMatrix] = None,
        coords: Optional[ExactMatrix] = None,
        norm_sq=Fraction(1),
        field: Optional[FieldTag] = None,
        name: str = "",
    ):
        if gram is None and coords is None:
            raise InputError("need a Gram matrix or coordinates")
        self.m = int(m)
        self._gram = gram
        self.coords = coords
        self.norm_sq = norm_sq if isinstance(norm_sq, QuadExt) else Fraction(norm_sq)
        src = gram if gram is not None else coords
        self.field = field if field is not None else src.field
        self.name = name
        self._classes = None
        self._dist = None

    @property
    def n(self) -> int:
        return (self._gram if self._gram is not None else self.coords).shape[0]

    @property
    def gram(self) -> ExactMatrix:
        if self._gram is None:
            self._gram = (self.coords @ self.coords.T).scale(1 / self.norm_sq)
        return self._gram

    def classes(self):
        """Distinct Gram entries (diagonal included) and the entry -> value index map."""
        if self._classes is None:
            self._classes = self.gram.classes()
        return self._classes

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"SphericalConfig{label}(n={self.n}, m={self.m}, field={self.field})"


@dataclass(frozen=True)
class DistanceDistribution:
    values: Tuple
    counts: Tuple[int, ...]

    @property
    def s(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class DesignProfile:
    moments: Tuple  # S_1 .. S_T
    strength: int

    @property
    def T(self) -> int:
        return len(self.moments)


# -- construction and validation -------------------------------------------------

def _validate_gram(gram: ExactMatrix, m: int, check_psd: bool):
    n = gram.shape[0]
    if gram.shape != (n, n):
        raise NotSymmetric(f"Gram matrix is not square: {gram.shape}")
    if not gram.is_symmetric():
        raise NotSymmetric("Gram matrix is not symmetric")
    for x, v in enumerate(gram.diagonal()):
        if v != 1:
            raise NonUnitNorm(f"point {x} has squared norm {v}")
    values, index = gram.classes()
    off = np.ones((n, n), dtype=bool)
    np.fill_diagonal(off, False)
    used = np.unique(index[off]) if n > 1 else []
    for k in used:
        a = values[k]
        if a == 1:
            raise DegenerateValue("repeated point (off-diagonal inner product 1)")
        if a > 1 or a < -1:
            raise NonUnitNorm(f"inner product {a} outside [-1, 1]")
    if check_psd and n <= VALIDATE_CAP:
        if gram.d is None:
            ok, r = _psd_rank_int(gram.integer_form())
        else:
            ok, r = psd_rank(gram.scalar_array())
        if not ok:
            raise InputError("Gram matrix is not positive semidefinite")
        if r > m:
            raise InputError(f"Gram matrix has rank {r} > dim {m}")


def _psd_rank_int(M: np.ndarray):
    """Fraction-free symmetric elimination on diagonal pivots (integer input)."""
    n = M.shape[0]
    active = list(range(n))
    prev = 1
    rank = 0
    while active:
        k = active.pop(0)
        p = M[k, k]
        if p < 0:
            return False, rank
        if p == 0:
            if active and any(M[k, j] != 0 for j in active):
                return False, rank
            continue
        rank += 1
        if active:
            idx = np.array(active)
            blk = np.ix_(idx, idx)
            col = M[idx, k]
            M[blk] = (M[blk] * p - np.outer(col, col)) // prev
        prev = p
    return True, rank


def load_config(rows: Sequence[Sequence], kind: str, m: int, field: FieldTag = RATIONAL,
                name: str = "", check_psd: bool = True) -> SphericalConfig:
    """Build a validated configuration from scalar rows.

    ``kind="gram"``: rows form the Gram matrix.  ``kind="coords"``: rows are
    point coordinates in R^m; a common squared norm other than 1 is divided out
    of the Gram matrix.
    """
    return config_from_matrix(ExactMatrix.from_rows(rows, field), kind, m, field, name, check_psd)


def config_from_matrix(mat: ExactMatrix, kind: str, m: int, field: FieldTag = RATIONAL,
                       name: str = "", check_psd: bool = True) -> SphericalConfig:
    if kind == "gram":
        _validate_gram(mat, m, check_psd)
        return SphericalConfig(m, gram=mat, field=field, name=name)
    if kind != "coords":
        raise InputError(f"unknown kind {kind!r}")
    if mat.shape[1] != m:
        raise InputError(f"coordinate rows have {mat.shape[1]} entries, expected {m}")
    raw = mat @ mat.T
    norms = raw.diagonal()
    ns = norms[0]
    for x, v in enumerate(norms):
        if v != ns:
            raise NonUnitNorm(f"point {x} has squared norm {v}, point 0 has {ns}")
    if ns == 0:
        raise NonUnitNorm("zero vector")
    gram = raw.scale(1 / ns)
    _validate_gram(gram, m, check_psd)
    return SphericalConfig(m, gram=gram, coords=mat, norm_sq=ns, field=field, name=name)


# -- distance data ---------------------------------------------------------------

def inner_product_set(config: SphericalConfig) -> DistanceDistribution:
    if config._dist is not None:
        return config._dist
    n = config.n
    if n < 2:
        raise InputError("need at least two points")
    values, index = config.classes()
    counts = np.bincount(index.ravel(), minlength=len(values))
    diag = np.bincount(np.diagonal(index), minlength=len(values))
    counts = counts - diag
    pairs = [(values[k], int(counts[k])) for k in range(len(values)) if counts[k] > 0]
    pairs.sort(key=lambda p: p[0])
    dist = DistanceDistribution(tuple(v for v, _ in pairs), tuple(c for _, c in pairs))
    config._dist = dist
    return dist


def design_moment(config: SphericalConfig, i: int):
    """S_i = sum over ordered pairs (x, y), diagonal included, of G_i(<x, y>)."""
    if i < 0:
        raise InputError("degree must be >= 0")
    g = gegenbauer(config.m, i)
    dist = inner_product_set(config)
    total = config.n * eval_poly(g, 1)
    for a, c in zip(dist.values, dist.counts):
        total = total + c * eval_poly(g, a)
    return total


def strength(config: SphericalConfig, T_max: Optional[int] = None) -> DesignProfile:
    """Largest t <= T_max with S_1 = ... = S_t = 0 (default T_max = 2s + 1)."""
    if T_max is None:
        T_max = 2 * inner_product_set(config).s + 1
    if T_max < 1:
        raise InputError("T_max must be >= 1")
    moments = []
    t = None
    for i in range(1, T_max + 1):
        S = design_moment(config, i)
        if sign(S) < 0:
            raise InvariantViolation(f"negative moment S_{i} = {S}")
        moments.append(S)
        if S != 0 and t is None:
            t = i - 1
            break
    if t is None:
        t = T_max
    return DesignProfile(tuple(moments), t)


def d_matrix(config: SphericalConfig, i: int) -> ExactMatrix:
    """D_i with entries G_i(<x, y>)."""
    g = gegenbauer(config.m, i)
    values, index = config.classes()
    return ExactMatrix.from_lookup([eval_poly(g, v) for v in values], index, config.field)


def rank_exact(matrix: ExactMatrix, allow_large: bool = False) -> int:
    n = max(matrix.shape)
    cap = exact_rank_cap()
    if n > cap and not allow_large:
        raise SizeLimitExceeded(f"exact rank of a {n}x{n} matrix exceeds the cap {cap}")
    r = bareiss_rank(matrix.integer_form())
    return r if matrix.d is None else r // 2


# -- identities from the theory ---------------------------------------------------

@dataclass
class DelsarteReport:
    n: int
    coeffs: Tuple
    lhs: object
    rhs: object
    contributions: Dict[int, object]

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def delsarte_identity_check(config: SphericalConfig, F: Sequence) -> DelsarteReport:
    """n(1 - n f_0) = sum_{k>=1} f_k S_k for F vanishing on A(X) with F(1) = 1."""
    dist = inner_product_set(config)
    for a in dist.values:
        if eval_poly(F, a) != 0:
            raise PreconditionViolated(f"F does not vanish at {a}")
    if eval_poly(F, 1) != 1:
        raise PreconditionViolated("F(1) != 1")
    exp = expand_in_gegenbauer(F, config.m)
    n = config.n
    contrib = {k: exp[k] * design_moment(config, k) for k in range(1, len(exp))}
    rhs = sum(contrib.values(), Fraction(0))
    lhs = n * (1 - n * exp[0])
    return DelsarteReport(n, exp.coeffs, lhs, rhs, contrib)


def design_orthogonality_check(config: SphericalConfig, t: int) -> bool:
    """D_k D_l == n * delta_{kl} * D_k for all k + l <= t."""
    prof = strength(config, max(t, 1))
    if prof.strength < t:
        raise NotADesign(f"configuration has strength {prof.strength} < {t}")
    n = config.n
    D = {k: d_matrix(config, k) for k in range(t + 1)}
    for k in range(t + 1):
        for l in range(k, t - k + 1):
            prod = D[k] @ D[l]
            if k == l:
                if prod != D[k].scale(n):
                    return False
            elif not prod.is_zero():
                return False
    return True


def annihilator_polynomial(config: SphericalConfig):
    return annihilator(inner_product_set(config).values)


def annihilator_expansion(config: SphericalConfig) -> GegenbauerExpansion:
    return expand_in_gegenbauer(annihilator_polynomial(config), config.m)


def annihilator_coeff_audit(config: SphericalConfig, profile: Optional[DesignProfile] = None) -> dict:
    """Which Gegenbauer coefficients of F_X equal 1/|X|, with the two proven constraints."""
    dist = inner_product_set(config)
    s = dist.s
    prof = profile or strength(config)
    t = prof.strength
    if t < s - 1:
        raise StrengthTooLow(f"strength {t} < s - 1 = {s - 1}")
    exp = annihilator_expansion(config)
    inv = Fraction(1, config.n)
    flags = [exp[k] == inv for k in range(s + 1)]
    i = 2 * s - t
    witness = t - s + 1
    lemma_ok = exp[witness] != inv
    remark_js = list(range(0, s - i + 1)) if s - i >= 0 else []
    remark_ok = all(flags[j] for j in remark_js)
    if not lemma_ok:
        raise InvariantViolation(f"f_{witness} = 1/|X| contradicts strength {t}")
    if not remark_ok:
        raise InvariantViolation(f"expected f_j = 1/|X| for j <= {s - i}")
    return {
        "s": s,
        "t": t,
        "i": i,
        "coeffs": exp.coeffs,
        "equals_inverse_size": flags,
        "witness_index": witness,
        "witness_differs": lemma_ok,
        "forced_indices": remark_js,
        "forced_hold": remark_ok,
    }


def identity_decomposition_check(config: SphericalConfig) -> bool:
    """I == sum_k f_k D_k for the annihilator coefficients f_k."""
    exp = annihilator_expansion(config)
    acc = ExactMatrix.zeros(config.n, field=config.field)
    for k, f in enumerate(exp.coeffs):
        if f != 0:
            acc = acc + d_matrix(config, k).scale(f)
    return acc == ExactMatrix.identity(config.n, config.field)


def lemma_dim_check(config: SphericalConfig, K: Optional[int] = None, allow_large: bool = False) -> Dict[int, Tuple[int, int]]:
    """rank D_i <= h_i for i <= K (default s); returns {i: (rank, h_i)}."""
    if K is None:
        K = inner_product_set(config).s
    out = {}
    for i in range(K + 1):
        r = rank_exact(d_matrix(config, i), allow_large)
        out[i] = (r, harm_dim(config.m, i))
        if r > out[i][1]:
            raise InvariantViolation(f"rank D_{i} = {r} > h_{i} = {out[i][1]}")
    return out


def lemma_neg_check(config: SphericalConfig, allow_large: bool = False) -> int:
    """Rank of the sum of D_k over positive coefficients f_k; must equal n."""
    exp = annihilator_expansion(config)
    acc = ExactMatrix.zeros(config.n, field=config.field)
    for k, f in enumerate(exp.coeffs):
        if sign(f) > 0:
            acc = acc + d_matrix(config, k)
    r = rank_exact(acc, allow_large)
    if r != config.n:
        raise InvariantViolation(f"positive-coefficient D-sum has rank {r} < {config.n}")
    return r


def lemma_reduce_check(config: SphericalConfig, profile: Optional[DesignProfile] = None,
                       allow_large: bool = False) -> Dict[int, bool]:
    """Column space of D_j inside that of the tail sum W, for every eligible j."""
    s = inner_product_set(config).s
    t = (profile or strength(config)).strength
    i = 2 * s - t
    if not 2 <= i <= 2 * s:
        return {}
    exp = annihilator_expansion(config)
    inv = Fraction(1, config.n)
    lo = (2 * s - i) // 2 + 1
    W = ExactMatrix.zeros(config.n, field=config.field)
    for k in range(lo, s + 1):
        W = W + d_matrix(config, k)
    rw = rank_exact(W, allow_large)
    out = {}
    for j in range(max(s - i + 1, 0), (2 * s - i) // 2 + 1):
        if exp[j] == inv:
            continue
        ok = rank_exact(W + d_matrix(config, j), allow_large) == rw
        out[j] = ok
        if not ok:
            raise InvariantViolation(f"column space of D_{j} not inside W")
    return out


# -- constructions ---------------------------------------------------------------

def antipodal_check(config: SphericalConfig):
    """(True, sigma) when x -> sigma(x) pairs every point with its negative."""
    g = config.gram
    hit = g.a == -g.den
    if g.b is not None:
        hit &= g.b == 0
    per_row = hit.sum(axis=1)
    if not np.all(per_row == 1):
        return False, None
    sigma = [int(j) for j in np.argmax(hit, axis=1)]
    return True, sigma


def _vec(v, field) -> ExactMatrix:
    return ExactMatrix.from_rows([[x] for x in v], field)


def submatrix(mat: ExactMatrix, rows, cols=None) -> ExactMatrix:
    cols = rows if cols is None else cols
    ix = np.ix_(rows, cols)
    return ExactMatrix(mat.a[ix], None if mat.b is None else mat.b[ix], mat.den, mat.d)


def affine_section(ambient: SphericalConfig, u: Sequence, v: Optional[Sequence], c_u, c_v=None,
                   name: str = "") -> SphericalConfig:
    """Points with <x,u> = c_u and <x,v> = c_v, re-centred and rescaled to a sphere.

    Inner products are measured in the coordinates' own scaling divided by the
    common squared norm, so for ``u`` on the same sphere ``c_u`` is the usual
    normalised inner product.
    """
    if ambient.coords is None:
        raise InputError("affine_section needs coordinates")
    X = ambient.coords
    fld = ambient.field
    ns = ambient.norm_sq
    cons = [(list(u), c_u)] + ([(list(v), c_v)] if v is not None else [])
    mask = np.ones(X.shape[0], dtype=bool)
    for vec, c in cons:
        ip = X @ _vec(vec, fld)
        target = ExactMatrix.from_rows([[promote(c, fld) * ns]], fld)
        if ip.d is None and target.d is None:
            mask &= (ip.a[:, 0] * target.den == target.a[0, 0] * ip.den)
        else:
            mask &= np.array([ip.entry(x, 0) == target.entry(0, 0) for x in range(ip.shape[0])])
    sel = np.nonzero(mask)[0]
    if sel.size < 2:
        raise EmptySection(f"section selects {sel.size} point(s)")
    # projection p = sum alpha_k w_k solved from the constraint Gram system
    W = [vec for vec, _ in cons]
    G = [[sum(a * b for a, b in zip(w1, w2)) for w2 in W] for w1 in W]
    rhs = [promote(c, fld) * ns for _, c in cons]
    if len(W) == 1:
        if G[0][0] == 0:
            raise InputError("zero constraint vector")
        alpha = [rhs[0] / G[0][0]]
    else:
        det = G[0][0] * G[1][1] - G[0][1] * G[1][0]
        if det == 0:
            raise InputError("constraint vectors are linearly dependent")
        alpha = [(rhs[0] * G[1][1] - rhs[1] * G[0][1]) / det, (G[0][0] * rhs[1] - G[1][0] * rhs[0]) / det]
    p = [sum(alpha[k] * W[k][c] for k in range(len(W))) for c in range(X.shape[1])]
    p_sq = sum(alpha[k] * rhs[k] for k in range(len(W)))
    Xs = submatrix(X, sel, np.arange(X.shape[1]))
    raw = Xs @ Xs.T
    norms = raw.diagonal()
    for x, nv in enumerate(norms):
        if nv != norms[0]:
            raise InconsistentNorm(f"residual norms differ at selected point {x}")
    r_sq = norms[0] - p_sq
    if sign(r_sq) <= 0:
        raise EmptySection("section degenerates to the constraint point itself")
    R = Xs - ExactMatrix.from_rows([p] * len(sel), fld)
    for vec, _ in cons:
        if not (R @ _vec(vec, fld)).is_zero():
            raise InvariantViolation("residual not orthogonal to a constraint vector")
    gram = (raw - ExactMatrix.ones(len(sel), field=fld).scale(p_sq)).scale(1 / r_sq)
    return SphericalConfig(ambient.m - len(cons), gram=gram, coords=R, norm_sq=r_sq, field=fld, name=name)
