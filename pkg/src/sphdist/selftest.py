"""Exact invariant suites run by ``sphdist selftest``.

Each suite returns a ``SuiteResult``; a failed check is recorded rather than
raised so one run reports everything.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional

from . import bounds, catalog, pointset, schemes
from .harmonics import (
    GegenbauerExpansion,
    annihilator,
    degree,
    eval_poly,
    expand_in_gegenbauer,
    gegenbauer_basis,
    harm_dim,
    linearization,
    poly_mul,
    poly_scale,
    shifted_product_expansion,
)

SEED = 20240917


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: List[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, what: str):
        self.checks += 1
        if not ok:
            self.failures.append(what)


def gegenbauer_suite(max_m: int = 25, max_deg: int = 10) -> SuiteResult:
    res = SuiteResult("gegenbauer")
    for m in range(2, max_m + 1):
        basis = gegenbauer_basis(m, max_deg)
        for k in range(max_deg + 1):
            res.check(eval_poly(basis[k], 1) == harm_dim(m, k), f"G_{k}(1) != h_{k} at m={m}")
            if 1 <= k < max_deg:
                res.check(degree(basis.recurrence_residual(k)) == -1, f"recurrence residual at m={m}, k={k}")
        for i in range(max_deg + 1):
            for j in range(i, max_deg + 1 - i):
                c = linearization(m, i, j)
                res.check(all(x >= 0 for x in c), f"negative linearization m={m} ({i},{j})")
                res.check(c[0] == (harm_dim(m, i) if i == j else 0), f"c^0 wrong m={m} ({i},{j})")
    return res


def shifted_product_suite(trials: int = 100, seed: int = SEED, K: int = 10) -> SuiteResult:
    res = SuiteResult("shifted_product")
    rng = random.Random(seed)
    for _ in range(trials):
        m = rng.randint(2, 25)
        deg = rng.randint(0, 6)
        coeffs = tuple(Fraction(rng.randint(-20, 20), rng.randint(1, 12)) for _ in range(deg + 1))
        F = GegenbauerExpansion(m, coeffs)
        l = rng.randint(0, K - deg)
        g0 = shifted_product_expansion(F, l)[0]
        f_l = coeffs[l] if l <= deg else 0
        res.check(g0 == f_l, f"g_0 != f_l for m={m}, l={l}, F={coeffs}")
    return res


def identity_suite(configs) -> SuiteResult:
    """Delsarte identity for F_X and G_l F_X / h_l, plus design orthogonality."""
    res = SuiteResult("identities")
    for cfg in configs:
        prof = pointset.strength(cfg)
        F = annihilator(pointset.inner_product_set(cfg).values)
        rep = pointset.delsarte_identity_check(cfg, F)
        res.check(rep.holds, f"{cfg.name}: Delsarte identity for F_X")
        exp = expand_in_gegenbauer(F, cfg.m)
        for l in (1, 2):
            G = poly_scale(poly_mul(gegenbauer_basis(cfg.m, l)[l], F), Fraction(1, harm_dim(cfg.m, l)))
            rep = pointset.delsarte_identity_check(cfg, G)
            res.check(rep.holds, f"{cfg.name}: Delsarte identity for G_{l} F_X / h_{l}")
            res.check(rep.coeffs[0] == exp[l], f"{cfg.name}: g_0 != f_{l}")
        res.check(pointset.identity_decomposition_check(cfg), f"{cfg.name}: sum of D_k / h_k")
        res.check(pointset.design_orthogonality_check(cfg, prof.strength), f"{cfg.name}: D_k D_l orthogonality")
    return res


def lemma_rank_suite(configs) -> SuiteResult:
    res = SuiteResult("d_matrix_ranks")
    for cfg in configs:
        if cfg.n > pointset.exact_rank_cap():
            continue
        dims = pointset.lemma_dim_check(cfg)
        res.check(all(r <= h for r, h in dims.values()), f"{cfg.name}: rank D_i > h_i")
        res.check(pointset.lemma_neg_check(cfg) == cfg.n, f"{cfg.name}: positive D-sum not full rank")
        red = pointset.lemma_reduce_check(cfg)
        res.check(all(red.values()), f"{cfg.name}: column space containment")
    return res


def hadamard_suite(max_h: int = 3) -> SuiteResult:
    res = SuiteResult("hadamard_ranks")
    for label, sch in (("T(5)", catalog.triangular(5)), ("cross-polytope(3)", _cross_scheme(3)),
                       ("cross-polytope(4)", _cross_scheme(4))):
        _, spec = schemes.q_polynomial(schemes.idempotents(sch))
        attained = []
        for h in range(max_h + 1):
            rep = schemes.hadamard_rank_check(spec, h)
            res.check(rep["rank"] <= rep["bound"], f"{label}: rank E^o{h} above bound")
            if rep["attained"]:
                attained.append(h)
                res.check(all(r == b for r, b in rep["downward"].values()), f"{label}: downward equality at {h}")
        # equality always holds at h = 0 and h = 1
        res.check(attained[:2] == [0, 1], f"{label}: no equality at h <= 1")
    return res


def _cross_scheme(m: int):
    return schemes.from_distance_classes(catalog.cross_polytope(m))


def bound_consistency_suite(max_m: int = 25, max_s: int = 6) -> SuiteResult:
    res = SuiteResult("bound_consistency")
    for m in range(2, max_m + 1):
        for s in range(1, max_s + 1):
            absolute = bounds.absolute_bound_sdist(m, s)
            for i in range(2, s + 2):
                flags = [k for k in range(max(s - i + 1, 0), (2 * s - i) // 2 + 1) if k != s - i + 1]
                c = bounds.corollary_bound(m, s, i)
                res.check(c == bounds.main_bound(m, s, i, flags), f"corollary != main at m={m} s={s} i={i}")
            for i in range(2, 2 * s + 1):
                v = bounds.main_bound(m, s, i, [])
                res.check(v is None or v <= absolute, f"main above absolute at m={m} s={s} i={i}")
            for l in range(0, s):
                case, val = bounds.s0_bound(m, s, l)
                res.check(val == bounds.s0_hsum(m, s, l), f"s0 forms differ at m={m} s={s} l={l}")
    for m in range(2, max_m + 1):
        for s in range(0, 9):
            hs = sum(harm_dim(m, i) for i in range(s % 2, s + 1, 2))
            res.check(hs == bounds.comb(m + s - 1, s), f"binomial vs h-sum at m={m} s={s}")
    return res


def corpus_configs(include_leech: bool = True):
    small = [catalog.simplex(m) for m in (2, 3, 5, 8)]
    small += [catalog.cross_polytope(m) for m in (2, 3, 4, 6)]
    small += [catalog.cube(3), catalog.dodecahedron()]
    small.append(schemes.embedding_gram(schemes.q_polynomial(schemes.idempotents(catalog.triangular(5)))[1]))
    small[-1].name = "triangular-5-embedding"
    big = [catalog.leech_derived_2025()] if include_leech else []
    return small, big


def run(include_leech: bool = True, seed: int = SEED, log: Optional[Callable[[str], None]] = None) -> List[SuiteResult]:
    log = log or (lambda msg: None)
    small, big = corpus_configs(include_leech)
    identity_targets = [c for c in small if c.name.split("-")[0] in ("simplex", "cross", "dodecahedron")] + big
    plan = [
        ("gegenbauer", gegenbauer_suite),
        ("shifted_product", lambda: shifted_product_suite(seed=seed)),
        ("identities", lambda: identity_suite(identity_targets)),
        ("d_matrix_ranks", lambda: lemma_rank_suite(small)),
        ("hadamard_ranks", hadamard_suite),
        ("bound_consistency", bound_consistency_suite),
    ]
    out = []
    for name, fn in plan:
        t0 = time.perf_counter()
        res = fn()
        res.seconds = time.perf_counter() - t0
        status = "PASS" if res.passed else "FAIL"
        log(f"{status} {res.name}: {res.checks} checks in {res.seconds:.1f}s")
        for f in res.failures[:10]:
            log(f"    {f}")
        out.append(res)
    return out
