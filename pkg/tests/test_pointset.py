from fractions import Fraction as F

import numpy as np
import pytest

from sphdist import catalog, pointset
from sphdist.errors import (
    DegenerateValue,
    EmptySection,
    FieldMismatch,
    NonUnitNorm,
    NotADesign,
    NotSymmetric,
    PreconditionViolated,
    SizeLimitExceeded,
    StrengthTooLow,
)
from sphdist.exactnum import RATIONAL, FieldTag, QuadExt
from sphdist.harmonics import annihilator, gegenbauer, harm_dim, poly_mul, poly_scale
from sphdist.matrix import ExactMatrix


def pair():
    return pointset.load_config([[1, 0], [-1, 0]], "coords", 2)


def triangle():
    h = F(-1, 2)
    return pointset.load_config([[1, h, h], [h, 1, h], [h, h, 1]], "gram", 2)


def test_load_examples():
    assert pair().gram.tolist() == [[1, -1], [-1, 1]]
    assert triangle().n == 3
    dod = catalog.dodecahedron()
    assert dod.norm_sq == 3 and dod.gram.diagonal() == [1] * 20


def test_load_errors():
    with pytest.raises(NonUnitNorm):
        pointset.load_config([[1, 0], [0, 2]], "gram", 2)
    with pytest.raises(NotSymmetric):
        pointset.load_config([[1, F(1, 2)], [0, 1]], "gram", 2)
    with pytest.raises(NonUnitNorm):
        pointset.load_config([[1, 0], [1, 1]], "coords", 2)
    with pytest.raises(DegenerateValue):
        pointset.load_config([[1, 0], [1, 0]], "coords", 2)
    with pytest.raises(FieldMismatch):
        pointset.load_config([[QuadExt(1, 1, 2)]], "coords", 1, FieldTag(5))
    # rank 3 Gram claimed to live in R^2
    with pytest.raises(Exception, match="rank"):
        pointset.load_config([[1, 0, 0], [0, 1, 0], [0, 0, 1]], "gram", 2)


def test_inner_product_set_examples():
    for m in (2, 3, 5):
        d = pointset.inner_product_set(catalog.simplex(m))
        assert d.values == (F(-1, m),) and d.counts == ((m + 1) * m,)
        d = pointset.inner_product_set(catalog.cross_polytope(m))
        assert d.values == (-1, 0) and d.counts == (2 * m, 4 * m * (m - 1))


def test_distribution_invariants(leech_2025):
    for cfg in (catalog.dodecahedron(), catalog.cube(3), leech_2025):
        d = pointset.inner_product_set(cfg)
        assert sum(d.counts) == cfg.n * (cfg.n - 1)
        assert list(d.values) == sorted(d.values)


def test_moments_and_strength():
    assert pointset.design_moment(pair(), 1) == 0
    for m in (2, 4, 6):
        assert pointset.design_moment(catalog.simplex(m), 1) == 0
    assert pointset.strength(catalog.cross_polytope(3)).strength == 3
    assert pointset.strength(catalog.dodecahedron()).strength == 5
    assert pointset.strength(catalog.simplex(4)).strength == 2


def test_leech_strength(leech_2025):
    prof = pointset.strength(leech_2025)
    assert prof.strength == 4
    # moments holds S_1, S_2, ...
    assert all(x == 0 for x in prof.moments[:4]) and prof.moments[4] != 0
    assert pointset.design_moment(leech_2025, 5) != 0


@pytest.mark.parametrize("name", ["simplex", "cross-polytope", "cube", "dodecahedron"])
def test_moment_positivity_and_t_le_2s(name):
    cfg = catalog.baselines(name, 3) if name != "dodecahedron" else catalog.dodecahedron()
    s = pointset.inner_product_set(cfg).s
    for i in range(2 * s + 3):
        assert pointset.design_moment(cfg, i) >= 0
    assert pointset.strength(cfg).strength <= 2 * s


def test_d_matrix_examples():
    cfg = catalog.cross_polytope(3)
    assert pointset.d_matrix(cfg, 0) == ExactMatrix.ones(6)
    assert pointset.d_matrix(pair(), 1).tolist() == [[2, -2], [-2, 2]]
    assert pointset.d_matrix(cfg, 1) == cfg.gram.scale(3)
    for i in range(4):
        D = pointset.d_matrix(cfg, i)
        assert D.trace() == cfg.n * harm_dim(3, i)
        assert D.total() == pointset.design_moment(cfg, i)


def test_rank_examples():
    cfg = catalog.simplex(5)
    assert pointset.rank_exact(pointset.d_matrix(cfg, 0)) == 1
    assert pointset.rank_exact(pointset.d_matrix(cfg, 1)) == 5
    cp = catalog.cross_polytope(3)
    assert pointset.rank_exact(pointset.d_matrix(cp, 2)) <= 5


def test_rank_cap(monkeypatch):
    monkeypatch.setenv(pointset.RANK_CAP_ENV, "4")
    cfg = catalog.cross_polytope(3)
    with pytest.raises(SizeLimitExceeded):
        pointset.rank_exact(cfg.gram)
    assert pointset.rank_exact(cfg.gram, allow_large=True) == 3


def test_delsarte_examples():
    for m in (2, 3, 6):
        cfg = catalog.simplex(m)
        rep = pointset.delsarte_identity_check(cfg, annihilator([F(-1, m)]))
        assert rep.holds and rep.lhs == 0 and rep.rhs == 0
    rep = pointset.delsarte_identity_check(pair(), (F(1, 2), F(1, 2)))
    assert rep.lhs == 0 and rep.rhs == 0
    with pytest.raises(PreconditionViolated):
        pointset.delsarte_identity_check(pair(), (0, 1))


def test_delsarte_leech(leech_2025):
    vals = pointset.inner_product_set(leech_2025).values
    FX = annihilator(vals)
    rep = pointset.delsarte_identity_check(leech_2025, FX)
    # deg F_X = 3 < t = 4, so both sides vanish
    assert rep.holds and rep.lhs == 0
    G = poly_scale(poly_mul(gegenbauer(22, 2), FX), F(1, harm_dim(22, 2)))
    rep = pointset.delsarte_identity_check(leech_2025, G)
    assert rep.holds and rep.lhs != 0
    assert [k for k, v in rep.contributions.items() if v != 0] == [5]


def test_design_orthogonality():
    assert pointset.design_orthogonality_check(catalog.cross_polytope(3), 3)
    cp = catalog.cross_polytope(3)
    D1, D2 = pointset.d_matrix(cp, 1), pointset.d_matrix(cp, 2)
    assert (D1 @ D2).is_zero() and D1 @ D1 == D1.scale(6)
    with pytest.raises(NotADesign):
        pointset.design_orthogonality_check(catalog.cube(3), 4)


def test_design_orthogonality_leech(leech_2025):
    D2 = pointset.d_matrix(leech_2025, 2)
    assert D2 @ D2 == D2.scale(2025)
    assert pointset.design_orthogonality_check(leech_2025, 4)


def test_annihilator_audit(leech_2025):
    rep = pointset.annihilator_coeff_audit(leech_2025)
    inv = F(1, 2025)
    assert rep["coeffs"][0] == rep["coeffs"][1] == inv and rep["coeffs"][2] != inv
    assert rep["witness_differs"] and rep["forced_hold"]
    m = 4
    rep = pointset.annihilator_coeff_audit(catalog.simplex(m))
    assert rep["coeffs"][0] == F(1, m + 1)
    rep = pointset.annihilator_coeff_audit(catalog.dodecahedron())
    assert rep["coeffs"][1] != F(1, 20)


def test_annihilator_audit_needs_strength():
    # 4 of the 6 cross-polytope points: 2-distance, not even a 1-design
    cfg = pointset.load_config([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, 0, 1]], "coords", 3)
    with pytest.raises(StrengthTooLow):
        pointset.annihilator_coeff_audit(cfg)


def test_identity_decomposition():
    for cfg in (catalog.simplex(3), catalog.cross_polytope(4), catalog.dodecahedron(), catalog.cube(3)):
        assert pointset.identity_decomposition_check(cfg)


@pytest.mark.parametrize("cfg", [catalog.simplex(4), catalog.cross_polytope(3), catalog.cube(3), catalog.dodecahedron()],
                         ids=lambda c: c.name)
def test_rank_lemmas(cfg):
    dims = pointset.lemma_dim_check(cfg)
    assert all(r <= h for r, h in dims.values())
    assert pointset.lemma_neg_check(cfg) == cfg.n
    assert all(pointset.lemma_reduce_check(cfg).values())


def test_antipodal():
    ok, sigma = pointset.antipodal_check(catalog.cross_polytope(3))
    assert ok and all(sigma[sigma[x]] == x for x in range(6))
    assert not pointset.antipodal_check(catalog.simplex(3))[0]
    ok, sigma = pointset.antipodal_check(catalog.dodecahedron())
    assert ok and len({frozenset((x, sigma[x])) for x in range(20)}) == 10


def test_affine_section_cube():
    cube = catalog.cube(3)
    sq = pointset.affine_section(cube, [0, 0, 1], None, F(1, 3))
    assert sq.n == 4 and sq.m == 2
    assert pointset.inner_product_set(sq).values == (-1, 0)


def test_affine_section_degenerate():
    from sphdist.catalog import leech_minimal_vectors
    V = leech_minimal_vectors().vectors
    amb = pointset.SphericalConfig(24, coords=ExactMatrix(V[:2000]), norm_sq=32)
    with pytest.raises(EmptySection):
        pointset.affine_section(amb, V[0].tolist(), None, F(1))


def test_leech_gram_denominator(leech_2025):
    # normalised by r^2 = 352/15: all entries have denominator dividing 44
    assert 44 % leech_2025.gram.den == 0
