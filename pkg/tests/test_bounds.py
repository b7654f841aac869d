from math import comb

import pytest

from sphdist import bounds, catalog
from sphdist.errors import RangeError
from sphdist.harmonics import harm_dim


def h(m, i):
    return harm_dim(m, i)


def test_delta_conventions():
    assert [bounds.delta(s) for s in range(5)] == [0, 1, 0, 1, 0]
    # floor(s - i/2) at both parities of i
    assert bounds.middle_range(3, 2) == range(2, 3)
    assert bounds.middle_range(3, 3) == range(1, 2)
    assert bounds.middle_range(4, 3) == range(2, 3)


def test_absolute_and_lower():
    for m in (2, 5, 9):
        assert bounds.absolute_bound_sdist(m, 1) == 1 + m
        assert bounds.design_lower_bound(m, 0) == 1
    assert bounds.absolute_bound_sdist(22, 3) == 2277
    assert bounds.absolute_bound_sdist(3, 2) == 9
    assert bounds.design_lower_bound(22, 2) == 275
    assert bounds.design_lower_bound(3, 1) == 4


def test_main_bound():
    for m in (3, 7, 22):
        for s in (2, 3, 4):
            for i in range(2, 2 * s + 1):
                lo, hi = max(s - i + 1, 0), (2 * s - i) // 2
                full = list(range(lo, hi + 1))
                assert bounds.main_bound(m, s, i, full) == bounds.absolute_bound_sdist(m, s)
    assert bounds.main_bound(22, 3, 2, []) == 1 + 22 + 2002 == 2025
    for m in (3, 8):
        assert bounds.main_bound(m, 2, 2, []) == h(m, 0) + h(m, 2)
    with pytest.raises(RangeError):
        bounds.main_bound(5, 2, 1, [])
    with pytest.raises(RangeError):
        bounds.main_bound(5, 2, 5, [])


def test_corollary_bound():
    assert bounds.corollary_bound(22, 3, 2) == 2277 - 252 == 2025
    for m in (3, 6):
        assert bounds.corollary_bound(m, 2, 2) == h(m, 0) + h(m, 2)
    assert bounds.corollary_bound(3, 2, 3) == 8
    with pytest.raises(RangeError):
        bounds.corollary_bound(3, 2, 4)


def test_antipodal_bound():
    assert bounds.antipodal_bound(3, 5, 2) == 20
    for m in (3, 5):
        assert bounds.antipodal_bound(m, 2, 1) == 2 * h(m, 2)
    assert bounds.antipodal_bound(3, 5, 3) == 28
    with pytest.raises(RangeError):
        bounds.antipodal_bound(3, 5, 1)
    with pytest.raises(RangeError):
        bounds.antipodal_bound(3, 4, 5)


def test_s0_bound():
    assert bounds.s0_bound(22, 3, 1) == (2, comb(21, 0) + comb(24, 3)) == (2, 2025)
    assert bounds.s0_bound(4, 2, 0) == (3, 10) and h(4, 0) + h(4, 2) == 10
    for m in (3, 6):
        for s in (1, 2, 4):
            assert bounds.s0_bound(m, s, s) == (1, 2 * comb(m + s - 2, s - 1))
    with pytest.raises(RangeError):
        bounds.s0_bound(4, 2, 3)


def test_consistency_grid():
    for m in range(2, 26):
        for s in range(1, 7):
            for i in range(2, s + 2):
                flags = [k for k in range(max(s - i + 1, 0), (2 * s - i) // 2 + 1) if k != s - i + 1]
                assert bounds.corollary_bound(m, s, i) == bounds.main_bound(m, s, i, flags)
            for i in range(2, 2 * s + 1):
                assert bounds.main_bound(m, s, i, []) <= bounds.absolute_bound_sdist(m, s)
            for l in range(s + 1):
                assert bounds.s0_bound(m, s, l)[1] == bounds.s0_hsum(m, s, l)
        for s in range(9):
            assert comb(m + s - 1, s) == sum(h(m, i) for i in range(s % 2, s + 1, 2))


def test_evaluate_out_of_range_not_clamped():
    reps = {r.name: r for r in bounds.evaluate(3, 2, t=3)}
    assert not reps["main_bound"].applicable and reps["main_bound"].value is None


def test_audit_leech(leech_2025, leech_scheme):
    reps = {r.name: r for r in bounds.audit(leech_2025, krein_data=leech_scheme[0])}
    assert reps["corollary_bound"].attained and reps["s0_bound"].attained
    assert reps["main_bound"].hypothesis["flags"] == [0, 1]
    assert not reps["absolute_bound_sdist"].attained


def test_audit_dodecahedron():
    reps = {r.name: r for r in bounds.audit(catalog.dodecahedron())}
    assert reps["antipodal_bound"].attained and reps["antipodal_bound"].value == 20
    assert reps["antipodal_bound"].hypothesis["i"] == 2
    assert [n for n, r in reps.items() if r.attained] == ["antipodal_bound"]


def test_audit_simplex():
    reps = {r.name: r for r in bounds.audit(catalog.simplex(4))}
    # the simplex is a tight 2-design; every bound it meets equals 1 + m
    attained = sorted(n for n, r in reps.items() if r.attained)
    assert attained == ["absolute_bound_sdist", "design_lower_bound", "s0_bound"]
    assert all(reps[n].value == 5 for n in attained)
    assert not reps["main_bound"].applicable and not reps["corollary_bound"].applicable


def test_audit_cube_no_violation():
    reps = bounds.audit(catalog.cube(3))
    for r in reps:
        if r.applicable and r.kind == "upper":
            assert r.value >= 8


def test_violation_is_loud():
    with pytest.raises(AssertionError):
        bounds.evaluate(2, 1, n=4)


def test_h_table():
    assert bounds.h_table([3, 4], 2) == [[1, 3, 5], [1, 4, 9]]
