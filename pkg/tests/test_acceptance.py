"""Acceptance criteria 1-6, all exact (zero tolerance).

Each test prints one ``[PASS]``/``[FAIL]`` line, also under pytest capture.
Run directly with ``python tests/test_acceptance.py`` for the summary alone.
"""

import time
from fractions import Fraction as F

import pytest

from sphdist import bounds, catalog, cli, pointset, schemes, selftest
from sphdist.harmonics import harm_dim

B1STAR = [
    [0, 1, 0, 0],
    [22, 0, F(11, 6), 0],
    [0, 21, F(27, 22), F(30, 11)],
    [0, 0, F(625, 33), F(212, 11)],
]

_state = {}


def report(capsys, n, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)
    assert ok, line


def _leech_pipeline(tmp_dir):
    """catalog -> points file -> analyze, through the CLI entry point."""
    if "leech" in _state:
        return _state["leech"]
    t0 = time.perf_counter()
    catalog.leech_minimal_vectors.cache_clear()
    lattice = catalog.leech_minimal_vectors()
    path = f"{tmp_dir}/leech-2025.pts"
    assert cli.run(["catalog", "leech-derived-2025", "-o", path]) == 0
    config = catalog.leech_derived_2025()
    from sphdist.fileio import read_points

    loaded = read_points(path)
    rep, reps, scheme_rep = cli.analyze_config(loaded)
    _state["leech"] = dict(lattice=lattice, config=loaded, built=config, report=rep, bounds=reps,
                           scheme=scheme_rep, seconds=time.perf_counter() - t0)
    return _state["leech"]


def check_1(tmp_dir, capsys=None):
    st = _leech_pipeline(tmp_dir)
    rep = st["report"]
    mom = rep["moments"]
    ok = (
        len(st["lattice"]) == 196560
        and st["lattice"].shape_counts == (1104, 97152, 98304)
        and (rep["n"], rep["m"]) == (2025, 22)
        and len(rep["distance_values"]) == 3
        and rep["strength"] == 4
        and all(x == 0 for x in mom[:4]) and mom[4] != 0
        and st["config"].gram == st["built"].gram
        and st["seconds"] < 300
    )
    report(capsys, 1, ok, f"196560 minimal vectors, |X|={rep['n']} in dim {rep['m']}, s={len(rep['distance_values'])}, "
                          f"t={rep['strength']}, S_5={mom[4]} ({st['seconds']:.1f}s)")


def check_2(tmp_dir, capsys=None):
    st = _leech_pipeline(tmp_dir)
    h = (harm_dim(22, 0), harm_dim(22, 1), harm_dim(22, 3))
    cor = bounds.corollary_bound(22, 3, 2)
    attained = {r.name: r.attained for r in st["bounds"]}
    ok = cor == 2025 == st["config"].n and h == (1, 22, 2002) and attained.get("corollary_bound") is True
    report(capsys, 2, ok, f"corollary_bound(22,3,2)={cor}=|X|, (h_0,h_1,h_3)={h}")


def check_3(tmp_dir, capsys=None):
    t0 = time.perf_counter()
    cfg = _leech_pipeline(tmp_dir)["config"]
    spec = schemes.idempotents(schemes.from_distance_classes(cfg))
    kd, spec = schemes.q_polynomial(spec)
    audit = schemes.s0_audit(kd, spec)
    secs = time.perf_counter() - t0
    ok = (
        kd.B1star == B1STAR
        and schemes.l_index(kd) == 1
        and audit["case"] == 2 and audit["bound"] == 2025 and audit["attained"]
        and list(kd.multiplicities) == [1, 22, 252, 1750] == audit["predicted_multiplicities"]
        and secs < 600
    )
    report(capsys, 3, ok, f"B1* matches exactly, l={schemes.l_index(kd)}, case ({audit['case']}) bound {audit['bound']} "
                          f"attained, m={list(kd.multiplicities)} ({secs:.1f}s)")


def check_4(tmp_dir, capsys=None):
    t0 = time.perf_counter()
    path = f"{tmp_dir}/dodecahedron.pts"
    assert cli.run(["catalog", "dodecahedron", "-o", path]) == 0
    from sphdist.fileio import read_points

    cfg = read_points(path)
    rep, reps, _ = cli.analyze_config(cfg)
    secs = time.perf_counter() - t0
    anti = {r.name: r for r in reps}["antipodal_bound"]
    ok = (
        rep["antipodal"] and len(rep["distance_values"]) == 5 and rep["strength"] == 5
        and rep["field"] == "Q sqrt 5"
        and bounds.antipodal_bound(3, 5, 2) == 20 == cfg.n
        and anti.attained and anti.value == 20
        and secs < 5
    )
    report(capsys, 4, ok, f"antipodal={rep['antipodal']}, s={len(rep['distance_values'])}, t={rep['strength']}, "
                          f"antipodal_bound(3,5,2)={bounds.antipodal_bound(3, 5, 2)}=|X| ({secs:.2f}s)")


def check_5(tmp_dir=None, capsys=None):
    t0 = time.perf_counter()
    sch = catalog.triangular(5)
    kd, spec = schemes.q_polynomial(schemes.idempotents(sch))
    audit = schemes.s0_audit(kd, spec)
    emb = schemes.embedding_gram(spec)
    s_emb = pointset.inner_product_set(emb).s
    t_emb = pointset.strength(emb).strength
    secs = time.perf_counter() - t0
    ok = (
        sch.n == 10 and kd.q[1][1][1] != 0 and schemes.l_index(kd) == 0
        and audit["case"] == 3 and audit["bound"] == 10 and audit["attained"]
        and s_emb == 2 and t_emb >= 2
        and secs < 1
    )
    report(capsys, 5, ok, f"n={sch.n}, q_11^1={kd.q[1][1][1]}, l=0, case (3) bound 10 attained, "
                          f"embedding {s_emb}-distance {t_emb}-design ({secs:.3f}s)")


def check_6(tmp_dir=None, capsys=None):
    t0 = time.perf_counter()
    results = selftest.run(include_leech=True)
    secs = time.perf_counter() - t0
    failed = [r.name for r in results if not r.passed]
    ok = not failed and secs < 120
    detail = ", ".join(f"{r.name}:{r.checks}" for r in results)
    report(capsys, 6, ok, f"suites {detail}; failed={failed or 'none'} ({secs:.1f}s)")


@pytest.fixture(scope="module")
def tmp_dir(tmp_path_factory):
    return str(tmp_path_factory.mktemp("acceptance"))


def test_criterion_1_leech_pipeline(tmp_dir, capsys):
    check_1(tmp_dir, capsys)


def test_criterion_2_corollary_attainment(tmp_dir, capsys):
    check_2(tmp_dir, capsys)


def test_criterion_3_krein_matrix(tmp_dir, capsys):
    check_3(tmp_dir, capsys)


def test_criterion_4_dodecahedron(tmp_dir, capsys):
    check_4(tmp_dir, capsys)


def test_criterion_5_triangular(tmp_dir, capsys):
    check_5(tmp_dir, capsys)


def test_criterion_6_property_suites(tmp_dir, capsys):
    check_6(tmp_dir, capsys)


if __name__ == "__main__":
    import tempfile

    with tempfile.TemporaryDirectory() as d:
        failures = 0
        for fn in (check_1, check_2, check_3, check_4, check_5, check_6):
            try:
                fn(d)
            except AssertionError:
                failures += 1
        raise SystemExit(1 if failures else 0)
