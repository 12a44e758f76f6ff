"""Root systems, the rank screen, regular vectors and criteria."""

import pytest

from rigidlie.coadjoint import PASS, invariant_count
from rigidlie.families import heisenberg, ln_torus, n61
from rigidlie.structure import (INCONCLUSIVE, NOT_RIGID, SHAPE_YYY, RootSystemError,
                                criteria_scan, regular_vector, rigidity_screen, root_system)


def test_r6_1_root_system(catalog):
    a = catalog["r6_1"].algebra
    rs = root_system(a, "V1")
    assert rs.format(a)[0] == "y1 + y2 = y3   [Y1,Y2] (y+y=y)"
    assert all(e.shape == SHAPE_YYY for e in rs.equations)
    scr = rigidity_screen(a, "V1")
    assert (scr.verdict, scr.rank, scr.expected_rank) == (INCONCLUSIVE, 4, 4)


def test_screen_on_every_rigid_entry(rigid_entries):
    for e in rigid_entries:
        a = e.algebra
        reg = a.basis[a.torus_indices[0]]
        scr = rigidity_screen(a, reg)
        assert scr.verdict == INCONCLUSIVE, e.name
        assert scr.rank == scr.expected_rank, e.name


def test_abelian_nilradical_is_screened_out():
    scr = rigidity_screen(n61(1, 2, 3, 5).algebra, "X1")
    assert scr.verdict == NOT_RIGID and scr.rank < scr.expected_rank


def test_non_diagonal_regular_rejected():
    a = heisenberg(1).algebra
    with pytest.raises(RootSystemError, match=r"\[X1,X2\]"):
        root_system(a, "X1")


def test_regular_vector():
    assert regular_vector(ln_torus(5).algebra) == ((1, 0), 2)
    with pytest.raises(ValueError):
        regular_vector(heisenberg(1).algebra)


def test_pairing_and_eigenvalue_criteria(catalog):
    a = catalog["r8_1"].algebra
    c = criteria_scan(a)
    assert c.pairing_applies and c.eigenvalue_pattern_applies
    assert c.pairing_witness[3] == "V1"
    assert invariant_count(a) == 0


def test_criteria_never_misfire(catalog):
    for e in catalog.values():
        c = criteria_scan(e.algebra)
        if c.predicts_no_invariants:
            assert invariant_count(e.algebra) == 0, e.name
        assert all(v.status == PASS for v in c.central_verdicts), e.name


def test_central_ideal_invariant(catalog):
    a = catalog["nil7_t2"].algebra
    c = criteria_scan(a)
    assert [F.format(a.coordinate_names()) for F in c.central_invariants] == ["(y7)^1"]
    assert criteria_scan(catalog["nil7_t1"].algebra).central_invariants == ()
    assert invariant_count(catalog["nil7_t1"].algebra) == 0


def test_screen_rank_ignores_equation_order(catalog):
    import random
    from rigidlie.linalg import rank
    rs = root_system(catalog["r8_12"].algebra, "V1")
    m = rs.matrix()
    for seed in range(5):
        random.Random(seed).shuffle(m)
        assert rank(m) == rs.rank()


def test_central_ideal_bounds_count(catalog):
    for e in catalog.values():
        c = criteria_scan(e.algebra)
        assert invariant_count(e.algebra) >= len(c.central_ideal), e.name


def test_eigenvalue_pattern_small():
    from rigidlie.algebra import LieAlgebra
    labels = ["Y1", "Y2", "Y4", "Y5", "Y6", "V"]
    br = {("V", y): {y: int(y[1:])} for y in labels[:-1]}
    br.update({("Y1", "Y4"): {"Y5": 1}, ("Y1", "Y5"): {"Y6": 1}, ("Y2", "Y4"): {"Y6": 1}})
    a = LieAlgebra.build("cor", labels, br, torus=["V"])
    c = criteria_scan(a)
    assert c.eigenvalue_pattern_applies and invariant_count(a) == 0


def test_h1_with_torus_roots(catalog):
    a = catalog["r5_1"].algebra
    rs = root_system(a, "V1")
    assert rs.format(a)[0] == "y1 + y2 = y3   [Y1,Y2] (x+y=y)"
    assert len(rs.equations) == 3
