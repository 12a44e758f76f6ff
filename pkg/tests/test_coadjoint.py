"""Coadjoint generators, invariant counting, verification, independence."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rigidlie.algebra import LieAlgebra
from rigidlie.coadjoint import (DEGENERATE, FAIL, PASS, PowerProduct, check_field_commutators,
                                coadjoint_fields, exact_independence_rank, independence_rank,
                                invariant_count, parse_power_product, reduced_system,
                                verify_power_product)
from rigidlie.families import heisenberg
from rigidlie.poly import Polynomial

from conftest import shipped_catalog


def pp(a, text):
    return parse_power_product(text, a.coordinate_names())


def test_heisenberg_fields():
    a = heisenberg(1).algebra
    f = coadjoint_fields(a)
    names = a.coordinate_names()
    assert f[0].format(names) == "-x3*d/dx2"
    assert f[1].format(names) == "x3*d/dx1"
    assert f[2].is_zero()
    assert invariant_count(a) == 1


def test_field_commutators_hold_on_corpus(catalog):
    for e in catalog.values():
        assert check_field_commutators(e.algebra), e.name


def test_field_commutators_detect_broken_table():
    a = LieAlgebra.build("bad", ["A", "B", "C"], {("A", "B"): {"C": 1}, ("A", "C"): {"A": 1}})
    assert not check_field_commutators(a)


def test_count_parity(catalog):
    for e in catalog.values():
        n = invariant_count(e.algebra)
        assert (n - e.algebra.dim) % 2 == 0, e.name


def test_count_modes_agree(catalog):
    a = catalog["r8_3"].algebra
    assert invariant_count(a, mode="exact") == invariant_count(a, mode="probabilistic")


def _var(a, name):
    return Polynomial.variable(a.dim, a.coordinate_names().index(name))


def test_verify_r7_3(catalog):
    a = catalog["r7_3"].algebra
    assert verify_power_product(a, pp(a, "(2*y5*y7 - y6^2)^7 * (y7)^-12")).status == PASS
    bad = verify_power_product(a, pp(a, "(y7)^1"))
    assert bad.status == FAIL and a.basis[bad.generator] == "V1"
    assert bad.residual == -7 * _var(a, "y7")


def test_degenerate_power_product(catalog):
    a = catalog["r8_5"].algebra
    F = PowerProduct.make([(_var(a, "y7"), 8), (_var(a, "y7"), -8)])
    assert verify_power_product(a, F).status == DEGENERATE
    assert verify_power_product(a, pp(a, "(y7)^8 * (y7)^-8")).status == DEGENERATE


@given(st.fractions(min_value=-9, max_value=9, max_denominator=7).filter(bool))
def test_verification_stable_under_powers(q):
    e = shipped_catalog()["r7_3"]
    F = e.expected[0].product
    assert verify_power_product(e.algebra, F ** q).status == PASS


def test_independence(catalog):
    a = catalog["r8_2"].algebra
    fs = [i.product for i in catalog["r8_2"].expected]
    assert independence_rank(a, fs) == len(fs)
    assert independence_rank(a, fs + [fs[0] * fs[1]]) == len(fs)
    assert independence_rank(a, [fs[0], fs[0] ** Fraction(3, 2)]) == 1


def test_exact_and_sampled_independence_agree(catalog):
    for name in ("r7_3", "r8_2", "r6_1"):
        e = catalog[name]
        fs = [i.product for i in e.expected]
        assert exact_independence_rank(fs) == independence_rank(e.algebra, fs)


def test_reduced_system_r7_3(catalog):
    a = catalog["r7_3"].algebra
    rs = reduced_system(a)
    assert [a.coordinate_names()[j] for j in rs.variables] == ["y5", "y6", "y7"]
    assert [a.basis[i] for i, _ in rs.generators] == ["Y1", "V1"]
    assert rs.format(a) == ["Y1': -y6*d/dy5 - y7*d/dy6",
                            "V1': -5*y5*d/dy5 - 6*y6*d/dy6 - 7*y7*d/dy7"]


def test_wrong_ring_rejected(catalog):
    a = catalog["r7_3"].algebra
    with pytest.raises(ValueError):
        verify_power_product(a, pp(heisenberg(1).algebra, "(x3)^1"))


@given(st.fractions(min_value=-9, max_value=9, max_denominator=5).filter(bool))
def test_power_product_format_roundtrip(q):
    e = shipped_catalog()["r8_2"]
    names = e.algebra.coordinate_names()
    F = e.expected[1].product ** q
    assert parse_power_product(F.format(names), names) == F


def test_fields_from_corrupted_constants(catalog):
    a = catalog["r7_3"].algebra
    i, j, k = a.index("Y3"), a.index("Y4"), a.index("Y7")
    corrupted = dict(a.brackets)
    corrupted[(i, j)] = ((k, 2),)
    assert not check_field_commutators(a, coadjoint_fields(a.with_brackets(corrupted)))


def test_heisenberg_scaling_is_invisible():
    # a rescaled central bracket still yields commuting fields in h1
    h = heisenberg(1).algebra
    scaled = coadjoint_fields(h.with_brackets({(0, 1): ((2, 2),)}))
    assert check_field_commutators(h, scaled)
