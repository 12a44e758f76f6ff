"""Semi-invariant search, weight balancing and assembly."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rigidlie.coadjoint import PASS, independence_rank, invariant_count, verify_power_product
from rigidlie.families import heisenberg, ln_torus
from rigidlie.poly import format_polynomial
from rigidlie.search import (SearchTooLarge, SemiInvariant, balance_exponents,
                             search_invariants, semi_invariants)


def test_r7_3_degree_two(catalog):
    a = catalog["r7_3"].algebra
    sems = semi_invariants(a, 2)
    got = {format_polynomial(s.poly, a.coordinate_names()): s.weight for s in sems}
    assert got == {"y7": (7,), "2*y5*y7 - y6^2": (12,)}


def test_r7_3_assembly_matches_printed(catalog):
    e = catalog["r7_3"]
    asm = search_invariants(e.algebra, 2)
    assert asm.complete and asm.rank == 1
    both = [asm.invariants[0], e.expected[0].product]
    assert independence_rank(e.algebra, both) == 1


def test_semi_invariants_are_annihilated_by_nilradical(catalog):
    from rigidlie.coadjoint import apply_field, coadjoint_fields
    a = catalog["r8_2"].algebra
    fields = coadjoint_fields(a)
    for s in semi_invariants(a, 3):
        for i in a.nilradical_indices:
            assert apply_field(fields[i], s.poly).is_zero()


def test_without_torus_results_are_invariants():
    a = heisenberg(2).algebra
    sems = semi_invariants(a, 2)
    assert [format_polynomial(s.poly, a.coordinate_names()) for s in sems] == ["x5"]
    assert sems[0].weight == ()


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=5))
def test_balance_exponents_give_zero_weight(ws):
    from rigidlie.poly import Polynomial
    sems = [SemiInvariant(Polynomial.variable(len(ws), i), (Fraction(w),)) for i, w in enumerate(ws)]
    for v in balance_exponents(sems):
        assert sum(e * w for e, w in zip(v, ws)) == 0
        assert next(x for x in reversed(v) if x) > 0


def test_ln_search_reaches_count():
    a = ln_torus(6).algebra
    asm = search_invariants(a, 3)
    assert asm.target == 3 and asm.complete
    assert all(verify_power_product(a, F).status == PASS for F in asm.invariants)


def test_search_respects_monomial_bound(catalog):
    with pytest.raises(SearchTooLarge):
        semi_invariants(catalog["r8_2"].algebra, 4, monomial_bound=100)


def test_threads_do_not_change_results(catalog):
    a = catalog["r8_12"].algebra
    one = search_invariants(a, 3, threads=1)
    four = search_invariants(a, 3, threads=4)
    assert one.invariants == four.invariants


@pytest.mark.parametrize("name", ["r6_3", "r7_6", "r8_12", "r8_27", "r8_33"])
def test_recorded_degree_reaches_count(catalog, name):
    e = catalog[name]
    asm = search_invariants(e.algebra, e.search_degree)
    assert asm.rank == invariant_count(e.algebra)
