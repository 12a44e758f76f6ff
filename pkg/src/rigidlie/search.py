"""Degree-by-degree search for polynomial semi-invariants and their
weight-balanced power products.

Nilradical generators are linear vector fields, so they preserve the space of
homogeneous polynomials of each degree.  A diagonal torus makes every
monomial a weight vector, and each nilradical generator shifts weights by a
fixed amount, so the joint kernel splits into (degree, weight) blocks that
are solved independently.
"""

from __future__ import annotations

import math
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import LieAlgebra, torus_weights
from .coadjoint import (DEGENERATE, PASS, PowerProduct, coadjoint_fields,
                        independence_rank, invariant_count, verify_power_product)
from .linalg import DEFAULT_SEED, SparseEchelon, integer_kernel, sparse_nullspace
from .poly import Polynomial, grlex_key, homogeneous_monomials

DEFAULT_MAX_DEGREE = 4
DEFAULT_MONOMIAL_BOUND = 20_000


class SearchTooLarge(MemoryError):
    pass


@dataclass(frozen=True)
class SemiInvariant:
    poly: Polynomial
    weight: tuple  # one Fraction per torus generator, () without a diagonal torus

    @property
    def degree(self) -> int:
        return self.poly.total_degree()


def _weight_of(m, weights) -> tuple:
    if weights is None:
        return ()
    k = len(weights[0])
    return tuple(sum(e * weights[j][t] for j, e in enumerate(m) if e) for t in range(k))


def _field_images(fields, monomial, nvars):
    """For each field, the image of a monomial as {monomial: coefficient}."""
    out = []
    for f in fields:
        img = defaultdict(int)
        for j, coef in f.components.items():
            e = monomial[j]
            if not e:
                continue
            base = monomial[:j] + (e - 1,) + monomial[j + 1:]
            for cm, cc in coef.terms.items():
                t = tuple(x + y for x, y in zip(base, cm))
                img[t] += cc * e
        out.append({m: c for m, c in img.items() if c})
    return out


def _block_kernel(fields, monos, nvars):
    """Joint kernel of ``fields`` on span(monos); vectors keyed by monomial."""
    rows: dict = defaultdict(dict)
    for col, m in enumerate(monos):
        for fi, img in enumerate(_field_images(fields, m, nvars)):
            for out_m, c in img.items():
                rows[(fi, out_m)][col] = c
    basis = sparse_nullspace(list(rows.values()), list(range(len(monos))))
    return [{monos[c]: v for c, v in vec.items()} for vec in basis]


def _products(found, degree, weight, nvars):
    """All products of earlier semi-invariants with the given degree and weight."""
    out = []
    items = sorted(found, key=lambda s: s.degree)

    def rec(start, deg_left, acc_poly, acc_weight):
        if deg_left == 0:
            if acc_weight == weight:
                out.append(acc_poly)
            return
        for idx in range(start, len(items)):
            s = items[idx]
            if s.degree > deg_left:
                break
            w = tuple(a + b for a, b in zip(acc_weight, s.weight)) if weight else ()
            rec(idx, deg_left - s.degree, acc_poly * s.poly, w)

    rec(0, degree, Polynomial.constant(nvars, 1), tuple(Fraction(0) for _ in weight))
    return out


def semi_invariants(a: LieAlgebra, max_degree: int = DEFAULT_MAX_DEGREE, *,
                    monomial_bound: int = DEFAULT_MONOMIAL_BOUND,
                    threads: int = 1) -> list[SemiInvariant]:
    """Homogeneous polynomial semi-invariants up to ``max_degree``.

    With a diagonal torus the constraints are the nilradical generators and
    each result carries its torus weight; the weight of a coordinate is the
    eigenvalue of the corresponding basis vector, so a torus generator acts
    on a semi-invariant of weight w by ``-w``.  Without one (no torus tags,
    or a torus that is not diagonal) every generator is a constraint and the
    results are genuine polynomial invariants.

    Products of lower-degree results are not repeated.
    """
    n = a.dim
    fields = coadjoint_fields(a)
    weights = torus_weights(a)
    if weights is not None:
        constraints = [fields[i] for i in a.nilradical_indices]
    else:
        constraints = list(fields)
    constraints = [f for f in constraints if not f.is_zero()]
    found: list[SemiInvariant] = []
    for d in range(1, max_degree + 1):
        size = math.comb(n + d - 1, d)
        if size > monomial_bound:
            raise SearchTooLarge(
                f"degree {d} needs {size} monomials in {n} variables (bound {monomial_bound})")
        blocks = defaultdict(list)
        for m in homogeneous_monomials(n, d):
            blocks[_weight_of(m, weights)].append(m)
        keys = sorted(blocks)

        def solve(w):
            return w, _block_kernel(constraints, blocks[w], n)

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                kernels = dict(pool.map(solve, keys))
        else:
            kernels = dict(map(solve, keys))

        new = []
        for w in keys:
            kern = kernels[w]
            if not kern:
                continue
            monos = blocks[w]
            col = {m: i for i, m in enumerate(monos)}
            ech = SparseEchelon(order=lambda c: c)
            for p in _products(found, d, w, n):
                ech.add({col[m]: c for m, c in p.terms.items()})
            fresh = SparseEchelon(order=lambda c: c)
            for vec in kern:
                row = ech.reduce({col[m]: c for m, c in vec.items()})
                if row:
                    fresh.add(row)
            for p in sorted(fresh.pivots):
                poly = Polynomial(n, {monos[c]: v for c, v in fresh.pivots[p].items()}).primitive()
                new.append(SemiInvariant(poly, w))
        new.sort(key=lambda s: (s.weight, s.poly.sort_key()))
        found.extend(new)
    found.sort(key=lambda s: s.poly.sort_key())
    return found


def _integral_rows(rows):
    out = []
    for r in rows:
        den = math.lcm(*(Fraction(x).denominator for x in r)) if r else 1
        out.append([int(Fraction(x) * den) for x in r])
    return out


def balance_exponents(sems: Sequence[SemiInvariant]) -> list[list[int]]:
    """Integer exponent vectors giving total weight zero.

    Each vector is signed so that its last nonzero entry is positive.
    """
    if not sems:
        return []
    k = len(sems[0].weight)
    rows = _integral_rows([[s.weight[t] for s in sems] for t in range(k)])
    if not rows:
        rows = []
    kern = integer_kernel(rows, len(sems)) if rows else [
        [int(i == j) for i in range(len(sems))] for j in range(len(sems))]
    out = []
    for v in kern:
        last = next(x for x in reversed(v) if x)
        out.append(v if last > 0 else [-x for x in v])
    return out


@dataclass(frozen=True)
class Assembly:
    invariants: tuple  # PowerProducts, in selection order
    semi_invariants: tuple
    target: int  # invariant_count
    rank: int

    @property
    def complete(self) -> bool:
        return self.rank == self.target


def _candidate_key(F: PowerProduct):
    return (F.weighted_degree(), [(b.sort_key(), e) for b, e in F.factors])


def assemble_invariants(a: LieAlgebra, sems: Sequence[SemiInvariant],
                        exponents: Sequence[Sequence[int]] | None = None, *,
                        seed: int = DEFAULT_SEED, target: int | None = None) -> Assembly:
    """Verified, functionally independent power products of semi-invariants."""
    sems = list(sems)
    if exponents is None:
        exponents = balance_exponents(sems)
    if target is None:
        target = invariant_count(a, seed=seed)
    fields = coadjoint_fields(a)
    cands = []
    for v in exponents:
        F = PowerProduct.make((s.poly, e) for s, e in zip(sems, v) if e)
        if F.is_trivial():
            continue
        if verify_power_product(a, F, fields).status == PASS:
            cands.append(F)
    cands.sort(key=_candidate_key)
    chosen: list[PowerProduct] = []
    r = 0
    for F in cands:
        if r >= target:
            break
        r2 = independence_rank(a, chosen + [F], seed=seed)
        if r2 > r:
            chosen.append(F)
            r = r2
    return Assembly(tuple(chosen), tuple(sems), target, r)


def search_invariants(a: LieAlgebra, max_degree: int = DEFAULT_MAX_DEGREE, *,
                      seed: int = DEFAULT_SEED, threads: int = 1,
                      monomial_bound: int = DEFAULT_MONOMIAL_BOUND) -> Assembly:
    """Full pipeline: semi-invariants, weight balancing, verified assembly."""
    sems = semi_invariants(a, max_degree, monomial_bound=monomial_bound, threads=threads)
    return assemble_invariants(a, sems, seed=seed)
