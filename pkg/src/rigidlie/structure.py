"""Root systems, the rank screen for rigidity, and sufficiency criteria for
the existence or absence of invariants of solvable algebras n + t."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import (LieAlgebra, adjoint_matrix, centralizer, structure_report,
                      torus_eigenvalues)
from .coadjoint import PowerProduct, verify_power_product
from .linalg import nullspace, rank
from .poly import Polynomial, as_scalar

NOT_RIGID = "not-rigid"
INCONCLUSIVE = "inconclusive"

SHAPE_XXX = "x+x=x"
SHAPE_YYY = "y+y=y"
SHAPE_XYY = "x+y=y"
SHAPE_YYX = "y+y=x"


class RootSystemError(ValueError):
    pass


@dataclass(frozen=True)
class RootEquation:
    left: tuple[int, int]  # basis indices i, j of the bracket
    target: int  # basis index k of the nonzero component
    shape: str

    def row(self, unknowns: Sequence[int]) -> list[int]:
        pos = {u: p for p, u in enumerate(unknowns)}
        r = [0] * len(unknowns)
        r[pos[self.left[0]]] += 1
        r[pos[self.left[1]]] += 1
        r[pos[self.target]] -= 1
        return r


@dataclass(frozen=True)
class RootSystem:
    regular: int
    unknowns: tuple[int, ...]  # basis indices carrying an unknown
    equations: tuple[RootEquation, ...]

    def matrix(self) -> list[list[int]]:
        return [e.row(self.unknowns) for e in self.equations]

    def rank(self) -> int:
        m = self.matrix()
        return rank(m) if m else 0

    def format(self, a: LieAlgebra) -> list[str]:
        names = [b.lower() for b in a.basis]
        out = []
        for e in self.equations:
            i, j = e.left
            out.append(f"{names[i]} + {names[j]} = {names[e.target]}   "
                       f"[{a.basis[i]},{a.basis[j]}] ({e.shape})")
        return out


def root_system(a: LieAlgebra, regular: str | int) -> RootSystem:
    """Linear system of root relations attached to a diagonal regular vector.

    Elements killed by ad(regular) play the role of the x-unknowns, the
    others of the y-unknowns; every nonzero component of a bracket between
    two non-regular basis elements contributes one equation.
    """
    r = a.index(regular) if isinstance(regular, str) else regular
    eig = []
    for j in range(a.dim):
        img = a.bracket_basis(r, j)
        stray = [k for k in img if k != j]
        if stray:
            raise RootSystemError(
                f"ad {a.basis[r]} is not diagonal: [{a.basis[r]},{a.basis[j]}] has a "
                f"{a.basis[stray[0]]} component")
        eig.append(as_scalar(img.get(j, 0)))
    is_x = [not eig[j] for j in range(a.dim)]
    eqs = []
    for (i, j), terms in sorted(a.brackets.items()):
        if r in (i, j):
            continue
        for k, _ in terms:
            xi, xj, xk = is_x[i], is_x[j], is_x[k]
            if xi and xj and xk:
                shape = SHAPE_XXX
            elif not xi and not xj:
                shape = SHAPE_YYX if xk else SHAPE_YYY
            else:
                shape = SHAPE_XYY
            eqs.append(RootEquation((i, j), k, shape))
    referenced = {u for e in eqs for u in (*e.left, e.target)}
    unknowns = tuple(j for j in range(a.dim)
                     if j != r and (j in a.nilradical_indices or j in referenced))
    return RootSystem(r, unknowns, tuple(eqs))


@dataclass(frozen=True)
class ScreenResult:
    verdict: str
    rank: int
    nilradical_dim: int
    equations: int

    @property
    def expected_rank(self) -> int:
        return self.nilradical_dim - 1


def rigidity_screen(a: LieAlgebra, regular: str | int) -> ScreenResult:
    """Necessary condition only: rank(S) must equal dim(n) - 1."""
    rs = root_system(a, regular)
    rk = rs.rank()
    dn = len(a.nilradical_indices)
    verdict = NOT_RIGID if rk != dn - 1 else INCONCLUSIVE
    return ScreenResult(verdict, rk, dn, len(rs.equations))


def regular_vector(a: LieAlgebra, bound: int = 3) -> tuple[tuple[int, ...], int]:
    """Integer torus combination with minimal centralizer dimension.

    Enumerates coefficient vectors in [-bound, bound]^rank; ties go to the
    smallest l1 norm, then to positive coefficients.  Returns
    (coefficients, dim V_0).
    """
    tor = a.torus_indices
    if not tor:
        raise ValueError(f"{a.name} has no torus tags")
    best = None
    box = itertools.product(range(-bound, bound + 1), repeat=len(tor))
    for coefs in sorted(box, key=lambda c: (sum(map(abs, c)), [-x for x in c])):
        if not any(coefs):
            continue
        vec = [0] * a.dim
        for c, t in zip(coefs, tor):
            vec[t] = c
        d = adjoint_matrix(a, vec).kernel_dim()
        if best is None or d < best[1]:
            best = (coefs, d)
    return best


# ---------------------------------------------------------------------------
# criteria


@dataclass(frozen=True)
class CriteriaFindings:
    pairing_applies: bool
    pairing_witness: tuple  # basis labels in slot order 1..2n (torus slot n = torus label)
    eigenvalue_pattern_applies: bool
    central_ideal: tuple  # basis vectors of the central ideal killed by the torus
    central_invariants: tuple  # PowerProducts (linear coordinate functions)
    central_verdicts: tuple

    @property
    def predicts_no_invariants(self) -> bool:
        return self.pairing_applies or self.eigenvalue_pattern_applies


def _pairing_match(a: LieAlgebra, budget: int = 10_000):
    """Search a basis matching the pairing pattern; returns slot labels or ()."""
    if a.dim % 2 or a.torus_rank != 1:
        return ()
    n = a.dim // 2
    rep = structure_report(a)
    if not rep.torus_diagonal or rep.nilradical_center_dim != 1:
        return ()
    t = a.torus_indices[0]
    eig = rep.eigenvalues[a.basis[t]]
    nil = a.nilradical_indices
    zvec = rep.nilradical_center_basis[0]
    support = [k for k, c in enumerate(zvec) if c]
    if len(support) != 1:
        return ()
    z = support[0]
    if not eig[z]:
        return ()
    scale = Fraction(eig[z]) / (2 * n)
    slots = [j for j in range(1, 2 * n) if j != n]
    by_value: dict = {}
    for k in nil:
        if k != z:
            by_value.setdefault(Fraction(eig[k]), []).append(k)
    need = Counter(scale * j for j in slots)
    have = Counter({v: len(ks) for v, ks in by_value.items()})
    if need != have:
        return ()

    def pairs_ok(assign):
        for j in range(2, n):
            if j in assign and 2 * n - j in assign:
                br = a.bracket_basis(assign[j], assign[2 * n - j])
                if set(br) != {z}:
                    return False
        return True

    states = 0
    assign: dict[int, int] = {}
    used: set[int] = set()

    def rec(idx):
        nonlocal states
        states += 1
        if states > budget:
            return False
        if idx == len(slots):
            return True
        s = slots[idx]
        for k in by_value[scale * s]:
            if k in used:
                continue
            assign[s] = k
            used.add(k)
            if pairs_ok(assign) and rec(idx + 1):
                return True
            del assign[s]
            used.discard(k)
        return False

    if not rec(0):
        return ()
    labels = []
    for j in range(1, 2 * n + 1):
        if j == n:
            labels.append(a.basis[t])
        elif j == 2 * n:
            labels.append(a.basis[z])
        else:
            labels.append(a.basis[assign[j]])
    return tuple(labels)


def _eigenvalue_pattern(a: LieAlgebra) -> bool:
    if a.torus_rank != 1 or a.dim % 2:
        return False
    n = a.dim // 2
    if n < 3:
        return False
    eig, bad = torus_eigenvalues(a)
    if bad:
        return False
    vals = eig[a.basis[a.torus_indices[0]]]
    got = sorted(Fraction(vals[k]) for k in a.nilradical_indices)
    want = sorted(Fraction(j) for j in range(1, 2 * n + 1) if j != n)
    return got == want


def criteria_scan(a: LieAlgebra) -> CriteriaFindings:
    witness = _pairing_match(a)
    nil = a.nilradical_indices
    # central ideal of n on which the torus acts trivially
    zn = centralizer(a, nil, inside=nil)
    tor = a.torus_indices
    ideal = []
    if zn:
        # vectors z in span(zn) with [t, z] = 0 for all torus t
        eqs = []
        for t in tor:
            et = a.basis_vector(t)
            imgs = [a.bracket(et, v) for v in zn]
            for k in range(a.dim):
                eqs.append([img[k] for img in imgs])
        combos = nullspace(eqs, len(zn)) if eqs else [
            [int(i == j) for i in range(len(zn))] for j in range(len(zn))]
        for c in combos:
            vec = [sum(ci * v[k] for ci, v in zip(c, zn)) for k in range(a.dim)]
            ideal.append(tuple(as_scalar(x) for x in vec))
    invs = []
    verdicts = []
    for vec in ideal:
        p = Polynomial(a.dim, {tuple(int(i == k) for i in range(a.dim)): c
                               for k, c in enumerate(vec) if c})
        F = PowerProduct.make([(p, 1)])
        invs.append(F)
        verdicts.append(verify_power_product(a, F))
    return CriteriaFindings(
        pairing_applies=bool(witness),
        pairing_witness=witness,
        eigenvalue_pattern_applies=_eigenvalue_pattern(a),
        central_ideal=tuple(ideal),
        central_invariants=tuple(invs),
        central_verdicts=tuple(verdicts),
    )
