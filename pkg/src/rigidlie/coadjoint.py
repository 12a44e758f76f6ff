"""Coadjoint generators, invariant counting and exact invariant verification.

For structure constants ``[X_i, X_j] = C_ij^k X_k`` the generator attached to
``X_i`` is the linear vector field ``sum_j (-C_ij^k x_k) d/dx_j`` on the dual
space.  An invariant is a function annihilated by all of them.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import LieAlgebra
from .expr import ExpressionError, parse_polynomial, parse_rational
from .linalg import (DEFAULT_EXACT_RANK_BOUND, DEFAULT_SEED, PolyMatrix,
                     matrix_rank, rank)
from .poly import Polynomial, Scalar, as_scalar, format_polynomial


# ---------------------------------------------------------------------------
# vector fields


@dataclass(frozen=True)
class VectorField:
    nvars: int
    components: Mapping[int, Polynomial]  # variable index -> coefficient of d/dx_j

    @classmethod
    def make(cls, nvars: int, components: Mapping[int, Polynomial]) -> "VectorField":
        return cls(nvars, {j: p for j, p in sorted(components.items()) if p})

    def is_zero(self) -> bool:
        return not self.components

    def __call__(self, p: Polynomial) -> Polynomial:
        return apply_field(self, p)

    def __add__(self, other: "VectorField") -> "VectorField":
        comps = dict(self.components)
        for j, p in other.components.items():
            comps[j] = comps.get(j, Polynomial.zero(self.nvars)) + p
        return VectorField.make(self.nvars, comps)

    def scale(self, c) -> "VectorField":
        return VectorField.make(self.nvars, {j: p.scale(c) for j, p in self.components.items()})

    def restrict(self, variables: Sequence[int]) -> "VectorField":
        """Drop every component outside ``variables`` (used for reduced systems)."""
        keep = set(variables)
        return VectorField.make(self.nvars, {j: p for j, p in self.components.items() if j in keep})

    def format(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"x{i}" for i in range(self.nvars)]
        if not self.components:
            return "0"
        parts = []
        for j, p in self.components.items():
            coef = format_polynomial(p, names)
            if len(p) > 1:
                coef = f"({coef})"
            parts.append(f"{coef}*d/d{names[j]}")
        return " + ".join(parts).replace("+ -", "- ")


def apply_field(f: VectorField, p: Polynomial) -> Polynomial:
    if f.nvars != p.nvars:
        raise ValueError(f"field on {f.nvars} variables applied to polynomial in {p.nvars}")
    out = Polynomial.zero(p.nvars)
    for j, coef in f.components.items():
        d = p.differentiate(j)
        if d:
            out = out + coef * d
    return out


def field_bracket(u: VectorField, w: VectorField) -> VectorField:
    """Jacobi-Lie bracket ``[U, W] = U∘W - W∘U``."""
    comps = {}
    for j in set(u.components) | set(w.components):
        uj = u.components.get(j, Polynomial.zero(u.nvars))
        wj = w.components.get(j, Polynomial.zero(u.nvars))
        comps[j] = apply_field(u, wj) - apply_field(w, uj)
    return VectorField.make(u.nvars, comps)


def coadjoint_fields(a: LieAlgebra) -> list[VectorField]:
    n = a.dim
    xs = [Polynomial.variable(n, k) for k in range(n)]
    fields = []
    for i in range(n):
        comps = {}
        for j in range(n):
            coef = Polynomial.zero(n)
            for k, c in a.bracket_basis(i, j).items():
                coef = coef + xs[k].scale(-c)
            if coef:
                comps[j] = coef
        fields.append(VectorField.make(n, comps))
    return fields


def check_field_commutators(a: LieAlgebra, fields: Sequence[VectorField] | None = None) -> bool:
    """Consistency of the generators with the structure constants.

    With the standard bracket of vector fields the coadjoint generators form
    an anti-representation: ``[X~_i, X~_j] = -C_ij^k X~_k``.  That identity
    is what is checked here, for every pair.
    """
    fields = list(fields) if fields is not None else coadjoint_fields(a)
    n = a.dim
    for i in range(n):
        for j in range(i + 1, n):
            lhs = field_bracket(fields[i], fields[j])
            rhs = VectorField.make(n, {})
            for k, c in a.bracket_basis(i, j).items():
                rhs = rhs + fields[k].scale(-c)
            if lhs != rhs:
                return False
    return True


# ---------------------------------------------------------------------------
# counting


def commutator_table(a: LieAlgebra) -> PolyMatrix:
    n = a.dim
    xs = [Polynomial.variable(n, k) for k in range(n)]
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            p = Polynomial.zero(n)
            for k, c in a.bracket_basis(i, j).items():
                p = p + xs[k].scale(c)
            row.append(p)
        rows.append(row)
    return PolyMatrix.from_rows(rows)


def invariant_count(a: LieAlgebra, *, mode: str = "auto",
                    exact_bound: int = DEFAULT_EXACT_RANK_BOUND,
                    seed: int = DEFAULT_SEED) -> int:
    """Number of functionally independent invariants, dim - rank(table)."""
    r, _ = matrix_rank(commutator_table(a), mode, exact_bound=exact_bound,
                       rng=random.Random(seed))
    if r % 2:
        raise ArithmeticError(f"odd commutator-table rank {r} for {a.name}")
    return a.dim - r


# ---------------------------------------------------------------------------
# power products


@dataclass(frozen=True)
class PowerProduct:
    """Formal product of polynomial bases raised to rational exponents."""

    factors: tuple  # ((Polynomial, Fraction), ...)

    @classmethod
    def make(cls, factors) -> "PowerProduct":
        """Merge equal bases, drop zero exponents and constant bases."""
        merged: dict[Polynomial, Fraction] = {}
        order = []
        for base, e in factors:
            if base.is_zero():
                raise ValueError("zero base in power product")
            e = Fraction(e)
            if base.is_constant() or not e:
                continue
            if base not in merged:
                order.append(base)
                merged[base] = Fraction(0)
            merged[base] += e
        return cls(tuple((b, merged[b]) for b in order if merged[b]))

    @property
    def nvars(self) -> int:
        return self.factors[0][0].nvars if self.factors else 0

    def __pow__(self, q) -> "PowerProduct":
        q = Fraction(q)
        return PowerProduct.make((b, e * q) for b, e in self.factors)

    def __mul__(self, other: "PowerProduct") -> "PowerProduct":
        return PowerProduct.make(list(self.factors) + list(other.factors))

    def is_trivial(self) -> bool:
        return not self.factors

    def compose(self, images: Sequence[Polynomial]) -> "PowerProduct":
        """Pull back along a linear change of coordinates (see Polynomial.compose)."""
        return PowerProduct.make((b.compose(images), e) for b, e in self.factors)

    def weighted_degree(self) -> Fraction:
        return sum((abs(e) * b.total_degree() for b, e in self.factors), Fraction(0))

    def variables(self) -> set[int]:
        out = set()
        for b, _ in self.factors:
            out |= b.variables()
        return out

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.factors:
            return "1"
        parts = []
        for b, e in self.factors:
            exp = str(e) if e.denominator == 1 and e > 0 else f"({e})"
            parts.append(f"({format_polynomial(b, names)})^{exp}")
        return " * ".join(parts)


def _split_factors(text: str) -> list[str]:
    """Split ``(p)^e * (q)^f`` at top-level ``*``."""
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ExpressionError("unbalanced parentheses")
        if ch == "*" and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    if depth:
        raise ExpressionError("unbalanced parentheses")
    parts.append(cur)
    return [p.strip() for p in parts]


_FACTOR = re.compile(r"^\((?P<body>.*?)\)\s*(?:\^\s*(?P<exp>\(?\s*[-+]?\d+(?:/\d+)?\s*\)?))?$", re.S)


def parse_power_product(text: str, names: Sequence[str]) -> PowerProduct:
    """Parse ``(<poly>)^<rational> [* (<poly>)^<rational> ...]``."""
    factors = []
    for part in _split_factors(text):
        m = _FACTOR.match(part)
        if not m:
            raise ExpressionError(f"factor must look like (<poly>)^<rational>: {part!r}")
        base = parse_polynomial(m.group("body"), names)
        exp = parse_rational(m.group("exp")) if m.group("exp") else Fraction(1)
        if base.is_zero():
            raise ExpressionError("zero base in power product")
        factors.append((base, exp))
    return PowerProduct.make(factors)


@dataclass(frozen=True)
class NamedInvariant:
    name: str
    product: PowerProduct
    source: str  # the right-hand side as written


def parse_invariants(text: str, names: Sequence[str]) -> list[NamedInvariant]:
    """Parse an invariant file: ``invariant <name> = <power product>`` per line."""
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"^invariant\s+(\S+)\s*=\s*(.+)$", line)
        if not m:
            raise ExpressionError(f"line {lineno}: expected 'invariant <name> = ...'")
        try:
            pp = parse_power_product(m.group(2), names)
        except ExpressionError as exc:
            raise ExpressionError(f"line {lineno}: {exc}") from None
        out.append(NamedInvariant(m.group(1), pp, m.group(2).strip()))
    return out


def format_invariants(invs: Sequence[tuple[str, PowerProduct]], names: Sequence[str]) -> str:
    return "".join(f"invariant {n} = {pp.format(names)}\n" for n, pp in invs)


# ---------------------------------------------------------------------------
# verification


PASS, FAIL, DEGENERATE = "pass", "fail", "degenerate"


@dataclass(frozen=True)
class Verdict:
    status: str
    generator: int | None = None
    residual: Polynomial | None = None
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def describe(self, a: LieAlgebra | None = None) -> str:
        if self.status == PASS:
            return "pass"
        if self.status == DEGENERATE:
            return f"degenerate ({self.reason})"
        names = a.coordinate_names() if a else None
        gen = a.basis[self.generator] if a else str(self.generator)
        return f"fail (generator {gen}, residual {format_polynomial(self.residual, names)})"


def log_derivative_numerator(F: PowerProduct, field: VectorField) -> Polynomial:
    """``sum_a e_a (X P_a) prod_{b != a} P_b``; zero iff X F = 0."""
    bases = [b for b, _ in F.factors]
    nv = bases[0].nvars
    # common denominator of the exponents keeps coefficients integral
    den = math.lcm(*(e.denominator for _, e in F.factors))
    total = Polynomial.zero(nv)
    for a_idx, (base, e) in enumerate(F.factors):
        xp = apply_field(field, base)
        if not xp:
            continue
        term = xp.scale(e * den)
        for b_idx, other in enumerate(bases):
            if b_idx != a_idx:
                term = term * other
        total = total + term
    return total


def _partial_fields(nvars: int) -> list[VectorField]:
    one = Polynomial.constant(nvars, 1)
    return [VectorField.make(nvars, {j: one}) for j in range(nvars)]


def is_constant_product(F: PowerProduct) -> bool:
    if F.is_trivial():
        return True
    return all(not log_derivative_numerator(F, d) for d in _partial_fields(F.nvars))


def verify_power_product(a: LieAlgebra, F: PowerProduct,
                         fields: Sequence[VectorField] | None = None) -> Verdict:
    if F.factors and F.nvars != a.dim:
        raise ValueError("power product lives in the wrong coordinate ring")
    if is_constant_product(F):
        return Verdict(DEGENERATE, reason="product is identically constant")
    fields = list(fields) if fields is not None else coadjoint_fields(a)
    for i, f in enumerate(fields):
        if f.is_zero():
            continue
        res = log_derivative_numerator(F, f)
        if res:
            return Verdict(FAIL, generator=i, residual=res)
    return Verdict(PASS)


# ---------------------------------------------------------------------------
# functional independence


class SamplingError(RuntimeError):
    pass


def _log_gradient_at(F: PowerProduct, point: Sequence[Scalar]) -> list[Fraction] | None:
    row = [Fraction(0)] * len(point)
    for base, e in F.factors:
        val = base.evaluate(point)
        if not val:
            return None
        for j in base.variables():
            d = base.differentiate(j).evaluate(point)
            if d:
                row[j] += e * Fraction(d) / val
    return row


def independence_rank(a: LieAlgebra | None, fs: Sequence[PowerProduct], *,
                      seed: int = DEFAULT_SEED, trials: int = 5,
                      max_retries: int = 50) -> int:
    """Rank of the Jacobian of ``log F`` at random rational points (max over trials)."""
    fs = [F for F in fs if not F.is_trivial()]
    if not fs:
        return 0
    nv = a.dim if a is not None else fs[0].nvars
    rng = random.Random(seed)
    best = 0
    for _ in range(trials):
        for _attempt in range(max_retries):
            pt = [Fraction(rng.randint(1, 10**6), rng.randint(1, 1000)) for _ in range(nv)]
            rows = [_log_gradient_at(F, pt) for F in fs]
            if all(r is not None for r in rows):
                break
        else:
            raise SamplingError("no evaluation point avoiding the zeros of the bases was found")
        best = max(best, rank(rows))
        if best == len(fs):
            break
    return best


def cleared_jacobian(fs: Sequence[PowerProduct]) -> PolyMatrix:
    """Jacobian rows of ``log F`` multiplied by the product of the bases."""
    rows = []
    for F in fs:
        nv = F.nvars
        row = []
        for j in range(nv):
            field = VectorField.make(nv, {j: Polynomial.constant(nv, 1)})
            row.append(log_derivative_numerator(F, field))
        rows.append(row)
    return PolyMatrix.from_rows(rows)


def exact_independence_rank(fs: Sequence[PowerProduct]) -> int:
    """Symbolic version of :func:`independence_rank`; only for small inputs."""
    fs = [F for F in fs if not F.is_trivial()]
    if not fs:
        return 0
    r, _ = matrix_rank(cleared_jacobian(fs), "exact", exact_bound=10**6)
    return r


# ---------------------------------------------------------------------------
# reduced systems


@dataclass(frozen=True)
class ReducedSystem:
    variables: tuple[int, ...]  # coordinates an invariant can actually depend on
    generators: tuple[tuple[int, VectorField], ...]  # (basis index, restricted field)

    def format(self, a: LieAlgebra) -> list[str]:
        names = a.coordinate_names()
        return [f"{a.basis[i]}': {f.format(names)}" for i, f in self.generators]


def _field_matrix(fields: Sequence[VectorField], nvars: int) -> PolyMatrix:
    zero = Polynomial.zero(nvars)
    return PolyMatrix.from_rows([[f.components.get(j, zero) for j in range(nvars)] for f in fields])


def reduced_system(a: LieAlgebra, *, exact_bound: int = DEFAULT_EXACT_RANK_BOUND,
                   seed: int = DEFAULT_SEED) -> ReducedSystem:
    """Drop coordinates no invariant depends on, then redundant generators.

    ``d/dx_j`` lying in the span of the generators (over rational functions)
    forces every invariant to be free of ``x_j``.  The remaining generators
    are restricted to the surviving coordinates and kept greedily, in basis
    order, while they raise the rank.
    """
    n = a.dim
    fields = [f for f in coadjoint_fields(a)]
    live = [f for f in fields if not f.is_zero()]

    def rk(fs):
        if not fs:
            return 0
        return matrix_rank(_field_matrix(fs, n), "auto", exact_bound=exact_bound,
                           rng=random.Random(seed))[0]

    base = rk(live)
    one = Polynomial.constant(n, 1)
    keep = tuple(j for j in range(n)
                 if rk(live + [VectorField.make(n, {j: one})]) > base)
    chosen: list[tuple[int, VectorField]] = []
    r = 0
    for i, f in enumerate(fields):
        g = f.restrict(keep)
        if g.is_zero():
            continue
        r2 = rk([h for _, h in chosen] + [g])
        if r2 > r:
            chosen.append((i, g))
            r = r2
    return ReducedSystem(keep, tuple(chosen))
