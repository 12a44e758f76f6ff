"""Lie algebras given by rational structure constants.

Only brackets ``[X_i, X_j]`` with ``i < j`` are stored; the opposite order is
obtained by antisymmetry and every unlisted bracket is zero.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .expr import NAME_RE
from .linalg import RationalMatrix, nullspace, rank, rref
from .poly import Scalar, as_scalar

TORUS = "torus"
NILRADICAL = "nilradical"
UNSPECIFIED = "unspecified"

_LABEL = re.compile(rf"^{NAME_RE}$")


class AlgebraParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class LieAlgebra:
    name: str
    basis: tuple[str, ...]
    roles: tuple[str, ...]
    brackets: Mapping  # {(i, j): ((k, c), ...)} with i < j, k ascending

    def __post_init__(self):
        if len(set(self.basis)) != len(self.basis):
            raise ValueError("basis labels must be distinct")
        if len(self.roles) != len(self.basis):
            raise ValueError("one role per basis element")

    @classmethod
    def build(cls, name: str, basis: Sequence[str], brackets: Mapping,
              torus: Sequence[str] = ()) -> "LieAlgebra":
        """Convenience constructor.

        ``brackets`` maps a label pair ``(a, b)`` to ``{label: coefficient}``.
        Pairs may come in either order; a repeated pair is an error.
        """
        basis = tuple(basis)
        index = {b: i for i, b in enumerate(basis)}
        store: dict = {}
        for (a, b), rhs in brackets.items():
            i, j = index[a], index[b]
            if i == j:
                raise ValueError(f"bracket [{a},{b}] of an element with itself")
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            if (i, j) in store:
                raise ValueError(f"duplicate bracket for pair ({basis[i]}, {basis[j]})")
            terms = {}
            for lab, c in rhs.items():
                c = as_scalar(c) * sign
                if c:
                    terms[index[lab]] = terms.get(index[lab], 0) + c
            terms = {k: c for k, c in terms.items() if c}
            if terms:
                store[(i, j)] = tuple(sorted(terms.items()))
            else:
                store[(i, j)] = ()
        store = {k: v for k, v in store.items() if v}
        torus = set(torus)
        unknown = torus - set(basis)
        if unknown:
            raise ValueError(f"torus labels not in basis: {sorted(unknown)}")
        if torus:
            roles = tuple(TORUS if b in torus else NILRADICAL for b in basis)
        else:
            roles = (UNSPECIFIED,) * len(basis)
        return cls(name, basis, roles, dict(sorted(store.items())))

    # -- structure constants ----------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, label: str) -> int:
        try:
            return self.basis.index(label)
        except ValueError:
            raise KeyError(f"unknown basis label {label!r}") from None

    @property
    def torus_indices(self) -> list[int]:
        return [i for i, r in enumerate(self.roles) if r == TORUS]

    @property
    def nilradical_indices(self) -> list[int]:
        return [i for i, r in enumerate(self.roles) if r != TORUS]

    @property
    def torus_rank(self) -> int:
        return len(self.torus_indices)

    def coordinate_names(self) -> list[str]:
        """Dual coordinates: basis labels lowercased (Y5 -> y5, V1 -> v1)."""
        return [b.lower() for b in self.basis]

    def bracket_basis(self, i: int, j: int) -> dict[int, Scalar]:
        """[X_i, X_j] as ``{k: C_ij^k}``."""
        if i == j:
            return {}
        if i < j:
            return dict(self.brackets.get((i, j), ()))
        return {k: -c for k, c in self.brackets.get((j, i), ())}

    def constant(self, i: int, j: int, k: int) -> Scalar:
        return self.bracket_basis(i, j).get(k, 0)

    def bracket(self, u: Sequence[Scalar], v: Sequence[Scalar]) -> list[Scalar]:
        """Bracket of two coordinate vectors."""
        out = [0] * self.dim
        for (i, j), terms in self.brackets.items():
            coef = u[i] * v[j] - u[j] * v[i]
            if coef:
                for k, c in terms:
                    out[k] += coef * c
        return out

    def basis_vector(self, i: int) -> list[int]:
        return [int(k == i) for k in range(self.dim)]

    def with_brackets(self, brackets: Mapping, name: str | None = None) -> "LieAlgebra":
        return LieAlgebra(name or self.name, self.basis, self.roles, dict(sorted(brackets.items())))

    def with_torus(self, torus: Sequence[str], name: str | None = None) -> "LieAlgebra":
        torus = set(torus)
        roles = tuple(TORUS if b in torus else NILRADICAL for b in self.basis) if torus \
            else (UNSPECIFIED,) * self.dim
        return LieAlgebra(name or self.name, self.basis, roles, self.brackets)


# ---------------------------------------------------------------------------
# file format


def _parse_rhs(text: str, index: Mapping[str, int], lineno: int) -> dict[int, Scalar]:
    text = text.strip()
    if text == "0":
        return {}
    terms: dict[int, Scalar] = {}
    pos = 0
    pattern = re.compile(
        rf"\s*(?P<sign>[-+])?\s*(?:(?P<coef>\d+(?:/\d+)?)\s*\*?\s*)?(?P<label>{NAME_RE})\s*")
    first = True
    while pos < len(text):
        m = pattern.match(text, pos)
        if not m or m.end() == pos:
            raise AlgebraParseError(f"cannot parse bracket right-hand side near {text[pos:]!r}", lineno)
        if not first and m.group("sign") is None:
            raise AlgebraParseError("terms must be separated by + or -", lineno)
        first = False
        label = m.group("label")
        if label not in index:
            raise AlgebraParseError(f"unknown basis label {label!r}", lineno)
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        if m.group("sign") == "-":
            coef = -coef
        k = index[label]
        terms[k] = terms.get(k, 0) + coef
        pos = m.end()
    return {k: as_scalar(c) for k, c in terms.items() if c}


def parse_algebra(text: str) -> LieAlgebra:
    """Parse the line-oriented algebra format (see README)."""
    name = None
    dim = None
    basis: list[str] | None = None
    torus: list[str] = []
    raw_brackets: list[tuple[int, str, str, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "algebra":
            if not rest or len(rest.split()) != 1:
                raise AlgebraParseError("expected 'algebra <name>'", lineno)
            name = rest
        elif key == "dim":
            try:
                dim = int(rest)
            except ValueError:
                raise AlgebraParseError(f"bad dimension {rest!r}", lineno) from None
            if dim <= 0:
                raise AlgebraParseError("dimension must be positive", lineno)
        elif key == "basis":
            basis = rest.split()
            for lab in basis:
                if not _LABEL.match(lab):
                    raise AlgebraParseError(f"invalid label {lab!r}", lineno)
            if len(set(basis)) != len(basis):
                raise AlgebraParseError("repeated basis label", lineno)
        elif key == "torus":
            torus.extend(rest.split())
        elif key == "bracket":
            lhs, eq, rhs = rest.partition("=")
            if not eq:
                raise AlgebraParseError("expected 'bracket <a> <b> = <rhs>'", lineno)
            pair = lhs.split()
            if len(pair) != 2:
                raise AlgebraParseError("a bracket takes exactly two labels", lineno)
            raw_brackets.append((lineno, pair[0], pair[1], rhs))
        else:
            raise AlgebraParseError(f"unknown declaration {key!r}", lineno)
    if name is None:
        raise AlgebraParseError("missing 'algebra' declaration")
    if basis is None:
        raise AlgebraParseError("missing 'basis' declaration")
    if dim is not None and dim != len(basis):
        raise AlgebraParseError(f"dim {dim} does not match {len(basis)} basis labels")
    index = {b: i for i, b in enumerate(basis)}
    for t in torus:
        if t not in index:
            raise AlgebraParseError(f"unknown torus label {t!r}")
    store: dict = {}
    for lineno, a, b, rhs in raw_brackets:
        for lab in (a, b):
            if lab not in index:
                raise AlgebraParseError(f"unknown basis label {lab!r}", lineno)
        i, j = index[a], index[b]
        if i == j:
            raise AlgebraParseError(f"bracket of {a} with itself", lineno)
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        if (i, j) in store:
            raise AlgebraParseError(f"duplicate bracket for pair ({a}, {b})", lineno)
        terms = _parse_rhs(rhs, index, lineno)
        store[(i, j)] = tuple(sorted((k, c * sign) for k, c in terms.items()))
    store = {k: v for k, v in store.items() if v}
    alg = LieAlgebra.build(name, basis, {}, torus=torus)
    return alg.with_brackets(store)


def _format_coef(c: Scalar) -> str:
    return str(as_scalar(abs(c)))


def serialize_algebra(a: LieAlgebra) -> str:
    lines = [f"algebra {a.name}", f"dim {a.dim}", "basis " + " ".join(a.basis)]
    if a.torus_indices:
        lines.append("torus " + " ".join(a.basis[i] for i in a.torus_indices))
    for (i, j), terms in sorted(a.brackets.items()):
        rhs = ""
        for n, (k, c) in enumerate(terms):
            body = f"{_format_coef(c)}*{a.basis[k]}"
            if n == 0:
                rhs = ("-" if c < 0 else "") + body
            else:
                rhs += (" - " if c < 0 else " + ") + body
        lines.append(f"bracket {a.basis[i]} {a.basis[j]} = {rhs}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Jacobi identity


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple  # ((i, j, k), residual-vector, description)

    def describe(self, a: LieAlgebra) -> str:
        if self.ok:
            return f"{a.name}: Jacobi identity holds"
        lines = [f"{a.name}: {len(self.violations)} Jacobi violation(s)"]
        for (i, j, k), _, desc in self.violations:
            lines.append(f"  ({a.basis[i]}, {a.basis[j]}, {a.basis[k]}): {desc}")
        return "\n".join(lines)


def _vector_str(a: LieAlgebra, v: Sequence[Scalar]) -> str:
    parts = []
    for k, c in enumerate(v):
        if c:
            parts.append(f"{as_scalar(c)}*{a.basis[k]}")
    return " + ".join(parts).replace("+ -", "- ") or "0"


def jacobiator(a: LieAlgebra, i: int, j: int, k: int) -> list[Scalar]:
    """[[X_i, X_j], X_k] + [[X_j, X_k], X_i] + [[X_k, X_i], X_j]."""
    e = a.basis_vector
    out = [0] * a.dim
    for p, q, r in ((i, j, k), (j, k, i), (k, i, j)):
        t = a.bracket(a.bracket(e(p), e(q)), e(r))
        out = [x + y for x, y in zip(out, t)]
    return [as_scalar(x) for x in out]


def validate(a: LieAlgebra) -> ValidationReport:
    violations = []
    for i, j, k in itertools.combinations(range(a.dim), 3):
        res = jacobiator(a, i, j, k)
        if any(res):
            violations.append(((i, j, k), tuple(res), _vector_str(a, res)))
    return ValidationReport(not violations, tuple(violations))


# ---------------------------------------------------------------------------
# subspaces and series


def _span(vectors: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    vectors = [list(v) for v in vectors if any(v)]
    if not vectors:
        return []
    return rref(vectors)[0]


def _bracket_span(a: LieAlgebra, left, right) -> list[list[Scalar]]:
    return _span([a.bracket(u, v) for u in left for v in right])


def lower_central_series(a: LieAlgebra, span=None) -> list[int]:
    """Dimensions of g, [g,g], [g,[g,g]], ... until stable."""
    g = _span(span if span is not None else [a.basis_vector(i) for i in range(a.dim)])
    dims = [len(g)]
    cur = g
    while cur:
        nxt = _bracket_span(a, g, cur)
        if len(nxt) == len(cur):
            break
        dims.append(len(nxt))
        cur = nxt
    return dims


def derived_series(a: LieAlgebra, span=None) -> list[int]:
    cur = _span(span if span is not None else [a.basis_vector(i) for i in range(a.dim)])
    dims = [len(cur)]
    while cur:
        nxt = _bracket_span(a, cur, cur)
        if len(nxt) == len(cur):
            break
        dims.append(len(nxt))
        cur = nxt
    return dims


def centralizer(a: LieAlgebra, of: Sequence[int], inside: Sequence[int] | None = None) -> list[list[Scalar]]:
    """Basis of {Z in span(inside) : [Z, X_j] = 0 for j in ``of``}."""
    inside = list(range(a.dim)) if inside is None else list(inside)
    # unknowns: coefficients over ``inside``; equations: components of [Z, X_j]
    rows = []
    for j in of:
        for k in range(a.dim):
            rows.append([a.constant(i, j, k) for i in inside])
    sols = nullspace(rows, len(inside)) if rows else [[int(r == c) for r in range(len(inside))]
                                                      for c in range(len(inside))]
    out = []
    for s in sols:
        v = [0] * a.dim
        for coef, i in zip(s, inside):
            v[i] = coef
        out.append(v)
    return _span(out)


def center(a: LieAlgebra) -> list[list[Scalar]]:
    return centralizer(a, range(a.dim))


def adjoint_matrix(a: LieAlgebra, x) -> RationalMatrix:
    """Matrix of ad X in the declared basis (column j = [X, X_j]).

    ``x`` is a basis index, a label, or a coordinate vector.
    """
    if isinstance(x, str):
        x = a.index(x)
    vec = a.basis_vector(x) if isinstance(x, int) else [as_scalar(c) for c in x]
    cols = [a.bracket(vec, a.basis_vector(j)) for j in range(a.dim)]
    return RationalMatrix.from_rows([[cols[j][k] for j in range(a.dim)] for k in range(a.dim)])


def v0_dimension(a: LieAlgebra, x) -> int:
    """dim {Y : [X, Y] = 0}."""
    return adjoint_matrix(a, x).kernel_dim()


# ---------------------------------------------------------------------------
# structure report


@dataclass(frozen=True)
class StructureReport:
    lower_central: tuple[int, ...]
    derived: tuple[int, ...]
    nilradical_lower_central: tuple[int, ...]
    nilradical_derived: tuple[int, ...]
    center_basis: tuple
    nilradical_center_basis: tuple
    is_nilpotent: bool
    is_solvable: bool
    nilradical_is_nilpotent_ideal: bool
    torus_commutes: bool
    torus_diagonal: bool
    eigenvalues: Mapping  # torus label -> tuple of eigenvalues per basis element
    non_diagonal: tuple  # (torus label, basis label) pairs that break diagonality

    @property
    def center_dim(self) -> int:
        return len(self.center_basis)

    @property
    def nilradical_center_dim(self) -> int:
        return len(self.nilradical_center_basis)

    @property
    def eigenvalues_integral(self) -> bool:
        return self.torus_diagonal and all(
            Fraction(e).denominator == 1 for ev in self.eigenvalues.values() for e in ev)


def torus_eigenvalues(a: LieAlgebra) -> tuple[dict, list]:
    """Diagonal eigenvalues of each torus generator, plus diagonality failures."""
    eig = {}
    bad = []
    for t in a.torus_indices:
        vals = []
        for j in range(a.dim):
            img = a.bracket_basis(t, j)
            if any(k != j for k in img):
                bad.append((a.basis[t], a.basis[j]))
            vals.append(as_scalar(img.get(j, 0)))
        eig[a.basis[t]] = tuple(vals)
    return eig, bad


def torus_weights(a: LieAlgebra) -> list[tuple[Scalar, ...]] | None:
    """Weight vector (one entry per torus generator) of every basis element.

    None when there is no torus or it does not act diagonally.
    """
    if not a.torus_indices:
        return None
    eig, bad = torus_eigenvalues(a)
    if bad:
        return None
    labels = [a.basis[t] for t in a.torus_indices]
    return [tuple(eig[l][j] for l in labels) for j in range(a.dim)]


def structure_report(a: LieAlgebra) -> StructureReport:
    nil = a.nilradical_indices
    nil_span = [a.basis_vector(i) for i in nil]
    lcs = lower_central_series(a)
    nil_lcs = lower_central_series(a, nil_span)
    nil_in = set(nil)
    is_ideal = all(
        k in nil_in
        for (i, j), terms in a.brackets.items() if i in nil_in or j in nil_in
        for k, _ in terms)
    eig, bad = torus_eigenvalues(a)
    tor = a.torus_indices
    commutes = all(not a.bracket_basis(s, t) for s, t in itertools.combinations(tor, 2))
    return StructureReport(
        lower_central=tuple(lcs),
        derived=tuple(derived_series(a)),
        nilradical_lower_central=tuple(nil_lcs),
        nilradical_derived=tuple(derived_series(a, nil_span)),
        center_basis=tuple(tuple(v) for v in center(a)),
        nilradical_center_basis=tuple(tuple(v) for v in centralizer(a, nil, inside=nil)),
        is_nilpotent=lcs[-1] == 0,
        is_solvable=derived_series(a)[-1] == 0,
        nilradical_is_nilpotent_ideal=is_ideal and nil_lcs[-1] == 0,
        torus_commutes=commutes,
        torus_diagonal=not bad,
        eigenvalues=eig,
        non_diagonal=tuple(bad),
    )


def span_rank(vectors) -> int:
    return rank([list(v) for v in vectors]) if vectors else 0
