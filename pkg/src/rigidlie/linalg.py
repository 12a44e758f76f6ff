"""Exact linear algebra over the rationals and over polynomial entries."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .poly import NotDivisibleError, Polynomial, Scalar, as_scalar, sdiv

DEFAULT_EXACT_RANK_BOUND = 16
PROBABILISTIC_TRIALS = 5
SAMPLE_RANGE = (1, 10**6)
DEFAULT_SEED = 20061


class RankBoundError(ValueError):
    """Exact generic rank requested on a matrix above the size bound."""


# ---------------------------------------------------------------------------
# dense rational matrices


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple  # tuple of row tuples

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        data = tuple(tuple(as_scalar(x) for x in r) for r in rows)
        ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged matrix")
        return cls(len(data), ncols, data)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def rank(self) -> int:
        return rank(self.entries)

    def nullspace(self) -> list[list[Scalar]]:
        return nullspace(self.entries, self.cols)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    def is_diagonal(self) -> bool:
        return all(not x for i, r in enumerate(self.entries) for j, x in enumerate(r) if i != j)

    def diagonal(self) -> list[Scalar]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]

    def kernel_dim(self) -> int:
        return self.cols - self.rank()

    def __matmul__(self, vec):
        return [sum(a * b for a, b in zip(r, vec)) for r in self.entries]


def rref(rows: Sequence[Sequence[Scalar]]) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form of a dense rational matrix and pivot columns."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    out = [[as_scalar(x) for x in row] for row in m[:r]]
    return out, pivots


def rank(rows: Sequence[Sequence[Scalar]]) -> int:
    if not rows:
        return 0
    if all(isinstance(x, int) for r in rows for x in r):
        return _integer_rank([list(r) for r in rows])
    return len(rref(rows)[1])


def _integer_rank(m: list[list[int]]) -> int:
    # fraction-free elimination on integers
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, nrows):
            a = m[i][c]
            row_i = m[i]
            row_r = m[r]
            for j in range(c + 1, ncols):
                row_i[j] = (p * row_i[j] - a * row_r[j]) // prev
            row_i[c] = 0
        prev = p
        r += 1
        if r == nrows:
            break
    return r


def nullspace(rows: Sequence[Sequence[Scalar]], ncols: int) -> list[list[Scalar]]:
    """Basis of the right kernel, one vector per free column (RREF order)."""
    if not rows:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, p in zip(red, pivots):
            v[p] = as_scalar(-row[f])
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# sparse rational elimination, used by the semi-invariant search


class SparseEchelon:
    """Incrementally maintained reduced echelon basis of sparse row vectors.

    Rows are dicts ``{column: value}``.  ``order`` ranks columns; the pivot of
    a row is its entry with the smallest order value.
    """

    def __init__(self, order=None):
        self.pivots: dict[int, dict] = {}
        self._order = order if order is not None else (lambda c: c)

    def reduce(self, row: dict) -> dict:
        row = {c: v for c, v in row.items() if v}
        for c in [c for c in row if c in self.pivots]:
            v = row.get(c)
            if not v:
                continue
            for c2, v2 in self.pivots[c].items():
                s = row.get(c2, 0) - v * v2
                if s:
                    row[c2] = s
                else:
                    row.pop(c2, None)
        return row

    def add(self, row: dict) -> bool:
        """Insert a row; returns True when it enlarged the span."""
        row = self.reduce(row)
        if not row:
            return False
        p = min(row, key=self._order)
        inv = sdiv(1, row[p])
        row = {c: v * inv for c, v in row.items()}
        for prow in self.pivots.values():
            v = prow.get(p)
            if v:
                for c2, v2 in row.items():
                    s = prow.get(c2, 0) - v * v2
                    if s:
                        prow[c2] = s
                    else:
                        prow.pop(c2, None)
        self.pivots[p] = row
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def sparse_nullspace(rows: Sequence[dict], columns: Sequence[int]) -> list[dict]:
    """Kernel basis of a sparse matrix restricted to ``columns``.

    Returned vectors are dicts over ``columns``; each has exactly one free
    column set to 1.  Column order in ``columns`` decides pivots.
    """
    rank_of = {c: i for i, c in enumerate(columns)}
    ech = SparseEchelon(order=rank_of.__getitem__)
    for r in rows:
        ech.add(r)
    basis = []
    for f in columns:
        if f in ech.pivots:
            continue
        v = {f: 1}
        for p, prow in ech.pivots.items():
            x = prow.get(f)
            if x:
                v[p] = -x
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# polynomial matrices


@dataclass(frozen=True)
class PolyMatrix:
    rows: int
    cols: int
    entries: tuple

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Polynomial]]) -> "PolyMatrix":
        data = tuple(tuple(r) for r in rows)
        ncols = len(data[0]) if data else 0
        return cls(len(data), ncols, data)

    @property
    def nvars(self) -> int:
        for r in self.entries:
            for p in r:
                return p.nvars
        return 0

    def evaluate(self, point) -> list[list[Scalar]]:
        return [[p.evaluate(point) for p in r] for r in self.entries]


def bareiss_rank(m: PolyMatrix) -> int:
    """Generic rank over the rational function field, fraction free.

    Pivots are chosen with the fewest terms among candidates in the current
    column; every intermediate entry is an exact minor so each division by the
    previous pivot is exact.
    """
    a = [list(r) for r in m.entries]
    nrows, ncols = m.rows, m.cols
    if not nrows or not ncols:
        return 0
    nv = m.nvars
    prev = Polynomial.constant(nv, 1)
    r = 0
    for c in range(ncols):
        cands = [i for i in range(r, nrows) if a[i][c]]
        if not cands:
            continue
        piv = min(cands, key=lambda i: (len(a[i][c]), i))
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, nrows):
            f = a[i][c]
            row_i, row_r = a[i], a[r]
            for j in range(c + 1, ncols):
                x = row_i[j]
                y = row_r[j]
                if not f:
                    if not x:
                        continue
                    num = p * x
                elif not y:
                    if not x:
                        continue
                    num = p * x
                else:
                    num = p * x - f * y if x else -(f * y)
                row_i[j] = num.exact_div(prev) if not prev.is_constant() or prev.constant_value() != 1 else num
            row_i[c] = Polynomial.zero(nv)
        prev = p
        r += 1
        if r == nrows:
            break
    return r


def probabilistic_rank(m: PolyMatrix, trials: int = PROBABILISTIC_TRIALS,
                       rng: random.Random | None = None) -> int:
    """Maximum rational rank over random integer specialisations."""
    rng = rng or random.Random(DEFAULT_SEED)
    nv = m.nvars
    lo, hi = SAMPLE_RANGE
    best = 0
    for _ in range(trials):
        pt = [rng.randint(lo, hi) for _ in range(nv)]
        best = max(best, rank(m.evaluate(pt)))
    return best


def matrix_rank(m: PolyMatrix, mode: str = "exact", *,
                exact_bound: int = DEFAULT_EXACT_RANK_BOUND,
                rng: random.Random | None = None) -> tuple[int, str]:
    """Generic rank of a polynomial matrix, returned with the method used."""
    if mode == "exact":
        if m.rows > exact_bound or m.cols > exact_bound:
            raise RankBoundError(
                f"{m.rows}x{m.cols} exceeds the exact rank bound {exact_bound}x{exact_bound}; "
                "use mode='probabilistic' or raise the bound")
        return bareiss_rank(m), "exact"
    if mode == "probabilistic":
        return probabilistic_rank(m, rng=rng), "probabilistic"
    if mode == "auto":
        if m.rows <= exact_bound and m.cols <= exact_bound:
            return bareiss_rank(m), "exact"
        return probabilistic_rank(m, rng=rng), "probabilistic"
    raise ValueError(f"unknown rank mode {mode!r}")


# ---------------------------------------------------------------------------
# integer lattices


def _hermite_rows(rows: list[list[int]]) -> list[list[int]]:
    """Row Hermite normal form (positive pivots, reduced above), zero rows dropped."""
    m = [list(r) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    out = []
    r = 0
    for c in range(ncols):
        # gcd-combine all rows from r down into row r at column c
        live = [i for i in range(r, len(m)) if m[i][c]]
        if not live:
            continue
        first = live[0]
        m[r], m[first] = m[first], m[r]
        for i in range(r + 1, len(m)):
            while m[i][c]:
                q = m[r][c] // m[i][c]
                m[r] = [x - q * y for x, y in zip(m[r], m[i])]
                m[r], m[i] = m[i], m[r]
        if m[r][c] < 0:
            m[r] = [-x for x in m[r]]
        for i in range(r):
            q = m[i][c] // m[r][c]
            if q:
                m[i] = [x - q * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    out = [row for row in m[:r] if any(row)]
    return out


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """Basis of the integer nullspace lattice in Hermite normal form.

    Vectors are primitive with positive first nonzero entry.  Computed by
    unimodular column reduction of the matrix: the transformation columns
    that land on zero columns span exactly the integer kernel.
    """
    rows = [list(map(int, r)) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if any(len(r) != ncols for r in rows):
        raise ValueError("ragged matrix")
    # work on the transpose augmented with the identity: [A^T | I]
    aug = [[rows[i][j] for i in range(len(rows))] + [int(k == j) for k in range(ncols)]
           for j in range(ncols)]
    nr = len(rows)
    r = 0
    for c in range(nr):
        live = [i for i in range(r, ncols) if aug[i][c]]
        if not live:
            continue
        aug[r], aug[live[0]] = aug[live[0]], aug[r]
        for i in range(r + 1, ncols):
            while aug[i][c]:
                q = aug[r][c] // aug[i][c]
                aug[r] = [x - q * y for x, y in zip(aug[r], aug[i])]
                aug[r], aug[i] = aug[i], aug[r]
        r += 1
    kernel = [row[nr:] for row in aug[r:]]
    basis = _hermite_rows(kernel)
    out = []
    for v in basis:
        g = math.gcd(*v)
        v = [x // g for x in v]
        lead = next(x for x in v if x)
        out.append(v if lead > 0 else [-x for x in v])
    return out
