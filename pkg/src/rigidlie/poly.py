"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial lives in a ring with a fixed number of variables ``nvars``.
Monomials are dense exponent tuples of that length; terms are kept in a
dict ``{exponents: coefficient}`` with zero coefficients never stored, so two
polynomials are equal exactly when their term maps are equal.

Coefficients are ``int`` or ``fractions.Fraction``.  Integral values are kept
as ``int`` where arithmetic produces them, which is a pure speed measure:
``Fraction(3) == 3`` and both hash alike, so canonical forms are unaffected.
"""

from __future__ import annotations

import heapq
import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Scalar = Union[int, Fraction]
Monomial = tuple


def as_scalar(value) -> Scalar:
    """Coerce ints, Fractions and rational strings like ``"-3/2"``."""
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        return as_scalar(Fraction(value.strip()))
    raise TypeError(f"not an exact rational: {value!r}")


def sdiv(a: Scalar, b: Scalar) -> Scalar:
    """Exact quotient of two scalars, staying in ``int`` when possible."""
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r == 0:
            return q
    q = Fraction(a) / b
    return q.numerator if q.denominator == 1 else q


def grlex_key(m: Monomial):
    """Sort key for graded lexicographic order (x0 > x1 > ...)."""
    return (sum(m), m)


class NotDivisibleError(ArithmeticError):
    pass


class Polynomial:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, Scalar] | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for m, c in terms.items():
                if c:
                    if len(m) != nvars:
                        raise ValueError(f"monomial {m} has wrong length for {nvars} variables")
                    clean[tuple(m)] = as_scalar(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Polynomial":
        # terms already clean: no zero coefficients, tuple keys
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        c = as_scalar(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Polynomial":
        if not 0 <= index < nvars:
            raise IndexError(f"variable index {index} out of range for {nvars} variables")
        m = [0] * nvars
        m[index] = 1
        return cls._raw(nvars, {tuple(m): 1})

    @classmethod
    def monomial(cls, nvars: int, exponents: Sequence[int], c=1) -> "Polynomial":
        return cls(nvars, {tuple(exponents): c})

    # -- basic predicates -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Scalar:
        return self.terms.get((0,) * self.nvars, 0)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def variables(self) -> set[int]:
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return used

    def __len__(self) -> int:
        return len(self.terms)

    def sorted_terms(self) -> list[tuple[Monomial, Scalar]]:
        """Terms in decreasing graded lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_term(self) -> tuple[Monomial, Scalar]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=grlex_key)
        return m, self.terms[m]

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError(f"ring mismatch: {self.nvars} vs {other.nvars} variables")
            return other
        return Polynomial.constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Polynomial":
        c = as_scalar(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(self.nvars, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        other = self._coerce(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for m2, c2 in b.items():
            for m1, c1 in a.items():
                m = tuple([x + y for x, y in zip(m1, m2)])
                s = get(m, 0) + c1 * c2
                out[m] = s
        return Polynomial._raw(self.nvars, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, c):
        if isinstance(c, Polynomial):
            return self.exact_div(c)
        c = as_scalar(c)
        return Polynomial._raw(self.nvars, {m: sdiv(v, c) for m, v in self.terms.items()})

    def exact_div(self, divisor: "Polynomial") -> "Polynomial":
        """Quotient ``self / divisor``; raises NotDivisibleError if inexact."""
        divisor = self._coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero():
            return Polynomial.zero(self.nvars)
        if divisor.is_constant():
            return self / divisor.constant_value()
        lm, lc = divisor.leading_term()
        rest = [(m, c) for m, c in divisor.terms.items() if m != lm]
        rem = dict(self.terms)
        heap = [(-sum(m), tuple(-e for e in m), m) for m in rem]
        heapq.heapify(heap)
        quot = {}
        while heap:
            _, _, m = heapq.heappop(heap)
            c = rem.pop(m, 0)
            if not c:
                continue
            shift = tuple(x - y for x, y in zip(m, lm))
            if min(shift) < 0:
                raise NotDivisibleError("polynomial division is not exact")
            q = sdiv(c, lc)
            quot[shift] = q
            for m2, c2 in rest:
                t = tuple(x + y for x, y in zip(shift, m2))
                old = rem.get(t)
                if old is None:
                    rem[t] = -q * c2
                    heapq.heappush(heap, (-sum(t), tuple(-e for e in t), t))
                else:
                    new = old - q * c2
                    if new:
                        rem[t] = new
                    else:
                        del rem[t]
        return Polynomial._raw(self.nvars, quot)

    # -- calculus and evaluation -------------------------------------------

    def differentiate(self, v: int) -> "Polynomial":
        if not 0 <= v < self.nvars:
            raise IndexError(f"variable index {v} out of range for {self.nvars} variables")
        out = {}
        for m, c in self.terms.items():
            e = m[v]
            if e:
                m2 = m[:v] + (e - 1,) + m[v + 1:]
                out[m2] = c * e
        return Polynomial._raw(self.nvars, out)

    def gradient(self) -> list["Polynomial"]:
        return [self.differentiate(v) for v in range(self.nvars)]

    def evaluate(self, point: Sequence[Scalar]) -> Scalar:
        if len(point) != self.nvars:
            raise ValueError("evaluation point has wrong length")
        total = 0
        for m, c in self.terms.items():
            t = c
            for x, e in zip(point, m):
                if e:
                    t = t * x**e
            total += t
        return as_scalar(total) if isinstance(total, Fraction) else total

    def substitute_ring(self, nvars: int, mapping: Sequence[int]) -> "Polynomial":
        """Re-embed into a ring of ``nvars`` variables; variable i -> mapping[i]."""
        out = {}
        for m, c in self.terms.items():
            m2 = [0] * nvars
            for i, e in enumerate(m):
                if e:
                    m2[mapping[i]] += e
            out[tuple(m2)] = c
        return Polynomial._raw(nvars, out)

    def compose(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute variable i by ``images[i]`` (all in one common ring)."""
        if len(images) != self.nvars:
            raise ValueError("one image per variable")
        nv = images[0].nvars if images else 0
        acc = Polynomial.zero(nv)
        cache: dict = {}
        for m, c in self.terms.items():
            t = Polynomial.constant(nv, c)
            for i, e in enumerate(m):
                if e:
                    key = (i, e)
                    if key not in cache:
                        cache[key] = images[i] ** e
                    t = t * cache[key]
            acc = acc + t
        return acc

    # -- normalisation ----------------------------------------------------

    def content(self) -> Fraction:
        """Positive rational c with self / c primitive integral."""
        if not self.terms:
            return Fraction(0)
        nums = [Fraction(c).numerator for c in self.terms.values()]
        dens = [Fraction(c).denominator for c in self.terms.values()]
        return Fraction(math.gcd(*nums), math.lcm(*dens))

    def primitive(self) -> "Polynomial":
        """Integer coefficients with gcd 1 and positive leading coefficient."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading_term()[1] < 0:
            c = -c
        return self / c

    def monic(self) -> "Polynomial":
        return self / self.leading_term()[1]

    # -- comparison / hashing -----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def sort_key(self):
        """Total order used for deterministic listings: degree, then terms."""
        return (self.total_degree(), [(grlex_key(m), Fraction(c)) for m, c in self.sorted_terms()])

    def __repr__(self):
        return f"Polynomial({self.format()})"

    def format(self, names: Sequence[str] | None = None) -> str:
        return format_polynomial(self, names)


def differentiate(p: Polynomial, v: int) -> Polynomial:
    return p.differentiate(v)


def _format_scalar(c: Scalar) -> str:
    c = as_scalar(c)
    return str(c)


def format_polynomial(p: Polynomial, names: Sequence[str] | None = None) -> str:
    """Render with explicit ``*`` and ``^``, e.g. ``2*y5*y7 - y6^2``."""
    if names is None:
        names = [f"x{i}" for i in range(p.nvars)]
    if not p.terms:
        return "0"
    parts = []
    for m, c in p.sorted_terms():
        factors = []
        for i, e in enumerate(m):
            if e == 1:
                factors.append(names[i])
            elif e:
                factors.append(f"{names[i]}^{e}")
        mag = abs(c)
        if not factors:
            body = _format_scalar(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _format_scalar(mag) + "*" + "*".join(factors)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def homogeneous_monomials(nvars: int, degree: int) -> list[Monomial]:
    """All exponent tuples of the given total degree, decreasing grlex."""
    out = []

    def rec(prefix, i, left):
        if i == nvars - 1:
            out.append(tuple(prefix + [left]))
            return
        for e in range(left, -1, -1):
            rec(prefix + [e], i + 1, left - e)

    if nvars == 0:
        return [()] if degree == 0 else []
    rec([], 0, degree)
    return out


def product(polys: Iterable[Polynomial], nvars: int) -> Polynomial:
    result = Polynomial.constant(nvars, 1)
    for p in polys:
        result = result * p
    return result
