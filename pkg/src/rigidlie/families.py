"""Parametric families of solvable algebras with known invariants.

``d2m1``        m >= 2   nilradical g_{2m+1} glued from Heisenberg pieces, torus of rank m
``ln``          n >= 4   filiform L_n with its rank-2 torus, N = n - 3
``heisenberg``  p >= 1   h_p, no torus
``n61``         four rationals (alpha, beta, gamma, delta), abelian nilradical
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import LieAlgebra
from .coadjoint import NamedInvariant, PowerProduct, parse_power_product
from .poly import Polynomial

FAMILIES = ("d2m1", "ln", "heisenberg", "n61")
ALIASES = {"ln-torus": "ln"}
ARITY = {"d2m1": 1, "ln": 1, "heisenberg": 1, "n61": 4}


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: tuple

    @classmethod
    def parse(cls, family: str, text: str) -> "FamilySpec":
        fam = ALIASES.get(family, family)
        if fam not in FAMILIES:
            raise FamilyError(f"unknown family {family!r} (choose from {', '.join(FAMILIES)})")
        try:
            vals = tuple(Fraction(t.strip()) for t in text.split(",") if t.strip())
        except (ValueError, ZeroDivisionError):
            raise FamilyError(f"parameters must be rationals, got {text!r}") from None
        return cls(fam, vals)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise FamilyError(f"unknown family {self.family!r}")
        if len(self.params) != ARITY[self.family]:
            raise FamilyError(f"{self.family} takes {ARITY[self.family]} parameter(s), got {len(self.params)}")


@dataclass(frozen=True)
class Correction:
    item: str
    note: str
    replacement: PowerProduct


@dataclass(frozen=True)
class FamilyInstance:
    algebra: LieAlgebra
    invariants: tuple = ()  # NamedInvariant, as given by the closed formulas
    corrections: tuple = ()  # Correction, for formulas that fail as written
    expected_count: int | None = None

    def effective_invariants(self) -> list[PowerProduct]:
        fixed = {c.item: c.replacement for c in self.corrections}
        return [fixed.get(i.name, i.product) for i in self.invariants]


def _int_param(spec: FamilySpec, lo: int, what: str) -> int:
    v = spec.params[0]
    if v.denominator != 1 or v < lo:
        raise FamilyError(f"{spec.family}: {what} must be an integer >= {lo}, got {v}")
    return int(v)


def _named(a: LieAlgebra, name: str, text: str) -> NamedInvariant:
    return NamedInvariant(name, parse_power_product(text, a.coordinate_names()), text)


def d2m1(m: int) -> FamilyInstance:
    if m < 2:
        raise FamilyError(f"d2m1 needs m >= 2, got {m}")
    xs = [f"X{i}" for i in range(4)]
    ys = [f"Y{i}" for i in range(1, 2 * m - 2)]
    vs = [f"V{i}" for i in range(1, m + 1)]
    top = f"Y{2 * m - 3}"
    br: dict = {("X0", "X1"): {"X2": 1}, ("X0", "X2"): {"X3": 1}, ("X1", top): {"X3": 1}}
    for i in range(1, m - 1):
        br[(f"Y{2 * i - 1}", f"Y{2 * i}")] = {"X3": 1}
    weights = {v: {} for v in vs}
    weights["V1"].update({"X0": 1, "X2": 1, "X3": 2, top: 2})
    weights["V2"].update({"X1": 1, "X2": 1, "X3": 1})
    for i in range(1, m - 1):
        weights["V1"][f"Y{2 * i}"] = 2
        weights["V2"][f"Y{2 * i}"] = 1
        weights[f"V{i + 2}"].update({f"Y{2 * i - 1}": 1, f"Y{2 * i}": -1})
    for v, ws in weights.items():
        for y, w in ws.items():
            br[(v, y)] = {y: w}
    a = LieAlgebra.build(f"d2m1_m{m}", xs + ys + vs, br, torus=vs)
    t = top.lower()
    invs = [_named(a, "J1", f"(-2*x3^2*v2 + x3^2*v1 + x0*x1*x3 - 2*x1*x3*{t} + {t}*x2^2)^1 * (x3)^-2")]
    for k in range(1, m - 1):
        invs.append(_named(a, f"J{k + 1}", f"(x3*v{k + 2} + y{2 * k - 1}*y{2 * k})^1 * (x3)^-1"))
    fixed = parse_power_product(
        f"(-2*x3^2*v2 + x3^2*v1 + x0*x2*x3 - 2*x1*x3*{t} + {t}*x2^2)^1 * (x3)^-2", a.coordinate_names())
    corr = (Correction("J1", "x0*x1*x3 replaced by x0*x2*x3 (torus weight of the other terms)", fixed),)
    return FamilyInstance(a, tuple(invs), corr, expected_count=m - 1)


def ln_torus(n: int) -> FamilyInstance:
    if n < 4:
        raise FamilyError(f"ln needs n >= 4, got {n}")
    xs = [f"X{i}" for i in range(1, n + 2)]
    br: dict = {("X1", f"X{i}"): {f"X{i + 1}": 1} for i in range(2, n + 1)}
    for i in range(1, n + 2):
        br[("V1", f"X{i}")] = {f"X{i}": i}
        if i >= 2:
            br[("V2", f"X{i}")] = {f"X{i}": 1}
    a = LieAlgebra.build(f"ln_n{n}", xs + ["V1", "V2"], br, torus=["V1", "V2"])
    return FamilyInstance(a, expected_count=n - 3)


def heisenberg(p: int) -> FamilyInstance:
    if p < 1:
        raise FamilyError(f"heisenberg needs p >= 1, got {p}")
    labels = [f"X{i}" for i in range(1, 2 * p + 2)]
    z = labels[-1]
    br = {(f"X{i}", f"X{p + i}"): {z: 1} for i in range(1, p + 1)}
    a = LieAlgebra.build(f"h{p}", labels, br)
    return FamilyInstance(a, (_named(a, "Z", f"({z.lower()})^1"),), expected_count=1)


def n61(alpha, beta, gamma, delta) -> FamilyInstance:
    al, be, ga, de = (Fraction(x) for x in (alpha, beta, gamma, delta))
    br = {("X1", "N1"): {"N1": al}, ("X1", "N2"): {"N2": ga}, ("X1", "N4"): {"N4": 1},
          ("X2", "N1"): {"N1": be}, ("X2", "N2"): {"N2": de}, ("X2", "N3"): {"N3": 1}}
    name = "n61_" + "_".join(str(x).replace("/", "o").replace("-", "m") for x in (al, be, ga, de))
    a = LieAlgebra.build(name, ["X1", "X2", "N1", "N2", "N3", "N4"], br, torus=["X1", "X2"])
    names = a.coordinate_names()
    idx = {n: i for i, n in enumerate(names)}

    def pp(*factors):
        return PowerProduct.make((Polynomial.variable(a.dim, idx[v]), Fraction(e)) for v, e in factors)

    e = be * ga - al * de
    first = pp(("n3", be), ("n4", al), ("n1", -1))
    second = pp(("n3", e), ("n1", -ga))
    invs = (NamedInvariant("K1", first, first.format(names)),
            NamedInvariant("K2", second, second.format(names)))
    corr = (Correction("K2", "an n2^alpha factor is needed to balance the X1 weight",
                       pp(("n3", e), ("n2", al), ("n1", -ga))),)
    return FamilyInstance(a, invs, corr, expected_count=2)


def generate_family(spec: FamilySpec) -> FamilyInstance:
    if spec.family == "d2m1":
        return d2m1(_int_param(spec, 2, "m"))
    if spec.family == "ln":
        return ln_torus(_int_param(spec, 4, "n"))
    if spec.family == "heisenberg":
        return heisenberg(_int_param(spec, 1, "p"))
    return n61(*spec.params)


def coordinate_images(source: LieAlgebra, target: LieAlgebra,
                      basis_map: dict[str, tuple[str, Fraction | int]]) -> list[Polynomial]:
    """Images of the source coordinates under a signed basis relabelling.

    ``basis_map[label] = (target_label, c)`` means the source element is sent
    to ``c`` times the target element, so the source coordinate becomes ``c``
    times the target coordinate.
    """
    idx = {b: i for i, b in enumerate(target.basis)}
    out = []
    for b in source.basis:
        lab, c = basis_map[b]
        out.append(Polynomial.variable(target.dim, idx[lab]).scale(c))
    return out


# r_7^7 (catalog basis) -> d2m1 at m = 2
R7_7_TO_D2M1 = {"Y1": ("X0", 1), "Y2": ("Y1", -1), "Y3": ("X1", 1), "Y4": ("X2", 1),
                "Y5": ("X3", 1), "V1": ("V1", 1), "V2": ("V2", 1)}
