"""Loading and checking the shipped catalog of algebras and printed invariants.

A catalog directory holds ``<name>.alg`` and ``<name>.inv`` per entry, an
``errata.txt`` (tab separated: entry, item, status, note) and optionally a
``manifest.tsv`` with per-entry metadata (printed name, kind, search degree,
table).  Entries without a manifest row default to kind ``rigid`` and the
default search degree.
"""

from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Sequence

from .algebra import LieAlgebra, parse_algebra, structure_report, validate
from .coadjoint import (PASS, NamedInvariant, PowerProduct, Verdict, independence_rank,
                        invariant_count, parse_invariants, parse_power_product,
                        verify_power_product)
from .linalg import DEFAULT_EXACT_RANK_BOUND, DEFAULT_SEED
from .search import DEFAULT_MAX_DEGREE, search_invariants

TYPO_SUSPECTED = "typo-suspected"
RECONSTRUCTED = "reconstructed"
RESOLVED = "resolved"
AMBIGUOUS = "ambiguous"
STATUSES = (TYPO_SUSPECTED, RECONSTRUCTED, RESOLVED, AMBIGUOUS)

RIGID, SIDE = "rigid", "side"

REPORT_COLUMNS = ("entry", "dim", "torus-rank", "N", "listed", "verified", "indep-rank", "errata-count")

_REPLACEMENT = re.compile(r"replacement\s*=\s*(.+)$")


class CatalogError(ValueError):
    pass


def default_catalog_dir() -> Path:
    return Path(str(resources.files("rigidlie") / "data" / "catalog"))


@dataclass(frozen=True)
class Erratum:
    entry: str
    item: str
    status: str
    note: str

    @property
    def replacement_text(self) -> str | None:
        m = _REPLACEMENT.search(self.note)
        return m.group(1).strip() if m else None

    @property
    def derived(self) -> bool:
        return "[DERIVED]" in self.note


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    printed_name: str
    kind: str
    algebra: LieAlgebra
    expected: tuple  # NamedInvariant as printed; empty means "none"
    search_degree: int
    table: str
    errata: tuple  # Erratum

    @property
    def declared_rank(self) -> int:
        return self.algebra.torus_rank

    @property
    def printed_none(self) -> bool:
        return not self.expected

    def flagged(self, status: str = TYPO_SUSPECTED) -> list[Erratum]:
        return [e for e in self.errata if e.status == status]

    @property
    def typo_items(self) -> set[str]:
        return {e.item for e in self.flagged()}

    def replacements(self) -> dict[str, PowerProduct]:
        """Item -> derived replacement for every typo-suspected invariant.

        The replacement sits on a ``resolved`` row for the same item; the
        ``typo-suspected`` row only describes the printed failure.
        """
        out = {}
        names = self.algebra.coordinate_names()
        typo = self.typo_items
        for e in self.flagged(RESOLVED):
            if e.item in typo and e.replacement_text:
                out[e.item] = parse_power_product(e.replacement_text, names)
        return out

    def effective_invariants(self) -> list[tuple[str, PowerProduct]]:
        """Printed invariants with typo-suspected ones swapped for replacements."""
        rep = self.replacements()
        out = [(i.name, rep.pop(i.name, i.product)) for i in self.expected]
        out.extend(sorted(rep.items()))
        return out


def natural_key(name: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name)]


def parse_errata(text: str) -> list[Erratum]:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise CatalogError(f"errata line {lineno}: expected 4 tab-separated fields")
        entry, item, status, note = (p.strip() for p in parts)
        if status not in STATUSES:
            raise CatalogError(f"errata line {lineno}: unknown status {status!r}")
        out.append(Erratum(entry, item, status, note))
    return out


def _read_manifest(path: Path) -> dict[str, dict]:
    if not path.exists():
        return {}
    rows = {}
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split("\t")
    for line in lines[1:]:
        if line.strip():
            row = dict(zip(header, line.split("\t")))
            rows[row["file"]] = row
    return rows


def load_entry(directory: Path, name: str, meta: dict | None = None,
               errata: Sequence[Erratum] = ()) -> CatalogEntry:
    meta = meta or {}
    alg_path = directory / f"{name}.alg"
    a = parse_algebra(alg_path.read_text(encoding="utf-8"))
    rep = validate(a)
    if not rep.ok:
        (i, j, k), _, desc = rep.violations[0]
        raise CatalogError(f"{name}: Jacobi identity fails on ({a.basis[i]}, {a.basis[j]}, {a.basis[k]}): {desc}")
    if a.torus_indices:
        s = structure_report(a)
        if not (s.torus_commutes and s.torus_diagonal and s.nilradical_is_nilpotent_ideal):
            raise CatalogError(f"{name}: role annotation rejected (torus must commute and act diagonally "
                               f"on a nilpotent ideal)")
    inv_path = directory / f"{name}.inv"
    expected = ()
    if inv_path.exists():
        expected = tuple(parse_invariants(inv_path.read_text(encoding="utf-8"), a.coordinate_names()))
    return CatalogEntry(
        name=name,
        printed_name=meta.get("printed_name", name),
        kind=meta.get("kind", RIGID),
        algebra=a,
        expected=expected,
        search_degree=int(meta.get("search_degree", DEFAULT_MAX_DEGREE)),
        table=meta.get("table", ""),
        errata=tuple(e for e in errata if e.entry == name),
    )


def load_catalog(directory: str | Path | None = None, *, threads: int = 1) -> list[CatalogEntry]:
    """Load every entry of a catalog directory, sorted by name.

    Any Jacobi failure aborts with the entry name and the offending triple.
    """
    directory = Path(directory) if directory is not None else default_catalog_dir()
    if not directory.is_dir():
        raise CatalogError(f"not a directory: {directory}")
    names = sorted((p.stem for p in directory.glob("*.alg")), key=natural_key)
    if not names:
        return []
    manifest = _read_manifest(directory / "manifest.tsv")
    err_path = directory / "errata.txt"
    errata = parse_errata(err_path.read_text(encoding="utf-8")) if err_path.exists() else []

    def one(n):
        return load_entry(directory, n, manifest.get(n), errata)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, names))
    return [one(n) for n in names]


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class EntryReport:
    entry: CatalogEntry
    count: int  # N from the commutator table
    verdicts: tuple  # (name, Verdict) for the printed invariants
    indep_rank: int  # over the printed invariants that pass
    replacement_verdicts: tuple  # (item, Verdict) for derived replacements
    effective_rank: int  # printed-and-passing plus replacements
    search_rank: int | None = None  # assembled rank at the entry's search degree

    @property
    def listed(self) -> int:
        return len(self.entry.expected)

    @property
    def verified(self) -> int:
        return sum(1 for _, v in self.verdicts if v.status == PASS)

    @property
    def as_printed_ok(self) -> bool:
        """Every printed invariant passes and they reach the printed count = N."""
        return self.verified == self.listed and self.indep_rank == self.listed == self.count

    @property
    def ok(self) -> bool:
        """Passes as printed, or through the derived replacements of its errata."""
        if not self.entry.typo_items:
            return self.as_printed_ok
        reps_ok = all(v.status == PASS for _, v in self.replacement_verdicts)
        return reps_ok and self.effective_rank == self.count

    @property
    def gate_ok(self) -> bool:
        """Pass/fail used for the catalog exit status.

        Side entries list a partial set (or leave it to search), so only
        their listed invariants, or the replacements of flagged ones, must
        verify.
        """
        if self.entry.kind == RIGID:
            return self.ok
        typo = self.entry.typo_items
        printed = all(v.status == PASS for k, v in self.verdicts if k not in typo)
        return printed and all(v.status == PASS for _, v in self.replacement_verdicts)

    def row(self) -> tuple:
        e = self.entry
        return (e.name, e.algebra.dim, e.declared_rank, self.count, self.listed, self.verified,
                self.indep_rank, len(e.errata))


def verify_entry(entry: CatalogEntry, *, seed: int = DEFAULT_SEED,
                 exact_bound: int = DEFAULT_EXACT_RANK_BOUND, search: bool = False) -> EntryReport:
    a = entry.algebra
    n = invariant_count(a, exact_bound=exact_bound, seed=seed)
    verdicts = tuple((i.name, verify_power_product(a, i.product)) for i in entry.expected)
    passing = [i.product for i, (_, v) in zip(entry.expected, verdicts) if v.status == PASS]
    ir = independence_rank(a, passing, seed=seed) if passing else 0
    reps = entry.replacements()
    rep_verdicts = tuple((k, verify_power_product(a, F)) for k, F in sorted(reps.items()))
    eff = [F for k, F in entry.effective_invariants()
           if k in reps or dict(verdicts).get(k, Verdict(PASS)).status == PASS]
    er = independence_rank(a, eff, seed=seed) if eff else 0
    sr = None
    if search:
        sr = search_invariants(a, entry.search_degree, seed=seed).rank
    return EntryReport(entry, n, verdicts, ir, rep_verdicts, er, sr)


def verify_catalog(entries: Sequence[CatalogEntry], *, seed: int = DEFAULT_SEED,
                   exact_bound: int = DEFAULT_EXACT_RANK_BOUND, threads: int = 1,
                   search: bool = False) -> list[EntryReport]:
    def one(e):
        return verify_entry(e, seed=seed, exact_bound=exact_bound, search=search)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(one, entries))
    else:
        reports = [one(e) for e in entries]
    return sorted(reports, key=lambda r: natural_key(r.entry.name))


def format_report(reports: Sequence[EntryReport]) -> str:
    lines = ["\t".join(REPORT_COLUMNS)]
    for r in reports:
        lines.append("\t".join(str(x) for x in r.row()))
    return "\n".join(lines) + "\n"
