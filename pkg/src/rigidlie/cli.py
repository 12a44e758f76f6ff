"""``rigidlie`` command line.

Exit status: 0 success, 1 a verification or screen failure, 2 bad usage or
unreadable input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .algebra import AlgebraParseError, LieAlgebra, parse_algebra, serialize_algebra, structure_report, validate
from .catalog import CatalogError, format_report, load_catalog, verify_catalog
from .coadjoint import (PASS, format_invariants, independence_rank, invariant_count,
                        parse_invariants, verify_power_product)
from .expr import ExpressionError
from .families import FAMILIES, FamilyError, FamilySpec, generate_family
from .linalg import DEFAULT_EXACT_RANK_BOUND, DEFAULT_SEED, RankBoundError
from .poly import format_polynomial
from .search import DEFAULT_MAX_DEGREE, SearchTooLarge, assemble_invariants, semi_invariants
from .structure import RootSystemError, NOT_RIGID, criteria_scan, regular_vector, root_system, rigidity_screen

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_algebra(path: str) -> LieAlgebra:
    return parse_algebra(_read(path))


def _fmt_vec(a: LieAlgebra, v) -> str:
    parts = [f"{c}*{a.basis[k]}" for k, c in enumerate(v) if c]
    return " + ".join(parts).replace("+ -", "- ") or "0"


def _write_or_print(text: str, path: str | None, out) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        out.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args, out) -> int:
    a = _load_algebra(args.file)
    rep = validate(a)
    print(rep.describe(a), file=out)
    return OK if rep.ok else FAILED


def cmd_info(args, out) -> int:
    a = _load_algebra(args.file)
    s = structure_report(a)
    w = lambda *x: print(*x, file=out)
    w(f"name: {a.name}")
    w(f"dim: {a.dim}")
    w(f"basis: {' '.join(a.basis)}")
    w(f"torus: {' '.join(a.basis[t] for t in a.torus_indices) or '-'}")
    w(f"lower central series: {' '.join(map(str, s.lower_central))}")
    w(f"derived series: {' '.join(map(str, s.derived))}")
    w(f"nilradical lower central series: {' '.join(map(str, s.nilradical_lower_central))}")
    w(f"center: dim {s.center_dim}")
    for v in s.center_basis:
        w(f"  {_fmt_vec(a, v)}")
    w(f"nilradical center: dim {s.nilradical_center_dim}")
    for v in s.nilradical_center_basis:
        w(f"  {_fmt_vec(a, v)}")
    if a.torus_indices:
        if s.torus_diagonal:
            for t, vals in s.eigenvalues.items():
                pairs = " ".join(f"{a.basis[k]}:{vals[k]}" for k in a.nilradical_indices)
                w(f"eigenvalues {t}: {pairs}")
        else:
            bad = ", ".join(f"[{t},{b}]" for t, b in s.non_diagonal)
            w(f"torus not diagonal: {bad}")
    w(f"N: {invariant_count(a, exact_bound=args.exact_rank_bound, seed=args.seed)}")
    return OK


def cmd_verify(args, out) -> int:
    a = _load_algebra(args.alg)
    invs = parse_invariants(_read(args.inv), a.coordinate_names())
    passing = []
    for inv in invs:
        v = verify_power_product(a, inv.product)
        print(f"{inv.name}: {v.describe(a)}", file=out)
        if v.status == PASS:
            passing.append(inv.product)
    r = independence_rank(a, passing, seed=args.seed)
    n = invariant_count(a, exact_bound=args.exact_rank_bound, seed=args.seed)
    print(f"independence rank: {r}", file=out)
    print(f"N: {n}", file=out)
    return OK if len(passing) == len(invs) and r == len(invs) else FAILED


def cmd_search(args, out) -> int:
    a = _load_algebra(args.file)
    names = a.coordinate_names()
    sems = semi_invariants(a, args.max_degree, threads=args.threads)
    print(f"semi-invariants (degree <= {args.max_degree}): {len(sems)}", file=out)
    for s in sems:
        wt = ",".join(str(x) for x in s.weight)
        print(f"  [{wt}] {format_polynomial(s.poly, names)}", file=out)
    asm = assemble_invariants(a, sems, seed=args.seed,
                              target=invariant_count(a, exact_bound=args.exact_rank_bound, seed=args.seed))
    named = [(f"I{i}", F) for i, F in enumerate(asm.invariants, start=1)]
    print(f"invariants: {asm.rank} of N = {asm.target}", file=out)
    text = format_invariants(named, names)
    out.write(text)
    if args.emit:
        Path(args.emit).write_text(text, encoding="utf-8")
    return OK if asm.complete else FAILED


def cmd_roots(args, out) -> int:
    a = _load_algebra(args.file)
    if args.regular not in a.basis:
        raise UsageError(f"unknown basis label {args.regular!r}")
    rs = root_system(a, args.regular)
    for line in rs.format(a):
        print(line, file=out)
    scr = rigidity_screen(a, args.regular)
    print(f"unknowns: {len(rs.unknowns)}  equations: {scr.equations}", file=out)
    print(f"rank(S): {scr.rank}  dim(n) - 1: {scr.expected_rank}", file=out)
    print(scr.verdict, file=out)
    return FAILED if scr.verdict == NOT_RIGID else OK


def cmd_criteria(args, out) -> int:
    a = _load_algebra(args.file)
    c = criteria_scan(a)
    names = a.coordinate_names()
    w = lambda *x: print(*x, file=out)
    if a.torus_indices:
        coefs, d0 = regular_vector(a)
        combo = " + ".join(f"{k}*{a.basis[t]}" for k, t in zip(coefs, a.torus_indices) if k)
        w(f"regular vector: {combo.replace('+ -', '- ')}  dim V0: {d0}")
    w(f"pairing pattern (no invariants): {'yes' if c.pairing_applies else 'no'}")
    if c.pairing_witness:
        w(f"  slots: {' '.join(c.pairing_witness)}")
    w(f"eigenvalue pattern (no invariants): {'yes' if c.eigenvalue_pattern_applies else 'no'}")
    w(f"torus-fixed central ideal: dim {len(c.central_ideal)}")
    ok = True
    for F, v in zip(c.central_invariants, c.central_verdicts):
        w(f"  {F.format(names)}: {v.describe(a)}")
        ok = ok and v.status == PASS
    if c.predicts_no_invariants:
        n = invariant_count(a, exact_bound=args.exact_rank_bound, seed=args.seed)
        w(f"N: {n}")
        ok = ok and n == 0
    return OK if ok else FAILED


def cmd_catalog(args, out) -> int:
    entries = load_catalog(args.data, threads=args.threads)
    reports = verify_catalog(entries, seed=args.seed, exact_bound=args.exact_rank_bound,
                             threads=args.threads)
    text = format_report(reports)
    bad = [r.entry.name for r in reports if not r.gate_ok]
    if args.tsv:
        Path(args.tsv).write_text(text, encoding="utf-8")
        print(f"{len(reports)} entries, {len(reports) - len(bad)} pass", file=out)
    else:
        out.write(text)
    for name in bad:
        print(f"FAIL {name}", file=sys.stderr)
    return FAILED if bad else OK


def cmd_family(args, out) -> int:
    inst = generate_family(FamilySpec.parse(args.family, args.params))
    _write_or_print(serialize_algebra(inst.algebra), args.out, out)
    if args.inv:
        names = inst.algebra.coordinate_names()
        named = [(i.name, F) for i, F in zip(inst.invariants, inst.effective_invariants())]
        Path(args.inv).write_text(format_invariants(named, names), encoding="utf-8")
    return OK


# ---------------------------------------------------------------------------
# parser


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=d(DEFAULT_SEED),
                        help=f"seed for randomized rank checks (default {DEFAULT_SEED})")
    parser.add_argument("--threads", type=int, default=d(1), help="worker threads (default 1)")
    parser.add_argument("--exact-rank-bound", type=int, default=d(DEFAULT_EXACT_RANK_BOUND),
                        help=f"largest matrix ranked symbolically (default {DEFAULT_EXACT_RANK_BOUND})")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rigidlie", description="Invariants of Lie algebras given by structure constants.")
    _global_flags(p, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    s = sub.add_parser("validate", parents=[common], help="check the Jacobi identity")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("info", parents=[common], help="series, centers, eigenvalues, N")
    s.add_argument("file")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("verify", parents=[common], help="verify an invariant file")
    s.add_argument("alg")
    s.add_argument("inv")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", parents=[common], help="search for invariants")
    s.add_argument("file")
    s.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    s.add_argument("--emit", metavar="INV", help="write the invariants found to this file")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("roots", parents=[common], help="root system and rank screen")
    s.add_argument("file")
    s.add_argument("--regular", required=True, metavar="LABEL")
    s.set_defaults(func=cmd_roots)

    s = sub.add_parser("criteria", parents=[common], help="sufficiency criteria for (non)existence")
    s.add_argument("file")
    s.set_defaults(func=cmd_criteria)

    s = sub.add_parser("catalog", parents=[common], help="catalog operations")
    csub = s.add_subparsers(dest="catalog_command", metavar="ACTION", parser_class=_Parser)
    c = csub.add_parser("verify-all", parents=[common], help="verify every entry, TSV report")
    c.add_argument("--data", default=None, help="catalog directory (default: the shipped one)")
    c.add_argument("--tsv", metavar="PATH")
    c.set_defaults(func=cmd_catalog)

    s = sub.add_parser("family", parents=[common], help="generate a family member as .alg")
    s.add_argument("family", choices=sorted(FAMILIES + ("ln-torus",)))
    s.add_argument("--params", required=True)
    s.add_argument("--out", metavar="PATH")
    s.add_argument("--inv", metavar="PATH", help="also write its invariants")
    s.set_defaults(func=cmd_family)
    return p


def run_command(argv: Sequence[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        if not getattr(args, "func", None):
            parser.print_help(err)
            return USAGE
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        return args.func(args, out)
    except UsageError as exc:
        print(f"rigidlie: {exc}", file=err)
        return USAGE
    except (AlgebraParseError, ExpressionError, FamilyError, CatalogError, RootSystemError,
            RankBoundError, SearchTooLarge, ValueError) as exc:
        print(f"rigidlie: {exc}", file=err)
        return USAGE


def main(argv: Sequence[str] | None = None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
