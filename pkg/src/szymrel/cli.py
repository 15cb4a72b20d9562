"""Command-line interface.

Exit status: 0 on success or a true decision, 1 on a false decision,
2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import census as census_mod
from .canon import canonize, format_canonical
from .graphdyn import decompose, eventual_period, format_decomposition
from .relcore import Hom, ParseError, Rel, format_matrix, parse_matrix
from .szymiso import (
    brute_force_szym_iso,
    certificate,
    classifying_graph,
    classifying_graph_to_dot,
    relation_to_dot,
    szym_isomorphic,
    szym_isomorphism_witness,
)

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_USAGE = 2


class InputError(Exception):
    pass


def _read_rel(path: str) -> Rel:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    try:
        rel = parse_matrix(text)
    except ParseError as exc:
        raise InputError(f"{path}:{exc.line}:{exc.column}: {exc.message}") from exc
    if not isinstance(rel, Rel):
        raise InputError(f"{path}: expected a square relation, got shape {rel.shape}")
    return rel


def _hom_block(title: str, h: Hom) -> str:
    return f"# {title}\n{format_matrix(h)}"


def cmd_canonize(args) -> int:
    r = _read_rel(args.file)
    if args.p is not None and not eventual_period(r).admits(args.p):
        raise InputError(f"--p {args.p} is not an eventual period of the input")
    obj, wit = canonize(r, args.p)
    sys.stdout.write(format_canonical(obj, wit))
    if args.witness:
        sys.stdout.write(_hom_block("S", wit.S))
        sys.stdout.write(_hom_block("T", wit.T))
    return EXIT_TRUE


def cmd_iso(args) -> int:
    a, b = _read_rel(args.a), _read_rel(args.b)
    if args.oracle:
        if max(a.n, b.n) > 3:
            raise InputError("--oracle supports relations on at most 3 points")
        result = brute_force_szym_iso(a, b)
    else:
        result = szym_isomorphic(a, b)
    print("ISOMORPHIC" if result else "NOT-ISOMORPHIC")
    if result and args.witness:
        forward, backward = szym_isomorphism_witness(a, b)
        print(f"# forward shift={forward.shift}")
        sys.stdout.write(format_matrix(forward.hom))
        print(f"# backward shift={backward.shift}")
        sys.stdout.write(format_matrix(backward.hom))
    return EXIT_TRUE if result else EXIT_FALSE


def cmd_cert(args) -> int:
    obj, _ = canonize(_read_rel(args.file))
    print(certificate(obj).hex())
    return EXIT_TRUE


def cmd_classify(args) -> int:
    obj, _ = canonize(_read_rel(args.file))
    sys.stdout.write(classifying_graph(obj).to_text())
    return EXIT_TRUE


def cmd_decompose(args) -> int:
    r = _read_rel(args.file)
    sys.stdout.write(format_decomposition(decompose(r), eventual_period(r)))
    return EXIT_TRUE


def cmd_census(args) -> int:
    if args.max_n > census_mod.N_MAX or args.max_n < 0:
        raise InputError(f"--max-n must be between 0 and {census_mod.N_MAX}")
    if args.workers < 1:
        raise InputError("--workers must be positive")
    report = census_mod.run_census(
        args.max_n, workers=args.workers, catalog_out=args.out, prune_symmetry=args.prune_symmetry
    )
    sys.stdout.write(report.summary())
    if args.witnesses:
        pairs = census_mod.find_incompleteness_witnesses(report.records)
        print(f"incompleteness witnesses: {len(pairs)}")
        for a, b in pairs:
            print(f"witness {a} {b}")
    return EXIT_TRUE


def cmd_lookup(args) -> int:
    r = _read_rel(args.file)
    try:
        rec = census_mod.catalog_lookup(args.catalog, r)
    except census_mod.NotCoveredError as exc:
        print(f"NOT-COVERED: {exc}")
        return EXIT_FALSE
    print(rec.to_line())
    return EXIT_TRUE


def cmd_verify_catalog(args) -> int:
    try:
        report = census_mod.verify_catalog(args.catalog, sample=args.sample, seed=args.seed)
    except census_mod.CatalogIntegrityError as exc:
        print(f"INTEGRITY-ERROR: {exc}")
        return EXIT_FALSE
    print(report)
    return EXIT_TRUE


def cmd_export_dot(args) -> int:
    r = _read_rel(args.file)
    if args.graph:
        obj, _ = canonize(r)
        sys.stdout.write(classifying_graph_to_dot(classifying_graph(obj)))
    else:
        sys.stdout.write(relation_to_dot(r))
    return EXIT_TRUE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="szymrel", description="Canonical forms and isomorphism of finite relations."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("canonize", help="print the canonical form of a relation")
    p.add_argument("file")
    p.add_argument("--p", type=int, help="eventual period to use instead of the minimal one")
    p.add_argument("--witness", action="store_true", help="also print S and T")
    p.set_defaults(func=cmd_canonize)

    p = sub.add_parser("iso", help="decide isomorphism of two relations")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--witness", action="store_true")
    p.add_argument("--oracle", action="store_true", help="use the brute-force search (n <= 3)")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("cert", help="print the certificate of the canonical form")
    p.add_argument("file")
    p.set_defaults(func=cmd_cert)

    p = sub.add_parser("classify", help="print the classifying graph")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("decompose", help="components, periods and eventual period")
    p.add_argument("file")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("census", help="enumerate all relations up to a size")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="catalog file to write")
    p.add_argument("--prune-symmetry", action="store_true")
    p.add_argument("--witnesses", action="store_true", help="report classes with equal classifying graphs")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("lookup", help="find the catalog class of a relation")
    p.add_argument("catalog")
    p.add_argument("file")
    p.set_defaults(func=cmd_lookup)

    p = sub.add_parser("verify-catalog", help="re-check catalog invariants")
    p.add_argument("catalog")
    p.add_argument("--sample", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify_catalog)

    p = sub.add_parser("export-dot", help="graphviz export of a relation or its classifying graph")
    p.add_argument("file")
    p.add_argument("--graph", action="store_true", help="export the classifying graph")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"szymrel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, census_mod.CatalogIntegrityError) as exc:
        print(f"szymrel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
