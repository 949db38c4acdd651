"""Command-line driver. Every verdict comes straight from the library.

Exit codes: 0 success, 1 a property fails, 2 invalid input, 3 a precondition
(such as steadiness) fails, 4 an internal consistency check tripped.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import BUILTIN_NAMES, builtin
from .enumeration import PREDICATES, EnumerationSpec, enumerate_structures
from .errors import (InconsistencyError, NotAssociative, NotResiduated, PreconditionError,
                     ResposError)
from .idempotents import (central_positive_idempotents, check_balanced, check_brouwerian,
                          check_commutative, check_condition_H, check_idempotent, check_idp_closed,
                          check_integral, check_integrally_closed, check_involutive,
                          check_self_residuals_positive, check_square_decreasing, check_steady,
                          index_semilattice, positive_idempotents)
from .io import (algebra_document, dumps, is_system_document, load_poset, parse_json,
                 algebra_from_document, system_document, system_from_document)
from .oracles import run_suite, suite_names
from .plonka import ResiduatedSystem
from .report import PropertyReport, combine, holds
from .residuated import ResiduatedStructure, check_associativity, check_residuation
from .structure import compose_with_embedding, decompose, roundtrip, steadiest_index

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_PRECONDITION, EXIT_INTERNAL = 0, 1, 2, 3, 4

DEFAULT_PROPS = ("residuation", "balanced", "H", "steady", "integrally-closed")

CHECKS = {
    "residuation": check_residuation,
    "associativity": check_associativity,
    "balanced": check_balanced,
    "self-residuals-positive": check_self_residuals_positive,
    "H": lambda A: combine("H", check_condition_H(A)),
    "H1": lambda A: check_condition_H(A)["H1"],
    "H2": lambda A: check_condition_H(A)["H2"],
    "H3": lambda A: check_condition_H(A)["H3"],
    "steady": check_steady,
    "integrally-closed": check_integrally_closed,
    "integral": check_integral,
    "idempotent": check_idempotent,
    "commutative": check_commutative,
    "square-decreasing": check_square_decreasing,
    "idp-closed": check_idp_closed,
    "involutive": check_involutive,
    "brouwerian": check_brouwerian,
    "lattice": lambda A: holds("lattice") if A.poset.is_lattice() else
    PropertyReport(False, "lattice", None, "some pair lacks a join or meet"),
}


class InputError(Exception):
    pass


def _read_doc(path: str):
    p = Path(path)
    if not p.exists():
        raise InputError(f"{path}: no such file")
    return parse_json(p.read_text(encoding="utf-8"), path)


def _load_structure(path: str) -> ResiduatedStructure:
    doc = _read_doc(path)
    if is_system_document(doc):
        raise InputError(f"{path}: expected a structure document, got a system document")
    return algebra_from_document(doc)


def _props(text: str | None, known) -> list[str]:
    if not text:
        return []
    names = [t.strip() for t in text.split(",") if t.strip()]
    bad = [n for n in names if n not in known]
    if bad:
        raise InputError(f"unknown property {bad[0]!r}; known: {', '.join(known)}")
    return names


def _write(text: str, target: str | None):
    if target:
        Path(target).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _index(A: ResiduatedStructure, choice: str):
    if choice == "steadiest":
        return steadiest_index(A)
    if choice == "zidp":
        return index_semilattice(A, central_positive_idempotents(A))
    if choice == "idp":
        return index_semilattice(A, positive_idempotents(A))
    labels = [t.strip() for t in choice.split(",") if t.strip()]
    unknown = [l for l in labels if l not in A.labels]
    if unknown:
        raise InputError(f"unknown index element {unknown[0]!r}")
    return index_semilattice(A, [A.index(l) for l in labels])


# subcommands


def cmd_check(args) -> int:
    A = _load_structure(args.file)
    names = _props(args.props, list(CHECKS)) or list(DEFAULT_PROPS)
    rows = []
    code = EXIT_OK
    for name in names:
        try:
            r = CHECKS[name](A)
            rows.append({"property": name, "status": "holds" if r else "fails",
                         "report": r.to_json(A.labels), "text": r.describe(A.labels)})
            if not r:
                code = EXIT_FAIL
        except PreconditionError as e:
            rows.append({"property": name, "status": "precondition", "report": None,
                         "text": f"{name}: precondition fails ({e})"})
            if code == EXIT_OK:
                code = EXIT_PRECONDITION
    if args.format == "json":
        out = {"file": args.file, "exit": code,
               "results": [{k: v for k, v in r.items() if k != "text"} for r in rows]}
        print(json.dumps(out, ensure_ascii=False, indent=2))
    else:
        for r in rows:
            print(r["text"])
    return code


def cmd_residuals(args) -> int:
    doc = _read_doc(args.file)
    if is_system_document(doc):
        raise InputError(f"{args.file}: expected a structure document")
    doc = {k: v for k, v in doc.items() if k not in ("ld", "rd")}
    try:
        A = algebra_from_document(doc)
    except ResposError as e:
        cause = e.__cause__
        if isinstance(cause, (NotResiduated, NotAssociative)):
            labels = doc.get("elements") or []
            w = ", ".join(f"{k}={labels[v] if isinstance(v, int) and v < len(labels) else v}"
                          for k, v in (cause.witness or ()))
            print(f"{type(cause).__name__}: {cause}" + (f" [witness {w}]" if w else ""))
            return EXIT_FAIL
        raise
    d = algebra_document(A)
    sys.stdout.write(dumps({"elements": d["elements"], "ld": d["ld"], "rd": d["rd"]}))
    return EXIT_OK


def cmd_decompose(args) -> int:
    A = _load_structure(args.file)
    I = _index(A, args.index)
    d = decompose(A, I)
    names = [A.label(p) for p in I.elements]
    _write(dumps(system_document(d.system, names)), args.output)
    return EXIT_OK


def cmd_compose(args) -> int:
    doc = _read_doc(args.file)
    if not is_system_document(doc):
        raise InputError(f"{args.file}: expected a system document")
    S, names = system_from_document(doc)
    A, result = compose_with_embedding(S)
    _write(dumps(algebra_document(A)), args.output)
    for key, r in result.diagnostics.items():
        text = r.describe(A.labels) if isinstance(r, PropertyReport) else str(r)
        print(text if text.startswith(key) else f"{key}: {text}", file=sys.stderr)
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    A = _load_structure(args.file)
    I = _index(A, args.index)
    r = roundtrip(A, I)
    print(r.describe(A.labels) + f" over {{{', '.join(A.label(p) for p in I.elements)}}}")
    return EXIT_OK if r else EXIT_FAIL


def cmd_enumerate(args) -> int:
    poset = load_poset(args.poset) if args.poset else None
    constraints = tuple(_props(args.props, list(PREDICATES)))
    spec = EnumerationSpec(args.size, poset, constraints, "count" if args.count else "stream")
    count = 0
    outdir = Path(args.emit) if args.emit else None
    if outdir:
        outdir.mkdir(parents=True, exist_ok=True)
    for A in enumerate_structures(spec):
        count += 1
        if outdir:
            (outdir / f"s{args.size}_{count:05d}.json").write_text(
                dumps(algebra_document(A, f"s{args.size}_{count:05d}")), encoding="utf-8")
        elif not args.count:
            print(json.dumps(algebra_document(A, f"s{args.size}_{count:05d}"), ensure_ascii=False))
    if args.count or outdir:
        print(count)
    return EXIT_OK


def cmd_example(args) -> int:
    obj = builtin(args.name)
    doc = system_document(obj) if isinstance(obj, ResiduatedSystem) else algebra_document(obj)
    _write(dumps(doc), args.emit)
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.suite != "all" and args.suite not in suite_names():
        raise InputError(f"unknown suite {args.suite!r}; known: {', '.join(suite_names())}, all")
    results = run_suite(args.suite, args.size)
    bad = any(not r.ok for r in results)
    if args.format == "json":
        print(json.dumps({"size": args.size, "results": [r.to_json() for r in results]},
                         ensure_ascii=False, indent=2))
    else:
        for r in results:
            print(f"{r.suite}: {r.relevant}/{r.checked} applicable, "
                  f"{len(r.counterexamples)} counterexamples ({r.seconds:.2f}s)")
            for c in r.counterexamples[:5]:
                print(f"  {c}")
    return EXIT_FAIL if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="respos", description="Finite residuated semigroups: "
                                 "checks, decompositions into sums and enumeration.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run named property checks")
    p.add_argument("file")
    p.add_argument("--props", help=f"comma-separated; default {','.join(DEFAULT_PROPS)}; "
                   f"known: {','.join(CHECKS)}")
    p.add_argument("--format", choices=("human", "json"), default="human")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("residuals", help="derive residual tables")
    p.add_argument("file")
    p.set_defaults(func=cmd_residuals)

    for name, func, hint in (("decompose", cmd_decompose, "emit the system of fibers"),
                             ("roundtrip", cmd_roundtrip, "decompose then compose and compare")):
        p = sub.add_parser(name, help=hint)
        p.add_argument("file")
        p.add_argument("--index", default="steadiest",
                       help="idp, zidp, steadiest or comma-separated labels")
        if name == "decompose":
            p.add_argument("--output", "-o")
        p.set_defaults(func=func)

    p = sub.add_parser("compose", help="sum of a system document")
    p.add_argument("file")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("enumerate", help="residuated semigroups of a given size")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--poset", help="document whose order to use")
    p.add_argument("--props", help=f"comma-separated filters from: {','.join(PREDICATES)}")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--count", action="store_true")
    g.add_argument("--emit", metavar="DIR")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("example", help=f"materialize a builtin ({', '.join(BUILTIN_NAMES)})")
    p.add_argument("name")
    p.add_argument("--emit", metavar="FILE")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("oracle", help="run a brute-force suite over the enumerated pool")
    p.add_argument("--suite", required=True, help=f"{', '.join(suite_names())} or all")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--format", choices=("human", "json"), default="human")
    p.set_defaults(func=cmd_oracle)
    return ap


def _message(e: Exception) -> str:
    return str(e.args[0]) if e.args else str(e)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {_message(e)}", file=sys.stderr)
        return EXIT_INPUT
    except InconsistencyError as e:
        print(f"internal inconsistency: {_message(e)}", file=sys.stderr)
        return EXIT_INTERNAL
    except PreconditionError as e:
        print(f"precondition fails: {_message(e)}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ResposError as e:
        print(f"error: {_message(e)}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
