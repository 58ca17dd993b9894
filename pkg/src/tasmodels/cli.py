"""Command-line front end.

Exit codes: 0 success or all axioms hold, 1 a check failed (or a model was
found where none was expected), 2 usage error, 3 malformed input file.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from typing import Sequence

from . import dlm
from .consequence import LogicSystem, closure, rules_from_synthesis
from .finder import find_models, ground, solve
from .schemes import SchemeError, get_scheme
from .semantics import (
    StructureDefinitionError,
    bounded_check,
    check_scheme,
    cross_check_N,
    declared_N,
    derived_N,
    jsonable,
)
from .zoo import (
    build_model,
    build_model_c,
    build_model_d,
    lambda_window,
    materialize,
    model_c_sequences,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3

log = logging.getLogger("tasmodels")


class UsageError(Exception):
    pass


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps({"schema": 1, **payload}, indent=2))
    else:
        print(text)


def _structure_payload(s) -> dict:
    return {
        "kind": "structure",
        "name": s.name,
        "domain": [jsonable(e) for e in s.domain],
        "tables": {p: sorted([[jsonable(e) for e in row] for row in rows], key=repr)
                   for p, rows in sorted(s.tables.items())},
    }


def _sorted(elements) -> list:
    return sorted(elements, key=lambda e: (isinstance(e, str), e))


# ---------------------------------------------------------------------------
# subcommands


def cmd_zoo(args) -> int:
    model = args.model.lower()
    if model in ("a", "b"):
        s = build_model(model, alternative_n=args.alternative_n)
    elif model == "c":
        cs = build_model_c()
        s = materialize(cs, cs.window(args.window or 3))
    elif model == "d":
        d = build_model_d(args.k)
        if hasattr(d, "tables"):
            s = d
        else:
            elements = d.window(args.window) if args.window else lambda_window(args.k)
            s = materialize(d, elements)
    else:
        raise UsageError(f"unknown model {args.model!r}")
    _emit(args, _structure_payload(s), dlm.dumps(s).rstrip("\n"))
    return EXIT_OK


def cmd_check(args) -> int:
    s = dlm.load(args.file)
    scheme = get_scheme(args.scheme, args.with_extension)
    try:
        report = check_scheme(s, scheme, cross_check=not args.no_cross_check)
    except StructureDefinitionError as exc:
        _emit(args, {"kind": "check", "ok": False, "error": str(exc)}, f"error: {exc}")
        return EXIT_FAIL
    _emit(args, report.to_dict(), report.format_text())
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_bounded(args) -> int:
    scheme = get_scheme(args.scheme, args.with_extension)
    if args.model.lower() == "c":
        cs = build_model_c()
        universal, existential = args.universal, args.existential
    else:
        cs = build_model_d(args.k, "intensional")
        if args.universal is None:
            universal = existential = lambda_window(args.k)
        else:
            universal, existential = args.universal, args.existential
    if isinstance(universal, int) and existential is None:
        existential = universal + 2
    try:
        report = bounded_check(cs, scheme, universal, existential)
    except StructureDefinitionError as exc:
        _emit(args, {"kind": "check", "ok": False, "error": str(exc)}, f"error: {exc}")
        return EXIT_FAIL
    _emit(args, report.to_dict(), report.format_text())
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_derive_n(args) -> int:
    s = dlm.load(args.file)
    derived = derived_N(s)
    declared = declared_N(s)
    try:
        cross_check_N(s)
        agree = True
    except StructureDefinitionError:
        agree = False
    verdict = "no declared N" if declared is None else "matches declared N" if agree \
        else "DIFFERS from declared N " + "{" + ", ".join(map(str, _sorted(declared))) + "}"
    text = "N = {" + ", ".join(map(str, _sorted(derived))) + "}  " + verdict
    _emit(args, {
        "kind": "derive-n",
        "derived": [jsonable(e) for e in _sorted(derived)],
        "declared": None if declared is None else [jsonable(e) for e in _sorted(declared)],
        "agree": agree,
    }, text)
    return EXIT_OK if agree else EXIT_FAIL


def cmd_find(args) -> int:
    scheme = get_scheme(args.scheme, args.with_extension)
    if args.dimacs:
        problem = ground(scheme, args.size, pin_witness=args.pin_witness)
        with open(args.dimacs, "w", encoding="utf-8") as fh:
            fh.write(problem.to_dimacs())
    limit = None if args.limit is not None and args.limit < 0 else args.limit
    models = find_models(scheme, args.size, limit, dedup=args.dedup,
                         pin_witness=args.pin_witness, seed=args.seed)
    text = "\n".join(
        dlm.dumps(m, comment=f"model {i} of {scheme.name} at n={args.size}")
        for i, m in enumerate(models, start=1))
    text += f"# {len(models)} model(s) found"
    _emit(args, {
        "kind": "find",
        "scheme": scheme.name,
        "size": args.size,
        "models": [_structure_payload(m) for m in models],
    }, text)
    return EXIT_OK if models else EXIT_FAIL


def cmd_prove_unsat(args) -> int:
    scheme = get_scheme(args.scheme, args.with_extension)
    rows = []
    lines = []
    for n in range(args.min_size, args.max_size + 1):
        start = time.perf_counter()
        problem = ground(scheme, n, pin_witness=args.pin_witness)
        outcome = solve(problem, args.seed)
        elapsed = time.perf_counter() - start
        stats = outcome.stats.as_dict()
        rows.append({"n": n, "sat": outcome.sat, "atoms": problem.num_atoms,
                     "variables": problem.num_vars, "clauses": len(problem.clauses),
                     "seconds": round(elapsed, 4), **stats})
        lines.append(
            f"n={n} {'SAT' if outcome.sat else 'UNSAT'} atoms={problem.num_atoms} "
            f"vars={problem.num_vars} clauses={len(problem.clauses)} "
            + " ".join(f"{k}={v}" for k, v in stats.items()) + f" time={elapsed:.3f}s")
    ok = not any(r["sat"] for r in rows)
    _emit(args, {"kind": "prove-unsat", "scheme": scheme.name, "ok": ok, "sizes": rows},
          "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def _parse_tokens(text: str) -> list:
    parts = [p for p in text.replace("(", " ").replace(")", " ").replace(",", " ").split()]
    return [dlm._label(p, None) for p in parts]


def cmd_closure(args) -> int:
    if args.model:
        s = build_model(args.model) if args.model.lower() in ("a", "b") else None
        if s is None:
            raise UsageError("--model must be a or b")
        system = rules_from_synthesis(s)
    elif args.structure:
        system = rules_from_synthesis(dlm.load(args.structure))
    else:
        rules = []
        with open(args.rules, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if line:
                    try:
                        rules.append(tuple(_parse_tokens(line)))
                    except dlm.DlmError as exc:
                        raise dlm.DlmError(str(exc), lineno) from None
        premises = _parse_tokens(args.premises or "")
        language = {t for r in rules for t in r} | set(premises)
        system = LogicSystem(language, rules)
    premises = _parse_tokens(args.premises or "")
    try:
        result = closure(system, premises)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = "{" + ", ".join(map(str, _sorted(result))) + "}"
    _emit(args, {
        "kind": "closure",
        "premises": [jsonable(e) for e in _sorted(set(premises))],
        "rules": sorted([[jsonable(e) for e in r] for r in system.rules], key=repr),
        "closure": [jsonable(e) for e in _sorted(result)],
    }, text)
    return EXIT_OK


def cmd_seq(args) -> int:
    triples = [model_c_sequences(i) for i in range(args.max_i + 1)]
    text = "\n".join(f"i={t.index} a={t.a} b={t.b} c={t.c}" for t in triples)
    _emit(args, {
        "kind": "seq",
        "triples": [{"i": t.index, "a": jsonable(t.a), "b": jsonable(t.b), "c": jsonable(t.c)}
                    for t in triples],
    }, text)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit a machine-readable report")
    scheme_opts = argparse.ArgumentParser(add_help=False)
    scheme_opts.add_argument("--scheme", required=True, help="tas1, tas2, tas3 or core")
    scheme_opts.add_argument("--with-extension", action="store_true",
                             help="add the antithesis-progression axiom (tas3 only)")

    parser = argparse.ArgumentParser(
        prog="tasmodels", description="Model checking and finding for the TAS schemes.")
    parser.add_argument("--json", action="store_true", help="emit a machine-readable report")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zoo", parents=[common], help="print a zoo model as .dlm")
    p.add_argument("model", help="a, b, c or d")
    p.add_argument("--k", type=int, default=2, help="parameter of Model D (default 2)")
    p.add_argument("--window", type=int, help="number of indices/elements for c or large d")
    p.add_argument("--alternative-n", action="store_true", help="Model A with N = {1,2}")
    p.set_defaults(func=cmd_zoo)

    p = sub.add_parser("check", parents=[common, scheme_opts], help="check a .dlm structure")
    p.add_argument("file")
    p.add_argument("--no-cross-check", action="store_true",
                   help="do not compare a declared N with the derived N")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bounded", parents=[common, scheme_opts],
                       help="bounded check of Model C or a large Model D")
    p.add_argument("--model", required=True, choices=["c", "d"])
    p.add_argument("--k", type=int, default=2**80)
    p.add_argument("--universal", type=int, help="universal window size")
    p.add_argument("--existential", type=int, help="existential window size")
    p.set_defaults(func=cmd_bounded)

    p = sub.add_parser("derive-n", parents=[common], help="derive N and cross-check it")
    p.add_argument("file")
    p.set_defaults(func=cmd_derive_n)

    p = sub.add_parser("find", parents=[common, scheme_opts], help="search for finite models")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--limit", type=int, default=1, help="maximum models, negative for all")
    p.add_argument("--dedup", action="store_true", help="one model per isomorphism class")
    p.add_argument("--pin-witness", action="store_true", help="assert T(0)")
    p.add_argument("--seed", type=int, help="random branching with this seed")
    p.add_argument("--dimacs", metavar="PATH", help="also write the ground problem")
    p.set_defaults(func=cmd_find)

    p = sub.add_parser("prove-unsat", parents=[common, scheme_opts],
                       help="show there is no model of each size")
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--min-size", type=int, default=1)
    p.add_argument("--pin-witness", action="store_true")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_prove_unsat)

    p = sub.add_parser("closure", parents=[common], help="deductive closure under S^-1")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--model", help="a or b")
    src.add_argument("--structure", metavar="FILE", help=".dlm structure with an S table")
    src.add_argument("--rules", metavar="FILE", help="one rule tuple per line")
    p.add_argument("--premises", default="", help="comma-separated tokens")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("seq", parents=[common], help="print the Model C sequences")
    p.add_argument("--max-i", type=int, default=10)
    p.set_defaults(func=cmd_seq)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except dlm.DlmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (UsageError, SchemeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
