"""Command-line driver.

Exit codes: 0 pass/holds, 1 fail/refuted, 2 usage or input error, 3 search
budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .algebra import AlgebraError, FiniteAlgebra, Subset, format_algebra, load_algebra
from .axioms import CLASS_NAMES, InternalConsistencyError, check_class, class_name, classify
from .builtins import builtin, builtin_names, builtin_text
from .centers import (hasse_export, oml_center, verify_center_lattice, verify_kleene_center,
                      verify_oml_center, verify_wajsberg_center, wajsberg_center)
from .corpus import run_corpus
from .search import (DEFAULT_MAX_N, SearchSpec, enumerate_models, find_countermodel, manifest,
                     model_hash)
from .terms import ParseError, format_statement, holds, parse

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

# Sizes above DEFAULT_MAX_N only run under a budget; this one applies when
# the caller gives none.
DEFAULT_LARGE_TIME_BUDGET = 600.0


class UsageError(Exception):
    pass


def _load(spec: str) -> FiniteAlgebra:
    """A path to an algebra file, or the name of a builtin if no such file exists."""
    if os.path.exists(spec):
        return load_algebra(spec)
    try:
        return builtin(spec)
    except KeyError:
        raise UsageError(f"no such file or builtin: {spec}") from None


def _emit(args, lines: list[str], data: dict) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        for line in lines:
            print(line)


def _names(A: FiniteAlgebra, wit: dict[str, int] | None) -> dict[str, str] | None:
    return None if wit is None else {v: A.names[e] for v, e in wit.items()}


def _report_dict(A, r) -> dict:
    return {
        "name": r.name, "pass": r.ok, "center": [A.names[e] for e in r.center.elements()],
        "failures": [{"check": t, "witness": _names(A, w)} for t, w in r.failures],
        "notes": list(r.notes),
    }


def _budgets(args, size: int) -> tuple[float | None, int | None, bool]:
    time_budget, node_budget = args.time_budget, args.node_budget
    large = size > DEFAULT_MAX_N
    if large and time_budget is None and node_budget is None:
        time_budget = DEFAULT_LARGE_TIME_BUDGET
    return time_budget, node_budget, large


# commands

def cmd_check(args) -> int:
    A = _load(args.file)
    if args.cls == "all":
        reports = classify(A, force=args.force)
        _emit(args, [r.render(A) for r in reports],
              {"reports": [r.as_dict(A) for r in reports]})
        return EXIT_OK
    r = check_class(A, class_name(args.cls), force=args.force)
    _emit(args, [r.render(A)] + [f"  NOTE {n}" for n in r.notes], r.as_dict(A))
    return EXIT_OK if r.passed else EXIT_FAIL


def cmd_centers(args) -> int:
    A = _load(args.file)
    Z, O = wajsberg_center(A), oml_center(A)
    reports = [verify_wajsberg_center(A), verify_oml_center(A)]
    lines = [f"Z = {Z.render(A)}", f"O = {O.render(A)}"]
    for r in reports:
        lines += r.render(A)
    _emit(args, lines, {
        "Z": [A.names[e] for e in Z.elements()],
        "O": [A.names[e] for e in O.elements()],
        "reports": [_report_dict(A, r) for r in reports],
    })
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def cmd_verify(args) -> int:
    A = _load(args.file)
    reports = [verify_wajsberg_center(A), verify_center_lattice(A),
               verify_kleene_center(A), verify_oml_center(A)]
    lines: list[str] = []
    for r in reports:
        lines += r.render(A)
    results = run_corpus(A)
    corpus = []
    failed = 0
    for e, res in results:
        tag = "INFO" if e.informational else ("PASS" if res.holds else "FAIL")
        if tag == "FAIL":
            failed += 1
        if tag != "PASS":
            lines.append(f"CORPUS {tag} {e.id} {res.render(A)}")
        corpus.append({"id": e.id, "holds": res.holds, "informational": e.informational,
                       "witness": _names(A, res.witness)})
    checked = sum(1 for e, _ in results if not e.informational)
    lines.append(f"CORPUS {'PASS' if not failed else 'FAIL'} {checked - failed}/{checked}")
    ok = all(r.ok for r in reports) and not failed
    lines.append(f"VERIFY {'PASS' if ok else 'FAIL'}")
    _emit(args, lines, {"reports": [_report_dict(A, r) for r in reports],
                        "corpus": corpus, "pass": ok})
    return EXIT_OK if ok else EXIT_FAIL


def _scope(A: FiniteAlgebra, name: str) -> Subset:
    return {"z": wajsberg_center, "o": oml_center}.get(name, lambda B: Subset.full(B.size))(A)


def cmd_eval(args) -> int:
    A = _load(args.file)
    st = parse(args.expr)
    res = holds(A, st, _scope(A, args.scope))
    _emit(args, [res.render(A)], {
        "statement": format_statement(st), "scope": args.scope, "holds": res.holds,
        "vacuous": res.vacuous, "witness": _names(A, res.witness)})
    return EXIT_OK if res.holds else EXIT_FAIL


def cmd_refute(args) -> int:
    st = parse(args.expr)
    cls = class_name(args.cls)
    time_budget, node_budget, large = _budgets(args, args.max_size)
    res = find_countermodel(st, cls, args.max_size, workers=args.workers,
                            node_budget=node_budget, time_budget=time_budget,
                            allow_large=large)
    data = {"statement": format_statement(st), "class": cls, "max_size": args.max_size,
            "partial": res.partial}
    if res.countermodel is not None:
        A, wit = res.countermodel.algebra, res.countermodel.witness
        text = format_algebra(A)
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        wtxt = " ".join(f"{v}={A.names[e]}" for v, e in wit.items())
        lines = [f"REFUTED size={A.size} witness {wtxt}"]
        if not args.out:
            lines.append(text.rstrip("\n"))
        data.update(size=A.size, witness=_names(A, wit), algebra=text)
        _emit(args, lines, data)
        return EXIT_FAIL
    if res.partial:
        reached = res.searched[-1][0] if res.searched else 0
        _emit(args, [f"BUDGET EXHAUSTED at size {reached}; holds below it"], data)
        return EXIT_BUDGET
    _emit(args, [f"holds up to size {args.max_size}"], data)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    cls = class_name(args.cls)
    time_budget, node_budget, large = _budgets(args, args.size)
    stream = enumerate_models(SearchSpec(args.size, cls, None, node_budget, time_budget,
                                         args.workers, allow_large=large))
    names = [f"{cls.lower()}-{args.size}-{i + 1:04d}.alg" for i in range(len(stream))]
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for name, A in zip(names, stream):
            (out / name).write_text(format_algebra(A), encoding="utf-8")
        (out / "MANIFEST").write_text(manifest(stream, names), encoding="utf-8")
    data = {"class": cls, "size": args.size, "count": len(stream), "partial": stream.partial}
    if args.count_only:
        lines = [f"class={cls} size={args.size} count={len(stream)}"
                 + (" partial" if stream.partial else "")]
    else:
        lines = manifest(stream, names).rstrip("\n").split("\n")
        data["models"] = [{"file": n, "sha256": model_hash(A)} for n, A in zip(names, stream)]
        if not args.out and args.format != "json":
            for name, A in zip(names, stream):
                lines.append(f"## {name}")
                lines += format_algebra(A).rstrip("\n").split("\n")
    _emit(args, lines, data)
    return EXIT_BUDGET if stream.partial else EXIT_OK


def cmd_hasse(args) -> int:
    A = _load(args.file)
    text = hasse_export(A, args.order, _scope(A, args.subset))
    _emit(args, text.rstrip("\n").split("\n"), {"order": args.order, "hasse": text})
    return EXIT_OK


def cmd_builtin(args) -> int:
    if args.list or not args.name:
        for n in builtin_names():
            print(n)
        return EXIT_OK
    try:
        text = builtin_text(args.name)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# argument parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text",
                        help="output format (default: text)")
    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--workers", type=int, default=1)
    search.add_argument("--node-budget", type=int, default=None)
    search.add_argument("--time-budget", type=float, default=None, help="seconds")

    p = argparse.ArgumentParser(prog="qwalg", description="Finite quantum-Wajsberg algebra workbench")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    classes = [c.lower() for c in CLASS_NAMES]

    s = sub.add_parser("check", parents=[common], help="check membership in an axiom class")
    s.add_argument("file")
    s.add_argument("--class", dest="cls", required=True,
                   help=f"class tag ({', '.join(classes)}) or 'all'")
    s.add_argument("--force", action="store_true", help="skip prerequisite classes")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("centers", parents=[common], help="Wajsberg-center and OML-center")
    s.add_argument("file")
    s.set_defaults(func=cmd_centers)

    s = sub.add_parser("verify", parents=[common], help="center theorems and identity corpus")
    s.add_argument("file")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("eval", parents=[common], help="evaluate a statement")
    s.add_argument("file")
    s.add_argument("-e", dest="expr", required=True)
    s.add_argument("--scope", choices=("z", "o", "all"), default="all")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("refute", parents=[common, search], help="search for a countermodel")
    s.add_argument("-e", dest="expr", required=True)
    s.add_argument("--class", dest="cls", default="qw")
    s.add_argument("--max-size", type=int, default=DEFAULT_MAX_N)
    s.add_argument("-o", "--out", default=None, help="write the countermodel here")
    s.set_defaults(func=cmd_refute)

    s = sub.add_parser("enumerate", parents=[common, search], help="enumerate models up to isomorphism")
    s.add_argument("--size", type=int, required=True)
    s.add_argument("--class", dest="cls", default="qw")
    s.add_argument("--count-only", action="store_true")
    s.add_argument("--out", default=None, help="directory for model files and MANIFEST")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("hasse", parents=[common], help="Hasse diagram of <= or <=Q")
    s.add_argument("file")
    s.add_argument("--order", choices=("leq", "leqQ"), default="leqQ")
    s.add_argument("--subset", choices=("z", "o", "all"), default="all")
    s.set_defaults(func=cmd_hasse)

    s = sub.add_parser("builtin", help="write a built-in algebra")
    s.add_argument("name", nargs="?")
    s.add_argument("-o", "--output", default=None)
    s.add_argument("--list", action="store_true")
    s.set_defaults(func=cmd_builtin, format="text")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (AlgebraError, UsageError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
    except InternalConsistencyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
