"""The built-in identity corpus and its evaluation on an algebra."""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .algebra import FiniteAlgebra, Subset
from .centers import oml_center, wajsberg_center
from .terms import HoldsResult, ParseError, Statement, format_statement, holds, parse

SCOPES = ("all", "center", "omlcenter")

_LINE = re.compile(
    r"^(?P<id>\S+)\s+@(?P<scope>all|center|omlcenter)(?:\[(?P<vars>[a-z0-9_,\s]+)\])?"
    r"(?P<info>\s+!info)?\s*:\s*(?P<stmt>.+)$")


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    statement: Statement
    scope: str = "all"
    scoped_vars: tuple[str, ...] | None = None  # None: every variable
    informational: bool = False

    def format(self) -> str:
        sc = self.scope
        if self.scoped_vars is not None:
            sc += "[" + ",".join(self.scoped_vars) + "]"
        info = " !info" if self.informational else ""
        return f"{self.id} @{sc}{info} : {format_statement(self.statement)}"


def parse_corpus(text: str) -> list[CorpusEntry]:
    entries = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise ParseError("malformed corpus line", lineno, 1, ["<id> @<scope> : <statement>"])
        if m["id"] in seen:
            raise ParseError(f"duplicate corpus id {m['id']!r}", lineno, 1)
        seen.add(m["id"])
        stmt = parse(m["stmt"], lineno)
        vars_ = None
        if m["vars"]:
            vars_ = tuple(v.strip() for v in m["vars"].split(","))
            unknown = set(vars_) - set(stmt.variables())
            if unknown:
                raise ParseError(f"scoped variables {sorted(unknown)} not in statement", lineno, 1)
        entries.append(CorpusEntry(m["id"], stmt, m["scope"], vars_, bool(m["info"])))
    return entries


def builtin_corpus_text() -> str:
    return resources.files("qwalg.data").joinpath("corpus.txt").read_text(encoding="utf-8")


def load_corpus(path=None) -> list[CorpusEntry]:
    if path is None:
        return parse_corpus(builtin_corpus_text())
    with open(path, encoding="utf-8") as fh:
        return parse_corpus(fh.read())


def scope_subset(A: FiniteAlgebra, scope: str) -> Subset:
    if scope == "all":
        return Subset.full(A.size)
    if scope == "center":
        return wajsberg_center(A)
    if scope == "omlcenter":
        return oml_center(A)
    raise ValueError(f"unknown scope {scope!r}")


def evaluate_entry(A: FiniteAlgebra, e: CorpusEntry, subsets: dict | None = None) -> HoldsResult:
    sub = (subsets or {}).get(e.scope)
    if sub is None:
        sub = scope_subset(A, e.scope)
    if e.scoped_vars is None:
        return holds(A, e.statement, sub)
    return holds(A, e.statement, {v: sub for v in e.scoped_vars})


def run_corpus(A: FiniteAlgebra, entries: list[CorpusEntry] | None = None):
    """Evaluate every entry on its declared scope: list of (entry, HoldsResult)."""
    if entries is None:
        entries = load_corpus()
    subsets = {s: scope_subset(A, s) for s in SCOPES}
    return [(e, evaluate_entry(A, e, subsets)) for e in entries]


def corpus_failures(results) -> list:
    return [(e, r) for e, r in results if not r.holds and not e.informational]
