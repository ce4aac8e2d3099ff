"""Terms, identities and quasi-identities over the implication signature.

Concrete syntax (ASCII)::

    ->   implication, right associative, lowest precedence
    '    postfix star, highest precedence
    &  |  .      meet ⊓, join ⊔, product ⊙
    && ||        ⊓_L, ⊔_L
    (+)          sum ⊕
    &s |s        ⊓_S, ⊔_S
    =  <=  <=Q   atoms;  ','  separates hypotheses;  '|-'  precedes the conclusion

Distinct binary operators other than ``->`` may not be mixed without
parentheses; a chain of the same operator groups to the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence, Union

import numpy as np

from .algebra import FiniteAlgebra, OpKernel, Subset


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int, expected: Sequence[str] = ()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        exp = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{line}:{column}: {message}{exp}")


# AST

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: int  # 0 or 1


@dataclass(frozen=True)
class Star:
    arg: "Term"


@dataclass(frozen=True)
class Bin:
    op: str
    left: "Term"
    right: "Term"


Term = Union[Var, Const, Star, Bin]

BINARY_OPS = ("->", "&", "|", ".", "&&", "||", "(+)", "&s", "|s")
OP_NAMES = {
    "->": "Imp", "&": "Meet", "|": "Join", ".": "Prod", "&&": "MeetL",
    "||": "JoinL", "(+)": "OPlus", "&s": "SMeet", "|s": "SJoin",
}
RELATIONS = ("=", "<=", "<=Q")


@dataclass(frozen=True)
class Atom:
    rel: str
    left: Term
    right: Term

    def desugar(self) -> tuple[Term, Term]:
        """Rewrite as an equation: s <= t is s -> t = 1, s <=Q t is s = s & t."""
        if self.rel == "=":
            return self.left, self.right
        if self.rel == "<=":
            return Bin("->", self.left, self.right), Const(1)
        return self.left, Bin("&", self.left, self.right)


@dataclass(frozen=True)
class Statement:
    hypotheses: tuple[Atom, ...]
    conclusion: Atom

    def variables(self) -> list[str]:
        names: set[str] = set()
        for a in (*self.hypotheses, self.conclusion):
            names |= term_vars(a.left) | term_vars(a.right)
        return sorted(names)

    def __str__(self):
        return format_statement(self)


def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Const):
        return set()
    if isinstance(t, Star):
        return term_vars(t.arg)
    return term_vars(t.left) | term_vars(t.right)


# Tokenizer

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t]+)
  | (?P<op>->|\|-|<=Q|<=|&&|\|\||\(\+\)|&s|\|s|[&|.'=,()])
  | (?P<const>[01](?![0-9A-Za-z_]))
  | (?P<var>[a-z][a-z0-9_]*)
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str   # 'op', 'const', 'var', 'eof'
    text: str
    line: int
    col: int


def tokenize(text: str, line: int = 1) -> list[Token]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos + 1,
                             ["variable", "0", "1", "(", *BINARY_OPS, "'", *RELATIONS, ",", "|-"])
        kind = m.lastgroup
        if kind != "ws":
            toks.append(Token(kind, m.group(), line, pos + 1))
        pos = m.end()
    toks.append(Token("eof", "", line, len(text) + 1))
    return toks


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def error(self, expected: Sequence[str]):
        t = self.cur
        what = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"unexpected {what}", t.line, t.col, expected)

    def accept(self, text: str) -> bool:
        if self.cur.kind == "op" and self.cur.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str, also: Sequence[str] = ()):
        if not self.accept(text):
            self.error([text, *also])

    def statement(self) -> Statement:
        atoms = [self.atom()]
        while self.accept(","):
            atoms.append(self.atom())
        if self.accept("|-"):
            concl = self.atom()
            hyps = tuple(atoms)
        elif len(atoms) == 1:
            concl, hyps = atoms[0], ()
        else:
            self.error(["|-"])
        if self.cur.kind != "eof":
            self.error([",", "|-"] if not hyps else ["end of input"])
        return Statement(hyps, concl)

    def atom(self) -> Atom:
        left = self.term()
        for rel in ("<=Q", "<=", "="):
            if self.accept(rel):
                return Atom(rel, left, self.term())
        self.error([*RELATIONS, *BINARY_OPS, "'"])

    def term(self) -> Term:
        left = self.binary()
        if self.accept("->"):
            return Bin("->", left, self.term())
        return left

    def binary(self) -> Term:
        left = self.postfix()
        op = None
        while self.cur.kind == "op" and self.cur.text in BINARY_OPS and self.cur.text != "->":
            tok = self.cur
            if op is not None and tok.text != op:
                raise ParseError(
                    f"operators {op!r} and {tok.text!r} mixed without parentheses",
                    tok.line, tok.col, ["(", op, "->", *RELATIONS])
            op = tok.text
            self.i += 1
            left = Bin(op, left, self.postfix())
        return left

    def postfix(self) -> Term:
        t = self.primary()
        while self.accept("'"):
            t = Star(t)
        return t

    def primary(self) -> Term:
        tok = self.cur
        if tok.kind == "var":
            self.i += 1
            return Var(tok.text)
        if tok.kind == "const":
            self.i += 1
            return Const(int(tok.text))
        if self.accept("("):
            t = self.term()
            self.expect(")", BINARY_OPS)
            return t
        self.error(["variable", "0", "1", "("])


def parse(text: str, line: int = 1) -> Statement:
    return _Parser(tokenize(text, line)).statement()


def parse_term(text: str) -> Term:
    p = _Parser(tokenize(text))
    t = p.term()
    if p.cur.kind != "eof":
        p.error(BINARY_OPS)
    return t


def parse_statements(text: str) -> list[Statement]:
    """Statement file: one statement per line, '#' comments, blank lines skipped."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            out.append(parse(line, lineno))
    return out


# Printing

def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return str(t.value)
    if isinstance(t, Star):
        inner = format_term(t.arg)
        return f"({inner})'" if isinstance(t.arg, Bin) else inner + "'"
    if t.op == "->":
        left = format_term(t.left)
        if isinstance(t.left, Bin):
            left = f"({left})"
        right = format_term(t.right)
        if isinstance(t.right, Bin) and t.right.op != "->":
            right = f"({right})"
        return f"{left} -> {right}"
    parts = []
    for side in (t.left, t.right):
        s = format_term(side)
        parts.append(f"({s})" if isinstance(side, Bin) else s)
    return f"{parts[0]} {t.op} {parts[1]}"


def format_atom(a: Atom) -> str:
    return f"{format_term(a.left)} {a.rel} {format_term(a.right)}"


def format_statement(s: Statement) -> str:
    body = format_atom(s.conclusion)
    if s.hypotheses:
        return ", ".join(format_atom(h) for h in s.hypotheses) + " |- " + body
    return body


# Evaluation

def _apply(k: OpKernel, op: str, a, b):
    if op == "->":
        return k.imp[a, b]
    if op == "&":
        return k.inf(a, b)
    if op == "|":
        return k.sup(a, b)
    if op == ".":
        return k.prod(a, b)
    if op == "&&":
        return k.infL(a, b)
    if op in ("||", "(+)"):
        return k.oplus(a, b)
    if op == "&s":
        return k.s_inf(a, b)
    if op == "|s":
        return k.s_sup(a, b)
    raise ValueError(f"unknown operator {op!r}")


def evaluate(k: OpKernel, t: Term, env: Mapping[str, object]):
    """Evaluate ``t`` with ``env`` mapping variables to indices or index arrays."""
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise KeyError(f"variable {t.name!r} is unassigned") from None
    if isinstance(t, Const):
        return k.one if t.value else k.zero
    if isinstance(t, Star):
        return k.star_vec[evaluate(k, t.arg, env)]
    return _apply(k, t.op, evaluate(k, t.left, env), evaluate(k, t.right, env))


def eval_term(A: FiniteAlgebra, t: Term | str, env: Mapping[str, int]) -> int:
    if isinstance(t, str):
        t = parse_term(t)
    for v, e in env.items():
        if not 0 <= e < A.size:
            raise IndexError(f"{v}={e} outside carrier of size {A.size}")
    return int(evaluate(A.kernel, t, env))


@dataclass(frozen=True)
class HoldsResult:
    holds: bool
    witness: dict[str, int] | None = None
    vacuous: bool = False  # no assignment satisfied the hypotheses

    def __bool__(self):
        return self.holds

    def render(self, A: FiniteAlgebra) -> str:
        if self.holds:
            return "HOLDS" + (" (vacuously)" if self.vacuous else "")
        wit = " ".join(f"{v}={A.names[e]}" for v, e in self.witness.items())
        return f"FAILS witness {wit}"


ScopeLike = Union[Subset, None, Mapping[str, Subset]]


def assignment_grid(A: FiniteAlgebra, variables: Sequence[str], scope: ScopeLike):
    """Meshgrid of candidate values, one axis per variable (in the given order)."""
    full = list(A.elements())
    axes = []
    for v in variables:
        if scope is None:
            dom = full
        elif isinstance(scope, Subset):
            dom = scope.elements()
        else:
            dom = scope[v].elements() if v in scope else full
        axes.append(np.array(dom, dtype=np.intp))
    if not axes:
        return axes, []
    return axes, np.meshgrid(*axes, indexing="ij")


def holds(A: FiniteAlgebra, s: Statement | str, scope: ScopeLike = None) -> HoldsResult:
    """Check ``s`` under every assignment drawn from ``scope`` (default: whole carrier).

    ``scope`` may be a Subset for all variables, or a mapping restricting some
    variables only.  The witness is the first failing assignment with variables
    ordered alphabetically.
    """
    if isinstance(s, str):
        s = parse(s)
    if isinstance(scope, Subset) and scope.size != A.size:
        raise ValueError("scope does not match algebra size")
    variables = s.variables()
    axes, grids = assignment_grid(A, variables, scope)
    shape = tuple(len(a) for a in axes)
    if 0 in shape:
        return HoldsResult(True, vacuous=True)
    env = dict(zip(variables, grids))
    k = A.kernel
    mask = np.ones(shape, dtype=bool)
    for h in s.hypotheses:
        l, r = h.desugar()
        mask &= np.broadcast_to(evaluate(k, l, env) == evaluate(k, r, env), shape)
    l, r = s.conclusion.desugar()
    bad = mask & np.broadcast_to(evaluate(k, l, env) != evaluate(k, r, env), shape)
    if bad.any():
        idx = np.argwhere(bad)[0]
        wit = {v: int(axes[i][j]) for i, (v, j) in enumerate(zip(variables, idx))}
        return HoldsResult(False, wit)
    return HoldsResult(True, vacuous=bool(s.hypotheses) and not mask.any())


def iter_assignments(A: FiniteAlgebra, variables: Sequence[str],
                     scope: ScopeLike = None) -> Iterator[dict[str, int]]:
    """Plain nested-loop enumeration in lexicographic order (reference path)."""
    axes, _ = assignment_grid(A, variables, scope)
    if not variables:
        yield {}
        return
    idx = [0] * len(axes)
    if any(len(a) == 0 for a in axes):
        return
    while True:
        yield {v: int(axes[i][idx[i]]) for i, v in enumerate(variables)}
        j = len(idx) - 1
        while j >= 0:
            idx[j] += 1
            if idx[j] < len(axes[j]):
                break
            idx[j] = 0
            j -= 1
        if j < 0:
            return
