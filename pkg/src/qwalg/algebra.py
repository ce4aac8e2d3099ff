"""Finite algebras given by an implication table, plus every derived operation.

Elements are dense indices ``0..n-1``; ``names`` only matter for display and
for the text format.  The star ``x* = x -> 0`` is always derived from the
implication table, never stored separately.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

EAGER_LIMIT = 256


class AlgebraError(ValueError):
    """Shape or well-formedness problem with an algebra."""


class FormatError(AlgebraError):
    """Malformed algebra text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class OpKernel:
    """Vectorised evaluation of the derived operations over an implication array.

    Works on any integer numpy operands.  The kernel is also used on partially
    filled tables: there ``imp`` carries an extra row and column holding an
    'unknown' sentinel, and the sentinel then propagates through every lookup.
    """

    def __init__(self, imp: np.ndarray, zero: int, one: int):
        self.imp = imp
        self.zero = zero
        self.one = one
        self.star_vec = imp[:, zero]

    def implies(self, x, y):
        return self.imp[x, y]

    def star(self, x):
        return self.star_vec[x]

    def sup(self, x, y):
        return self.imp[self.imp[x, y], y]

    def inf(self, x, y):
        s = self.star_vec
        return s[self.sup(s[x], s[y])]

    def prod(self, x, y):
        s = self.star_vec
        return s[self.imp[x, s[y]]]

    def oplus(self, x, y):
        return self.imp[self.star_vec[x], y]

    # x ⊔_L y = x* -> y is the same term as x ⊕ y; x ⊓_L y is x ⊙ y
    supL = oplus
    infL = prod

    def s_inf(self, x, y):
        return self.prod(self.oplus(x, self.star_vec[y]), y)

    def s_sup(self, x, y):
        return self.oplus(self.prod(x, self.star_vec[y]), y)


@dataclass(frozen=True)
class DerivedTables:
    sup: np.ndarray
    inf: np.ndarray
    prod: np.ndarray
    supL: np.ndarray
    infL: np.ndarray
    oplus: np.ndarray
    sInf: np.ndarray
    sSup: np.ndarray
    leq: np.ndarray
    leqQ: np.ndarray
    leqL: np.ndarray


class FiniteAlgebra:
    """An algebra ``(X, ->, 0, 1)`` on ``n`` elements.

    ``imp[x][y]`` is the index of ``x -> y``.  Instances are immutable; derived
    tables are computed on construction for ``n <= EAGER_LIMIT`` and on first
    use above that.
    """

    def __init__(self, imp: Sequence[Sequence[int]], one: int, zero: int,
                 names: Sequence[str] | None = None):
        rows = tuple(tuple(int(v) for v in row) for row in imp)
        n = len(rows)
        if n == 0:
            raise AlgebraError("an algebra needs at least one element")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise AlgebraError(f"row {i} has {len(row)} entries, expected {n}")
            for v in row:
                if not 0 <= v < n:
                    raise AlgebraError(f"row {i} contains {v}, outside [0, {n})")
        if not (0 <= one < n and 0 <= zero < n):
            raise AlgebraError("one/zero index out of range")
        if n >= 2 and one == zero:
            raise AlgebraError("one and zero must differ when n >= 2")
        if names is None:
            names = default_names(n, zero, one)
        names = tuple(str(s) for s in names)
        if len(names) != n:
            raise AlgebraError(f"{len(names)} names for {n} elements")
        if len(set(names)) != n:
            raise AlgebraError("element names must be distinct")
        self.names = names
        self.imp = rows
        self.one = int(one)
        self.zero = int(zero)
        arr = np.array(rows, dtype=np.intp)
        arr.setflags(write=False)
        self._arr = arr
        if n <= EAGER_LIMIT:
            self.tables  # noqa: B018  (force the cached property)

    @property
    def size(self) -> int:
        return len(self.imp)

    @property
    def array(self) -> np.ndarray:
        return self._arr

    @cached_property
    def kernel(self) -> OpKernel:
        return OpKernel(self._arr, self.zero, self.one)

    @cached_property
    def tables(self) -> DerivedTables:
        return derive_all(self)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no element named {name!r}") from None

    def elements(self) -> range:
        return range(self.size)

    def relabel(self, perm: Sequence[int], names: Sequence[str] | None = None) -> "FiniteAlgebra":
        """Image of the algebra under the bijection ``x -> perm[x]``."""
        n = self.size
        inv = [0] * n
        for x, px in enumerate(perm):
            inv[px] = x
        imp = [[perm[self.imp[inv[i]][inv[j]]] for j in range(n)] for i in range(n)]
        if names is None:
            names = [self.names[inv[i]] for i in range(n)]
        return FiniteAlgebra(imp, perm[self.one], perm[self.zero], names)

    def __eq__(self, other):
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return (self.imp, self.one, self.zero) == (other.imp, other.one, other.zero)

    def __hash__(self):
        return hash((self.imp, self.one, self.zero))

    def __repr__(self):
        return f"FiniteAlgebra(n={self.size}, names={list(self.names)})"


def default_names(n: int, zero: int, one: int) -> list[str]:
    if n == 1:
        return ["0"]
    letters = iter("abcdefghijklmnopqrstuvwxyz")
    names = []
    for i in range(n):
        if i == zero:
            names.append("0")
        elif i == one:
            names.append("1")
        else:
            try:
                names.append(next(letters))
            except StopIteration:
                names.append(f"e{i}")
    return names


def _check_index(A: FiniteAlgebra, *xs: int) -> None:
    for x in xs:
        if not 0 <= x < A.size:
            raise IndexError(f"element {x} outside carrier of size {A.size}")


# Per-element operations, computed straight from the implication table.

def imp(A: FiniteAlgebra, x: int, y: int) -> int:
    _check_index(A, x, y)
    return A.imp[x][y]


def star(A: FiniteAlgebra, x: int) -> int:
    _check_index(A, x)
    return A.imp[x][A.zero]


def sup(A, x, y):
    """x ⊔ y = (x -> y) -> y"""
    _check_index(A, x, y)
    return A.imp[A.imp[x][y]][y]


def inf(A, x, y):
    """x ⊓ y = ((x* -> y*) -> y*)*"""
    return star(A, sup(A, star(A, x), star(A, y)))


def prod(A, x, y):
    """x ⊙ y = (x -> y*)*"""
    return star(A, imp(A, x, star(A, y)))


def oplus(A, x, y):
    """x ⊕ y = x* -> y"""
    return imp(A, star(A, x), y)


def supL(A, x, y):
    return imp(A, star(A, x), y)


def infL(A, x, y):
    return prod(A, x, y)


def sInf(A, x, y):
    return prod(A, oplus(A, x, star(A, y)), y)


def sSup(A, x, y):
    return oplus(A, prod(A, x, star(A, y)), y)


def leq(A, x, y) -> bool:
    return imp(A, x, y) == A.one


def leqQ(A, x, y) -> bool:
    return inf(A, x, y) == x


def leqL(A, x, y) -> bool:
    return supL(A, x, y) == y


def derive_all(A: FiniteAlgebra) -> DerivedTables:
    n = A.size
    k = OpKernel(A.array, A.zero, A.one)
    X, Y = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    inf_t = k.inf(X, Y)
    supL_t = k.supL(X, Y)
    tabs = dict(
        sup=k.sup(X, Y), inf=inf_t, prod=k.prod(X, Y), supL=supL_t,
        infL=k.infL(X, Y), oplus=k.oplus(X, Y), sInf=k.s_inf(X, Y),
        sSup=k.s_sup(X, Y), leq=A.array == A.one, leqQ=inf_t == X,
        leqL=supL_t == Y,
    )
    for t in tabs.values():
        t.setflags(write=False)
    return DerivedTables(**tabs)


@dataclass(frozen=True)
class Subset:
    """Membership vector over the carrier of an algebra."""

    membership: tuple[bool, ...]

    @classmethod
    def of(cls, n: int, elements: Iterable[int]) -> "Subset":
        mem = [False] * n
        for e in elements:
            if not 0 <= e < n:
                raise IndexError(f"element {e} outside carrier of size {n}")
            mem[e] = True
        return cls(tuple(mem))

    @classmethod
    def full(cls, n: int) -> "Subset":
        return cls((True,) * n)

    @property
    def size(self) -> int:
        return len(self.membership)

    def elements(self) -> list[int]:
        return [i for i, m in enumerate(self.membership) if m]

    def __contains__(self, x: int) -> bool:
        return self.membership[x]

    def __len__(self) -> int:
        return sum(self.membership)

    def is_full(self) -> bool:
        return all(self.membership)

    def render(self, A: FiniteAlgebra) -> str:
        if len(self.membership) != A.size:
            raise AlgebraError("subset length does not match algebra size")
        return "{" + ",".join(A.names[i] for i in self.elements()) + "}"


# Text format

def parse_algebra(text: str, check_bottom: bool = True) -> FiniteAlgebra:
    """Read the line-oriented ``elements:/one:/zero:/row`` format."""
    elements = one = zero = None
    rows: dict[str, tuple[int, list[str]]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise FormatError(f"expected 'key: value', got {line!r}", lineno)
        head = head.strip()
        fields = rest.split()
        if head == "elements":
            if elements is not None:
                raise FormatError("duplicate 'elements' line", lineno)
            if not fields:
                raise FormatError("empty element list", lineno)
            if len(set(fields)) != len(fields):
                raise FormatError("element names must be distinct", lineno)
            elements = fields
        elif head in ("one", "zero"):
            if elements is None:
                raise FormatError(f"'{head}' before 'elements'", lineno)
            if len(fields) != 1:
                raise FormatError(f"'{head}' takes exactly one name", lineno)
            if fields[0] not in elements:
                raise FormatError(f"unknown element {fields[0]!r}", lineno)
            if head == "one":
                one = elements.index(fields[0])
            else:
                zero = elements.index(fields[0])
        elif head.startswith("row"):
            if elements is None:
                raise FormatError("'row' before 'elements'", lineno)
            parts = head.split()
            if len(parts) != 2 or parts[0] != "row":
                raise FormatError(f"bad row header {head!r}", lineno)
            name = parts[1]
            if name not in elements:
                raise FormatError(f"unknown element {name!r}", lineno)
            if name in rows:
                raise FormatError(f"duplicate row for {name!r}", lineno)
            if len(fields) != len(elements):
                raise FormatError(
                    f"row {name} has {len(fields)} entries, expected {len(elements)}", lineno)
            for f in fields:
                if f not in elements:
                    raise FormatError(f"unknown element {f!r}", lineno)
            rows[name] = (lineno, fields)
        else:
            raise FormatError(f"unknown key {head!r}", lineno)
    if elements is None:
        raise FormatError("missing 'elements' line")
    if one is None or zero is None:
        raise FormatError("missing 'one' or 'zero' line")
    missing = [e for e in elements if e not in rows]
    if missing:
        raise FormatError(f"missing rows for {missing}")
    idx = {e: i for i, e in enumerate(elements)}
    table = [[idx[f] for f in rows[e][1]] for e in elements]
    try:
        A = FiniteAlgebra(table, one, zero, elements)
    except AlgebraError as exc:
        raise FormatError(str(exc)) from None
    if check_bottom:
        for x in A.elements():
            if A.imp[A.zero][x] != A.one:
                raise FormatError(
                    f"zero {A.names[A.zero]!r} is not below {A.names[x]!r} "
                    f"({A.names[A.zero]} -> {A.names[x]} = {A.names[A.imp[A.zero][x]]})")
    return A


def format_algebra(A: FiniteAlgebra) -> str:
    lines = [
        "elements: " + " ".join(A.names),
        f"one: {A.names[A.one]}",
        f"zero: {A.names[A.zero]}",
    ]
    for x in A.elements():
        lines.append(f"row {A.names[x]}: " + " ".join(A.names[v] for v in A.imp[x]))
    return "\n".join(lines) + "\n"


def load_algebra(path) -> FiniteAlgebra:
    with open(path, encoding="utf-8") as fh:
        return parse_algebra(fh.read())


def format_table(A: FiniteAlgebra, table) -> str:
    """Render an n×n element-index table with names (used by the CLI)."""
    w = max(len(s) for s in A.names)
    head = " " * (w + 1) + " ".join(s.rjust(w) for s in A.names)
    out = [head]
    for x in A.elements():
        out.append(A.names[x].rjust(w) + " " + " ".join(A.names[int(v)].rjust(w) for v in table[x]))
    return "\n".join(out)
