"""Wajsberg-center Z(X), OML-center O(X) and executable checks of their structure."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from .algebra import FiniteAlgebra, Subset
from .axioms import check_quasi_linear, check_wajsberg


class NotClosed(ValueError):
    def __init__(self, op: str, args: tuple[int, ...], result: int):
        self.op = op
        self.args = args
        self.result = result
        super().__init__(f"subset not closed under {op}: {args} -> {result}")


class InputNotOrthomodular(ValueError):
    def __init__(self, axiom: str, witness: dict[str, int]):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"input fails {axiom} at {witness}")


@dataclass
class CenterReport:
    name: str
    center: Subset
    closure_ok: bool
    structure_ok: bool
    failures: list[tuple[str, dict[str, int]]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.closure_ok and self.structure_ok

    def render(self, A: FiniteAlgebra) -> list[str]:
        lines = [f"{self.name} {'PASS' if self.ok else 'FAIL'} center={self.center.render(A)}"]
        for tag, wit in self.failures:
            w = " ".join(f"{v}={A.names[e]}" for v, e in wit.items())
            lines.append(f"  FAIL {tag} {w}".rstrip())
        for note in self.notes:
            lines.append(f"  NOTE {note}")
        return lines


@dataclass(frozen=True)
class LatticeView:
    """A finite bounded lattice with a unary complement, as index tables."""

    names: tuple[str, ...]
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int, ...], ...]
    complement: tuple[int, ...]
    zero: int
    one: int

    @property
    def size(self) -> int:
        return len(self.names)


def commutes(A: FiniteAlgebra, x: int, y: int) -> bool:
    t = A.tables.inf
    return bool(t[x, y] == t[y, x])


def wajsberg_center(A: FiniteAlgebra) -> Subset:
    t = A.tables.inf
    return Subset(tuple(bool(np.all(t[x, :] == t[:, x])) for x in A.elements()))


def oml_center(A: FiniteAlgebra) -> Subset:
    """Elements with x* -> x = x."""
    s = A.kernel.star_vec
    return Subset(tuple(A.imp[s[x]][x] == x for x in A.elements()))


def oml_center_alternatives(A: FiniteAlgebra) -> dict[str, Subset]:
    """The other membership characterisations of O(X); all agree on QW algebras."""
    t = A.tables
    s = A.kernel.star_vec
    els = A.elements()
    return {
        "join": Subset(tuple(int(t.sup[s[x], x]) == A.one for x in els)),
        "meet": Subset(tuple(int(t.inf[s[x], x]) == A.zero for x in els)),
        "star": Subset(tuple(A.imp[x][s[x]] == s[x] for x in els)),
        "supL": Subset(tuple(int(t.supL[x, x]) == x for x in els)),
    }


def closure_violation(A: FiniteAlgebra, S: Subset, ops: Sequence[str] = ("->", "*")):
    """First (op, args, result) leaving ``S``, or None."""
    t = A.tables
    tables = {"->": A.array, "&": t.inf, "|": t.sup, ".": t.prod,
              "&&": t.infL, "||": t.supL}
    els = S.elements()
    for op in ops:
        if op == "*":
            for x in els:
                sx = A.imp[x][A.zero]
                if sx not in S:
                    return op, (x,), sx
            continue
        tab = tables[op]
        for x, y in product(els, repeat=2):
            v = int(tab[x, y])
            if v not in S:
                return op, (x, y), v
    return None


def induced_subalgebra(A: FiniteAlgebra, S: Subset) -> FiniteAlgebra:
    if S.size != A.size:
        raise ValueError("subset does not match algebra size")
    if A.zero not in S or A.one not in S:
        raise ValueError("subset must contain 0 and 1")
    bad = closure_violation(A, S)
    if bad is not None:
        raise NotClosed(*bad)
    els = S.elements()
    pos = {e: i for i, e in enumerate(els)}
    imp = [[pos[A.imp[x][y]] for y in els] for x in els]
    return FiniteAlgebra(imp, pos[A.one], pos[A.zero], [A.names[e] for e in els])


def _first(pairs, fails, tag, test, names=("x", "y", "z")):
    for args in pairs:
        if not test(*args):
            fails.append((tag, dict(zip(names, args))))
            return False
    return True


def verify_wajsberg_center(A: FiniteAlgebra) -> CenterReport:
    """Z(X) contains 0, 1, is closed under ->, *, ⊓, ⊔ and is a Wajsberg algebra."""
    Z = wajsberg_center(A)
    fails: list = []
    closure_ok = A.zero in Z and A.one in Z
    if not closure_ok:
        fails.append(("contains-0-1", {}))
    bad = closure_violation(A, Z, ("->", "*", "&", "|"))
    if bad is not None:
        closure_ok = False
        op, args, _ = bad
        fails.append((f"closed-{op}", dict(zip("xy", args))))
    structure_ok = closure_ok
    if closure_ok:
        rep = check_wajsberg(induced_subalgebra(A, Z))
        if not rep.passed:
            structure_ok = False
            els = Z.elements()
            fails.append((rep.axiom, {v: els[e] for v, e in rep.witness.items()}))
    return CenterReport("wajsberg-center", Z, closure_ok, structure_ok, fails)


def _bound_checks(A, base, ambient, leq, join, meet, fails, prefix):
    """join/meet on ``base`` are the least upper / greatest lower bounds in ``ambient``."""
    ok = True
    pairs = list(product(base, repeat=2))
    ok &= _first(pairs, fails, f"{prefix}upper",
                 lambda x, y: leq[x, join[x, y]] and leq[y, join[x, y]])
    ok &= _first(pairs, fails, f"{prefix}lower",
                 lambda x, y: leq[meet[x, y], x] and leq[meet[x, y], y])
    triples = [(x, y, z) for (x, y) in pairs for z in ambient]
    ok &= _first(triples, fails, f"{prefix}least",
                 lambda x, y, z: not (leq[x, z] and leq[y, z]) or leq[join[x, y], z])
    ok &= _first(triples, fails, f"{prefix}greatest",
                 lambda x, y, z: not (leq[z, x] and leq[z, y]) or leq[z, meet[x, y]])
    return ok


def verify_center_lattice(A: FiniteAlgebra, bounds_within_center: bool = False) -> CenterReport:
    """⊔/⊓ on Z(X) are ≤_Q-joins/meets and distribute over each other.

    Upper and lower bounds are quantified over the whole carrier unless
    ``bounds_within_center`` is set.
    """
    Z = wajsberg_center(A)
    t = A.tables
    els = Z.elements()
    fails: list = []
    closure_ok = closure_violation(A, Z, ("&", "|")) is None
    if not closure_ok:
        op, args, _ = closure_violation(A, Z, ("&", "|"))
        fails.append((f"closed-{op}", dict(zip("xy", args))))
    ambient = els if bounds_within_center else list(A.elements())
    ok = _bound_checks(A, els, ambient, t.leqQ, t.sup, t.inf, fails, "")
    triples = list(product(els, repeat=3))
    ok &= _first(triples, fails, "meet-over-join",
                 lambda x, y, z: t.inf[x, t.sup[y, z]] == t.sup[t.inf[x, y], t.inf[x, z]])
    ok &= _first(triples, fails, "join-over-meet",
                 lambda x, y, z: t.sup[x, t.inf[y, z]] == t.inf[t.sup[x, y], t.sup[x, z]])
    return CenterReport("center-lattice", Z, closure_ok, bool(ok), fails)


def verify_kleene_center(A: FiniteAlgebra) -> CenterReport:
    Z = wajsberg_center(A)
    t = A.tables
    s = A.kernel.star_vec
    zero = A.zero
    els = Z.elements()
    fails: list = []
    closure_ok = closure_violation(A, Z, ("*", "&", "|")) is None
    if not closure_ok:
        op, args, _ = closure_violation(A, Z, ("*", "&", "|"))
        fails.append((f"closed-{op}", dict(zip("xy", args))))
    pairs = list(product(els, repeat=2))
    ok = _first([(x,) for x in els], fails, "K1", lambda x: s[s[x]] == x)
    ok &= _first(pairs, fails, "K2", lambda x, y: s[t.sup[x, y]] == t.inf[s[x], s[y]])
    ok &= _first(pairs, fails, "K3",
                 lambda x, y: t.leqQ[t.inf[x, s[x]], t.sup[y, s[y]]])
    ok &= _first(pairs, fails, "orthogonal-prods",
                 lambda x, y: t.inf[t.prod[s[x], y], t.prod[x, s[y]]] == zero)
    ok &= _first(pairs, fails, "kleene-prod",
                 lambda x, y: t.prod[t.inf[x, s[x]], t.inf[y, s[y]]] == zero)
    # the lattice must also be distributive and bounded
    lat = verify_center_lattice(A)
    if not lat.structure_ok:
        ok = False
        fails.extend(lat.failures)
    return CenterReport("kleene-center", Z, closure_ok, bool(ok), fails)


def ortholattice_violation(L: LatticeView, orthomodular: bool = True):
    """First failing ortholattice / orthomodular axiom on a LatticeView, or None."""
    n = L.size
    m, j, c = L.meet, L.join, L.complement
    els = range(n)
    pairs = list(product(els, repeat=2))
    triples = list(product(els, repeat=3))
    checks = [
        ("Q1-commutative", pairs, lambda x, y: m[x][y] == m[y][x] and j[x][y] == j[y][x]),
        ("Q1-associative", triples,
         lambda x, y, z: m[x][m[y][z]] == m[m[x][y]][z] and j[x][j[y][z]] == j[j[x][y]][z]),
        ("Q1-absorption", pairs, lambda x, y: j[x][m[x][y]] == x and m[x][j[x][y]] == x),
        ("Q1-bounds", [(x,) for x in els], lambda x: j[x][L.zero] == x and m[x][L.one] == x),
        ("Q2", [(x,) for x in els], lambda x: m[x][c[x]] == L.zero and j[x][c[x]] == L.one),
        ("Q3", pairs, lambda x, y: c[m[x][y]] == j[c[x]][c[y]] and c[j[x][y]] == m[c[x]][c[y]]),
        ("Q4", [(x,) for x in els], lambda x: c[c[x]] == x),
    ]
    if orthomodular:
        checks.append(("Q5", pairs, lambda x, y: x != m[x][y] or j[x][m[c[x]][y]] == y))
    for tag, args_list, test in checks:
        for args in args_list:
            if not test(*args):
                return tag, dict(zip("xyz", args))
    return None


def oml_lattice(A: FiniteAlgebra, S: Subset | None = None) -> LatticeView:
    """(S, ⊓_L, ⊔_L, *, 0, 1) re-indexed onto 0..|S|-1 (S defaults to O(X))."""
    if S is None:
        S = oml_center(A)
    t = A.tables
    els = S.elements()
    pos = {e: i for i, e in enumerate(els)}
    bad = closure_violation(A, S, ("*", "&&", "||"))
    if bad is not None:
        raise NotClosed(*bad)
    return LatticeView(
        names=tuple(A.names[e] for e in els),
        meet=tuple(tuple(pos[int(t.infL[x, y])] for y in els) for x in els),
        join=tuple(tuple(pos[int(t.supL[x, y])] for y in els) for x in els),
        complement=tuple(pos[A.imp[x][A.zero]] for x in els),
        zero=pos[A.zero], one=pos[A.one])


def distributivity_witness(A: FiniteAlgebra, S: Subset | None = None):
    """First (x, y, z) in S with x ⊔_L (y ⊓_L z) != (x ⊔_L y) ⊓_L (x ⊔_L z)."""
    if S is None:
        S = oml_center(A)
    t = A.tables
    for x, y, z in product(S.elements(), repeat=3):
        lhs = t.supL[x, t.infL[y, z]]
        rhs = t.infL[t.supL[x, y], t.supL[x, z]]
        if lhs != rhs:
            return (x, y, z), int(lhs), int(rhs)
    return None


def verify_oml_center(A: FiniteAlgebra) -> CenterReport:
    """O(X) is closed under ->, *, and (O(X), ⊓_L, ⊔_L, *, 0, 1) is an orthomodular lattice.

    Distributivity is not required; its failure is recorded as a note.
    """
    O = oml_center(A)
    t = A.tables
    els = O.elements()
    fails: list = []
    closure_ok = A.zero in O and A.one in O
    bad = closure_violation(A, O, ("->", "*", "&", "|", ".", "&&", "||"))
    if bad is not None:
        closure_ok = False
        op, args, _ = bad
        fails.append((f"closed-{op}", dict(zip("xy", args))))
    pairs = list(product(els, repeat=2))
    ok = _first(pairs, fails, "leqL-is-leqQ", lambda x, y: t.leqL[x, y] == t.leqQ[x, y])
    ok &= _bound_checks(A, els, els, t.leqQ, t.supL, t.infL, fails, "L-")
    ok &= _first(pairs, fails, "join-below-joinL",
                 lambda x, y: t.leqQ[t.sup[x, y], t.supL[x, y]]
                 and t.leqQ[t.infL[x, y], t.inf[x, y]])
    if closure_ok:
        hit = ortholattice_violation(oml_lattice(A, O))
        if hit is not None:
            ok = False
            tag, wit = hit
            fails.append((tag, {v: els[i] for v, i in wit.items()}))
    report = CenterReport("oml-center", O, closure_ok, bool(ok), fails)
    if closure_ok:
        d = distributivity_witness(A, O)
        if d is not None:
            (x, y, z), lhs, rhs = d
            n = A.names
            report.notes.append(
                f"lattice not distributive: witness x={n[x]} y={n[y]} z={n[z]}: "
                f"{n[x]} || ({n[y]} && {n[z]}) = {n[lhs]} != {n[rhs]} = "
                f"({n[x]} || {n[y]}) && ({n[x]} || {n[z]})")
    return report


def verify_quasilinear_center(A: FiniteAlgebra, strict: str = "leq") -> CenterReport:
    """On a quasi-linear QW algebra, ≤ restricted to Z(X) is total."""
    Z = wajsberg_center(A)
    fails: list = []
    pre = check_quasi_linear(A, strict=strict)
    if not pre.passed:
        return CenterReport("quasilinear-center", Z, True, False,
                            [("precondition-" + pre.axiom, dict(pre.witness))])
    leq = A.tables.leq
    els = Z.elements()
    ok = _first(list(product(els, repeat=2)), fails, "total",
                lambda x, y: leq[x, y] or leq[y, x])
    return CenterReport("quasilinear-center", Z, True, bool(ok), fails)


def oml_to_qw(L: LatticeView) -> FiniteAlgebra:
    """x -> y = x' ∨ y on an orthomodular lattice."""
    hit = ortholattice_violation(L)
    if hit is not None:
        raise InputNotOrthomodular(*hit)
    n = L.size
    imp = [[L.join[L.complement[x]][y] for y in range(n)] for x in range(n)]
    return FiniteAlgebra(imp, L.one, L.zero, L.names)


def lattice_from_order(names: Sequence[str], leq: Sequence[Sequence[bool]],
                       complement: Sequence[int]) -> LatticeView:
    """Build a LatticeView from a partial order given as a boolean matrix."""
    n = len(names)
    els = range(n)

    def extreme(cands, better):
        for c in cands:
            if all(better(c, d) for d in cands):
                return c
        raise ValueError("order is not a lattice")

    join = [[extreme([z for z in els if leq[x][z] and leq[y][z]], lambda a, b: leq[a][b])
             for y in els] for x in els]
    meet = [[extreme([z for z in els if leq[z][x] and leq[z][y]], lambda a, b: leq[b][a])
             for y in els] for x in els]
    zero = extreme(list(els), lambda a, b: leq[a][b])
    one = extreme(list(els), lambda a, b: leq[b][a])
    return LatticeView(tuple(names), tuple(map(tuple, meet)), tuple(map(tuple, join)),
                       tuple(complement), zero, one)


def benzene() -> LatticeView:
    """The six-element ortholattice O6 (0 < a < b < 1, 0 < b' < a' < 1); not orthomodular."""
    names = ("0", "a", "b", "b'", "a'", "1")
    up = {0: {0, 1, 2, 3, 4, 5}, 1: {1, 2, 5}, 2: {2, 5}, 3: {3, 4, 5}, 4: {4, 5}, 5: {5}}
    leq = [[y in up[x] for y in range(6)] for x in range(6)]
    return lattice_from_order(names, leq, (5, 4, 3, 2, 1, 0))


def hasse_export(A: FiniteAlgebra, order: str = "leqQ", S: Subset | None = None) -> str:
    """Covering relation of ≤ or ≤_Q restricted to S as ``node``/``edge`` lines."""
    if order not in ("leq", "leqQ"):
        raise ValueError("order must be 'leq' or 'leqQ'")
    rel = A.tables.leq if order == "leq" else A.tables.leqQ
    els = (Subset.full(A.size) if S is None else S).elements()
    lines = [f"# hasse order={order}"]
    lines += [f"node {A.names[e]}" for e in els]
    for x in els:
        for y in els:
            if x == y or not rel[x, y]:
                continue
            if any(z != x and z != y and rel[x, z] and rel[z, y] for z in els):
                continue
            lines.append(f"edge {A.names[x]} {A.names[y]}")
    return "\n".join(lines) + "\n"
