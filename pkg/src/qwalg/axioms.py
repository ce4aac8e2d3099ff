"""Membership tests for the BE-algebra hierarchy, with first-counterexample witnesses.

Every axiom is evaluated on the whole grid of assignments at once; the witness
reported for a failing axiom is the first violating assignment in
lexicographic index order, so reports are reproducible.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import FiniteAlgebra, OpKernel

log = logging.getLogger(__name__)

VARS = ("x", "y", "z")

CLASS_NAMES = (
    "BE", "BoundedBE", "InvolutiveBE", "BCK", "CommutativeBE", "Wajsberg",
    "mBE", "SAlgebra", "QMV_oplus", "Pqmv", "QW", "QuasiLinear",
)

_ALIASES = {
    "be": "BE", "bounded": "BoundedBE", "boundedbe": "BoundedBE",
    "involutive": "InvolutiveBE", "involutivebe": "InvolutiveBE",
    "bck": "BCK", "commutative": "CommutativeBE", "commutativebe": "CommutativeBE",
    "wajsberg": "Wajsberg", "mbe": "mBE", "m-be": "mBE",
    "salgebra": "SAlgebra", "s-algebra": "SAlgebra", "s": "SAlgebra",
    "qmv": "QMV_oplus", "qmv_oplus": "QMV_oplus", "pqmv": "Pqmv", "qw": "QW",
    "quasilinear": "QuasiLinear", "quasi-linear": "QuasiLinear",
}


def class_name(tag: str) -> str:
    """Resolve a user-facing tag (``qw``, ``Wajsberg``, ...) to a class name."""
    key = tag.strip().lower()
    if key in _ALIASES:
        return _ALIASES[key]
    raise KeyError(f"unknown algebra class {tag!r}")


@dataclass
class ClassReport:
    cls: str
    passed: bool
    witness: dict[str, int] | None = None
    axiom: str | None = None
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.passed != (self.witness is None):
            raise ValueError("a witness is present exactly when the check fails")

    def render(self, A: FiniteAlgebra) -> str:
        if self.passed:
            return f"CLASS {self.cls} PASS"
        parts = [f"{v}={A.names[e]}" for v, e in self.witness.items()]
        parts.append(f"axiom={self.axiom}")
        return f"CLASS {self.cls} FAIL witness " + " ".join(parts)

    def as_dict(self, A: FiniteAlgebra) -> dict:
        d = {"class": self.cls, "pass": self.passed}
        if not self.passed:
            d["witness"] = {v: A.names[e] for v, e in self.witness.items()}
            d["axiom"] = self.axiom
        if self.notes:
            d["notes"] = list(self.notes)
        return d


class InternalConsistencyError(RuntimeError):
    """Two formulations that should agree gave different verdicts."""


# An axiom is (tag, arity, fn) where fn(ops, *grids) returns a boolean array.
Axiom = tuple[str, int, Callable]


def _grids(n: int, arity: int):
    if arity == 0:
        return ()
    return np.meshgrid(*([np.arange(n)] * arity), indexing="ij")


def first_violation(n: int, axioms: list[Axiom], ops) -> tuple[str, dict[str, int]] | None:
    """Return (tag, assignment) for the first failing axiom, or None."""
    for tag, arity, fn in axioms:
        ok = np.broadcast_to(fn(ops, *_grids(n, arity)), (n,) * arity)
        if not ok.all():
            bad = tuple(int(i) for i in np.argwhere(~ok)[0])
            return tag, dict(zip(VARS, bad))
    return None


def _report(cls: str, n: int, axioms: list[Axiom], ops) -> ClassReport:
    hit = first_violation(n, axioms, ops)
    if hit is None:
        return ClassReport(cls, True)
    tag, wit = hit
    return ClassReport(cls, False, wit, tag)


def _by_containment(cls: str, prereq: ClassReport) -> ClassReport:
    return ClassReport(cls, False, dict(prereq.witness), prereq.axiom,
                       [f"fails by containment: not {prereq.cls}"])


class _Ops:
    """Operations for the ⊙ and ⊕ signatures, built from a supplied table."""

    def __init__(self, A: FiniteAlgebra, table: np.ndarray):
        self.t = np.asarray(table, dtype=np.intp)
        self.s = A.kernel.star_vec
        self.one = A.one
        self.zero = A.zero


# BE family

BE_AXIOMS: list[Axiom] = [
    ("BE1", 1, lambda k, x: k.imp[x, x] == k.one),
    ("BE2", 1, lambda k, x: k.imp[x, k.one] == k.one),
    ("BE3", 1, lambda k, x: k.imp[k.one, x] == x),
    ("BE4", 3, lambda k, x, y, z: k.imp[x, k.imp[y, z]] == k.imp[y, k.imp[x, z]]),
]
BOUND_AXIOM: Axiom = ("Bound", 1, lambda k, x: k.imp[k.zero, x] == k.one)
INV_AXIOM: Axiom = ("Inv", 1, lambda k, x: k.star(k.star(x)) == x)
BCK_AXIOMS: list[Axiom] = [
    ("BCK1", 3, lambda k, x, y, z:
        k.imp[k.imp[x, y], k.imp[k.imp[y, z], k.imp[x, z]]] == k.one),
    ("BCK4", 2, lambda k, x, y:
        ~((k.imp[x, y] == k.one) & (k.imp[y, x] == k.one)) | (x == y)),
]
COMM_AXIOM: Axiom = ("Comm", 2, lambda k, x, y: k.sup(x, y) == k.sup(y, x))
W_AXIOMS: list[Axiom] = [
    ("W1", 1, lambda k, x: k.imp[k.one, x] == x),
    ("W2", 3, lambda k, x, y, z:
        k.imp[k.imp[y, z], k.imp[k.imp[z, x], k.imp[y, x]]] == k.one),
    ("W3", 2, lambda k, x, y: k.sup(x, y) == k.sup(y, x)),
    ("W4", 2, lambda k, x, y: k.imp[k.imp[k.star(x), k.star(y)], k.imp[y, x]] == k.one),
]
QW_AXIOM: Axiom = ("QW", 3, lambda k, x, y, z:
                   k.imp[x, k.inf(k.inf(x, y), k.inf(z, x))] == k.inf(k.imp[x, y], k.imp[x, z]))
QW1_AXIOM: Axiom = ("QW1", 2, lambda k, x, y: k.imp[x, k.inf(x, y)] == k.imp[x, y])
QW2_AXIOM: Axiom = ("QW2", 3, lambda k, x, y, z:
                    k.imp[x, k.inf(y, k.inf(z, x))] == k.inf(k.imp[x, y], k.imp[x, z]))


# ⊙ signature: o.t is the product table, star from the algebra, 0 := 1*

def _m_zero(o):
    return o.s[o.one]


M_AXIOMS: list[Axiom] = [
    ("PU", 1, lambda o, x: (o.t[o.one, x] == x) & (o.t[x, o.one] == x)),
    ("Pcomm", 2, lambda o, x, y: o.t[x, y] == o.t[y, x]),
    ("Pass", 3, lambda o, x, y, z: o.t[x, o.t[y, z]] == o.t[o.t[x, y], z]),
    ("m-L", 1, lambda o, x: o.t[x, _m_zero(o)] == _m_zero(o)),
    ("m-Re", 1, lambda o, x: o.t[x, o.s[x]] == _m_zero(o)),
]


def _m_imp(o, x, y):
    # x -> y := (x ⊙ y*)*
    return o.s[o.t[x, o.s[y]]]


def _m_sup(o, x, y):
    return _m_imp(o, _m_imp(o, x, y), y)


PQMV_AXIOM: Axiom = ("Pqmv", 3, lambda o, x, y, z:
                     o.t[x, _m_sup(o, _m_sup(o, o.s[x], y), _m_sup(o, z, o.s[x]))]
                     == _m_sup(o, o.t[x, y], o.t[x, z]))


# ⊕ signature: o.t is the sum table

def _s_prod(o, x, y):
    return o.s[o.t[o.s[x], o.s[y]]]


def _s_inf(o, x, y):
    return _s_prod(o, o.t[x, o.s[y]], y)


S_AXIOMS: list[Axiom] = [
    ("S1", 2, lambda o, x, y: o.t[x, y] == o.t[y, x]),
    ("S2", 3, lambda o, x, y, z: o.t[x, o.t[y, z]] == o.t[o.t[x, y], z]),
    ("S3", 1, lambda o, x: o.t[x, o.s[x]] == o.one),
    ("S4", 1, lambda o, x: o.t[x, o.zero] == x),
    ("S5", 1, lambda o, x: o.s[o.s[x]] == x),
    ("S6", 0, lambda o: np.array(o.s[o.zero] == o.one)),
    ("S7", 1, lambda o, x: o.t[x, o.one] == o.one),
]
QMV_AXIOM: Axiom = ("QMV", 3, lambda o, x, y, z:
                    o.t[x, _s_inf(o, _s_inf(o, o.s[x], y), _s_inf(o, z, o.s[x]))]
                    == _s_inf(o, o.t[x, y], o.t[x, z]))


# Class checks

def check_be(A: FiniteAlgebra) -> ClassReport:
    return _report("BE", A.size, BE_AXIOMS, A.kernel)


def check_bounded(A: FiniteAlgebra, force: bool = False) -> ClassReport:
    if not force:
        be = check_be(A)
        if not be.passed:
            return _by_containment("BoundedBE", be)
    return _report("BoundedBE", A.size, [BOUND_AXIOM], A.kernel)


def check_involutive(A: FiniteAlgebra, force: bool = False) -> ClassReport:
    if not force:
        b = check_bounded(A)
        if not b.passed:
            return _by_containment("InvolutiveBE", b)
    return _report("InvolutiveBE", A.size, [INV_AXIOM], A.kernel)


def check_bck(A: FiniteAlgebra, force: bool = False) -> ClassReport:
    if not force:
        be = check_be(A)
        if not be.passed:
            return _by_containment("BCK", be)
    return _report("BCK", A.size, BCK_AXIOMS, A.kernel)


def check_commutative(A: FiniteAlgebra, force: bool = False) -> ClassReport:
    if not force:
        be = check_be(A)
        if not be.passed:
            return _by_containment("CommutativeBE", be)
    return _report("CommutativeBE", A.size, [COMM_AXIOM], A.kernel)


def check_wajsberg(A: FiniteAlgebra, force: bool = False) -> ClassReport:
    # W1-W4 are a complete axiomatisation, so there is no prerequisite
    return _report("Wajsberg", A.size, W_AXIOMS, A.kernel)


def check_qw(A: FiniteAlgebra, force: bool = False) -> ClassReport:
    """(QW) over all triples, cross-checked against (QW1) and (QW2).

    Raises InternalConsistencyError if the single axiom and the pair disagree.
    """
    if not force:
        inv = check_involutive(A)
        if not inv.passed:
            return _by_containment("QW", inv)
    k = A.kernel
    rep = _report("QW", A.size, [QW_AXIOM], k)
    split = first_violation(A.size, [QW1_AXIOM, QW2_AXIOM], k)
    if rep.passed != (split is None):
        msg = (f"(QW) {'holds' if rep.passed else 'fails'} but (QW1)+(QW2) "
               f"{'hold' if split is None else 'fail at ' + split[0]}")
        if force:
            rep.notes.append("inconsistent: " + msg)
        else:
            raise InternalConsistencyError(msg)
    return rep


def check_m_be(A: FiniteAlgebra, prod_table=None) -> ClassReport:
    t = A.tables.prod if prod_table is None else prod_table
    return _report("mBE", A.size, M_AXIOMS, _Ops(A, t))


def check_s_algebra(A: FiniteAlgebra, oplus_table=None) -> ClassReport:
    t = A.tables.oplus if oplus_table is None else oplus_table
    return _report("SAlgebra", A.size, S_AXIOMS, _Ops(A, t))


def check_pqmv(A: FiniteAlgebra, prod_table=None, force: bool = False) -> ClassReport:
    """(Pqmv) in the ⊙ signature; ⊔ is rebuilt from ⊙ via x -> y = (x ⊙ y*)*."""
    t = A.tables.prod if prod_table is None else prod_table
    if not force:
        m = check_m_be(A, t)
        if not m.passed:
            return _by_containment("Pqmv", m)
    return _report("Pqmv", A.size, [PQMV_AXIOM], _Ops(A, t))


def check_qmv_oplus(A: FiniteAlgebra, oplus_table=None, force: bool = False) -> ClassReport:
    t = A.tables.oplus if oplus_table is None else oplus_table
    if not force:
        s = check_s_algebra(A, t)
        if not s.passed:
            return _by_containment("QMV_oplus", s)
    return _report("QMV_oplus", A.size, [QMV_AXIOM], _Ops(A, t))


def quasi_linear_violation(A: FiniteAlgebra, strict: str = "leq") -> tuple[int, int] | None:
    """First (x, y) with x not ≤_Q y and not y < x; ``strict`` picks the order behind '<'."""
    t = A.tables
    below = t.leq if strict == "leq" else t.leqQ
    n = A.size
    X, Y = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    ok = t.leqQ | (below.T & (X != Y))
    bad = np.argwhere(~ok)
    return (int(bad[0][0]), int(bad[0][1])) if len(bad) else None


def check_quasi_linear(A: FiniteAlgebra, strict: str = "leq", force: bool = False) -> ClassReport:
    if strict not in ("leq", "leqQ"):
        raise ValueError("strict must be 'leq' or 'leqQ'")
    if not force:
        q = check_qw(A)
        if not q.passed:
            return _by_containment("QuasiLinear", q)
    hit = quasi_linear_violation(A, strict)
    tag = "QL" if strict == "leq" else "QL_Q"
    rep = (ClassReport("QuasiLinear", True) if hit is None
           else ClassReport("QuasiLinear", False, {"x": hit[0], "y": hit[1]}, tag))
    other = quasi_linear_violation(A, "leqQ" if strict == "leq" else "leq")
    if (other is None) != (hit is None):
        rep.notes.append(
            f"the {'≤_Q' if strict == 'leq' else '≤'}-strict reading "
            f"{'passes' if other is None else 'fails'}")
    return rep


CHECKS: dict[str, Callable[..., ClassReport]] = {
    "BE": lambda A, force=False: check_be(A),
    "BoundedBE": check_bounded,
    "InvolutiveBE": check_involutive,
    "BCK": check_bck,
    "CommutativeBE": check_commutative,
    "Wajsberg": check_wajsberg,
    "mBE": lambda A, force=False: check_m_be(A),
    "SAlgebra": lambda A, force=False: check_s_algebra(A),
    "QMV_oplus": lambda A, force=False: check_qmv_oplus(A, force=force),
    "Pqmv": lambda A, force=False: check_pqmv(A, force=force),
    "QW": check_qw,
    "QuasiLinear": check_quasi_linear,
}


def check_class(A: FiniteAlgebra, cls: str, force: bool = False) -> ClassReport:
    return CHECKS[class_name(cls) if cls not in CHECKS else cls](A, force=force)


def classify(A: FiniteAlgebra, force: bool = False) -> list[ClassReport]:
    """Run the whole hierarchy.  Prerequisite failures short-circuit unless ``force``."""
    return [CHECKS[c](A, force=force) for c in CLASS_NAMES]


def term_equivalence_roundtrip(A: FiniteAlgebra) -> bool:
    """x -> y rebuilt from ⊙ (and ⊙ rebuilt from that ->) reproduce the originals."""
    k = A.kernel
    s = k.star_vec
    n = A.size
    X, Y = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    p = k.prod(X, Y)                     # Φ
    back = s[p[X, s[Y]]]                 # Ψ(Φ(->))
    again = s[back[X, s[Y]]]             # Φ(Ψ(Φ(->)))
    return bool(np.array_equal(back, A.array) and np.array_equal(again, p))
