"""Isomorph-free enumeration of finite algebras and countermodel search.

Models are generated with 0 at index 0 and 1 at index n-1.  The search fills
the implication table cell by cell:

* the rows and columns forced by the BE axioms and boundedness are pre-filled;
* for classes that force an involutive star, the star is fixed first (one
  representative per conjugacy class of involutions) and the contraposition
  law x -> y = y* -> x* assigns cells in pairs;
* the exchange law is checked incrementally on every assigned cell, and the
  class's own identities are checked on the partial table, where lookups into
  unknown cells propagate an 'unknown' sentinel;
* a partial table is abandoned once a relabelling that commutes with the star
  is already lexicographically smaller on its determined prefix.

Every finished table is re-verified with the class check from ``axioms`` and
stored under its canonical key, so the result holds one model per
isomorphism class in canonical-key order.
"""

from __future__ import annotations

import hashlib
import logging
import time
from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterator, Sequence

import numpy as np

from .algebra import FiniteAlgebra, OpKernel, format_algebra
from .axioms import check_class, class_name
from .terms import Statement, evaluate, holds, parse

log = logging.getLogger(__name__)

DEFAULT_MAX_N = 5

# Classes whose members (with 0 the bottom element) have an involutive star.
INVOLUTIVE_CLASSES = frozenset({
    "InvolutiveBE", "CommutativeBE", "Wajsberg", "mBE", "SAlgebra",
    "QMV_oplus", "Pqmv", "QW", "QuasiLinear",
})

# Identities each class satisfies; used only to prune partial tables.
PRUNING_IDENTITIES: dict[str, tuple[str, ...]] = {
    "BCK": ("(x -> y) -> ((y -> z) -> (x -> z)) = 1",),
    "CommutativeBE": ("(x -> y) -> y = (y -> x) -> x",),
    "Wajsberg": ("(x -> y) -> y = (y -> x) -> x",
                 "(y -> z) -> ((z -> x) -> (y -> x)) = 1"),
    "mBE": ("x . y = y . x", "x . (y . z) = (x . y) . z"),
    "SAlgebra": ("x (+) y = y (+) x", "x (+) (y (+) z) = (x (+) y) (+) z"),
    "QMV_oplus": ("x (+) (y (+) z) = (x (+) y) (+) z",
                  "x (+) ((x' &s y) &s (z &s x')) = (x (+) y) &s (x (+) z)"),
    "Pqmv": ("x . (y . z) = (x . y) . z",
             "x . ((x' | y) | (z | x')) = (x . y) | (x . z)"),
    "QW": ("x -> (x & y) = x -> y",
           "x -> ((x & y) & (z & x)) = (x -> y) & (x -> z)"),
    "QuasiLinear": ("x -> (x & y) = x -> y",
                    "x -> ((x & y) & (z & x)) = (x -> y) & (x -> z)"),
}


class BudgetExhausted(RuntimeError):
    def __init__(self, reason: str, nodes: int):
        self.reason = reason
        self.nodes = nodes
        super().__init__(f"search budget exhausted ({reason}) after {nodes} nodes")


@dataclass
class SearchSpec:
    size: int
    cls: str = "QW"
    statement: Statement | str | None = None
    node_budget: int | None = None
    time_budget: float | None = None
    workers: int = 1
    allow_large: bool = False

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("size must be at least 1")
        self.cls = class_name(self.cls)
        if isinstance(self.statement, str):
            self.statement = parse(self.statement)
        for b in (self.node_budget, self.time_budget):
            if b is not None and b <= 0:
                raise ValueError("budgets must be positive")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.size > DEFAULT_MAX_N and not self.allow_large:
            raise ValueError(
                f"size {self.size} exceeds the default limit {DEFAULT_MAX_N}; "
                "pass allow_large (CLI: --large) to search it anyway")


@dataclass
class ModelStream:
    """Canonical representatives in canonical-key order."""

    size: int
    cls: str
    models: list[FiniteAlgebra] = field(default_factory=list)
    partial: bool = False
    nodes: int = 0
    reason: str | None = None

    def __iter__(self) -> Iterator[FiniteAlgebra]:
        return iter(self.models)

    def __len__(self) -> int:
        return len(self.models)


# Canonical forms and isomorphism

def _relabel_flat(A: FiniteAlgebra, p: Sequence[int]) -> tuple[int, ...]:
    n = A.size
    inv = [0] * n
    for x, px in enumerate(p):
        inv[px] = x
    imp = A.imp
    return tuple(p[imp[inv[i]][inv[j]]] for i in range(n) for j in range(n))


def _standard_bijections(A: FiniteAlgebra) -> Iterator[list[int]]:
    n = A.size
    if n == 1:
        yield [0]
        return
    middle = [x for x in A.elements() if x not in (A.zero, A.one)]
    for targets in permutations(range(1, n - 1)):
        p = [0] * n
        p[A.zero] = 0
        p[A.one] = n - 1
        for x, t in zip(middle, targets):
            p[x] = t
        yield p


def canonical_key(A: FiniteAlgebra) -> tuple[int, ...]:
    """(n, *flattened table) minimised over bijections sending 0 to 0 and 1 to n-1."""
    best = min(_relabel_flat(A, p) for p in _standard_bijections(A))
    return (A.size, *best)


def canonical_form(A: FiniteAlgebra) -> FiniteAlgebra:
    best = min(_relabel_flat(A, p) for p in _standard_bijections(A))
    n = A.size
    rows = [best[i * n:(i + 1) * n] for i in range(n)]
    return FiniteAlgebra(rows, one=n - 1, zero=0)


def isomorphic(A: FiniteAlgebra, B: FiniteAlgebra, fix_constants: bool = True) -> list[int] | None:
    """First bijection p (lexicographic in the image tuple) with p(x -> y) = p(x) -> p(y)."""
    n = A.size
    if B.size != n:
        return None
    p = [-1] * n
    used = [False] * n

    def consistent(x: int) -> bool:
        for y in range(x + 1):
            for a, b in ((x, y), (y, x)):
                v = A.imp[a][b]
                if p[v] >= 0 and B.imp[p[a]][p[b]] != p[v]:
                    return False
        return True

    def rec(x: int) -> bool:
        if x == n:
            return all(B.imp[p[a]][p[b]] == p[A.imp[a][b]] for a in range(n) for b in range(n))
        for t in range(n):
            if used[t]:
                continue
            if fix_constants:
                if x == A.zero and t != B.zero or x == A.one and t != B.one:
                    continue
                if t in (B.zero, B.one) and x not in (A.zero, A.one):
                    continue
            p[x] = t
            used[t] = True
            if consistent(x) and rec(x + 1):
                return True
            used[t] = False
            p[x] = -1
        return False

    return list(p) if rec(0) else None


# The search proper

def _involution_representatives(k: int) -> list[list[int]]:
    """One involution of {1..k} per number of 2-cycles (pairs (1,2), (3,4), ...)."""
    reps = []
    for pairs in range(k // 2 + 1):
        s = list(range(k + 2))
        s[0], s[k + 1] = k + 1, 0
        for i in range(pairs):
            a, b = 1 + 2 * i, 2 + 2 * i
            s[a], s[b] = b, a
        reps.append(s)
    return reps


class _Search:
    def __init__(self, n: int, cls: str, sigma: list[int] | None, deadline: float | None,
                 node_budget: int | None, statement: Statement | None):
        self.n = n
        self.cls = cls
        self.sigma = sigma
        self.deadline = deadline
        self.node_budget = node_budget
        self.statement = statement
        self.nodes = 0
        U = n  # unknown sentinel
        top = n - 1
        self.top = top
        t = [[U] * (n + 1) for _ in range(n + 1)]
        for x in range(n):
            t[x][x] = top
            t[x][top] = top
            t[top][x] = x
            t[0][x] = top
        if sigma is not None:
            for x in range(1, n - 1):
                t[x][0] = sigma[x]
        self.t = t
        self.arr = np.array(t, dtype=np.intp)
        self.kernel = OpKernel(self.arr, 0, top)
        X = np.arange(n)
        self.grids = {a: np.meshgrid(*([X] * a), indexing="ij") for a in (1, 2, 3)}
        self.identities = []
        for text in PRUNING_IDENTITIES.get(cls, ()):
            st = parse(text)
            vs = st.variables()
            self.identities.append((st.conclusion.desugar(), vs))
        mid = range(1, n - 1)
        if sigma is None:
            self.cells = [(x, y) for x in mid for y in [0, *mid] if x != y]
            group = [list(p) for p in permutations(mid)]
        else:
            self.cells = [(x, y) for x in mid for y in mid if x != y]
            group = [list(p) for p in permutations(mid)
                     if all(p[sigma[i] - 1] == sigma[p[i - 1]] for i in mid)]
        self.perms = []
        for g in group:
            full = [0, *g, top] if n > 1 else [0]
            if full == list(range(n)):
                continue
            inv = [0] * n
            for a, b in enumerate(full):
                inv[b] = a
            self.perms.append((full, inv))
        self.results: list[tuple[int, ...]] = []

    # constraint checks

    def _set(self, x, y, v):
        self.t[x][y] = v
        self.arr[x, y] = v

    def _be4_ok(self, a: int, b: int) -> bool:
        t, U, n = self.t, self.n, self.n
        v = t[a][b]
        row_a = t[a]
        for x in range(n):
            xb = t[x][b]
            if xb == U:
                continue
            lhs = t[x][v]
            rhs = row_a[xb]
            if lhs != U and rhs != U and lhs != rhs:
                return False
        for y in range(n):
            ty = t[y]
            for z in range(n):
                if ty[z] != b:
                    continue
                az = row_a[z]
                if az == U:
                    continue
                rhs = ty[az]
                if rhs != U and rhs != v:
                    return False
        return True

    def _identities_ok(self) -> bool:
        k, U = self.kernel, self.n
        for (lhs, rhs), vs in self.identities:
            env = dict(zip(vs, self.grids[len(vs)]))
            l = evaluate(k, lhs, env)
            r = evaluate(k, rhs, env)
            if np.any((l != r) & (l < U) & (r < U)):
                return False
        return True

    def _lex_ok(self) -> bool:
        t, U, n = self.t, self.n, self.n
        for g, ginv in self.perms:
            decided = False
            for i in range(1, n - 1):
                row = t[i]
                src = t[ginv[i]]
                for j in range(n):
                    cur = row[j]
                    s = src[ginv[j]]
                    if cur == U or s == U:
                        decided = True
                        break
                    img = g[s]
                    if img < cur:
                        return False
                    if img > cur:
                        decided = True
                        break
                if decided:
                    break
        return True

    def _initial_ok(self) -> bool:
        n = self.n
        for a in range(n):
            for b in range(n):
                if self.t[a][b] != n and not self._be4_ok(a, b):
                    return False
        return self._identities_ok() and self._lex_ok()

    # driver

    def _tick(self):
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise BudgetExhausted("nodes", self.nodes)
        if self.deadline is not None and (self.nodes & 255) == 0 and time.monotonic() > self.deadline:
            raise BudgetExhausted("time", self.nodes)

    def branches(self) -> list[int]:
        """Values tried for the first free cell (used to split work)."""
        if not self._initial_ok():
            return []
        return list(range(self.n)) if self.cells else [-1]

    def run(self, first_value: int | None = None):
        if first_value is None:
            if not self._initial_ok():
                return
            self._rec(0)
        elif first_value == -1:
            self._rec(0)
        else:
            self._assign_and_recurse(0, first_value)

    def _next_free(self, i: int) -> int:
        cells, t, U = self.cells, self.t, self.n
        while i < len(cells) and t[cells[i][0]][cells[i][1]] != U:
            i += 1
        return i

    def _rec(self, i: int):
        i = self._next_free(i)
        if i == len(self.cells):
            self._leaf()
            return
        for v in range(self.n):
            self._assign_and_recurse(i, v)

    def _assign_and_recurse(self, i: int, v: int):
        self._tick()
        x, y = self.cells[i]
        U = self.n
        assigned = [(x, y)]
        self._set(x, y, v)
        ok = True
        if self.sigma is not None:
            s = self.sigma
            px, py = s[y], s[x]
            if (px, py) != (x, y):
                cur = self.t[px][py]
                if cur == U:
                    self._set(px, py, v)
                    assigned.append((px, py))
                elif cur != v:
                    ok = False
        if ok:
            ok = all(self._be4_ok(a, b) for a, b in assigned)
        if ok:
            ok = self._identities_ok() and self._lex_ok()
        if ok:
            self._rec(i + 1)
        for a, b in assigned:
            self._set(a, b, U)

    def _leaf(self):
        n = self.n
        rows = [self.t[i][:n] for i in range(n)]
        A = FiniteAlgebra(rows, one=n - 1, zero=0)
        if not check_class(A, self.cls).passed:
            return
        if self.statement is not None and holds(A, self.statement).holds:
            return
        self.results.append(tuple(v for r in rows for v in r))


def _tasks(n: int, cls: str) -> list[tuple]:
    if n <= 2:
        return [(None, None)]
    if cls in INVOLUTIVE_CLASSES:
        sigmas = _involution_representatives(n - 2)
    else:
        sigmas = [None]
    return [(s, None) for s in sigmas]


def _run_task(args):
    n, cls, sigma, first, deadline, node_budget, statement = args
    s = _Search(n, cls, sigma, deadline, node_budget, statement)
    try:
        s.run(first)
    except BudgetExhausted as exc:
        return s.results, s.nodes, exc.reason
    return s.results, s.nodes, None


def _trivial_models(n: int) -> list[tuple[int, ...]]:
    if n == 1:
        return [(0,)]
    return [(1, 1, 0, 1)]


def enumerate_models(spec: SearchSpec) -> ModelStream:
    """All models of ``spec.cls`` of size ``spec.size`` up to isomorphism.

    With ``spec.statement`` set, only models on which the statement fails are kept.
    """
    n, cls = spec.size, spec.cls
    stream = ModelStream(n, cls)
    deadline = None if spec.time_budget is None else time.monotonic() + spec.time_budget
    if n <= 2:
        raw = []
        for flat in _trivial_models(n):
            rows = [flat[i * n:(i + 1) * n] for i in range(n)]
            A = FiniteAlgebra(rows, one=n - 1, zero=0)
            if check_class(A, cls).passed and (
                    spec.statement is None or not holds(A, spec.statement).holds):
                raw.append(flat)
    else:
        jobs = []
        for sigma, _ in _tasks(n, cls):
            probe = _Search(n, cls, sigma, None, None, None)
            for v in probe.branches():
                jobs.append((n, cls, sigma, v, deadline, spec.node_budget, spec.statement))
        if spec.workers > 1 and len(jobs) > 1:
            import multiprocessing as mp
            with mp.get_context("spawn").Pool(spec.workers) as pool:
                outs = pool.map(_run_task, jobs, chunksize=1)
        else:
            outs = []
            budget = spec.node_budget
            for job in jobs:
                if budget is not None:
                    job = (*job[:5], budget, job[6])
                out = _run_task(job)
                outs.append(out)
                if budget is not None:
                    budget -= out[1]
                    if out[2] is None and budget <= 0:
                        budget = 1
                if out[2] is not None:
                    break
        raw = []
        for job, (results, nodes, reason) in zip(jobs, outs):
            log.debug("task star=%s first=%s: %d nodes, %d tables", job[2], job[3],
                      nodes, len(results))
            raw.extend(results)
            stream.nodes += nodes
            if reason is not None:
                stream.partial = True
                stream.reason = reason
    seen = {}
    for flat in raw:
        rows = [flat[i * n:(i + 1) * n] for i in range(n)]
        A = canonical_form(FiniteAlgebra(rows, one=n - 1, zero=0))
        seen.setdefault(canonical_key(A), A)
    stream.models = [seen[k] for k in sorted(seen)]
    return stream


@dataclass
class Countermodel:
    algebra: FiniteAlgebra
    witness: dict[str, int]


@dataclass
class RefuteResult:
    countermodel: Countermodel | None
    max_size: int
    partial: bool = False
    searched: list[tuple[int, int]] = field(default_factory=list)  # (size, nodes)


def find_countermodel(statement: Statement | str, cls: str = "QW", max_n: int = DEFAULT_MAX_N,
                      workers: int = 1, node_budget: int | None = None,
                      time_budget: float | None = None,
                      allow_large: bool = False) -> RefuteResult:
    """Smallest, then canonically first, model of ``cls`` where ``statement`` fails."""
    if isinstance(statement, str):
        statement = parse(statement)
    res = RefuteResult(None, max_n)
    start = time.monotonic()
    for n in range(1, max_n + 1):
        remaining = None if time_budget is None else time_budget - (time.monotonic() - start)
        if remaining is not None and remaining <= 0:
            res.partial = True
            break
        spec = SearchSpec(n, cls, statement, node_budget, remaining, workers,
                          allow_large=allow_large)
        stream = enumerate_models(spec)
        res.searched.append((n, stream.nodes))
        if stream.models:
            A = stream.models[0]
            res.countermodel = Countermodel(A, holds(A, statement).witness)
            res.partial = stream.partial
            return res
        if stream.partial:
            res.partial = True
            break
    return res


def model_hash(A: FiniteAlgebra) -> str:
    return hashlib.sha256(format_algebra(A).encode()).hexdigest()


def manifest(stream: ModelStream, filenames: Sequence[str] | None = None) -> str:
    """Plain-text manifest: header, then one line per model with its content hash."""
    lines = [f"# class={stream.cls} size={stream.size} count={len(stream)}"
             f" partial={'yes' if stream.partial else 'no'}"]
    for i, A in enumerate(stream.models):
        name = filenames[i] if filenames else f"model-{i + 1:04d}"
        lines.append(f"{name} sha256={model_hash(A)}")
    return "\n".join(lines) + "\n"
