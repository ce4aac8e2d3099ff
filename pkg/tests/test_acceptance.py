"""Acceptance suite: one test per criterion, each printing a single status line.

Run with ``pytest tests/test_acceptance.py -s`` to see only these lines, or
with ``-v`` where they appear inline.
"""

import subprocess
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

from qwalg.algebra import Subset
from qwalg.axioms import check_pqmv, check_qmv_oplus, check_qw
from qwalg.builtins import example_513
from qwalg.centers import (oml_center, oml_lattice, oml_to_qw, ortholattice_violation,
                           verify_center_lattice, verify_kleene_center, verify_oml_center,
                           verify_wajsberg_center)
from qwalg.cli import main
from qwalg.corpus import corpus_failures, run_corpus
from qwalg.search import SearchSpec, canonical_key, enumerate_models
from qwalg.terms import holds

from oracles import axioms, first_failure, naive_classes, table_by_name
from reference_tables import INF, INF_L, SUP_L

VERIFIERS = (verify_wajsberg_center, verify_center_lattice, verify_kleene_center, verify_oml_center)


@pytest.fixture
def criterion(capsys):
    def emit(k, ok, elapsed, detail):
        with capsys.disabled():
            print(f"\nCRITERION {k} {'PASS' if ok else 'FAIL'} {elapsed:.2f}s {detail}".rstrip())

    @contextmanager
    def record(k: int, limit: float | None = None):
        state = {"detail": ""}
        start = time.perf_counter()
        try:
            yield state
        except BaseException:
            emit(k, False, time.perf_counter() - start, state["detail"])
            raise
        elapsed = time.perf_counter() - start
        in_time = limit is None or elapsed < limit
        emit(k, in_time, elapsed, state["detail"] + ("" if in_time else f" (over {limit:g} s)"))
        assert in_time, f"criterion {k} exceeded {limit} s"
    return record


def cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def models(cls: str, max_n: int):
    return [A for n in range(1, max_n + 1) for A in enumerate_models(SearchSpec(n, cls))]


def test_criterion_1_example_tables_and_centers(criterion, capsys):
    with criterion(1, limit=1.0) as st:
        A = example_513()
        t = A.tables
        assert table_by_name(A, lambda x, y: int(t.inf[x, y])) == INF
        assert table_by_name(A, lambda x, y: int(t.supL[x, y])) == SUP_L
        assert table_by_name(A, lambda x, y: int(t.infL[x, y])) == INF_L
        assert cli(capsys, "check", "example-5.13", "--class", "qw") == (0, "CLASS QW PASS\n")
        code, out = cli(capsys, "centers", "example-5.13")
        assert code == 0 and out.splitlines()[:2] == ["Z = {0,1}", "O = {0,a,b,c,d,1}"]
        st["detail"] = "108/108 table entries, Z={0,1}, O=X"


def test_criterion_2_distributivity_witness(criterion, capsys):
    with criterion(2, limit=1.0) as st:
        code, out = cli(capsys, "verify", "example-5.13")
        line = ("NOTE lattice not distributive: witness x=a y=b z=c: "
                "a || (b && c) = a != 1 = (a || b) && (a || c)")
        assert code == 0 and line in out
        st["detail"] = "witness (a,b,c)"


def test_criterion_3_center_theorems(criterion):
    with criterion(3, limit=60.0) as st:
        qw = models("QW", 4)
        enumerated = {canonical_key(A)[1:] for A in qw}
        oracle = set().union(*(naive_classes(n, "QW") for n in range(1, 5)))
        assert enumerated == oracle
        failures = 0
        for A in qw:
            failures += sum(not v(A).ok for v in VERIFIERS)
            failures += len(corpus_failures(run_corpus(A)))
        assert failures == 0
        # size 5 under an explicit node budget, same zero-failure bar
        five = enumerate_models(SearchSpec(5, "QW", node_budget=1_000_000))
        assert not five.partial
        for A in five:
            assert all(v(A).ok for v in VERIFIERS) and not corpus_failures(run_corpus(A))
        st["detail"] = f"{len(qw)} models <=4 + {len(five)} at 5, 0 failures"


def test_criterion_4_axiom_equivalences(criterion):
    with criterion(4) as st:
        inv = models("InvolutiveBE", 4)
        disagreements = 0
        for A in inv:
            qw, pq, qmv = check_qw(A).passed, check_pqmv(A).passed, check_qmv_oplus(A).passed
            ax = axioms(A)
            split = all(first_failure(A.size, *ax[tag]) is None for tag in ("QW1", "QW2"))
            disagreements += not (qw == pq == qmv == split)
        assert disagreements == 0
        st["detail"] = f"{len(inv)} involutive BE algebras, 0 disagreements"


def test_criterion_5_oml_round_trip(criterion):
    with criterion(5) as st:
        qw = models("QW", 4)
        round_trips = 0
        for A in qw + [example_513()]:
            full = Subset.full(A.size)
            o_full = oml_center(A) == full
            global_identity = holds(A, "x = x' -> x").holds
            orthomodular = ortholattice_violation(oml_lattice(A, full)) is None
            assert o_full == global_identity == orthomodular
            if o_full:
                L = oml_lattice(A)
                B = oml_to_qw(L)
                assert check_qw(B).passed
                t = B.tables
                assert tuple(tuple(int(v) for v in r) for r in t.supL) == L.join
                assert tuple(tuple(int(v) for v in r) for r in t.infL) == L.meet
                round_trips += 1
        st["detail"] = f"{round_trips} round trips, {len(qw) + 1} equivalence checks"


def test_criterion_6_countermodels(criterion, capsys):
    with criterion(6, limit=600.0) as st:
        code, out = cli(capsys, "refute", "-e", "x & y = y & x", "--class", "qw",
                        "--max-size", "6", "--workers", "4")
        assert code == 1 and out.startswith("REFUTED size=4 ")
        start = time.perf_counter()
        code, out = cli(capsys, "refute", "-e", "x -> (x & y) = x -> y", "--class", "qw",
                        "--max-size", "4")
        assert (code, out) == (0, "holds up to size 4\n")
        assert time.perf_counter() - start < 60
        st["detail"] = "countermodel at size 4; holds up to size 4"


def _run(*argv: str) -> bytes:
    proc = subprocess.run([sys.executable, "-m", "qwalg.cli", *argv], capture_output=True)
    return proc.returncode.to_bytes(1, "big") + proc.stdout + proc.stderr


def _criteria_outputs(tmp: Path) -> list[bytes]:
    outs = [
        _run("check", "example-5.13", "--class", "qw"),
        _run("centers", "example-5.13"),
        _run("verify", "example-5.13"),
        _run("refute", "-e", "x & y = y & x", "--class", "qw", "--max-size", "6", "--workers", "1"),
        _run("refute", "-e", "x -> (x & y) = x -> y", "--class", "qw", "--max-size", "4",
             "--workers", "1"),
    ]
    for cls in ("qw", "involutivebe"):
        for n in range(1, 5):
            d = tmp / f"{cls}{n}"
            outs.append(_run("enumerate", "--size", str(n), "--class", cls, "--workers", "1",
                             "--out", str(d)))
            outs.append((d / "MANIFEST").read_bytes())
    for f in sorted((tmp / "qw4").glob("*.alg")):
        outs.append(_run("verify", str(f), "--format", "json"))
    return outs


def test_criterion_7_determinism(criterion, tmp_path):
    with criterion(7) as st:
        first = _criteria_outputs(tmp_path / "a")
        second = _criteria_outputs(tmp_path / "b")
        assert first == second
        st["detail"] = f"{len(first)} outputs byte-identical"
