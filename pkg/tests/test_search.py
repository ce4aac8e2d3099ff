import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwalg.algebra import FiniteAlgebra, format_algebra, parse_algebra
from qwalg.axioms import CLASS_NAMES, check_class
from qwalg.builtins import boolean2, example_513, lukasiewicz
from qwalg.search import (ModelStream, SearchSpec, canonical_form, canonical_key,
                          enumerate_models, find_countermodel, isomorphic, manifest, model_hash)
from qwalg.terms import holds

from oracles import naive_classes

# Isomorphism-class counts, frozen after agreeing with the naive oracle (n <= 4)
# and with the closed-form Wajsberg counts (finite MV-algebras) at every size.
GOLDEN_COUNTS = {
    "QW": [1, 1, 1, 4, 5, 16],
    "Wajsberg": [1, 1, 1, 2, 1, 2],
    "InvolutiveBE": [1, 1, 1, 5, 14, 158],
    "QuasiLinear": [1, 1, 1, 3, 4, 10],
}
EXAMPLE_KEY = (6, 5, 5, 5, 5, 5, 5, 2, 5, 2, 5, 5, 5, 1, 1, 5, 5, 5, 5, 4, 5, 5, 5, 4, 5,
               3, 5, 5, 3, 5, 5, 0, 1, 2, 3, 4, 5)


def keys(stream):
    return [canonical_key(A)[1:] for A in stream]


# Completeness against the naive oracle

@pytest.mark.parametrize("cls", CLASS_NAMES)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_matches_naive_oracle(cls, n):
    stream = enumerate_models(SearchSpec(n, cls))
    assert set(keys(stream)) == naive_classes(n, cls)
    assert len(stream) == len(naive_classes(n, cls))


@pytest.mark.parametrize("cls", [c for c in CLASS_NAMES if c not in ("BE", "BoundedBE")])
def test_fixing_constants_is_lossless(cls):
    # with a unique bottom element every isomorphism fixes 0 and 1 anyway
    for n in range(1, 5):
        assert len(naive_classes(n, cls, fix_constants=False)) == len(naive_classes(n, cls))


def test_fixing_constants_matters_without_antisymmetry():
    # plain BE algebras can have several elements below everything; the
    # designated 0 then distinguishes models the bare implication cannot
    assert len(naive_classes(4, "BE", fix_constants=False)) < len(naive_classes(4, "BE"))


@pytest.mark.parametrize("cls", list(GOLDEN_COUNTS))
def test_golden_counts(cls):
    got = [len(enumerate_models(SearchSpec(n, cls, allow_large=True))) for n in range(1, 7)]
    assert got == GOLDEN_COUNTS[cls]


def test_equivalent_classes_agree():
    for n in range(1, 6):
        count = {c: len(enumerate_models(SearchSpec(n, c))) for c in
                 ("QW", "Pqmv", "QMV_oplus", "InvolutiveBE", "mBE", "SAlgebra",
                  "Wajsberg", "CommutativeBE")}
        assert count["QW"] == count["Pqmv"] == count["QMV_oplus"]
        assert count["InvolutiveBE"] == count["mBE"] == count["SAlgebra"]
        assert count["Wajsberg"] == count["CommutativeBE"]


# Contract of the stream

@pytest.mark.parametrize("cls", ["QW", "InvolutiveBE", "BCK"])
def test_soundness_order_and_rejection(cls):
    for n in range(1, 6):
        stream = enumerate_models(SearchSpec(n, cls))
        ks = [canonical_key(A) for A in stream]
        assert ks == sorted(ks) and len(set(ks)) == len(ks)
        for A in stream:
            assert check_class(A, cls).passed
            assert canonical_form(A) == A
        for A, B in combinations(stream.models, 2):
            assert isomorphic(A, B) is None


def test_trivial_sizes():
    (one,) = enumerate_models(SearchSpec(1, "QW")).models
    assert one.size == 1
    (two,) = enumerate_models(SearchSpec(2, "QW")).models
    assert two.imp == boolean2().imp


def test_example_is_enumerated():
    models = enumerate_models(SearchSpec(6, "QW", allow_large=True)).models
    assert EXAMPLE_KEY in [canonical_key(A) for A in models]


# Canonical keys and isomorphism

def test_example_key_is_golden():
    assert canonical_key(example_513()) == EXAMPLE_KEY


def test_canonical_form_text_is_stable():
    assert model_hash(canonical_form(example_513())) == model_hash(canonical_form(example_513()))
    assert parse_algebra(format_algebra(canonical_form(example_513()))) == canonical_form(example_513())


@settings(max_examples=60, deadline=None)
@given(st.permutations(range(1, 5)))
def test_key_invariant_under_relabelling(middle):
    A = example_513()
    perm = [0, *middle, 5]
    B = A.relabel(perm)
    assert canonical_key(B) == canonical_key(A)
    # the example has automorphisms, so expect the least bijection that works
    found = isomorphic(A, B)
    assert A.relabel(found) == B and found <= perm


def test_isomorphic_edge_cases(ex513, bool2):
    assert isomorphic(ex513, bool2) is None
    assert isomorphic(ex513, ex513) == list(range(6))
    models = enumerate_models(SearchSpec(3, "BE")).models
    for A, B in combinations(models, 2):
        assert isomorphic(A, B) is None


def test_isomorphic_first_bijection_is_lexicographic():
    # the Boolean square has an automorphism swapping its atoms
    sq = enumerate_models(SearchSpec(4, "Wajsberg")).models
    for A in sq:
        isos = []
        for mid in ([1, 2], [2, 1]):
            p = [0, *mid, 3]
            if A.relabel(p) == A:
                isos.append(p)
        assert isomorphic(A, A) == min(isos)


def test_random_relabelled_models_collapse():
    rng = random.Random(7)
    for A in enumerate_models(SearchSpec(5, "QW")):
        mid = list(range(1, 4))
        rng.shuffle(mid)
        assert canonical_key(A.relabel([0, *mid, 4])) == canonical_key(A)


# Countermodels

def test_meet_commutativity_countermodel():
    res = find_countermodel("x & y = y & x", "QW", 6, allow_large=True)
    cm = res.countermodel
    assert cm is not None and cm.algebra.size == 4
    assert not holds(cm.algebra, "x & y = y & x").holds
    assert check_class(cm.algebra, "QW").passed
    assert [n for n, _ in res.searched] == [1, 2, 3, 4]


def test_qw1_holds_up_to_four():
    res = find_countermodel("x -> (x & y) = x -> y", "QW", 4)
    assert res.countermodel is None and not res.partial
    assert [n for n, _ in res.searched] == [1, 2, 3, 4]


def test_orthomodular_identity_countermodel():
    cm = find_countermodel("x' -> x = x", "QW", 6, allow_large=True).countermodel
    assert cm.algebra.imp == lukasiewicz(3).imp
    assert cm.witness == {"x": 1}


def test_countermodel_is_minimal():
    st_ = "(x -> y) -> y = (y -> x) -> x"
    cm = find_countermodel(st_, "QW", 5).countermodel
    for n in range(1, cm.algebra.size):
        assert all(holds(A, st_).holds for A in enumerate_models(SearchSpec(n, "QW")))
    failing = [A for A in enumerate_models(SearchSpec(cm.algebra.size, "QW"))
               if not holds(A, st_).holds]
    assert canonical_key(failing[0]) == canonical_key(cm.algebra)


# Limits, workers, manifests

def test_spec_validation():
    with pytest.raises(ValueError):
        SearchSpec(0)
    with pytest.raises(ValueError):
        SearchSpec(3, node_budget=0)
    with pytest.raises(ValueError):
        SearchSpec(3, time_budget=-1.0)
    with pytest.raises(ValueError):
        SearchSpec(6)
    with pytest.raises(KeyError):
        SearchSpec(3, "group")
    assert SearchSpec(6, allow_large=True).size == 6


def test_node_budget_marks_partial():
    s = enumerate_models(SearchSpec(5, "BCK", node_budget=300))
    assert s.partial and s.reason == "nodes"
    full = enumerate_models(SearchSpec(5, "BCK"))
    assert not full.partial
    assert set(keys(s)) <= set(keys(full))


def test_time_budget_marks_partial():
    s = enumerate_models(SearchSpec(5, "BE", time_budget=1e-6))
    assert s.partial and s.reason == "time"


def test_workers_match_sequential():
    seq = enumerate_models(SearchSpec(5, "InvolutiveBE"))
    par = enumerate_models(SearchSpec(5, "InvolutiveBE", workers=2))
    assert [A.imp for A in par] == [A.imp for A in seq]


def test_manifest():
    stream = enumerate_models(SearchSpec(4, "QW"))
    text = manifest(stream)
    lines = text.splitlines()
    assert lines[0] == "# class=QW size=4 count=4 partial=no"
    assert len(lines) == 5
    assert all(f"sha256={model_hash(A)}" in l for A, l in zip(stream, lines[1:]))
    assert manifest(ModelStream(3, "QW")) == "# class=QW size=3 count=0 partial=no\n"


def test_countermodel_statement_filter():
    s = enumerate_models(SearchSpec(4, "QW", statement="x & y = y & x"))
    assert len(s) >= 1
    assert all(not holds(A, "x & y = y & x").holds for A in s)


def test_trivial_algebra_in_every_class():
    A = FiniteAlgebra([[0]], one=0, zero=0)
    assert all(check_class(A, c).passed for c in CLASS_NAMES)
