import hashlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwalg import algebra as alg
from qwalg.algebra import AlgebraError, FiniteAlgebra, FormatError, Subset, format_algebra, parse_algebra
from qwalg.builtins import builtin, example_513_text, lukasiewicz

from oracles import Ops, table_by_name
from reference_tables import ELEMENTS, IMP, INF, INF_L, SUP_L

OPS = ("sup", "inf", "prod", "supL", "infL", "oplus", "sInf", "sSup")
RELS = ("leq", "leqQ", "leqL")


# Embedded example data

def test_example_data_matches_transcription(ex513):
    assert list(ex513.names) == ELEMENTS
    assert table_by_name(ex513, lambda x, y: ex513.imp[x][y]) == IMP


def test_example_data_checksum():
    # frozen after checking the parsed table against the hand transcription
    text = example_513_text()
    assert hashlib.sha256(text.encode()).hexdigest() == (
        "1271974a40024b084a8979e0a1178381a2aa837dc59005e0b28d9f8c6a0ed997")


@pytest.mark.parametrize("op, expected", [("inf", INF), ("supL", SUP_L), ("infL", INF_L)])
def test_example_derived_tables(ex513, op, expected):
    table = getattr(ex513.tables, op)
    assert table_by_name(ex513, lambda x, y: int(table[x, y])) == expected


# Per-element operations

def test_star(ex513, bool2):
    a, c = ex513.index("a"), ex513.index("c")
    assert alg.star(ex513, a) == c
    assert alg.star(ex513, ex513.one) == ex513.zero
    assert alg.star(ex513, ex513.zero) == ex513.one
    assert alg.star(bool2, 0) == 1


def test_named_examples(ex513):
    a, b = ex513.index("a"), ex513.index("b")
    assert alg.sup(ex513, a, b) == b
    assert alg.inf(ex513, a, b) == b and alg.inf(ex513, b, a) == a
    assert alg.prod(ex513, a, b) == ex513.zero
    assert alg.supL(ex513, a, b) == ex513.one
    assert alg.infL(ex513, a, b) == ex513.zero
    assert alg.supL(ex513, ex513.zero, a) == a
    assert alg.oplus(ex513, a, b) == ex513.one
    assert not alg.leqQ(ex513, a, b)


def test_sinf_composes_tables(ex513):
    o = Ops(ex513)
    for x in ex513.elements():
        for y in ex513.elements():
            assert alg.sInf(ex513, x, y) == o.prod(o.oplus(x, o.star(y)), y)


@pytest.mark.parametrize("name", ["example-5.13", "boolean-2", "lukasiewicz-4"])
def test_trivial_identities(name):
    A = builtin(name)
    one, zero = A.one, A.zero
    for x in A.elements():
        assert alg.sup(A, zero, x) == x
        assert alg.sup(A, x, one) == one
        assert alg.inf(A, x, one) == x
        assert alg.inf(A, zero, x) == zero
        assert alg.prod(A, x, one) == x
        assert alg.prod(A, x, alg.star(A, x)) == zero
        assert alg.oplus(A, x, zero) == x
        assert alg.oplus(A, x, alg.star(A, x)) == one
        assert alg.sInf(A, x, one) == x
        assert alg.sInf(A, zero, x) == zero
        assert alg.supL(A, x, x) == alg.imp(A, alg.star(A, x), x)
        assert alg.leq(A, zero, x)
        assert alg.leqQ(A, x, x)


def test_boolean_truth_tables(bool2):
    t = bool2.tables
    assert t.inf.tolist() == [[0, 0], [0, 1]]
    assert t.sup.tolist() == [[0, 1], [1, 1]]
    assert t.prod.tolist() == [[0, 0], [0, 1]]
    assert t.oplus.tolist() == [[0, 1], [1, 1]]


def test_index_errors(ex513):
    with pytest.raises(IndexError):
        alg.star(ex513, 6)
    with pytest.raises(IndexError):
        alg.sup(ex513, -1, 0)


# Derived tables against the loop oracle

def _check_cache(A):
    o = Ops(A)
    for name in OPS + RELS:
        table = getattr(A.tables, name)
        fn = getattr(o, name)
        for x in A.elements():
            for y in A.elements():
                assert table[x, y] == fn(x, y), (name, x, y)


@pytest.mark.parametrize("name", ["example-5.13", "boolean-2", "lukasiewicz-5", "godel-4"])
def test_cache_matches_oracle(name):
    _check_cache(builtin(name))


@st.composite
def shaped_algebras(draw, max_n=5):
    n = draw(st.integers(2, max_n))
    imp = draw(st.lists(st.lists(st.integers(0, n - 1), min_size=n, max_size=n),
                        min_size=n, max_size=n))
    zero, one = draw(st.permutations(range(n)))[:2]
    return FiniteAlgebra(imp, one=one, zero=zero)


@settings(max_examples=150, deadline=None)
@given(shaped_algebras())
def test_cache_matches_oracle_on_arbitrary_tables(A):
    _check_cache(A)
    again = alg.derive_all(A)
    for name in OPS + RELS:
        assert np.array_equal(getattr(again, name), getattr(A.tables, name))


@settings(max_examples=60, deadline=None)
@given(shaped_algebras(), st.data())
def test_relabel_commutes_with_derivation(A, data):
    perm = data.draw(st.permutations(range(A.size)))
    B = A.relabel(perm)
    for name in OPS:
        ta, tb = getattr(A.tables, name), getattr(B.tables, name)
        for x in A.elements():
            for y in A.elements():
                assert tb[perm[x], perm[y]] == perm[ta[x, y]]


def test_tables_are_read_only(ex513):
    with pytest.raises(ValueError):
        ex513.tables.inf[0, 0] = 1
    with pytest.raises(ValueError):
        ex513.array[0, 0] = 1


# Text format

def test_round_trip(ex513):
    again = parse_algebra(format_algebra(ex513))
    assert again == ex513 and again.names == ex513.names


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 7))
def test_round_trip_chains(n):
    A = lukasiewicz(n)
    assert parse_algebra(format_algebra(A)) == A


def test_comments_and_blank_lines():
    text = "# header\n\nelements: 0 1  # two\none: 1\nzero: 0\nrow 0: 1 1\n\nrow 1: 0 1\n"
    A = parse_algebra(text)
    assert A.imp == ((1, 1), (0, 1))


@pytest.mark.parametrize("text, line", [
    ("elements: 0 1\none: 1\nzero: 0\nrow 0: 1 1\nrow 1: 0\n", 5),
    ("elements: 0 1\none: 1\nzero: 0\nrow 0: 1 1\nrow 1: 0 x\n", 5),
    ("elements: 0 1\none: 1\nzero: 0\nrow 0: 1 1\n", None),
    ("elements: 0 0\none: 0\nzero: 0\n", 1),
    ("elements: 0 1\none: 2\nzero: 0\nrow 0: 1 1\nrow 1: 0 1\n", 2),
    ("bogus line\n", 1),
])
def test_malformed(text, line):
    with pytest.raises(FormatError) as exc:
        parse_algebra(text)
    if line is not None:
        assert exc.value.line == line


def test_zero_must_be_bottom():
    text = "elements: 0 a 1\none: 1\nzero: 0\nrow 0: 1 a 1\nrow a: a 1 1\nrow 1: 0 a 1\n"
    with pytest.raises(AlgebraError):
        parse_algebra(text)
    assert parse_algebra(text, check_bottom=False).size == 3


def test_constructor_validation():
    with pytest.raises(AlgebraError):
        FiniteAlgebra([[1, 1], [0]], one=1, zero=0)
    with pytest.raises(AlgebraError):
        FiniteAlgebra([[1, 2], [0, 1]], one=1, zero=0)
    with pytest.raises(AlgebraError):
        FiniteAlgebra([[1, 1], [0, 1]], one=1, zero=1)
    trivial = FiniteAlgebra([[0]], one=0, zero=0)
    assert trivial.size == 1 and trivial.tables.inf.tolist() == [[0]]


# Subsets

def test_subset_basics(ex513):
    S = Subset.of(6, [0, 5])
    assert S.elements() == [0, 5] and len(S) == 2 and 5 in S and 1 not in S
    assert S.render(ex513) == "{0,1}"
    assert Subset.full(6).is_full()
    assert not Subset.of(6, [])  # empty subsets are falsy, callers must not use `or`
    with pytest.raises(IndexError):
        Subset.of(3, [3])


def test_array_dtype(ex513):
    assert ex513.array.dtype == np.intp
