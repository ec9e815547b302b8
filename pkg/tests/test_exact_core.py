import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import det_cofactor, minor_rank, random_matrix, SMALL_POOL
from hadamix import (
    DomainError,
    InputFormatError,
    RMatrix,
    SubsetIndex,
    hadamard_product,
    masks_by_cardinality,
    masks_of_weight,
    matrix_from_json,
    matrix_rank,
    matrix_to_json,
    orthogonal_complement,
    span,
)
from hadamix.exact_core import as_rational, rational_from_json, rational_to_json, solve_square

rationals = st.fractions(
    min_value=-100, max_value=100, max_denominator=50
)


# ---------------------------------------------------------------------------
# rational scalars


@given(st.integers(-10**12, 10**12), st.integers(1, 10**9),
       st.integers(-10**12, 10**12), st.integers(1, 10**9))
def test_arithmetic_matches_cross_multiplication(p1, q1, p2, q2):
    a, b = Fraction(p1, q1), Fraction(p2, q2)
    # oracle: arithmetic on raw integer pairs, compared by cross-multiplication
    assert a + b == Fraction(p1 * q2 + p2 * q1, q1 * q2)
    assert a - b == Fraction(p1 * q2 - p2 * q1, q1 * q2)
    assert a * b == Fraction(p1 * p2, q1 * q2)
    if p2 != 0:
        assert a / b == Fraction(p1 * q2, q1 * p2)
    assert (a == b) == (p1 * q2 == p2 * q1)
    assert (a < b) == (p1 * q2 < p2 * q1)


@given(st.integers(-10**9, 10**9), st.integers(1, 10**6))
def test_lowest_terms_positive_denominator(p, q):
    x = Fraction(p, q)
    assert x.denominator > 0
    assert math.gcd(x.numerator, x.denominator) == 1


def test_as_rational_parsing():
    assert as_rational("3/6") == Fraction(1, 2)
    assert as_rational("-5/2") == Fraction(-5, 2)
    assert as_rational("7") == 7
    assert as_rational(Fraction(2, 3)) == Fraction(2, 3)
    with pytest.raises(InputFormatError):
        as_rational("1/0")
    with pytest.raises(InputFormatError):
        as_rational("x")
    with pytest.raises(InputFormatError):
        as_rational(True)
    with pytest.raises(ZeroDivisionError):
        Fraction(1, 1) / Fraction(0)


def test_rational_json_encoding():
    assert rational_to_json(Fraction(3)) == 3
    assert rational_to_json(Fraction(-1, 2)) == "-1/2"
    assert rational_from_json("-1/2") == Fraction(-1, 2)
    assert rational_from_json(4) == 4
    with pytest.raises(InputFormatError):
        rational_from_json(0.5)
    with pytest.raises(InputFormatError):
        rational_from_json(True)


# ---------------------------------------------------------------------------
# hadamard product


def test_hadamard_product_examples():
    one = (Fraction(1), Fraction(1), Fraction(1))
    v = (Fraction(5), Fraction(-2), Fraction(1, 3))
    assert hadamard_product(one, v) == v
    w = (Fraction(0), Fraction(1), Fraction(2))
    assert hadamard_product(w, w) == (Fraction(0), Fraction(1), Fraction(4))
    # fourth character row of the 4x4 sign table
    a = (Fraction(1), Fraction(-1), Fraction(1), Fraction(-1))
    b = (Fraction(1), Fraction(1), Fraction(-1), Fraction(-1))
    assert hadamard_product(a, b) == (Fraction(1), Fraction(-1), Fraction(-1), Fraction(1))


def test_hadamard_product_length_mismatch():
    with pytest.raises(DomainError):
        hadamard_product((Fraction(1),), (Fraction(1), Fraction(2)))


@given(st.lists(rationals, min_size=1, max_size=6), st.data())
def test_hadamard_product_laws(u, data):
    k = len(u)
    v = data.draw(st.lists(rationals, min_size=k, max_size=k))
    w = data.draw(st.lists(rationals, min_size=k, max_size=k))
    u, v, w = tuple(u), tuple(v), tuple(w)
    assert hadamard_product(u, v) == hadamard_product(v, u)
    assert hadamard_product(hadamard_product(u, v), w) == hadamard_product(
        u, hadamard_product(v, w)
    )
    assert hadamard_product((Fraction(1),) * k, v) == v


# ---------------------------------------------------------------------------
# span / subspaces


def test_span_examples():
    dependent = span([(1, 1), (2, 2)], 2)
    assert dependent.dim == 1
    assert dependent.basis.entries == ((Fraction(1), Fraction(1)),)
    assert span([], 3).dim == 0
    vectors = [(1, 1, 1), (0, 1, 2), (0, 1, 4)]
    assert det_cofactor([[Fraction(x) for x in v] for v in vectors]) == 2
    assert span(vectors, 3).dim == 3


def test_span_length_mismatch():
    with pytest.raises(DomainError):
        span([(1, 2, 3)], 2)


def test_span_idempotent_and_canonical():
    rng = random.Random(7)
    for _ in range(50):
        k = rng.randint(1, 5)
        vecs = [
            [Fraction(rng.choice(SMALL_POOL)) for _ in range(k)]
            for _ in range(rng.randint(0, 4))
        ]
        u = span(vecs, k)
        assert span(u.basis.entries, k) == u
        # representation equality coincides with set equality
        shuffled = list(vecs)
        rng.shuffle(shuffled)
        if vecs:
            a, b = rng.randrange(len(vecs)), rng.randrange(len(vecs))
            combo = [x + 2 * y for x, y in zip(vecs[a], vecs[b])]
            shuffled.append(combo)
        w = span(shuffled, k)
        assert w == u
        assert u.contains_subspace(w) and w.contains_subspace(u)


def test_subspace_membership_reduction():
    u = span([(1, 0, 1), (0, 1, 1)], 3)
    assert u.contains((1, 1, 2))
    assert not u.contains((0, 0, 1))
    assert u.contains((0, 0, 0))
    with pytest.raises(DomainError):
        u.contains((1, 0))


# ---------------------------------------------------------------------------
# orthogonal complement


def test_orthogonal_complement_examples():
    full = span([(1, 0), (0, 1)], 2)
    assert orthogonal_complement(full).dim == 0
    axis = span([(1, 0, 0)], 3)
    comp = orthogonal_complement(axis)
    assert comp == span([(0, 1, 0), (0, 0, 1)], 3)
    diag = span([(1, 1)], 2)
    assert orthogonal_complement(diag) == span([(1, -1)], 2)


def test_orthogonal_complement_involution_and_dims():
    rng = random.Random(11)
    for _ in range(60):
        k = rng.randint(1, 5)
        vecs = [
            [Fraction(rng.choice(SMALL_POOL)) for _ in range(k)]
            for _ in range(rng.randint(0, k))
        ]
        u = span(vecs, k)
        c = orthogonal_complement(u)
        assert u.dim + c.dim == k
        assert orthogonal_complement(c) == u
        # trivial intersection: stacked bases stay independent
        stacked = list(u.basis.entries) + list(c.basis.entries)
        assert span(stacked, k).dim == u.dim + c.dim


# ---------------------------------------------------------------------------
# rank


def test_matrix_rank_examples():
    assert matrix_rank(RMatrix.identity(3)) == 3
    two_identical_cols = RMatrix.from_rows([[1, 1], [2, 2], [5, 5]])
    assert matrix_rank(two_identical_cols) == 1
    m = [[1, 1, 1], [Fraction(1, 2), 1, 1], [Fraction(1, 2), Fraction(1, 2), 1]]
    assert det_cofactor([[Fraction(x) for x in r] for r in m]) == Fraction(1, 4)
    assert matrix_rank(RMatrix.from_rows(m)) == 3


def test_matrix_rank_against_minor_oracle_and_transpose():
    rng = random.Random(13)
    for _ in range(80):
        n, k = rng.randint(0, 4), rng.randint(1, 4)
        m = random_matrix(rng, n, k, SMALL_POOL)
        r = matrix_rank(m)
        assert r == minor_rank([list(row) for row in m.entries], k)
        assert r == matrix_rank(m.transpose())
        assert r == span(m.entries, k).dim


# ---------------------------------------------------------------------------
# solve


def test_solve_square_roundtrip():
    rng = random.Random(17)
    solved = 0
    while solved < 30:
        k = rng.randint(1, 4)
        m = random_matrix(rng, k, k, SMALL_POOL)
        if det_cofactor([list(r) for r in m.entries]) == 0:
            continue
        x = [Fraction(rng.choice(SMALL_POOL)) for _ in range(k)]
        b = [sum(a * xx for a, xx in zip(row, x)) for row in m.entries]
        assert solve_square(m, b) == tuple(x)
        solved += 1
    with pytest.raises(DomainError):
        solve_square(RMatrix.from_rows([[1, 1], [2, 2]]), [1, 1])


# ---------------------------------------------------------------------------
# subset bitmasks


def test_subset_index_basics():
    s = SubsetIndex.from_members(6, [4, 0, 2])
    assert list(s) == [0, 2, 4]
    assert len(s) == 3
    assert 2 in s and 3 not in s
    assert s.add(3).members() == (0, 2, 3, 4)
    assert s.complement().members() == (1, 3, 5)
    assert str(s) == "{0,2,4}"
    assert s.union(SubsetIndex.from_members(6, [1])).mask == 0b010111
    assert SubsetIndex.from_members(6, [0]).is_subset_of(s)
    with pytest.raises(DomainError):
        SubsetIndex(63, 0)
    with pytest.raises(DomainError):
        SubsetIndex(3, 0b1000)
    with pytest.raises(DomainError):
        s.union(SubsetIndex(5, 0))


def test_mask_enumeration_order():
    for n in range(7):
        seen = list(masks_by_cardinality(n))
        assert seen == sorted(range(1 << n), key=lambda m: (m.bit_count(), m))
        for w in range(n + 1):
            weights = list(masks_of_weight(n, w))
            assert weights == sorted(m for m in range(1 << n) if m.bit_count() == w)


# ---------------------------------------------------------------------------
# matrices and their JSON form


def test_restriction_preserves_order():
    m = RMatrix.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    rows = m.restrict_rows(SubsetIndex.from_members(3, [2, 0]))
    assert rows.entries == ((Fraction(1), Fraction(2), Fraction(3)),
                            (Fraction(7), Fraction(8), Fraction(9)))
    cols = m.restrict_cols(SubsetIndex.from_members(3, [0, 2]))
    assert cols.entries == ((Fraction(1), Fraction(3)),
                            (Fraction(4), Fraction(6)),
                            (Fraction(7), Fraction(9)))
    assert m.drop_row(1).entries == (m.entries[0], m.entries[2])
    with pytest.raises(DomainError):
        m.restrict_rows(SubsetIndex(2, 0))


def test_rmatrix_validation():
    with pytest.raises(DomainError):
        RMatrix(2, 2, ((Fraction(1), Fraction(2)),))
    with pytest.raises(DomainError):
        RMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(DomainError):
        RMatrix.from_rows([])
    empty = RMatrix.from_rows([], n_cols=3)
    assert empty.n_rows == 0 and empty.n_cols == 3


def test_matrix_json_roundtrip():
    m = RMatrix.from_rows([[Fraction(1, 2), -3], [0, Fraction(7, 5)]])
    obj = matrix_to_json(m)
    assert obj == {"rows": 2, "cols": 2, "data": [["1/2", -3], [0, "7/5"]]}
    assert matrix_from_json(obj) == m
    empty = RMatrix.from_rows([], n_cols=2)
    assert matrix_from_json(matrix_to_json(empty)) == empty


@pytest.mark.parametrize(
    "bad",
    [
        42,
        {"rows": 1, "cols": 1},
        {"rows": 1, "cols": 1, "data": [[0.5]]},
        {"rows": 1, "cols": 2, "data": [[1]]},
        {"rows": 2, "cols": 1, "data": [[1]]},
        {"rows": 1, "cols": 1, "data": [["1/0"]]},
        {"rows": True, "cols": 1, "data": [[1]]},
    ],
)
def test_matrix_json_rejects_malformed(bad):
    with pytest.raises(InputFormatError):
        matrix_from_json(bad)
