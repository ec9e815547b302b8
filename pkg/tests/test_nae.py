import random
from fractions import Fraction

import pytest

from conftest import random_matrix, SMALL_POOL
from hadamix import (
    DomainError,
    RMatrix,
    SubsetIndex,
    eps,
    eps_bar,
    exhaustive_nae_restrict,
    full_extension_rank,
    nae_restrict,
    nae_rows,
)

STAIRSTEP_3 = RMatrix.from_rows(
    [[Fraction(1, 2), 1, 1], [Fraction(1, 2), Fraction(1, 2), 1]]
)


def brute_eps_bar(m):
    """Definitional minimum of eps over nonempty column subsets."""
    best, best_mask = None, None
    for mask in range(1, 1 << m.n_cols):
        e = eps(m, SubsetIndex(m.n_cols, mask))
        if best is None or e < best:
            best, best_mask = e, mask
    return best, best_mask


# ---------------------------------------------------------------------------
# nonconstant rows and deficiency


def test_nae_rows_examples():
    m = RMatrix.from_rows([[1, 1, 2], [1, 1, 3]])
    for j in range(3):
        assert nae_rows(m, SubsetIndex.from_members(3, [j])).mask == 0
    assert nae_rows(m, SubsetIndex.from_members(3, [0, 1])).mask == 0
    assert nae_rows(STAIRSTEP_3, SubsetIndex.full(3)) == SubsetIndex.from_members(2, [0, 1])


def test_nae_rows_empty_columns_rejected():
    m = RMatrix.from_rows([[1, 2]])
    with pytest.raises(DomainError):
        nae_rows(m, SubsetIndex(2, 0))
    with pytest.raises(DomainError):
        eps(m, SubsetIndex(2, 0))


def test_eps_examples():
    m = RMatrix.from_rows([[1, 1, 2], [1, 1, 3]])
    assert eps(m, SubsetIndex.from_members(3, [0])) == -1
    assert eps(m, SubsetIndex.from_members(3, [0, 1])) == -2
    assert eps(STAIRSTEP_3, SubsetIndex.from_members(3, [0, 2])) == 0


def test_eps_bar_examples():
    report = eps_bar(STAIRSTEP_3)
    assert report.eps_bar == -1
    assert report.satisfies_nae

    report = eps_bar(RMatrix.from_rows([[1, 1, 2], [1, 1, 3]]))
    assert report.eps_bar == -2
    assert report.witness_columns == SubsetIndex.from_members(3, [0, 1])
    assert not report.satisfies_nae

    one_varying = RMatrix.from_rows([[1, 2, 3], [5, 5, 5]])
    assert eps_bar(one_varying).eps_bar <= -2


def test_eps_bar_matches_definitional_scan():
    rng = random.Random(37)
    for _ in range(120):
        n, k = rng.randint(0, 6), rng.randint(1, 5)
        m = random_matrix(rng, n, k, SMALL_POOL)
        report = eps_bar(m)
        best, best_mask = brute_eps_bar(m)
        assert report.eps_bar == best
        assert report.witness_columns.mask == best_mask
        assert report.eps_bar == eps(m, report.witness_columns)
        assert report.nae_rows_of_witness == nae_rows(m, report.witness_columns)


def test_eps_bar_guard():
    wide = RMatrix.from_rows([list(range(21))], n_cols=21)
    with pytest.raises(DomainError, match="guard"):
        eps_bar(wide)


def test_eps_bar_drops_at_most_one_per_deleted_row():
    rng = random.Random(41)
    for _ in range(80):
        n, k = rng.randint(1, 6), rng.randint(1, 4)
        m = random_matrix(rng, n, k, SMALL_POOL)
        before = eps_bar(m).eps_bar
        t = rng.randrange(n)
        after = eps_bar(m.drop_row(t)).eps_bar
        assert before - 1 <= after <= before


def test_color_invariance():
    rng = random.Random(43)
    for _ in range(60):
        n, k = rng.randint(1, 5), rng.randint(1, 5)
        m = random_matrix(rng, n, k, SMALL_POOL)
        relabeled = []
        for row in m.entries:
            distinct = sorted(set(row))
            # injective per-row relabeling: same pattern, fresh values
            table = {v: Fraction(rng.randint(100, 10**6) * 2 + i) for i, v in enumerate(distinct)}
            relabeled.append([table[v] for v in row])
        m2 = RMatrix.from_rows(relabeled, k)
        a, b = eps_bar(m), eps_bar(m2)
        assert a.eps_bar == b.eps_bar
        assert a.witness_columns == b.witness_columns
        assert a.nae_rows_of_witness == b.nae_rows_of_witness


# ---------------------------------------------------------------------------
# constructive restriction


def test_nae_restrict_examples():
    single_col = RMatrix.from_rows([[1], [5], [5]])
    assert nae_restrict(single_col) == SubsetIndex(3, 0)

    vandermonde = RMatrix.from_rows([[0, 1, 2]] * 3)
    assert nae_restrict(vandermonde) == SubsetIndex.from_members(3, [0, 1])

    stacked = RMatrix.from_rows(
        [[Fraction(1, 2), 1, 1], [Fraction(1, 2), Fraction(1, 2), 1], [Fraction(1, 2), 1, 1]]
    )
    rows = nae_restrict(stacked)
    assert len(rows) == 2
    assert eps_bar(stacked.restrict_rows(rows)).eps_bar == -1
    assert rows in exhaustive_nae_restrict(stacked)


def test_nae_restrict_preconditions():
    bad = RMatrix.from_rows([[1, 1, 2], [1, 1, 3]])
    with pytest.raises(DomainError) as err:
        nae_restrict(bad)
    assert err.value.witness is not None

    short = RMatrix.from_rows([[0, 1, 2]])  # n = 1 < k-1 = 2
    with pytest.raises(DomainError):
        nae_restrict(short)


def test_exhaustive_nae_restrict_examples():
    vandermonde = RMatrix.from_rows([[0, 1, 2]] * 3)
    assert [s.mask for s in exhaustive_nae_restrict(vandermonde)] == [0b011, 0b101, 0b110]

    violating = RMatrix.from_rows([[1, 1, 2], [1, 1, 3]])
    assert exhaustive_nae_restrict(violating) == []

    tight = STAIRSTEP_3  # n = k-1 and the NAE condition holds
    assert exhaustive_nae_restrict(tight) == [SubsetIndex.full(2)]
    assert nae_restrict(tight) == SubsetIndex.full(2)


def test_constructive_restriction_matches_oracle():
    rng = random.Random(47)
    satisfied = 0
    while satisfied < 120:
        k = rng.randint(1, 5)
        n = rng.randint(max(k - 1, 0), 7)
        rows = []
        for _ in range(n):
            if rng.random() < 0.5:
                values = rng.sample(range(-8, 9), k)
                rows.append([Fraction(v) for v in values])
            else:
                rows.append([Fraction(rng.choice(SMALL_POOL[:3])) for _ in range(k)])
        m = RMatrix.from_rows(rows, k)
        if eps_bar(m).eps_bar < -1:
            continue
        satisfied += 1
        certificates = exhaustive_nae_restrict(m)
        assert certificates, m
        found = nae_restrict(m)
        assert found in certificates
        assert len(found) == k - 1
        assert eps_bar(m.restrict_rows(found)).eps_bar == -1
        # deficiency >= -1 forces a full-rank extension
        assert full_extension_rank(m) == k


def test_nae_condition_not_necessary_for_rank():
    hamming = RMatrix.from_rows([[1, -1, 1, -1], [1, 1, -1, -1]])
    assert full_extension_rank(hamming) == 4
    assert eps_bar(hamming).eps_bar == -2
