"""Shared test helpers: independent brute-force oracles and generators.

The oracles here deliberately avoid the library's elimination code paths:
determinants are computed by cofactor expansion and rank by scanning all
square minors, so they can certify the fast implementations.
"""

from fractions import Fraction
from itertools import combinations

from hadamix import RMatrix


def det_cofactor(rows):
    """Determinant by Laplace expansion along the first row."""
    n = len(rows)
    assert all(len(r) == n for r in rows)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(rows[0][0])
    total = Fraction(0)
    for j, x in enumerate(rows[0]):
        if x == 0:
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        sign = -1 if j % 2 else 1
        total += sign * x * det_cofactor(minor)
    return total


def minor_rank(rows, n_cols):
    """Largest r such that some r x r minor is nonzero."""
    n_rows = len(rows)
    for r in range(min(n_rows, n_cols), 0, -1):
        for ri in combinations(range(n_rows), r):
            for ci in combinations(range(n_cols), r):
                sub = [[rows[i][j] for j in ci] for i in ri]
                if det_cofactor(sub) != 0:
                    return r
    return 0


def random_matrix(rng, n, k, pool):
    rows = [[Fraction(rng.choice(pool)) for _ in range(k)] for _ in range(n)]
    return RMatrix.from_rows(rows, k)


# Small value pools; repeats are likely, which exercises the color logic.
SMALL_POOL = [0, 1, Fraction(1, 2), 2, -1]
PROB_POOL = [Fraction(num, 8) for num in range(9)]
