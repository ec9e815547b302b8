"""Exact rational linear algebra substrate.

Scalars, dense matrices, subset bitmasks, and canonical (RREF) subspaces,
all over Q via fractions.Fraction. There is no floating point and no
tolerance anywhere, so rank and subspace equality are exact decisions.
Every type is an immutable value and every function is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

# Exact rational scalar; Fraction keeps lowest terms and a positive
# denominator by construction, which is exactly the invariant we need.
Rational = Fraction

RationalLike = Union[Fraction, int, str]

# Bitmask ground sets stay inside a signed 64-bit word for any consumer.
GROUND_SET_LIMIT = 62

# Exhaustive subset scans refuse to enumerate more than this many subsets.
SUBSET_SCAN_LIMIT = 10**6


class DomainError(ValueError):
    """A documented precondition or size guard was violated."""

    def __init__(self, message: str, witness: object = None):
        super().__init__(message)
        self.witness = witness


class InputFormatError(ValueError):
    """Malformed external input: JSON shape or entry encoding."""


class InternalInvariantError(RuntimeError):
    """A mathematically guaranteed invariant failed to hold; this is a bug."""


# ---------------------------------------------------------------------------
# Rational scalars and vectors


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction, or 'a/b' string to an exact rational."""
    if isinstance(value, bool):
        raise InputFormatError("booleans are not rational entries")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        num, sep, den = text.partition("/")
        try:
            if not sep:
                return Fraction(int(num))
            d = int(den)
            if d <= 0:
                raise InputFormatError(f"denominator must be positive: {value!r}")
            return Fraction(int(num), d)
        except ValueError as exc:
            raise InputFormatError(f"not a rational: {value!r}") from exc
    raise InputFormatError(f"not a rational: {value!r}")


def as_vector(values: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    return tuple(as_rational(v) for v in values)


def ones(k: int) -> tuple[Fraction, ...]:
    return (Fraction(1),) * k


def hadamard_product(
    u: Sequence[Fraction], v: Sequence[Fraction]
) -> tuple[Fraction, ...]:
    """Entrywise product of two equal-length vectors."""
    if len(u) != len(v):
        raise DomainError(f"length mismatch: {len(u)} vs {len(v)}")
    return tuple(a * b for a, b in zip(u, v))


def rational_to_json(q: Fraction) -> int | str:
    """Bare integer when the denominator is 1, else the string 'a/b'."""
    if q.denominator == 1:
        return int(q)
    return f"{q.numerator}/{q.denominator}"


def rational_from_json(value: object) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise InputFormatError(f"entry must be an integer or 'a/b' string: {value!r}")
    return as_rational(value)


# ---------------------------------------------------------------------------
# Subset bitmasks


@dataclass(frozen=True)
class SubsetIndex:
    """Subset of {0, ..., size-1} stored as a bitmask.

    Iteration yields members in increasing index order. The ground-set
    size is capped at GROUND_SET_LIMIT.
    """

    size: int
    mask: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.size <= GROUND_SET_LIMIT:
            raise DomainError(
                f"ground-set size guard: 0 <= size <= {GROUND_SET_LIMIT} (got {self.size})"
            )
        if not 0 <= self.mask < (1 << self.size):
            raise DomainError(f"mask {self.mask:#x} out of range for size {self.size}")

    @classmethod
    def from_members(cls, size: int, members: Iterable[int]) -> "SubsetIndex":
        mask = 0
        for i in members:
            if not 0 <= i < size:
                raise DomainError(f"member {i} out of range for size {size}")
            mask |= 1 << i
        return cls(size, mask)

    @classmethod
    def full(cls, size: int) -> "SubsetIndex":
        return cls(size, (1 << size) - 1)

    def __contains__(self, i: int) -> bool:
        return 0 <= i < self.size and (self.mask >> i) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        m = self.mask
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __str__(self) -> str:
        return "{" + ",".join(str(i) for i in self) + "}"

    def members(self) -> tuple[int, ...]:
        return tuple(self)

    def add(self, i: int) -> "SubsetIndex":
        if not 0 <= i < self.size:
            raise DomainError(f"member {i} out of range for size {self.size}")
        return SubsetIndex(self.size, self.mask | (1 << i))

    def remove(self, i: int) -> "SubsetIndex":
        return SubsetIndex(self.size, self.mask & ~(1 << i))

    def union(self, other: "SubsetIndex") -> "SubsetIndex":
        self._check_same_ground(other)
        return SubsetIndex(self.size, self.mask | other.mask)

    def intersection(self, other: "SubsetIndex") -> "SubsetIndex":
        self._check_same_ground(other)
        return SubsetIndex(self.size, self.mask & other.mask)

    def difference(self, other: "SubsetIndex") -> "SubsetIndex":
        self._check_same_ground(other)
        return SubsetIndex(self.size, self.mask & ~other.mask)

    def complement(self) -> "SubsetIndex":
        return SubsetIndex(self.size, self.mask ^ ((1 << self.size) - 1))

    def is_subset_of(self, other: "SubsetIndex") -> bool:
        self._check_same_ground(other)
        return self.mask & ~other.mask == 0

    __or__ = union
    __and__ = intersection
    __sub__ = difference

    def _check_same_ground(self, other: "SubsetIndex") -> None:
        if self.size != other.size:
            raise DomainError(f"ground-set mismatch: {self.size} vs {other.size}")


def masks_of_weight(n: int, weight: int) -> Iterator[int]:
    """All n-bit masks with the given popcount, in ascending numeric order.

    Uses Gosper's hack to step to the next mask of equal weight.
    """
    if weight < 0 or weight > n:
        return
    if weight == 0:
        yield 0
        return
    mask = (1 << weight) - 1
    limit = 1 << n
    while mask < limit:
        yield mask
        low = mask & -mask
        ripple = mask + low
        mask = ripple | (((mask ^ ripple) >> 2) // low)


def masks_by_cardinality(n: int) -> Iterator[int]:
    """All n-bit masks sorted by (popcount, numeric value)."""
    for weight in range(n + 1):
        yield from masks_of_weight(n, weight)


# ---------------------------------------------------------------------------
# Matrices


@dataclass(frozen=True)
class RMatrix:
    """Dense n x k matrix of rationals; immutable, row-major."""

    n_rows: int
    n_cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if self.n_rows < 0 or self.n_cols < 0:
            raise DomainError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.n_rows:
            raise DomainError(
                f"expected {self.n_rows} rows, got {len(self.entries)}"
            )
        for row in self.entries:
            if len(row) != self.n_cols:
                raise DomainError(
                    f"ragged matrix: row of length {len(row)}, expected {self.n_cols}"
                )

    @classmethod
    def from_rows(
        cls,
        rows: Iterable[Sequence[RationalLike]],
        n_cols: int | None = None,
    ) -> "RMatrix":
        data = [as_vector(r) for r in rows]
        if n_cols is None:
            if not data:
                raise DomainError("n_cols required for a matrix with no rows")
            n_cols = len(data[0])
        return cls(len(data), n_cols, tuple(data))

    @classmethod
    def identity(cls, n: int) -> "RMatrix":
        return cls.diagonal([Fraction(1)] * n)

    @classmethod
    def diagonal(cls, diag: Sequence[RationalLike]) -> "RMatrix":
        vals = as_vector(diag)
        n = len(vals)
        rows = tuple(
            tuple(vals[i] if i == j else Fraction(0) for j in range(n))
            for i in range(n)
        )
        return cls(n, n, rows)

    def row(self, i: int) -> tuple[Fraction, ...]:
        if not 0 <= i < self.n_rows:
            raise DomainError(f"row index {i} out of range for {self.n_rows} rows")
        return self.entries[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        if not 0 <= j < self.n_cols:
            raise DomainError(f"column index {j} out of range for {self.n_cols} columns")
        return tuple(row[j] for row in self.entries)

    def restrict_rows(self, rows: SubsetIndex) -> "RMatrix":
        """Copy keeping only the selected rows, in their original order."""
        if rows.size != self.n_rows:
            raise DomainError(
                f"row subset over {rows.size} elements does not match {self.n_rows} rows"
            )
        return RMatrix(len(rows), self.n_cols, tuple(self.entries[i] for i in rows))

    def restrict_cols(self, cols: SubsetIndex) -> "RMatrix":
        """Copy keeping only the selected columns, in their original order."""
        if cols.size != self.n_cols:
            raise DomainError(
                f"column subset over {cols.size} elements does not match {self.n_cols} columns"
            )
        idx = cols.members()
        return RMatrix(
            self.n_rows,
            len(idx),
            tuple(tuple(row[j] for j in idx) for row in self.entries),
        )

    def drop_row(self, i: int) -> "RMatrix":
        if not 0 <= i < self.n_rows:
            raise DomainError(f"row index {i} out of range for {self.n_rows} rows")
        return RMatrix(
            self.n_rows - 1,
            self.n_cols,
            self.entries[:i] + self.entries[i + 1 :],
        )

    def transpose(self) -> "RMatrix":
        return RMatrix(
            self.n_cols,
            self.n_rows,
            tuple(tuple(self.entries[i][j] for i in range(self.n_rows))
                  for j in range(self.n_cols)),
        )

    def matmul(self, other: "RMatrix") -> "RMatrix":
        if self.n_cols != other.n_rows:
            raise DomainError(
                f"cannot multiply {self.n_rows}x{self.n_cols} by {other.n_rows}x{other.n_cols}"
            )
        cols = other.transpose().entries
        rows = tuple(
            tuple(sum(a * b for a, b in zip(r, c)) for c in cols)
            for r in self.entries
        )
        return RMatrix(self.n_rows, other.n_cols, rows)


def matrix_to_json(m: RMatrix) -> dict:
    return {
        "rows": m.n_rows,
        "cols": m.n_cols,
        "data": [[rational_to_json(x) for x in row] for row in m.entries],
    }


def matrix_from_json(obj: object) -> RMatrix:
    if not isinstance(obj, dict):
        raise InputFormatError("matrix JSON must be an object")
    for key in ("rows", "cols", "data"):
        if key not in obj:
            raise InputFormatError(f"matrix JSON missing field {key!r}")
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    if isinstance(rows, bool) or isinstance(cols, bool) \
            or not isinstance(rows, int) or not isinstance(cols, int) \
            or rows < 0 or cols < 0:
        raise InputFormatError("'rows' and 'cols' must be nonnegative integers")
    if not isinstance(data, list) or len(data) != rows:
        raise InputFormatError(f"'data' must be a list of {rows} rows")
    entries = []
    for r in data:
        if not isinstance(r, list) or len(r) != cols:
            raise InputFormatError(f"each row must be a list of {cols} entries")
        entries.append(tuple(rational_from_json(x) for x in r))
    return RMatrix(rows, cols, tuple(entries))


# ---------------------------------------------------------------------------
# Row reduction, span, rank


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form in place; returns (rows, pivot columns).

    Pivot choice is fully deterministic: columns scanned left to right,
    rows top to bottom; the leading entry of each pivot row is scaled to 1.
    """
    if not rows:
        return rows, []
    n_rows, n_cols = len(rows), len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        pr = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        lead = rows[r][c]
        if lead != 1:
            rows[r] = [x / lead for x in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return rows, pivots


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^k held as its unique RREF basis, zero rows removed.

    Two subspaces are equal iff their bases are entrywise identical; the
    RREF form is canonical so this coincides with set equality.
    """

    ambient_dim: int
    basis: RMatrix

    def __post_init__(self) -> None:
        if self.basis.n_cols != self.ambient_dim:
            raise DomainError("basis width must equal the ambient dimension")

    @property
    def dim(self) -> int:
        return self.basis.n_rows

    def pivot_columns(self) -> tuple[int, ...]:
        out = []
        for row in self.basis.entries:
            out.append(next(j for j, x in enumerate(row) if x != 0))
        return tuple(out)

    def contains(self, vector: Sequence[RationalLike]) -> bool:
        vec = list(as_vector(vector))
        if len(vec) != self.ambient_dim:
            raise DomainError(
                f"vector length {len(vec)} does not match ambient {self.ambient_dim}"
            )
        # One elimination pass suffices: the basis is in RREF, so each
        # pivot column is zero in every other basis row.
        for row, p in zip(self.basis.entries, self.pivot_columns()):
            f = vec[p]
            if f != 0:
                vec = [a - f * b for a, b in zip(vec, row)]
        return all(x == 0 for x in vec)

    def contains_subspace(self, other: "Subspace") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise DomainError("ambient dimension mismatch")
        return all(self.contains(row) for row in other.basis.entries)


def span(vectors: Iterable[Sequence[RationalLike]], ambient_dim: int) -> Subspace:
    """Canonical subspace spanned by the given vectors of length ambient_dim."""
    rows = []
    for v in vectors:
        vec = list(as_vector(v))
        if len(vec) != ambient_dim:
            raise DomainError(
                f"vector length {len(vec)} does not match ambient {ambient_dim}"
            )
        rows.append(vec)
    reduced, pivots = _rref(rows)
    basis = tuple(tuple(reduced[i]) for i in range(len(pivots)))
    return Subspace(ambient_dim, RMatrix(len(pivots), ambient_dim, basis))


def orthogonal_complement(u: Subspace) -> Subspace:
    """Orthogonal complement w.r.t. the standard inner product."""
    piv = u.pivot_columns()
    piv_set = set(piv)
    free = [c for c in range(u.ambient_dim) if c not in piv_set]
    kernel = []
    for f in free:
        vec = [Fraction(0)] * u.ambient_dim
        vec[f] = Fraction(1)
        for r, p in enumerate(piv):
            vec[p] = -u.basis.entries[r][f]
        kernel.append(vec)
    return span(kernel, u.ambient_dim)


def matrix_rank(a: RMatrix) -> int:
    """Exact rank via fraction-free (Bareiss) elimination.

    Rows are first scaled to integers by the lcm of their denominators,
    which leaves the rank unchanged and keeps every intermediate entry an
    exact minor of the scaled matrix.
    """
    m: list[list[int]] = []
    for row in a.entries:
        scale = math.lcm(*(x.denominator for x in row)) if row else 1
        m.append([x.numerator * (scale // x.denominator) for x in row])
    rank = 0
    prev = 1
    for c in range(a.n_cols):
        pr = next((r for r in range(rank, a.n_rows) if m[r][c] != 0), None)
        if pr is None:
            continue
        m[rank], m[pr] = m[pr], m[rank]
        piv = m[rank][c]
        for r in range(rank + 1, a.n_rows):
            f = m[r][c]
            for cc in range(c + 1, a.n_cols):
                q, rem = divmod(m[r][cc] * piv - f * m[rank][cc], prev)
                if rem:
                    raise InternalInvariantError("fraction-free division not exact")
                m[r][cc] = q
            m[r][c] = 0
        prev = piv
        rank += 1
        if rank == a.n_rows:
            break
    return rank


def solve_square(a: RMatrix, b: Sequence[RationalLike]) -> tuple[Fraction, ...]:
    """Unique solution x of the square system a x = b; a must be invertible."""
    if a.n_rows != a.n_cols:
        raise DomainError(f"system matrix must be square, got {a.n_rows}x{a.n_cols}")
    rhs = as_vector(b)
    if len(rhs) != a.n_rows:
        raise DomainError("right-hand side length does not match the system")
    rows = [list(r) + [v] for r, v in zip(a.entries, rhs)]
    if not rows:
        return ()
    reduced, pivots = _rref(rows)
    if pivots != list(range(a.n_cols)):
        raise DomainError("system matrix is singular")
    return tuple(reduced[i][a.n_cols] for i in range(a.n_cols))
