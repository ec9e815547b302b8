"""Value partitions of a vector and their projection algebra.

A vector v over Q^k partitions the coordinates [k] into blocks of equal
value, ordered by strictly decreasing value. Each block carries a 0/1
diagonal projector, realizable as the Lagrange interpolation polynomial
(1 at that block's value, 0 at the others) evaluated entrywise on v. A
subspace "respects" the partition when it is the direct sum of its block
projections, which happens exactly when span(U union v*U) = U.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact_core import (
    DomainError,
    InternalInvariantError,
    RationalLike,
    RMatrix,
    Subspace,
    SubsetIndex,
    as_vector,
    hadamard_product,
    span,
)


@dataclass(frozen=True)
class Partition:
    """Blocks of equal coordinates, indexed by strictly decreasing value."""

    ambient: int
    values: tuple[Fraction, ...]
    blocks: tuple[SubsetIndex, ...]

    def __post_init__(self) -> None:
        if len(self.values) != len(self.blocks) or not self.values:
            raise DomainError("values and blocks must be nonempty and aligned")
        if any(a <= b for a, b in zip(self.values, self.values[1:])):
            raise DomainError("values must be strictly decreasing")
        union = 0
        for block in self.blocks:
            if block.size != self.ambient or len(block) == 0:
                raise DomainError("each block must be a nonempty subset of [k]")
            if union & block.mask:
                raise DomainError("blocks must be pairwise disjoint")
            union |= block.mask
        if union != (1 << self.ambient) - 1:
            raise DomainError("blocks must cover all coordinates")

    def __len__(self) -> int:
        return len(self.blocks)


def blocks_of(v: Sequence[RationalLike]) -> Partition:
    """Partition of the coordinates of v by equal value."""
    vec = as_vector(v)
    if not vec:
        raise DomainError("vector must be nonempty")
    masks: dict[Fraction, int] = {}
    for j, value in enumerate(vec):
        masks[value] = masks.get(value, 0) | (1 << j)
    values = tuple(sorted(masks, reverse=True))
    blocks = tuple(SubsetIndex(len(vec), masks[value]) for value in values)
    return Partition(len(vec), values, blocks)


def _block_projector(ambient: int, block: SubsetIndex) -> RMatrix:
    return RMatrix.diagonal(
        [Fraction(1) if j in block else Fraction(0) for j in range(ambient)]
    )


@dataclass(frozen=True)
class ProjectionSet:
    """The 0/1 diagonal projectors of a partition; they sum to the identity
    and are mutually annihilating."""

    partition: Partition
    projections: tuple[RMatrix, ...]


def projection_set(partition: Partition) -> ProjectionSet:
    projectors = tuple(
        _block_projector(partition.ambient, block) for block in partition.blocks
    )
    return ProjectionSet(partition, projectors)


def lagrange_projection(v: Sequence[RationalLike], i: int) -> RMatrix:
    """Block-i projector obtained by polynomial evaluation on diag(v).

    Evaluates the Lagrange basis polynomial for the i-th distinct value at
    every entry of v, then cross-checks the result against the directly
    built 0/1 diagonal and fails loudly on mismatch.
    """
    part = blocks_of(v)
    if not 0 <= i < len(part):
        raise DomainError(f"block index {i} out of range for {len(part)} blocks")
    vec = as_vector(v)
    lam = part.values
    diag = []
    for x in vec:
        value = Fraction(1)
        for j, other in enumerate(lam):
            if j != i:
                value *= (x - other) / (lam[i] - other)
        diag.append(value)
    evaluated = RMatrix.diagonal(diag)
    direct = _block_projector(part.ambient, part.blocks[i])
    if evaluated != direct:
        raise InternalInvariantError(
            "polynomial projector disagrees with the block diagonal"
        )
    return evaluated


def _project_vector(
    vec: Sequence[Fraction], block: SubsetIndex
) -> tuple[Fraction, ...]:
    return tuple(x if j in block else Fraction(0) for j, x in enumerate(vec))


def respects(u: Subspace, part: Partition) -> bool:
    """Whether u is the direct sum of its block projections.

    Equivalent to u having a basis of vectors each supported inside a
    single block; the dimension count is the computable criterion.
    """
    if u.ambient_dim != part.ambient:
        raise DomainError(
            f"ambient mismatch: subspace {u.ambient_dim}, partition {part.ambient}"
        )
    total = 0
    for block in part.blocks:
        projected = [_project_vector(row, block) for row in u.basis.entries]
        total += span(projected, part.ambient).dim
    return total == u.dim


def bar_odot(v: Sequence[RationalLike], u: Subspace) -> Subspace:
    """span(U union v*U): the smallest space containing u and its image
    under entrywise multiplication by v."""
    vec = as_vector(v)
    if len(vec) != u.ambient_dim:
        raise DomainError(
            f"vector length {len(vec)} does not match ambient {u.ambient_dim}"
        )
    basis = u.basis.entries
    vectors = list(basis) + [hadamard_product(row, vec) for row in basis]
    return span(vectors, u.ambient_dim)


def is_invariant(v: Sequence[RationalLike], u: Subspace) -> bool:
    """Whether span(U union v*U) = U; agrees with respects(u, blocks_of(v))."""
    return bar_odot(v, u) == u
