"""Exact-arithmetic toolkit for Hadamard extensions of rational matrices:
rank certification, minimal certifying row subsets, NAE deficiency
combinatorics, partition projection algebras, and mixture-of-products
moment maps.
"""

from .exact_core import (
    DomainError,
    InputFormatError,
    InternalInvariantError,
    Rational,
    RMatrix,
    Subspace,
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
from .hadamard import (
    HadamardRow,
    NotFullRank,
    RowspaceState,
    exhaustive_min_rows,
    extend_rowspace,
    extension_rows,
    full_extension_rank,
    greedy_min_rows,
    hadamard_extension,
)
from .mixture import (
    GateReport,
    MixtureParams,
    MomentVector,
    identifiability_gate,
    is_separated,
    moment_map,
    recover_pi,
)
from .nae import (
    NaeReport,
    eps,
    eps_bar,
    exhaustive_nae_restrict,
    nae_restrict,
    nae_rows,
)
from .partition_algebra import (
    Partition,
    ProjectionSet,
    bar_odot,
    blocks_of,
    is_invariant,
    lagrange_projection,
    projection_set,
    respects,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "GateReport",
    "HadamardRow",
    "InputFormatError",
    "InternalInvariantError",
    "MixtureParams",
    "MomentVector",
    "NaeReport",
    "NotFullRank",
    "Partition",
    "ProjectionSet",
    "Rational",
    "RMatrix",
    "RowspaceState",
    "Subspace",
    "SubsetIndex",
    "bar_odot",
    "blocks_of",
    "eps",
    "eps_bar",
    "exhaustive_min_rows",
    "exhaustive_nae_restrict",
    "extend_rowspace",
    "extension_rows",
    "full_extension_rank",
    "greedy_min_rows",
    "hadamard_extension",
    "hadamard_product",
    "identifiability_gate",
    "is_invariant",
    "is_separated",
    "lagrange_projection",
    "masks_by_cardinality",
    "masks_of_weight",
    "matrix_from_json",
    "matrix_rank",
    "matrix_to_json",
    "moment_map",
    "nae_restrict",
    "nae_rows",
    "orthogonal_complement",
    "projection_set",
    "recover_pi",
    "respects",
    "span",
]
