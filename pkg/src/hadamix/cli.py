"""Batch command-line front end with deterministic JSON input and output.

Every command reads JSON from --input (default stdin) and writes one JSON
document to stdout with lexicographically sorted keys, so identical
invocations are byte-identical. Exit codes: 0 success, 1 domain error
(JSON error object on stdout), 2 usage or input-format error.

Row, column, and block indices in CLI JSON are 1-based; the Python API
underneath is 0-based throughout.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import IO, Sequence

from .exact_core import (
    DomainError,
    InputFormatError,
    InternalInvariantError,
    RMatrix,
    SubsetIndex,
    as_rational,
    matrix_from_json,
    matrix_to_json,
    rational_from_json,
    rational_to_json,
)
from .hadamard import (
    NotFullRank,
    exhaustive_min_rows,
    full_extension_rank,
    greedy_min_rows,
    hadamard_extension,
)
from .mixture import (
    MixtureParams,
    MomentVector,
    moment_map,
    recover_pi,
)
from .nae import eps as nae_eps
from .nae import eps_bar, exhaustive_nae_restrict, nae_restrict, nae_rows
from .partition_algebra import (
    blocks_of,
    bar_odot,
    is_invariant,
    lagrange_projection,
    respects,
)
from .exact_core import span


class UsageError(Exception):
    """Bad flags or parameters; maps to exit code 2."""


# ---------------------------------------------------------------------------
# encoding helpers (CLI JSON is 1-based)


def _subset_to_list(subset: SubsetIndex) -> list[int]:
    return [i + 1 for i in subset]


def _vector_to_json(vec: Sequence[Fraction]) -> list:
    return [rational_to_json(x) for x in vec]


def _vector_from_json(obj: object, what: str) -> tuple[Fraction, ...]:
    if not isinstance(obj, list):
        raise InputFormatError(f"{what} must be a JSON array")
    return tuple(rational_from_json(x) for x in obj)


def _witness_to_json(witness: object) -> object:
    if witness is None or isinstance(witness, (bool, int, str)):
        return witness
    if isinstance(witness, Fraction):
        return rational_to_json(witness)
    if isinstance(witness, SubsetIndex):
        return _subset_to_list(witness)
    if isinstance(witness, dict):
        return {str(k): _witness_to_json(v) for k, v in witness.items()}
    if isinstance(witness, (list, tuple)):
        return [_witness_to_json(v) for v in witness]
    if hasattr(witness, "__dataclass_fields__"):
        return {
            name: _witness_to_json(getattr(witness, name))
            for name in witness.__dataclass_fields__
        }
    return str(witness)


def _parse_indices(text: str, size: int, what: str) -> SubsetIndex:
    """Comma-separated 1-based indices -> 0-based subset."""
    try:
        members = [int(part) - 1 for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"{what} must be comma-separated integers: {text!r}") from exc
    if any(i < 0 or i >= size for i in members):
        raise UsageError(f"{what} indices must be in 1..{size}: {text!r}")
    return SubsetIndex.from_members(size, members)


def _load_json(args: argparse.Namespace, stdin: IO[str]) -> object:
    if args.input is not None:
        try:
            with open(args.input, "r", encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise InputFormatError(f"cannot read {args.input}: {exc}") from exc
    else:
        text = stdin.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"malformed JSON input: {exc}") from exc


def _load_matrix(args: argparse.Namespace, stdin: IO[str]) -> RMatrix:
    return matrix_from_json(_load_json(args, stdin))


def _require_object(obj: object, keys: Sequence[str], what: str) -> dict:
    if not isinstance(obj, dict):
        raise InputFormatError(f"{what} input must be a JSON object")
    for key in keys:
        if key not in obj:
            raise InputFormatError(f"{what} input missing field {key!r}")
    return obj


# ---------------------------------------------------------------------------
# example-family generators


def gen_vandermonde(k: int, copies: int, row: Sequence[Fraction] | None) -> RMatrix:
    """`copies` identical rows with k pairwise distinct entries."""
    if k < 1:
        raise UsageError("--k must be at least 1")
    if copies < 0:
        raise UsageError("--copies must be nonnegative")
    values = tuple(row) if row is not None else tuple(Fraction(j) for j in range(k))
    if len(values) != k:
        raise UsageError(f"--row must have {k} entries")
    if len(set(values)) != k:
        raise UsageError("--row entries must be pairwise distinct")
    return RMatrix(copies, k, (values,) * copies)


def gen_hamming(l: int) -> RMatrix:
    """l x 2^l sign matrix: entry (i, j) is -1 to the i-th bit of j."""
    if not 1 <= l <= 20:
        raise UsageError("--l must be in 1..20")
    k = 1 << l
    rows = tuple(
        tuple(Fraction(-1 if (j >> i) & 1 else 1) for j in range(k))
        for i in range(l)
    )
    return RMatrix(l, k, rows)


def gen_stairstep(k: int) -> RMatrix:
    """(k-1) x k staircase: 1 strictly above the diagonal, 1/2 elsewhere.

    Uses the strict-inequality form: entry (i, j) is 1 when i < j and 1/2
    when i >= j (0-based). The non-strict variant would make the first row
    constant, destroying the minimal-deficiency property this family is
    meant to exhibit; see the README note.
    """
    if k < 1:
        raise UsageError("--k must be at least 1")
    rows = tuple(
        tuple(Fraction(1) if i < j else Fraction(1, 2) for j in range(k))
        for i in range(k - 1)
    )
    return RMatrix(k - 1, k, rows)


# ---------------------------------------------------------------------------
# command handlers: each returns a JSON-serializable payload


def _cmd_gen(args, stdin):
    if args.family == "vandermonde":
        row = None
        if args.row is not None:
            try:
                row = tuple(as_rational(part) for part in args.row.split(","))
            except (InputFormatError, ValueError) as exc:
                raise UsageError(f"--row is not a rational list: {args.row!r}") from exc
        if args.k is None:
            raise UsageError("vandermonde requires --k")
        matrix = gen_vandermonde(args.k, args.copies, row)
    elif args.family == "hamming":
        if args.l is None:
            raise UsageError("hamming requires --l")
        matrix = gen_hamming(args.l)
    elif args.family == "stairstep":
        if args.k is None:
            raise UsageError("stairstep requires --k")
        matrix = gen_stairstep(args.k)
    else:  # argparse choices make this unreachable
        raise UsageError(f"unknown family {args.family!r}")
    return matrix_to_json(matrix)


def _cmd_hadext(args, stdin):
    return matrix_to_json(hadamard_extension(_load_matrix(args, stdin)))


def _cmd_rank(args, stdin):
    matrix = _load_matrix(args, stdin)
    rank = full_extension_rank(matrix)
    return {"rank": rank, "full": rank == matrix.n_cols}


def _cmd_minrows(args, stdin):
    matrix = _load_matrix(args, stdin)
    found = greedy_min_rows(matrix)
    if isinstance(found, NotFullRank):
        payload = {"greedy": None, "rank": found.rank}
    else:
        payload = {"greedy": _subset_to_list(found), "rank": matrix.n_cols}
    if args.exhaustive:
        size = args.size if args.size is not None else max(matrix.n_cols - 1, 0)
        payload["exhaustive"] = [
            _subset_to_list(s) for s in exhaustive_min_rows(matrix, size)
        ]
    return payload


def _cmd_eps(args, stdin):
    matrix = _load_matrix(args, stdin)
    cols = _parse_indices(args.cols, matrix.n_cols, "--cols")
    return {
        "cols": _subset_to_list(cols),
        "eps": nae_eps(matrix, cols),
        "nae_rows": _subset_to_list(nae_rows(matrix, cols)),
    }


def _cmd_nae_check(args, stdin):
    report = eps_bar(_load_matrix(args, stdin))
    return {
        "eps_bar": report.eps_bar,
        "nae_condition": report.satisfies_nae,
        "witness": _subset_to_list(report.witness_columns),
        "nae_rows": _subset_to_list(report.nae_rows_of_witness),
    }


def _cmd_nae_restrict(args, stdin):
    matrix = _load_matrix(args, stdin)
    payload = {"rows": _subset_to_list(nae_restrict(matrix))}
    if args.exhaustive:
        payload["exhaustive"] = [
            _subset_to_list(s) for s in exhaustive_nae_restrict(matrix)
        ]
    return payload


def _cmd_blocks(args, stdin):
    obj = _require_object(_load_json(args, stdin), ["v"], "blocks")
    part = blocks_of(_vector_from_json(obj["v"], "'v'"))
    return {
        "values": _vector_to_json(part.values),
        "blocks": [_subset_to_list(block) for block in part.blocks],
    }


def _cmd_project(args, stdin):
    obj = _require_object(_load_json(args, stdin), ["v"], "project")
    v = _vector_from_json(obj["v"], "'v'")
    if args.block < 1:
        raise UsageError("--block is 1-based")
    return matrix_to_json(lagrange_projection(v, args.block - 1))


def _cmd_invariant(args, stdin):
    obj = _require_object(_load_json(args, stdin), ["basis", "v"], "invariant")
    v = _vector_from_json(obj["v"], "'v'")
    basis = matrix_from_json(obj["basis"])
    u = span(basis.entries, basis.n_cols)
    invariant = is_invariant(v, u)
    respected = respects(u, blocks_of(v))
    if invariant != respected:
        raise InternalInvariantError(
            "invariance and block-respect disagree; they are provably equivalent"
        )
    return {"invariant": invariant, "respects": respected}


def _cmd_moments(args, stdin):
    obj = _require_object(_load_json(args, stdin), ["m", "pi"], "moments")
    params = MixtureParams(
        matrix_from_json(obj["m"]), _vector_from_json(obj["pi"], "'pi'")
    )
    return moment_map(params).to_json_obj()


def _cmd_recover_pi(args, stdin):
    obj = _require_object(_load_json(args, stdin), ["m", "moments"], "recover-pi")
    matrix = matrix_from_json(obj["m"])
    moments = MomentVector.from_json_obj(obj["moments"])
    return {"pi": _vector_to_json(recover_pi(matrix, moments))}


def _cmd_selftest(args, stdin):
    checks = []
    failed = 0
    for name, fn in _selftest_checks():
        try:
            detail = fn()
            ok = True
        except AssertionError as exc:
            detail = str(exc) or "assertion failed"
            ok = False
        if not ok:
            failed += 1
        checks.append({"name": name, "ok": ok, "detail": detail})
    return {"checks": checks, "failed": failed, "ok": failed == 0}


# ---------------------------------------------------------------------------
# selftest corpus: the worked example families and their expected behavior


def _selftest_checks():
    from .exact_core import hadamard_product, matrix_rank
    from .mixture import identifiability_gate, is_separated

    def check_fourier_character_product():
        got = hadamard_product(
            (Fraction(1), Fraction(-1), Fraction(1), Fraction(-1)),
            (Fraction(1), Fraction(1), Fraction(-1), Fraction(-1)),
        )
        assert got == (Fraction(1), Fraction(-1), Fraction(-1), Fraction(1)), got
        return "sign-vector product gives the fourth character row"

    def check_fourier_extension():
        matrix = gen_hamming(2)
        extension = hadamard_extension(matrix)
        expected = RMatrix.from_rows(
            [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]]
        )
        assert extension == expected, "extension is not the 4x4 sign character table"
        assert matrix_rank(extension) == 4, "character table must be invertible"
        assert full_extension_rank(matrix) == 4
        return "2-row sign matrix extends to the invertible 4x4 character table"

    def check_hamming_small_certificate():
        matrix = gen_hamming(2)
        found = greedy_min_rows(matrix)
        assert isinstance(found, SubsetIndex), found
        assert len(found) == 2 < matrix.n_cols - 1, found
        assert full_extension_rank(matrix.restrict_rows(found)) == 4
        return "certificate of 2 rows < k-1 = 3"

    def check_identical_columns_never_full():
        fixtures = [
            RMatrix.from_rows([[1, 1, 2], [1, 1, 3]]),
            RMatrix.from_rows([[0, 0], [1, 1]]),
            RMatrix.from_rows([[1, 1, 2, 3], [4, 4, 1, 2], [5, 5, 5, 5]]),
        ]
        for matrix in fixtures:
            rank = full_extension_rank(matrix)
            assert rank < matrix.n_cols, (matrix, rank)
            gate = identifiability_gate(matrix)
            assert not gate.full_rank and gate.certificate is None
        report = eps_bar(fixtures[0])
        assert report.eps_bar == -2, report
        assert report.witness_columns == SubsetIndex.from_members(3, [0, 1]), report
        return "duplicated columns cap the extension rank below k"

    def check_duplicate_column_weight_swap():
        matrix = RMatrix.from_rows(
            [[Fraction(1, 4), Fraction(1, 4), Fraction(3, 4)],
             [Fraction(1, 2), Fraction(1, 2), Fraction(1, 8)]]
        )
        pi = (Fraction(1, 6), Fraction(1, 3), Fraction(1, 2))
        swapped = (pi[1], pi[0], pi[2])
        first = moment_map(MixtureParams(matrix, pi))
        second = moment_map(MixtureParams(matrix, swapped))
        assert first == second, "swapping weights of equal columns must not change moments"
        return "weight swap across duplicated columns is invisible in the moments"

    def check_vandermonde_family():
        for k in range(2, 7):
            matrix = gen_vandermonde(k, k - 1, None)
            assert full_extension_rank(matrix) == k, k
            found = greedy_min_rows(matrix)
            assert isinstance(found, SubsetIndex) and len(found) == k - 1, (k, found)
            assert all(is_separated(matrix, i) for i in range(k - 1))
        return "k-1 identical distinct-entry rows reach full rank, never fewer"

    def check_stairstep_family():
        for k in range(2, 7):
            matrix = gen_stairstep(k)
            report = eps_bar(matrix)
            assert report.eps_bar == -1, (k, report)
            assert full_extension_rank(matrix) == k, k
            for width in range(1, k + 1):
                hits = [
                    cols
                    for cols in _column_sets(k, width)
                    if nae_eps(matrix, cols) == -1
                ]
                assert hits, (k, width)
        return "staircase meets the deficiency bound tightly at every width"

    def check_three_columns_one_varying_row():
        matrix = RMatrix.from_rows([[1, 2, 3], [5, 5, 5]])
        report = eps_bar(matrix)
        assert report.eps_bar <= -2, report
        assert full_extension_rank(matrix) < 3
        return "a single varying row on 3 columns forces deficiency <= -2"

    def check_identical_rows_restriction():
        matrix = gen_vandermonde(3, 3, None)
        rows = nae_restrict(matrix)
        assert rows == SubsetIndex.from_members(3, [0, 1]), rows
        assert eps_bar(matrix.restrict_rows(rows)).eps_bar == -1
        every = exhaustive_nae_restrict(matrix)
        assert [s.mask for s in every] == [0b011, 0b101, 0b110], every
        return "deterministic pick of the first two rows; all three pairs certify"

    def check_nae_not_necessary_beyond_three():
        matrix = gen_hamming(2)
        assert eps_bar(matrix).eps_bar == -2
        assert full_extension_rank(matrix) == 4
        gate = identifiability_gate(matrix)
        assert gate.separated_count == 0, gate
        return "full rank with eps_bar = -2 on 4 columns"

    def check_recover_weights_roundtrip():
        matrix = RMatrix.from_rows([[Fraction(1, 4), Fraction(3, 4)]])
        for pi in [(Fraction(1, 2), Fraction(1, 2)), (Fraction(1, 3), Fraction(2, 3))]:
            moments = moment_map(MixtureParams(matrix, pi))
            assert recover_pi(matrix, moments) == pi, pi
        return "moments of a 1-observable mixture invert exactly"

    return [
        ("fourier-character-product", check_fourier_character_product),
        ("fourier-extension", check_fourier_extension),
        ("hamming-small-certificate", check_hamming_small_certificate),
        ("identical-columns-rank", check_identical_columns_never_full),
        ("duplicate-column-weight-swap", check_duplicate_column_weight_swap),
        ("vandermonde-family", check_vandermonde_family),
        ("stairstep-family", check_stairstep_family),
        ("three-columns-one-varying-row", check_three_columns_one_varying_row),
        ("identical-rows-restriction", check_identical_rows_restriction),
        ("nae-not-necessary-beyond-three", check_nae_not_necessary_beyond_three),
        ("recover-weights-roundtrip", check_recover_weights_roundtrip),
    ]


def _column_sets(k: int, width: int):
    from .exact_core import masks_of_weight

    return (SubsetIndex(k, mask) for mask in masks_of_weight(k, width))


# ---------------------------------------------------------------------------
# parser and entry point

_HANDLERS = {
    "gen": _cmd_gen,
    "hadext": _cmd_hadext,
    "rank": _cmd_rank,
    "minrows": _cmd_minrows,
    "eps": _cmd_eps,
    "nae-check": _cmd_nae_check,
    "nae-restrict": _cmd_nae_restrict,
    "blocks": _cmd_blocks,
    "project": _cmd_project,
    "invariant": _cmd_invariant,
    "moments": _cmd_moments,
    "recover-pi": _cmd_recover_pi,
    "selftest": _cmd_selftest,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hadamix",
        description="Exact Hadamard-extension rank certificates, NAE deficiency, "
        "partition projectors, and mixture moment maps over JSON.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, with_input: bool = True):
        p = sub.add_parser(name, help=help_text)
        if with_input:
            p.add_argument("--input", "-i", default=None, metavar="FILE",
                           help="JSON input file (default: stdin)")
        p.add_argument("--format", choices=["json"], default="json",
                       help="output format (reserved; json only)")
        return p

    p = add("gen", "generate an example-family matrix", with_input=False)
    p.add_argument("family", choices=["vandermonde", "hamming", "stairstep"])
    p.add_argument("--k", type=int, default=None, help="number of columns")
    p.add_argument("--copies", type=int, default=None,
                   help="vandermonde: number of identical rows (default k-1)")
    p.add_argument("--row", default=None,
                   help="vandermonde: comma-separated distinct entries (default 0..k-1)")
    p.add_argument("--l", type=int, default=None, help="hamming: rows (k = 2^l)")

    add("hadext", "matrix -> its 2^n x k extension")
    add("rank", "matrix -> extension column rank")
    p = add("minrows", "matrix -> greedy rank-certifying row subset")
    p.add_argument("--exhaustive", action="store_true",
                   help="also list every certifying subset of --size rows")
    p.add_argument("--size", type=int, default=None,
                   help="subset size for --exhaustive (default k-1)")
    p = add("eps", "matrix -> deficiency of a fixed column set")
    p.add_argument("--cols", required=True,
                   help="comma-separated 1-based column indices")
    add("nae-check", "matrix -> minimum deficiency report")
    p = add("nae-restrict", "matrix -> k-1 rows with deficiency exactly -1")
    p.add_argument("--exhaustive", action="store_true",
                   help="also list every certifying (k-1)-row subset")
    add("blocks", "{v} -> equal-value partition of the coordinates")
    p = add("project", "{v} -> block projector via polynomial evaluation")
    p.add_argument("--block", type=int, required=True,
                   help="1-based block index (blocks ordered by decreasing value)")
    add("invariant", "{basis, v} -> invariance and block-respect of span(basis)")
    add("moments", "{m, pi} -> all 2^n subset moments")
    add("recover-pi", "{m, moments} -> the unique consistent weight vector")
    add("selftest", "run the built-in example corpus", with_input=False)
    return parser


def main(
    argv: Sequence[str] | None = None,
    stdin: IO[str] | None = None,
    stdout: IO[str] | None = None,
    stderr: IO[str] | None = None,
) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.command == "gen" and args.family == "vandermonde" and args.copies is None:
        args.copies = (args.k - 1) if args.k else 0

    try:
        payload = _HANDLERS[args.command](args, stdin)
    except (InputFormatError, UsageError) as exc:
        print(f"hadamix {args.command}: {exc}", file=stderr)
        return 2
    except DomainError as exc:
        error_obj = {"error": str(exc), "witness": _witness_to_json(exc.witness)}
        stdout.write(json.dumps(error_obj, sort_keys=True) + "\n")
        return 1
    except InternalInvariantError as exc:
        error_obj = {"error": f"internal invariant violated: {exc}", "witness": None}
        stdout.write(json.dumps(error_obj, sort_keys=True) + "\n")
        return 1

    stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    if args.command == "selftest" and not payload["ok"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
