"""Linear block codes, cores, locality structure and the MRSC verifier."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Sequence

import numpy as np

from .gf import FieldError, FieldSpec
from .linalg import (
    FieldMatrix,
    InconsistentSystemError,
    SupportSet,
    kernel_basis,
    rank,
    rank_of_columns,
    restrict_columns,
    row_basis,
    same_row_space,
    solve_left,
)

MODES = ("definition1", "cores", "parity", "all_sizes")


class NotSubcodeError(ValueError):
    """The candidate code is not contained in the claimed supercode."""


@dataclass
class Certificate:
    """Outcome of an MRSC scan attached to constructed codes."""

    verified: bool
    subsets_checked: int
    method: str = ""
    witness: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        out = {"verified": self.verified, "subsets_checked": self.subsets_checked}
        if self.method:
            out["method"] = self.method
        if self.witness is not None:
            out["witness"] = list(self.witness)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Certificate":
        w = obj.get("witness")
        return cls(obj["verified"], obj["subsets_checked"], obj.get("method", ""),
                   tuple(w) if w is not None else None)


@dataclass
class LinearCode:
    """An [n, k] code over ``field`` with a full-row-rank generator.

    k = 0 is the zero code, with a 0-row generator.
    """

    generator: FieldMatrix
    certificate: Certificate | None = dc_field(default=None, compare=False)

    def __post_init__(self):
        if rank(self.generator) != self.generator.rows:
            raise ValueError("generator matrix must have full row rank; use LinearCode.span")

    @classmethod
    def span(cls, M: FieldMatrix) -> "LinearCode":
        """Code spanned by the rows of M (any rank)."""
        return cls(row_basis(M))

    @classmethod
    def from_rows(cls, field: FieldSpec, rows, n: int | None = None) -> "LinearCode":
        return cls.span(FieldMatrix(field, rows, cols=n))

    @classmethod
    def zero(cls, field: FieldSpec, n: int) -> "LinearCode":
        return cls(FieldMatrix.empty(field, n))

    @property
    def field(self) -> FieldSpec:
        return self.generator.field

    @property
    def n(self) -> int:
        return self.generator.cols

    @property
    def k(self) -> int:
        return self.generator.rows

    dim = k

    def __repr__(self) -> str:
        return f"LinearCode([{self.n}, {self.k}] over {self.field!r})"

    def contains(self, vec) -> bool:
        if self.k == 0:
            return not np.any(np.asarray(vec))
        return rank(self.generator.vstack(FieldMatrix(self.field, [list(vec)]))) == self.k

    def same_as(self, other: "LinearCode") -> bool:
        return self.field == other.field and same_row_space(self.generator, other.generator)

    def lift(self, big: FieldSpec, table: np.ndarray) -> "LinearCode":
        return LinearCode(self.generator.lift(big, table))

    def to_json(self) -> dict:
        out = self.generator.to_json()
        out["n"] = self.n
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "LinearCode":
        code = cls.span(FieldMatrix.from_json(obj))
        if "certificate" in obj:
            code.certificate = Certificate.from_json(obj["certificate"])
        return code


@dataclass(frozen=True)
class LocalityProfile:
    r: int
    delta: int
    ell: int

    @property
    def group_length(self) -> int:
        return self.r + self.delta - 1


# ----------------------------------------------------------------------
# basic operations
# ----------------------------------------------------------------------

def dual(C: LinearCode) -> LinearCode:
    """[n, n-k] dual code."""
    if C.k == 0:
        return LinearCode(FieldMatrix.identity(C.field, C.n))
    return LinearCode(kernel_basis(C.generator))


def _as_support(n: int, S) -> SupportSet:
    return S if isinstance(S, SupportSet) else SupportSet(n, tuple(S))


def puncture(C: LinearCode, S) -> LinearCode:
    """C|_S: every codeword restricted to the coordinates in S."""
    S = _as_support(C.n, S)
    return LinearCode.span(restrict_columns(C.generator, S))


def shorten(C: LinearCode, S) -> LinearCode:
    """C^S: codewords supported inside S, restricted to S."""
    S = _as_support(C.n, S)
    if C.k == 0:
        return LinearCode.zero(C.field, len(S))
    outside = S.complement()
    if len(outside) == 0:
        return LinearCode(restrict_columns(C.generator, S))
    # x G vanishes off S  <=>  x lies in the left kernel of G|_outside
    left = kernel_basis(restrict_columns(C.generator, outside).T)
    if left.rows == 0:
        return LinearCode.zero(C.field, len(S))
    return LinearCode.span(restrict_columns(left @ C.generator, S))


def is_subcode(C: LinearCode, C0: LinearCode) -> bool:
    try:
        subcode_factor(C, C0)
    except NotSubcodeError:
        return False
    return True


def subcode_factor(C: LinearCode, C0: LinearCode) -> FieldMatrix:
    """X with G = X G0, proving C ⊆ C0."""
    if C.field != C0.field or C.n != C0.n:
        raise NotSubcodeError("codes differ in field or length")
    if C.k == 0:
        return FieldMatrix.zeros(C.field, 0, C0.k)
    if C0.k == 0:
        raise NotSubcodeError("nonzero code is not a subcode of the zero code")
    try:
        return solve_left(C0.generator, C.generator)
    except InconsistentSystemError:
        raise NotSubcodeError("generator rows are not in the supercode") from None


def is_k_core(C: LinearCode, S) -> bool:
    """Whether S is a |S|-core of C's dual (no dual codeword supported in S)."""
    S = _as_support(C.n, S)
    if len(S) == 0:
        return True
    if len(S) <= C.k:
        return rank_of_columns(C.generator, S.indices) == len(S)
    return shorten(dual(C), S).k == 0


def enumerate_k_cores(C: LinearCode, k: int) -> Iterator[SupportSet]:
    """All size-k sets S with rank(G|_S) = k, in lexicographic order."""
    if k > C.k or k < 0:
        return
    for S in itertools.combinations(range(C.n), k):
        if rank_of_columns(C.generator, S) == k:
            yield SupportSet(C.n, S)


def build_striped_matrix(a: Sequence[int], m: int, field: FieldSpec) -> FieldMatrix:
    """m x mK block-diagonal matrix with the row vector a on each block."""
    a = np.asarray(a, dtype=np.int64)
    if not np.any(a):
        raise ValueError("coding vector must be nonzero")
    K = len(a)
    out = np.zeros((m, m * K), dtype=np.int64)
    for i in range(m):
        out[i, i * K:(i + 1) * K] = a
    return FieldMatrix(field, out)


def block_diagonal(block: FieldMatrix, m: int) -> FieldMatrix:
    r, c = block.shape
    out = np.zeros((m * r, m * c), dtype=np.int64)
    for i in range(m):
        out[i * r:(i + 1) * r, i * c:(i + 1) * c] = block.data
    return FieldMatrix(block.field, out)


# ----------------------------------------------------------------------
# MRSC verification
# ----------------------------------------------------------------------

@dataclass
class MRSCVerdict:
    """Result of an MRSC check; ``witness`` is a violating coordinate set."""

    is_mrsc: bool
    mode: str
    witness: SupportSet | None = None
    subsets_checked: int = 0
    violations: int = 0
    per_mode: dict[str, bool] = dc_field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.is_mrsc

    def certificate(self, method: str = "") -> Certificate:
        return Certificate(self.is_mrsc, self.subsets_checked, method,
                           self.witness.indices if self.witness is not None else None)


def _scan_definition1(G0: FieldMatrix, G: FieldMatrix, k: int, subsets) -> tuple[int, int, tuple | None]:
    checked = violations = 0
    first = None
    for S in subsets:
        checked += 1
        if rank_of_columns(G0, S) == k and rank_of_columns(G, S) != k:
            violations += 1
            if first is None:
                first = S
    return checked, violations, first


def _scan_chunk(args):
    G0, G, k, n, start, stop, count_all = args
    subsets = itertools.islice(itertools.combinations(range(n), k), start, stop)
    if count_all:
        return _scan_definition1(G0, G, k, subsets)
    checked = 0
    for S in subsets:
        checked += 1
        if rank_of_columns(G0, S) == k and rank_of_columns(G, S) != k:
            return checked, 1, S
    return checked, 0, None


def _definition1(C: LinearCode, C0: LinearCode, count_all: bool, workers: int) -> MRSCVerdict:
    k, n = C.k, C.n
    total = math.comb(n, k)
    if workers > 1 and total > 2000:
        step = -(-total // workers)
        jobs = [(C0.generator, C.generator, k, n, s, min(s + step, total), count_all)
                for s in range(0, total, step)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_scan_chunk, jobs))
    else:
        results = [_scan_chunk((C0.generator, C.generator, k, n, 0, total, count_all))]
    checked = sum(r[0] for r in results)
    violations = sum(r[1] for r in results)
    first = next((r[2] for r in results if r[2] is not None), None)
    return MRSCVerdict(violations == 0, "definition1",
                       SupportSet(n, first) if first is not None else None, checked, violations)


def _cores_mode(C: LinearCode, C0: LinearCode) -> MRSCVerdict:
    # k-cores read off the duals by shortening, independent of the rank route
    D0, D = dual(C0), dual(C)
    checked = 0
    for S in itertools.combinations(range(C.n), C.k):
        checked += 1
        if shorten(D0, S).k == 0 and shorten(D, S).k != 0:
            return MRSCVerdict(False, "cores", SupportSet(C.n, S), checked, 1)
    return MRSCVerdict(True, "cores", None, checked)


def _parity_mode(C: LinearCode, C0: LinearCode) -> MRSCVerdict:
    H = dual(C).generator
    n, k = C.n, C.k
    checked = 0
    for S in itertools.combinations(range(n), k):
        if rank_of_columns(C0.generator, S) != k:
            continue
        checked += 1
        rest = [i for i in range(n) if i not in S]
        if rank_of_columns(H, rest) != n - k:
            return MRSCVerdict(False, "parity", SupportSet(n, S), checked, 1)
    return MRSCVerdict(True, "parity", None, checked)


def _all_sizes_mode(C: LinearCode, C0: LinearCode) -> MRSCVerdict:
    checked = 0
    for size in range(C.k + 1):
        for S in itertools.combinations(range(C.n), size):
            checked += 1
            if rank_of_columns(C0.generator, S) != rank_of_columns(C.generator, S):
                return MRSCVerdict(False, "all_sizes", SupportSet(C.n, S), checked, 1)
    return MRSCVerdict(True, "all_sizes", None, checked)


def is_mrsc(C: LinearCode, C0: LinearCode, mode: str = "definition1", *,
            count_all: bool = False, workers: int = 1) -> MRSCVerdict:
    """Check that C is a maximally recoverable subcode of C0.

    ``mode`` selects one of four equivalent criteria, or ``"all"`` to run
    every one and require agreement.  Raises NotSubcodeError when C is not
    contained in C0.
    """
    subcode_factor(C, C0)
    if mode == "all":
        verdicts = {m: is_mrsc(C, C0, m) for m in MODES}
        answers = {m: v.is_mrsc for m, v in verdicts.items()}
        if len(set(answers.values())) != 1:
            raise AssertionError(f"MRSC criteria disagree: {answers}")
        base = verdicts["definition1"]
        base.mode = "all"
        base.per_mode = answers
        return base
    if mode == "definition1":
        return _definition1(C, C0, count_all, workers)
    if mode == "cores":
        return _cores_mode(C, C0)
    if mode == "parity":
        return _parity_mode(C, C0)
    if mode == "all_sizes":
        return _all_sizes_mode(C, C0)
    raise ValueError(f"unknown mode {mode!r}; expected one of {MODES + ('all',)}")


# ----------------------------------------------------------------------
# locality
# ----------------------------------------------------------------------

def _is_mds(C: LinearCode) -> bool:
    # every k columns of the generator independent <=> distance n - k + 1
    return all(rank_of_columns(C.generator, S) == C.k
               for S in itertools.combinations(range(C.n), C.k))


@dataclass
class LocalityVerdict:
    ok: bool
    failed_group: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_locality(C0: LinearCode, profile: LocalityProfile) -> LocalityVerdict:
    """Whether C0's dual is a direct sum of [r+δ-1, δ-1] MDS local codes.

    The local groups are consecutive blocks of r+δ-1 coordinates.
    """
    g = profile.group_length
    if C0.n != profile.ell * g:
        raise ValueError(f"n = {C0.n} differs from ell*(r+delta-1) = {profile.ell * g}")
    D = dual(C0)
    if D.k != profile.ell * (profile.delta - 1):
        return LocalityVerdict(False, None, f"dual dimension {D.k} != ell*(delta-1)")
    for i in range(profile.ell):
        local = shorten(D, range(i * g, (i + 1) * g))
        if local.k != profile.delta - 1:
            return LocalityVerdict(False, i, f"local parity dimension {local.k} != delta-1")
        if local.k and not _is_mds(local):
            return LocalityVerdict(False, i, "local parity code is not MDS")
    return LocalityVerdict(True)


def partial_mds_params(n: int, k: int, r: int, delta: int) -> tuple[int, int, int, int]:
    """(m', n', r', s') of the partial-MDS array view of an (r, δ) locality code."""
    g = r + delta - 1
    if g <= 0 or n % g:
        raise ValueError(f"n = {n} is not a multiple of r + delta - 1 = {g}")
    rows = n // g
    return rows, g, delta - 1, rows * r - k
