"""Dense exact linear algebra over a ``FieldSpec``.

Matrices hold canonical integer encodings in an int64 numpy array.  All
eliminations pick the first nonzero entry of a column as pivot, so reduced
row echelon forms are canonical.  Coordinates are 0-based throughout.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .gf import FieldElement, FieldError, FieldSpec


class InconsistentSystemError(ValueError):
    """The linear system has no solution."""


class FieldMatrix:
    """A dense matrix over a finite field.

    ``data`` is an int64 array of shape (rows, cols).  A 0-row matrix is a
    valid value and stands for an empty basis with ``cols`` columns.
    """

    __slots__ = ("field", "data")

    def __init__(self, field: FieldSpec, data, cols: int | None = None):
        arr = np.asarray(data, dtype=np.int64)
        if arr.size == 0:
            if cols is None:
                cols = arr.shape[1] if arr.ndim == 2 else 0
            arr = arr.reshape(arr.shape[0] if arr.ndim == 2 else 0, cols)
        if arr.ndim != 2:
            raise ValueError(f"matrix data must be 2-D, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() >= field.order):
            raise FieldError(f"entries out of range for {field!r}")
        self.field = field
        self.data = arr

    # -- constructors ------------------------------------------------------
    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "FieldMatrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: FieldSpec, k: int) -> "FieldMatrix":
        return cls(field, np.eye(k, dtype=np.int64))

    @classmethod
    def empty(cls, field: FieldSpec, cols: int) -> "FieldMatrix":
        return cls(field, np.zeros((0, cols), dtype=np.int64))

    @classmethod
    def random(cls, field: FieldSpec, rows: int, cols: int, rng: np.random.Generator) -> "FieldMatrix":
        return cls(field, rng.integers(0, field.order, size=(rows, cols), dtype=np.int64))

    # -- shape and access ----------------------------------------------------
    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def T(self) -> "FieldMatrix":
        return FieldMatrix(self.field, self.data.T.copy())

    def __getitem__(self, idx):
        v = self.data[idx]
        if np.ndim(v) == 0:
            return FieldElement(self.field, int(v))
        return v

    def row(self, i: int) -> np.ndarray:
        return self.data[i].copy()

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and bool(
            np.array_equal(self.data, other.data))

    __hash__ = None

    def __repr__(self) -> str:
        return f"FieldMatrix({self.field!r}, {self.rows}x{self.cols}, {self.data.tolist()})"

    # -- arithmetic ----------------------------------------------------------
    def _check(self, other: "FieldMatrix") -> None:
        if self.field != other.field:
            raise FieldError(f"field mismatch: {self.field!r} vs {other.field!r}")

    def __matmul__(self, other):
        if isinstance(other, FieldMatrix):
            self._check(other)
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            return FieldMatrix(self.field, self.field.matmul(self.data, other.data), cols=other.cols)
        vec = np.asarray(other, dtype=np.int64)
        if vec.ndim != 1 or vec.shape[0] != self.cols:
            raise ValueError(f"vector of length {self.cols} expected, got shape {vec.shape}")
        return self.field.matmul(self.data, vec[:, None])[:, 0]

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check(other)
        return FieldMatrix(self.field, self.field.vadd(self.data, other.data), cols=self.cols)

    def __sub__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check(other)
        return FieldMatrix(self.field, self.field.vsub(self.data, other.data), cols=self.cols)

    def __neg__(self) -> "FieldMatrix":
        return FieldMatrix(self.field, self.field.vneg(self.data), cols=self.cols)

    def scale(self, c: int) -> "FieldMatrix":
        return FieldMatrix(self.field, self.field.vmul(self.data, int(c)), cols=self.cols)

    def vstack(self, *others: "FieldMatrix") -> "FieldMatrix":
        for o in others:
            self._check(o)
            if o.cols != self.cols:
                raise ValueError("column counts differ")
        return FieldMatrix(self.field, np.vstack([self.data] + [o.data for o in others]), cols=self.cols)

    def hstack(self, *others: "FieldMatrix") -> "FieldMatrix":
        for o in others:
            self._check(o)
            if o.rows != self.rows:
                raise ValueError("row counts differ")
        return FieldMatrix(self.field, np.hstack([self.data] + [o.data for o in others]))

    def lift(self, big: FieldSpec, table: np.ndarray) -> "FieldMatrix":
        """Image under a subfield embedding given as a lookup table."""
        return FieldMatrix(big, table[self.data], cols=self.cols)

    # -- serialization ---------------------------------------------------------
    def to_json(self) -> dict:
        return {"field": self.field.to_json(), "rows": self.rows, "cols": self.cols,
                "data": self.data.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldMatrix":
        f = FieldSpec.from_json(obj["field"])
        m = cls(f, np.array(obj["data"], dtype=np.int64).reshape(obj["rows"], obj["cols"]),
                cols=obj["cols"])
        return m


@dataclass(frozen=True)
class SupportSet:
    """A set of coordinates of an n-length vector, stored sorted and 0-based."""

    n: int
    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(sorted(int(i) for i in self.indices))
        if any(b == a for a, b in zip(idx, idx[1:])):
            raise ValueError(f"repeated coordinate in support {idx}")
        if idx and (idx[0] < 0 or idx[-1] >= self.n):
            raise IndexError(f"support {idx} outside [0, {self.n})")
        object.__setattr__(self, "indices", idx)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def complement(self) -> "SupportSet":
        s = set(self.indices)
        return SupportSet(self.n, tuple(i for i in range(self.n) if i not in s))

    @classmethod
    def full(cls, n: int) -> "SupportSet":
        return cls(n, tuple(range(n)))


@dataclass
class SparseVector:
    """An n-length vector kept as {index: nonzero value}."""

    n: int
    entries: dict[int, int] = dc_field(default_factory=dict)

    def __post_init__(self):
        self.entries = {int(i): int(v) for i, v in sorted(self.entries.items()) if v}
        if any(i < 0 or i >= self.n for i in self.entries):
            raise IndexError("sparse entry outside vector length")

    @property
    def weight(self) -> int:
        return len(self.entries)

    @property
    def support(self) -> SupportSet:
        return SupportSet(self.n, tuple(self.entries))

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.n, dtype=np.int64)
        for i, v in self.entries.items():
            out[i] = v
        return out

    @classmethod
    def from_dense(cls, vec) -> "SparseVector":
        vec = np.asarray(vec, dtype=np.int64)
        return cls(len(vec), {int(i): int(vec[i]) for i in np.flatnonzero(vec)})


# ----------------------------------------------------------------------
# elimination
# ----------------------------------------------------------------------

def _rref_array(field: FieldSpec, a: np.ndarray, ncols: int | None = None):
    """RREF of ``a``; pivots searched only among the first ``ncols`` columns."""
    a = np.array(a, dtype=np.int64, copy=True)
    rows, cols = a.shape
    if ncols is None:
        ncols = cols
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        piv = int(a[r, c])
        if piv != 1:
            a[r] = field.vmul(a[r], field.inv(piv))
        col = a[:, c].copy()
        col[r] = 0
        idx = np.flatnonzero(col)
        if idx.size:
            a[idx] = field.vsub(a[idx], field.vmul(col[idx, None], a[r][None, :]))
        pivots.append(c)
        r += 1
    return a, pivots


def rref(M: FieldMatrix) -> tuple[FieldMatrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a, piv = _rref_array(M.field, M.data)
    return FieldMatrix(M.field, a, cols=M.cols), piv


def _rank_small(field: FieldSpec, rows: list[list[int]]) -> int:
    # pure-python elimination; faster than numpy for the tiny matrices of subset scans
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    add, mul, inv, neg = field.add, field.mul, field.inv, field.neg
    rank = 0
    for c in range(ncols):
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        pinv = inv(prow[c])
        for i in range(rank + 1, len(rows)):
            v = rows[i][c]
            if v:
                f = neg(mul(v, pinv))
                ri = rows[i]
                for j in range(c, ncols):
                    if prow[j]:
                        ri[j] = add(ri[j], mul(f, prow[j]))
        rank += 1
        if rank == len(rows):
            break
    return rank


def rank(M: FieldMatrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    if M.rows * M.cols <= 64:
        return _rank_small(M.field, M.data.tolist())
    return len(_rref_array(M.field, M.data)[1])


def rank_of_columns(M: FieldMatrix, cols: Sequence[int]) -> int:
    """rank(M restricted to the given columns), without building a FieldMatrix."""
    if M.rows == 0 or not len(cols):
        return 0
    sub = M.data[:, list(cols)]
    if sub.size <= 64:
        return _rank_small(M.field, sub.tolist())
    return len(_rref_array(M.field, sub)[1])


def row_basis(M: FieldMatrix) -> FieldMatrix:
    """Canonical full-row-rank basis of the row space (nonzero RREF rows)."""
    a, piv = _rref_array(M.field, M.data)
    return FieldMatrix(M.field, a[: len(piv)], cols=M.cols)


def solve(M: FieldMatrix, rhs) -> np.ndarray:
    """One solution x of M x = rhs (free variables set to zero).

    ``rhs`` may be a vector of length rows(M) or a (rows(M) x r) array, in
    which case the result has shape (cols(M) x r).
    """
    b = rhs.data if isinstance(rhs, FieldMatrix) else np.asarray(rhs, dtype=np.int64)
    vector = b.ndim == 1
    if vector:
        b = b[:, None]
    if b.shape[0] != M.rows:
        raise ValueError(f"rhs has {b.shape[0]} rows, matrix has {M.rows}")
    aug = np.hstack([M.data, b]) if M.cols else b.copy()
    a, piv = _rref_array(M.field, aug, ncols=M.cols)
    r = len(piv)
    if np.any(a[r:, M.cols:]):
        raise InconsistentSystemError("linear system is inconsistent")
    x = np.zeros((M.cols, b.shape[1]), dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = a[i, M.cols:]
    return x[:, 0] if vector else x


def solve_left(M: FieldMatrix, R: FieldMatrix) -> FieldMatrix:
    """X with X @ M = R."""
    if M.cols != R.cols:
        raise ValueError("column counts differ")
    x = solve(M.T, R.T)
    return FieldMatrix(M.field, x.T.copy(), cols=M.rows)


def in_row_space(M: FieldMatrix, vec) -> bool:
    try:
        solve(M.T, np.asarray(vec, dtype=np.int64))
    except InconsistentSystemError:
        return False
    return True


def kernel_basis(M: FieldMatrix) -> FieldMatrix:
    """Rows spanning {v : M v = 0}, as a canonical (RREF) full-row-rank matrix."""
    field = M.field
    n = M.cols
    if M.rows == 0:
        return FieldMatrix.identity(field, n)
    a, piv = _rref_array(field, M.data)
    free = [c for c in range(n) if c not in set(piv)]
    K = np.zeros((len(free), n), dtype=np.int64)
    for j, f in enumerate(free):
        K[j, f] = 1
        for i, c in enumerate(piv):
            K[j, c] = field.neg(int(a[i, f]))
    return row_basis(FieldMatrix(field, K, cols=n))


def restrict_columns(M: FieldMatrix, S: SupportSet | Iterable[int]) -> FieldMatrix:
    """Columns of M indexed by S, in order."""
    idx = list(S.indices) if isinstance(S, SupportSet) else [int(i) for i in S]
    if idx and (min(idx) < 0 or max(idx) >= M.cols):
        raise IndexError(f"column index out of range for {M.cols} columns")
    return FieldMatrix(M.field, M.data[:, idx], cols=len(idx))


def row_space_intersection(M1: FieldMatrix, M2: FieldMatrix) -> FieldMatrix:
    """Full-row-rank generator of rowspace(M1) ∩ rowspace(M2).

    Solves x M1 = y M2 through the kernel of the stacked system [M1^T | -M2^T].
    """
    if M1.field != M2.field:
        raise FieldError("field mismatch")
    if M1.cols != M2.cols:
        raise ValueError(f"column counts differ: {M1.cols} vs {M2.cols}")
    if M1.rows == 0 or M2.rows == 0:
        return FieldMatrix.empty(M1.field, M1.cols)
    stacked = M1.T.hstack(-M2.T)
    K = kernel_basis(stacked)
    if K.rows == 0:
        return FieldMatrix.empty(M1.field, M1.cols)
    X = FieldMatrix(M1.field, K.data[:, : M1.rows], cols=M1.rows)
    return row_basis(X @ M1)


def row_space_sum(M1: FieldMatrix, M2: FieldMatrix) -> FieldMatrix:
    return row_basis(M1.vstack(M2))


def same_row_space(M1: FieldMatrix, M2: FieldMatrix) -> bool:
    b1, b2 = row_basis(M1), row_basis(M2)
    return b1.shape == b2.shape and bool(np.array_equal(b1.data, b2.data))


# ----------------------------------------------------------------------
# bounded-weight preimages
# ----------------------------------------------------------------------

def _solve_unique_small(field: FieldSpec, cols: list[list[int]], s: list[int]) -> list[int] | None:
    """Unique solution of sum_j x_j cols[j] = s, or None."""
    w = len(cols)
    r = len(s)
    rows = [[cols[j][i] for j in range(w)] + [s[i]] for i in range(r)]
    add, mul, inv, neg = field.add, field.mul, field.inv, field.neg
    rank = 0
    pivots = []
    for c in range(w):
        piv = None
        for i in range(rank, r):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            return None
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        pinv = inv(prow[c])
        if pinv != 1:
            prow[:] = [mul(v, pinv) for v in prow]
        for i in range(r):
            if i != rank:
                v = rows[i][c]
                if v:
                    f = neg(v)
                    ri = rows[i]
                    for j in range(c, w + 1):
                        if prow[j]:
                            ri[j] = add(ri[j], mul(f, prow[j]))
        pivots.append(c)
        rank += 1
    for i in range(rank, r):
        if rows[i][w]:
            return None
    return [rows[i][w] for i in range(w)]


def min_weight_preimage(H: FieldMatrix, s, w_max: int) -> SparseVector | None:
    """Minimum-weight e with H e = s and wt(e) <= w_max, or None.

    Supports are tried in increasing weight and, within a weight, in
    lexicographic order; the first hit is returned.  At the minimum weight a
    solution on a given support is necessarily unique, so this also fixes
    the value sequence.  Cost grows like sum_w C(n, w) small solves.
    """
    field = H.field
    n = H.cols
    s = np.asarray(s, dtype=np.int64)
    if s.shape != (H.rows,):
        raise ValueError(f"syndrome must have length {H.rows}")
    if not np.any(s):
        return SparseVector(n)
    if w_max < 1 or H.rows == 0:
        return None
    data = H.data
    # weight 1, vectorized over columns
    nonzero_cols = np.flatnonzero(np.any(data != 0, axis=0))
    if nonzero_cols.size:
        sub = data[:, nonzero_cols]
        lead = np.argmax(sub != 0, axis=0)
        lead_vals = sub[lead, np.arange(sub.shape[1])]
        coef = field.vmul(s[lead], field.vinv(lead_vals))
        ok = np.all(field.vmul(sub, coef[None, :]) == s[:, None], axis=0) & (coef != 0)
        hits = np.flatnonzero(ok)
        if hits.size:
            j = int(hits[0])
            return SparseVector(n, {int(nonzero_cols[j]): int(coef[j])})
    if w_max < 2:
        return None
    columns = data.T.tolist()
    s_list = s.tolist()
    for w in range(2, min(w_max, n) + 1):
        for supp in itertools.combinations(range(n), w):
            x = _solve_unique_small(field, [columns[j] for j in supp], s_list)
            if x is not None and all(x):
                return SparseVector(n, dict(zip(supp, x)))
    return None


def hamming_weight(vec) -> int:
    return int(np.count_nonzero(np.asarray(vec)))
