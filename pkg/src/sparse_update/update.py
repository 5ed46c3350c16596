"""Point-to-point function updates.

A receiver holds ``A @ x`` and must learn ``A @ (x + e)`` for an unknown
eps-sparse ``e``.  The source sends ``H @ (x + e)``.  With ``H = S A``
spanning a 2eps-dimensional MRSC of the row space of A, the receiver
strips ``S (A x)`` off the message, finds the lightest ``e'`` with the same
syndrome and adds ``A e'`` to its side information.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .codes import Certificate, LinearCode, dual
from .gf import FieldSpec
from .linalg import (
    FieldMatrix,
    SparseVector,
    kernel_basis,
    min_weight_preimage,
    rank,
    restrict_columns,
    row_space_intersection,
    solve,
    solve_left,
)
from .mrsc import (
    construct_linearized_mrsc,
    construct_random_mrsc,
    construct_striped_mrsc,
    lift_code,
)

METHODS = ("auto", "random", "linearized", "striped")


class DecodeError(ValueError):
    """No eps-sparse difference vector explains the received syndrome."""


def lower_bound(m: int, eps: int) -> int:
    """Minimum number of transmitted symbols for a rank-m function."""
    return min(m, 2 * eps)


@dataclass
class P2PScheme:
    """Encoder H (ℓ x n) and factor S with H = S A."""

    A: FieldMatrix
    eps: int
    H: FieldMatrix
    S: FieldMatrix
    method: str = ""
    certificate: Certificate | None = None

    @property
    def field(self) -> FieldSpec:
        return self.A.field

    @property
    def cost(self) -> int:
        return self.H.rows

    @property
    def bound(self) -> int:
        return lower_bound(self.A.rows, self.eps)

    def to_json(self) -> dict:
        out = {"type": "p2p", "eps": self.eps, "method": self.method,
               "A": self.A.to_json(), "H": self.H.to_json(), "S": self.S.to_json(),
               "cost": self.cost, "bound": self.bound}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "P2PScheme":
        cert = obj.get("certificate")
        return cls(FieldMatrix.from_json(obj["A"]), int(obj["eps"]),
                   FieldMatrix.from_json(obj["H"]), FieldMatrix.from_json(obj["S"]),
                   obj.get("method", ""), Certificate.from_json(cert) if cert else None)


def striped_vector(A: FieldMatrix) -> np.ndarray | None:
    """The coding vector a if A = diag(a, ..., a), else None."""
    m, n = A.shape
    if m == 0 or n % m:
        return None
    K = n // m
    a = A.data[0, :K]
    expected = np.zeros_like(A.data)
    for i in range(m):
        expected[i, i * K:(i + 1) * K] = a
    return a.copy() if np.array_equal(expected, A.data) and np.any(a) else None


def build_p2p_scheme(A: FieldMatrix, eps: int, method: str = "auto", seed: int = 0,
                     max_tries: int = 100, workers: int = 1) -> P2PScheme:
    """Optimal-cost encoder for the function A under eps-sparse updates.

    ``method`` picks the MRSC construction: ``random``, ``linearized`` (the
    scheme then lives over an extension field), ``striped`` (requires A to be
    block-diagonal with one repeated row vector), or ``auto`` (striped when
    applicable, otherwise random).
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    if eps < 0:
        raise ValueError("eps must be >= 0")
    m, n = A.shape
    if rank(A) != m:
        raise ValueError("A must have full row rank")
    field = A.field
    if eps == 0:
        return P2PScheme(A, 0, FieldMatrix.empty(field, n), FieldMatrix.empty(field, m),
                         "trivial", Certificate(True, 0, "trivial"))
    if m <= 2 * eps:
        return P2PScheme(A, eps, A, FieldMatrix.identity(field, m), "identity",
                         Certificate(True, 0, "identity"))
    CA = LinearCode(A)
    stripe = striped_vector(A)
    if method == "auto":
        method = "striped" if stripe is not None and field.order > m else "random"
    if method == "striped":
        if stripe is None:
            raise ValueError("striped method needs A = diag(a, ..., a)")
        C = construct_striped_mrsc(stripe, m, eps, field)
    elif method == "random":
        C = construct_random_mrsc(CA, 2 * eps, seed=seed, max_tries=max_tries, workers=workers)
    else:
        C = construct_linearized_mrsc(CA, 2 * eps)
        A = lift_code(CA, C.field).generator
    H = C.generator
    S = solve_left(A, H)
    return P2PScheme(A, eps, H, S, method, C.certificate)


def p2p_encode(scheme: P2PScheme, x_new) -> np.ndarray:
    x_new = np.asarray(x_new, dtype=np.int64)
    if x_new.shape != (scheme.A.cols,):
        raise ValueError(f"message must have length {scheme.A.cols}")
    if scheme.H.rows == 0:
        return np.zeros(0, dtype=np.int64)
    return scheme.H @ x_new


def syndrome_decode(H: FieldMatrix, S: FieldMatrix, A: FieldMatrix, eps: int, y, side) -> np.ndarray:
    """side + A e', with e' the lightest vector whose H-image is y - S side."""
    field = A.field
    side = np.asarray(side, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    if side.shape != (A.rows,):
        raise ValueError(f"side information must have length {A.rows}")
    if y.shape != (H.rows,):
        raise ValueError(f"encoded message must have length {H.rows}")
    if H.rows == 0:
        return side.copy()
    syndrome = field.vsub(y, S @ side)
    e_hat = min_weight_preimage(H, syndrome, eps)
    if e_hat is None:
        raise DecodeError(f"no difference vector of weight <= {eps} matches the syndrome")
    return field.vadd(side, A @ e_hat.to_dense())


def p2p_decode(scheme: P2PScheme, y, side) -> np.ndarray:
    return syndrome_decode(scheme.H, scheme.S, scheme.A, scheme.eps, y, side)


# ----------------------------------------------------------------------
# converse: confusable pairs
# ----------------------------------------------------------------------

@dataclass
class ConfusablePair:
    """Two (message, update) pairs that no decoder can tell apart."""

    x1: np.ndarray
    e1: np.ndarray
    x2: np.ndarray
    e2: np.ndarray
    y: np.ndarray
    h_images_equal: bool
    side_equal: bool
    updates_differ: bool

    @property
    def valid(self) -> bool:
        return self.h_images_equal and self.side_equal and self.updates_differ


def _complement_decomposition(field, KA: FieldMatrix, KH: FieldMatrix, y: np.ndarray) -> np.ndarray:
    """U in rowspace(KA) with y - U in rowspace(KH)."""
    stacked = KA.vstack(KH) if KH.rows else KA
    z = solve(stacked.T, y)
    if KA.rows == 0:
        return np.zeros_like(y)
    return (FieldMatrix(field, z[None, : KA.rows], cols=KA.rows) @ KA).data[0]


def find_counterexample(H: FieldMatrix, A: FieldMatrix, eps: int) -> ConfusablePair | None:
    """Search for a 2eps-sparse Y in (C_H ∩ C_A)⊥ outside C_A⊥ and build a confusable pair.

    Returns None when no such Y exists, i.e. when H meets the necessary
    condition for zero-error decoding.
    """
    field = A.field
    n = A.cols
    B = row_space_intersection(H, A) if H.rows else FieldMatrix.empty(field, n)
    y = None
    for w in range(1, min(2 * eps, n) + 1):
        for supp in itertools.combinations(range(n), w):
            K = kernel_basis(restrict_columns(B, supp)) if B.rows else FieldMatrix.identity(field, w)
            if K.rows == 0:
                continue
            images = restrict_columns(A, supp) @ K.T
            hit = np.flatnonzero(np.any(images.data != 0, axis=0))
            if hit.size:
                y = np.zeros(n, dtype=np.int64)
                y[list(supp)] = K.data[int(hit[0])]
                break
        if y is not None:
            break
    if y is None:
        return None
    supp = np.flatnonzero(y)
    e1 = np.zeros(n, dtype=np.int64)
    e2 = np.zeros(n, dtype=np.int64)
    first, rest = supp[:eps], supp[eps:]
    e1[first] = y[first]
    e2[rest] = field.vneg(y[rest])
    KA = dual(LinearCode.span(A)).generator
    KH = dual(LinearCode.span(H)).generator if H.rows else FieldMatrix.identity(field, n)
    u = _complement_decomposition(field, KA, KH, y)
    x1 = field.vneg(u)
    x2 = np.zeros(n, dtype=np.int64)

    def himg(v):
        return H @ v if H.rows else np.zeros(0, dtype=np.int64)

    return ConfusablePair(
        x1=x1, e1=e1, x2=x2, e2=e2, y=y,
        h_images_equal=bool(np.array_equal(himg(field.vadd(x1, e1)), himg(field.vadd(x2, e2)))),
        side_equal=bool(np.array_equal(A @ x1, A @ x2)),
        updates_differ=not np.array_equal(A @ e1, A @ e2),
    )


# ----------------------------------------------------------------------
# sparse vectors and simulation
# ----------------------------------------------------------------------

def sparse_vectors(n: int, max_weight: int, field: FieldSpec) -> Iterator[np.ndarray]:
    """Every vector of weight <= max_weight, lightest first."""
    yield np.zeros(n, dtype=np.int64)
    nonzero = range(1, field.order)
    for w in range(1, max_weight + 1):
        for supp in itertools.combinations(range(n), w):
            for vals in itertools.product(nonzero, repeat=w):
                v = np.zeros(n, dtype=np.int64)
                v[list(supp)] = vals
                yield v


def count_sparse_vectors(n: int, max_weight: int, q: int) -> int:
    from math import comb
    return sum(comb(n, w) * (q - 1) ** w for w in range(max_weight + 1))


def random_sparse(n: int, eps: int, field: FieldSpec, rng: np.random.Generator,
                  exact: bool = False) -> np.ndarray:
    """Uniform support of size eps (or uniform size <= eps) with nonzero values."""
    w = eps if exact else int(rng.integers(0, eps + 1))
    v = np.zeros(n, dtype=np.int64)
    if w:
        supp = rng.choice(n, size=w, replace=False)
        v[supp] = rng.integers(1, field.order, size=w)
    return v


@dataclass
class SimulationReport:
    trials: int
    passed: int
    failed: int
    cost: int
    bound: int
    seed: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


def p2p_simulate(scheme: P2PScheme, trials: int, seed: int = 0) -> SimulationReport:
    rng = np.random.default_rng(seed)
    field = scheme.field
    n = scheme.A.cols
    passed = 0
    for _ in range(trials):
        x = rng.integers(0, field.order, size=n, dtype=np.int64)
        e = random_sparse(n, scheme.eps, field, rng)
        new = field.vadd(x, e)
        try:
            out = p2p_decode(scheme, p2p_encode(scheme, new), scheme.A @ x)
        except ValueError:
            continue
        passed += bool(np.array_equal(out, scheme.A @ new))
    return SimulationReport(trials, passed, trials - passed, scheme.cost, scheme.bound, seed)
