"""Constructions of maximally recoverable subcodes (MRSCs).

Every construction returns a code whose ``certificate`` records a full
Definition-1 scan against the supercode.  Field-size sufficiency bounds are
not used to decide anything; small fields are attempted and failures are
reported with a witness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .codes import (
    LinearCode,
    MRSCVerdict,
    NotSubcodeError,
    dual,
    is_mrsc,
    puncture,
    shorten,
    subcode_factor,
    build_striped_matrix,
)
from .gf import FieldSpec, embedding, extension_of, subfield_basis
from .linalg import (
    FieldMatrix,
    SupportSet,
    kernel_basis,
    rank,
    rank_of_columns,
    solve_left,
)


class ConstructionError(RuntimeError):
    """A construction could not produce a certified code."""

    def __init__(self, message: str, witness: SupportSet | None = None, violations: int | None = None):
        super().__init__(message)
        self.witness = witness
        self.violations = violations


class SandwichConditionError(ConstructionError):
    """The necessary condition for a sandwiched MRSC fails."""


def _certify(C: LinearCode, C0: LinearCode, method: str, workers: int = 1) -> MRSCVerdict:
    """Attach a Definition-1 certificate; raise if the scan finds a violation."""
    verdict = is_mrsc(C, C0, "definition1", workers=workers)
    C.certificate = verdict.certificate(method)
    if not verdict:
        raise ConstructionError(f"{method} construction failed certification", verdict.witness)
    return verdict


def lift_code(C: LinearCode, big: FieldSpec) -> LinearCode:
    """The same generator read over an extension field."""
    if C.field == big:
        return C
    return C.lift(big, embedding(C.field, big))


# ----------------------------------------------------------------------
# randomized construction
# ----------------------------------------------------------------------

def construct_random_mrsc(C0: LinearCode, k: int, seed: int = 0, max_tries: int = 100,
                          workers: int = 1) -> LinearCode:
    """k-dimensional MRSC of C0 as G = R G0 with R uniformly random, retried until certified."""
    if not 0 <= k <= C0.k:
        raise ValueError(f"target dimension {k} outside [0, {C0.k}]")
    if k == 0:
        C = LinearCode.zero(C0.field, C0.n)
        _certify(C, C0, "random")
        return C
    if k == C0.k:
        C = LinearCode(C0.generator)
        _certify(C, C0, "random")
        return C
    rng = np.random.default_rng(seed)
    best: MRSCVerdict | None = None
    for _ in range(max_tries):
        R = FieldMatrix.random(C0.field, k, C0.k, rng)
        G = R @ C0.generator
        if rank(G) != k:
            continue
        C = LinearCode(G)
        verdict = is_mrsc(C, C0, "definition1", count_all=True, workers=workers)
        if verdict:
            C.certificate = verdict.certificate("random")
            return C
        if best is None or verdict.violations < best.violations:
            best = verdict
    raise ConstructionError(
        f"no certified [{C0.n}, {k}] MRSC over {C0.field!r} after {max_tries} tries",
        best.witness if best is not None else None,
        best.violations if best is not None else None)


# ----------------------------------------------------------------------
# linearized (Moore matrix) construction
# ----------------------------------------------------------------------

@dataclass
class MooreMatrix:
    """Rows are the successive q-power images of ``evaluations``."""

    field: FieldSpec
    base_q: int
    evaluations: np.ndarray
    depth: int

    def matrix(self) -> FieldMatrix:
        rows = []
        cur = [int(b) for b in self.evaluations]
        for _ in range(self.depth):
            rows.append(cur)
            cur = [self.field.pow(b, self.base_q) for b in cur]
        return FieldMatrix(self.field, np.array(rows, dtype=np.int64).reshape(self.depth, len(cur)),
                           cols=len(self.evaluations))


def linearized_evaluations(G: FieldMatrix, big: FieldSpec) -> np.ndarray:
    """beta = alpha G over the extension, alpha the polynomial basis over GF(q)."""
    emb = embedding(G.field, big)
    alpha = np.array([subfield_basis(big, G.field.order)], dtype=np.int64)
    return big.matmul(alpha, emb[G.data])[0]


def construct_linearized_mrsc(C0: LinearCode, k: int) -> LinearCode:
    """k-dimensional MRSC of C0 lifted to GF(q^t), t = dim C0, from a Moore matrix."""
    t = C0.k
    if not 0 <= k <= t:
        raise ValueError(f"target dimension {k} outside [0, {t}]")
    big = extension_of(C0.field, max(t, 1))
    C0_big = lift_code(C0, big)
    if k == 0:
        C = LinearCode.zero(big, C0.n)
    else:
        beta = linearized_evaluations(C0.generator, big)
        C = LinearCode(MooreMatrix(big, C0.field.order, beta, k).matrix())
    _certify(C, C0_big, "linearized")
    return C


# ----------------------------------------------------------------------
# extension then shorten
# ----------------------------------------------------------------------

@dataclass
class ExtensionVerdict:
    ok: bool
    witness: SupportSet | None = None
    subsets_checked: int = 0

    def __bool__(self) -> bool:
        return self.ok


def extend_code(C0: LinearCode, Qmat: FieldMatrix) -> LinearCode:
    """The [n + Δ, t] code generated by [G0 | Qmat]."""
    if Qmat.rows != C0.k:
        raise ValueError(f"extension block needs {C0.k} rows, got {Qmat.rows}")
    return LinearCode(C0.generator.hstack(Qmat))


def check_extension_property(C0e: LinearCode, delta: int) -> ExtensionVerdict:
    """rank(G0e on S ∪ tail) = rank(G0 on S) + Δ for every |S| = t - Δ in [n]."""
    t = C0e.k
    n = C0e.n - delta
    if not 0 <= delta < max(t, 1):
        raise ValueError(f"need 0 <= delta < t, got delta={delta}, t={t}")
    tail = list(range(n, n + delta))
    G = C0e.generator
    checked = 0
    for S in itertools.combinations(range(n), t - delta):
        checked += 1
        if rank_of_columns(G, list(S) + tail) != rank_of_columns(G, S) + delta:
            return ExtensionVerdict(False, SupportSet(n, S), checked)
    return ExtensionVerdict(True, None, checked)


def shorten_extension(C0e: LinearCode, delta: int) -> LinearCode:
    """(C0e)^[n], certified as an MRSC of the code punctured to [n]."""
    n = C0e.n - delta
    verdict = check_extension_property(C0e, delta)
    if not verdict:
        raise ConstructionError("extension property violated", verdict.witness)
    C = shorten(C0e, range(n))
    _certify(C, puncture(C0e, range(n)), "extension")
    return C


def extension_from_mrsc(C0: LinearCode, C: LinearCode) -> FieldMatrix:
    """Qmat with [G0 | Qmat] satisfying the extension property, from an MRSC C of C0.

    Parity view: H = [H0; He] checks C, and [[H0, 0], [He, I]] checks the
    extension.
    """
    subcode_factor(C, C0)
    n, t, k = C0.n, C0.k, C.k
    delta = t - k
    H0 = dual(C0).generator
    HC = dual(C).generator
    rows = [r for r in H0.data]
    cur = rank(H0)
    He = []
    for r in HC.data:
        if cur == n - k:
            break
        trial = FieldMatrix(C0.field, np.vstack(rows + [r]), cols=n)
        if rank(trial) > cur:
            rows.append(r)
            He.append(r)
            cur += 1
    He = np.array(He, dtype=np.int64).reshape(delta, n)
    top = np.hstack([H0.data, np.zeros((H0.rows, delta), dtype=np.int64)])
    bottom = np.hstack([He, np.eye(delta, dtype=np.int64)])
    H0e = FieldMatrix(C0.field, np.vstack([top, bottom]), cols=n + delta)
    G0e = kernel_basis(H0e)
    X = solve_left(FieldMatrix(C0.field, G0e.data[:, :n], cols=n), C0.generator)
    return X @ FieldMatrix(C0.field, G0e.data[:, n:], cols=delta)


def vandermonde_parity(field: FieldSpec, m: int, delta: int) -> FieldMatrix:
    """m x Δ matrix whose transpose generates an [m, Δ] Reed-Solomon code.

    Evaluation points are the field elements 1, 2, ..., m.
    """
    if field.order <= m:
        raise ValueError(f"need field order > m = {m}, got {field.order}")
    Qt = np.zeros((delta, m), dtype=np.int64)
    for j in range(m):
        x = j + 1
        for i in range(delta):
            Qt[i, j] = field.pow(x, i)
    return FieldMatrix(field, Qt.T.copy(), cols=delta)


def construct_striped_mrsc(a, m: int, eps: int, field: FieldSpec) -> LinearCode:
    """[mK, 2eps] MRSC of the striped code generated by diag(a, ..., a)."""
    if m < 2 * eps:
        raise ValueError(f"need m >= 2*eps, got m={m}, eps={eps}")
    if field.order <= m:
        raise ValueError(f"need field order q > m = {m}, got q = {field.order}")
    A = build_striped_matrix(a, m, field)
    CA = LinearCode.span(A)
    delta = m - 2 * eps
    if eps == 0:
        C = LinearCode.zero(field, A.cols)
        _certify(C, CA, "striped")
        return C
    Qmat = vandermonde_parity(field, m, delta)
    # keep the row order of A so that Qmat lines up with the stripes
    C0e = LinearCode(A.hstack(Qmat)) if CA.k == m else extend_code(CA, Qmat)
    C = shorten_extension(C0e, delta)
    _certify(C, CA, "striped")
    return C


# ----------------------------------------------------------------------
# sandwiched MRSCs
# ----------------------------------------------------------------------

@dataclass
class SandwichSpec:
    """Find an [n, k] MRSC of C0 that contains C_hat."""

    C0: LinearCode
    C_hat: LinearCode
    k: int

    def __post_init__(self):
        subcode_factor(self.C_hat, self.C0)
        if not self.C_hat.k <= self.k <= self.C0.k:
            raise ValueError(f"need s <= k <= t, got s={self.C_hat.k}, k={self.k}, t={self.C0.k}")

    @property
    def s(self) -> int:
        return self.C_hat.k

    @property
    def t(self) -> int:
        return self.C0.k


def check_sandwich_necessary(spec: SandwichSpec) -> ExtensionVerdict:
    """rank(Ĝ|_S) = s on every k-core S of C0's dual."""
    G0, Gh = spec.C0.generator, spec.C_hat.generator
    checked = 0
    for S in itertools.combinations(range(spec.C0.n), spec.k):
        if rank_of_columns(G0, S) != spec.k:
            continue
        checked += 1
        if rank_of_columns(Gh, S) != spec.s:
            return ExtensionVerdict(False, SupportSet(spec.C0.n, S), checked)
    return ExtensionVerdict(True, None, checked)


def _require_necessary(spec: SandwichSpec) -> None:
    verdict = check_sandwich_necessary(spec)
    if not verdict:
        raise SandwichConditionError(
            f"necessary condition fails on the core {verdict.witness.indices}", verdict.witness)


def construct_sandwiched_random(spec: SandwichSpec, seed: int = 0, max_tries: int = 100,
                                extension_degree: int = 1, workers: int = 1) -> LinearCode:
    """Parity-check route: H = [H0; ΔH] with the rows of ΔH drawn at random from Ĉ⊥.

    With ``extension_degree`` > 1 both codes are first lifted to GF(q^e).
    """
    if extension_degree > 1:
        big = extension_of(spec.C0.field, extension_degree)
        spec = SandwichSpec(lift_code(spec.C0, big), lift_code(spec.C_hat, big), spec.k)
    _require_necessary(spec)
    C0, Chat, k = spec.C0, spec.C_hat, spec.k
    n, t, s = C0.n, C0.k, Chat.k
    if k == s:
        C = LinearCode(Chat.generator)
        _certify(C, C0, "sandwich-random", workers)
        return C
    if k == t:
        C = LinearCode(C0.generator)
        _certify(C, C0, "sandwich-random", workers)
        return C
    H0 = dual(C0).generator
    Dhat = dual(Chat).generator
    rng = np.random.default_rng(seed)
    best: MRSCVerdict | None = None
    for _ in range(max_tries):
        R = FieldMatrix.random(C0.field, t - k, Dhat.rows, rng)
        H = H0.vstack(R @ Dhat)
        if rank(H) != n - k:
            continue
        C = LinearCode(kernel_basis(H))
        verdict = is_mrsc(C, C0, "definition1", count_all=True, workers=workers)
        if verdict:
            subcode_factor(Chat, C)
            C.certificate = verdict.certificate("sandwich-random")
            return C
        if best is None or verdict.violations < best.violations:
            best = verdict
    raise ConstructionError(
        f"no certified sandwiched [{n}, {k}] MRSC over {C0.field!r} after {max_tries} tries",
        best.witness if best is not None else None,
        best.violations if best is not None else None)


def completion_rows(C0: LinearCode, C_hat: LinearCode) -> FieldMatrix:
    """Rows of G0, taken greedily in order, that extend Ĝ to a basis of C0."""
    rows = [r for r in C_hat.generator.data]
    cur = C_hat.k
    picked = []
    for r in C0.generator.data:
        if cur == C0.k:
            break
        trial = FieldMatrix(C0.field, np.vstack(rows + [r]), cols=C0.n)
        if rank(trial) > cur:
            rows.append(r)
            picked.append(r)
            cur += 1
    return FieldMatrix(C0.field, np.array(picked, dtype=np.int64).reshape(len(picked), C0.n), cols=C0.n)


def construct_sandwiched_linearized(spec: SandwichSpec) -> LinearCode:
    """[Ĝ ; Moore(alpha B, k - s)] over GF(q^(t-s)), B completing Ĝ to a basis of C0."""
    _require_necessary(spec)
    C0, Chat, k = spec.C0, spec.C_hat, spec.k
    s, t = spec.s, spec.t
    big = C0.field if k == s else extension_of(C0.field, t - s)
    C0_big = lift_code(C0, big)
    Chat_big = lift_code(Chat, big)
    if k == s:
        G = Chat_big.generator
    else:
        B = completion_rows(C0, Chat)
        beta = linearized_evaluations(B, big)
        G = Chat_big.generator.vstack(MooreMatrix(big, C0.field.order, beta, k - s).matrix())
    if rank(G) != k:
        raise ConstructionError("stacked generator is rank deficient")
    C = LinearCode(G)
    try:
        subcode_factor(Chat_big, C)
    except NotSubcodeError:  # pragma: no cover - Ĝ is stacked in by construction
        raise ConstructionError("prescribed subcode not contained") from None
    _certify(C, C0_big, "sandwich-linearized")
    return C
