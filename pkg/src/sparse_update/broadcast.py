"""Two-receiver broadcast updates.

Receivers A and B hold ``A @ x`` and ``B @ x``.  A single broadcast
``H @ (x + e)`` must let each of them refresh its own function.  When the
row spaces of A and B meet, part of the two point-to-point encoders can be
shared, and the saving is governed by theta: the smallest rank the
intersection generator keeps on a 2eps-core of either receiver's dual.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .codes import Certificate, LinearCode
from .gf import FieldSpec, extension_of
from .linalg import (
    FieldMatrix,
    SupportSet,
    rank,
    rank_of_columns,
    row_space_intersection,
    row_space_sum,
    same_row_space,
    solve_left,
)
from .mrsc import (
    ConstructionError,
    SandwichSpec,
    construct_linearized_mrsc,
    construct_random_mrsc,
    construct_sandwiched_random,
    lift_code,
)
from .update import build_p2p_scheme, random_sparse, syndrome_decode

RECEIVERS = ("A", "B")
DEFAULT_THETA_BUDGET = 500_000


class ThetaBudgetError(ValueError):
    """Core enumeration would exceed the configured subset budget."""


class UncoveredRegimeError(ValueError):
    """Nontrivial intersection with a receiver of rank <= 2eps."""


# ----------------------------------------------------------------------
# theta
# ----------------------------------------------------------------------

@dataclass
class ThetaReport:
    theta_A: int
    theta_B: int
    core_A: SupportSet | None
    core_B: SupportSet | None
    intersection_dim: int
    subsets_checked: int

    @property
    def theta(self) -> int:
        return min(self.theta_A, self.theta_B)

    @property
    def trivial(self) -> bool:
        return self.intersection_dim == 0

    def to_json(self) -> dict:
        return {"theta": self.theta, "theta_A": self.theta_A, "theta_B": self.theta_B,
                "core_A": list(self.core_A.indices) if self.core_A else None,
                "core_B": list(self.core_B.indices) if self.core_B else None,
                "intersection_dim": self.intersection_dim,
                "subsets_checked": self.subsets_checked}


def _theta_chunk(args):
    X, Ht, size, start, stop = args
    best, arg, checked = None, None, 0
    for S in itertools.islice(itertools.combinations(range(X.cols), size), start, stop):
        if rank_of_columns(X, S) != size:
            continue
        checked += 1
        r = rank_of_columns(Ht, S) if Ht.rows else 0
        if best is None or r < best:
            best, arg = r, S
            if r == 0:
                break
    return best, arg, checked


def _theta_one(X: FieldMatrix, Ht: FieldMatrix, size: int, workers: int) -> tuple[int, tuple, int]:
    total = math.comb(X.cols, size)
    if workers > 1 and total > 2000:
        step = -(-total // workers)
        jobs = [(X, Ht, size, s, min(s + step, total)) for s in range(0, total, step)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_theta_chunk, jobs))
    else:
        parts = [_theta_chunk((X, Ht, size, 0, total))]
    found = [(b, a) for b, a, _ in parts if b is not None]
    checked = sum(c for _, _, c in parts)
    if not found:
        raise ValueError(f"no {size}-core exists; receiver rank {rank(X)} is below {size}")
    best, arg = min(found, key=lambda p: (p[0], p[1]))
    return best, arg, checked


def compute_theta(A: FieldMatrix, B: FieldMatrix, eps: int, budget: int = DEFAULT_THETA_BUDGET,
                  workers: int = 1) -> ThetaReport:
    """Brute-force theta over the 2eps-cores of both receivers' duals.

    The argmin cores are the lexicographically first minimizers.
    """
    if A.field != B.field or A.cols != B.cols:
        raise ValueError("A and B must share field and length")
    if rank(A) != A.rows or rank(B) != B.rows:
        raise ValueError("A and B must have full row rank")
    n, size = A.cols, 2 * eps
    total = 2 * math.comb(n, size)
    if total > budget:
        raise ThetaBudgetError(f"theta needs {total} subsets, budget is {budget}")
    Ht = row_space_intersection(A, B)
    tA, sA, cA = _theta_one(A, Ht, size, workers)
    tB, sB, cB = _theta_one(B, Ht, size, workers)
    return ThetaReport(tA, tB, SupportSet(n, sA), SupportSet(n, sB), Ht.rows, cA + cB)


# ----------------------------------------------------------------------
# optimal cost
# ----------------------------------------------------------------------

@dataclass
class BroadcastCost:
    cost: int | None
    regime: str
    individual: int
    theta: ThetaReport | None = None

    @property
    def saving(self) -> float | None:
        if self.cost is None or self.individual == 0:
            return None
        return 1.0 - self.cost / self.individual

    def to_json(self) -> dict:
        return {"cost": self.cost, "regime": self.regime, "individual": self.individual,
                "saving": self.saving,
                "theta": self.theta.to_json() if self.theta else None}


def optimal_broadcast_cost(A: FieldMatrix, B: FieldMatrix, eps: int,
                           budget: int = DEFAULT_THETA_BUDGET, workers: int = 1) -> BroadcastCost:
    """Optimal broadcast cost and its regime: ``trivial``, ``general`` or ``uncovered``.

    In the uncovered regime ``cost`` is None: no closed form is known there.
    """
    mA, mB = A.rows, B.rows
    individual = min(mA, 2 * eps) + min(mB, 2 * eps)
    if eps == 0:
        return BroadcastCost(0, "trivial", 0)
    inter = row_space_intersection(A, B)
    if inter.rows == 0:
        return BroadcastCost(individual, "trivial", individual)
    if mA <= 2 * eps or mB <= 2 * eps:
        return BroadcastCost(None, "uncovered", individual)
    report = compute_theta(A, B, eps, budget, workers)
    return BroadcastCost(4 * eps - report.theta, "general", individual, report)


# ----------------------------------------------------------------------
# scheme
# ----------------------------------------------------------------------

@dataclass
class BroadcastScheme:
    """Shared encoder H with per-receiver projections H_X = T_X H and H_X = S_X X."""

    A: FieldMatrix
    B: FieldMatrix
    eps: int
    H: FieldMatrix
    H_A: FieldMatrix
    H_B: FieldMatrix
    T_A: FieldMatrix
    T_B: FieldMatrix
    S_A: FieldMatrix
    S_B: FieldMatrix
    H_hat: FieldMatrix
    regime: str
    theta: int
    seed: int = 0
    certificates: dict = dc_field(default_factory=dict)

    @property
    def field(self) -> FieldSpec:
        return self.H.field

    @property
    def cost(self) -> int:
        return self.H.rows

    @property
    def individual_cost(self) -> int:
        return min(self.A.rows, 2 * self.eps) + min(self.B.rows, 2 * self.eps)

    @property
    def saving(self) -> float:
        return 1.0 - self.cost / self.individual_cost if self.individual_cost else 0.0

    def receiver(self, tag: str) -> tuple[FieldMatrix, FieldMatrix, FieldMatrix, FieldMatrix]:
        if tag == "A":
            return self.A, self.H_A, self.T_A, self.S_A
        if tag == "B":
            return self.B, self.H_B, self.T_B, self.S_B
        raise ValueError(f"unknown receiver {tag!r}; expected 'A' or 'B'")

    _MATS = ("A", "B", "H", "H_A", "H_B", "T_A", "T_B", "S_A", "S_B", "H_hat")

    def to_json(self) -> dict:
        out = {"type": "broadcast", "eps": self.eps, "regime": self.regime, "theta": self.theta,
               "seed": self.seed, "cost": self.cost, "individual_cost": self.individual_cost}
        for name in self._MATS:
            out[name] = getattr(self, name).to_json()
        out["certificates"] = {k: v.to_json() for k, v in self.certificates.items()}
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "BroadcastScheme":
        mats = {name: FieldMatrix.from_json(obj[name]) for name in cls._MATS}
        certs = {k: Certificate.from_json(v) for k, v in obj.get("certificates", {}).items()}
        return cls(eps=int(obj["eps"]), regime=obj["regime"], theta=int(obj["theta"]),
                   seed=int(obj.get("seed", 0)), certificates=certs, **mats)


def _trivial_scheme(A, B, eps, seed, max_tries, workers) -> BroadcastScheme:
    pA = build_p2p_scheme(A, eps, "auto", seed=seed, max_tries=max_tries, workers=workers)
    pB = build_p2p_scheme(B, eps, "auto", seed=seed + 1, max_tries=max_tries, workers=workers)
    field, n = A.field, A.cols
    H = pA.H.vstack(pB.H)
    la, lb = pA.cost, pB.cost
    eye = np.eye(la + lb, dtype=np.int64)
    T_A = FieldMatrix(field, eye[:la], cols=la + lb)
    T_B = FieldMatrix(field, eye[la:], cols=la + lb)
    certs = {k: v for k, v in (("A", pA.certificate), ("B", pB.certificate)) if v is not None}
    return BroadcastScheme(A, B, eps, H, pA.H, pB.H, T_A, T_B, pA.S, pB.S,
                           FieldMatrix.empty(field, n), "trivial", 0, seed, certs)


def build_broadcast_scheme(A: FieldMatrix, B: FieldMatrix, eps: int, seed: int = 0, *,
                           route: str = "random", extension_degree: int = 1,
                           max_tries: int = 100, budget: int = DEFAULT_THETA_BUDGET,
                           workers: int = 1) -> BroadcastScheme:
    """Build an optimal-cost broadcast encoder.

    Trivial intersection: two independent point-to-point encoders stacked.
    Otherwise the shared code Ĉ is a theta-dimensional MRSC of the
    intersection (``route`` = ``random`` or ``linearized``), each receiver
    gets a sandwiched 2eps-dimensional MRSC of its code containing Ĉ, and H
    spans their sum.  With ``extension_degree`` > 1 (random route) the whole
    general-case construction runs over GF(q^e).
    """
    if route not in ("random", "linearized"):
        raise ValueError(f"unknown route {route!r}")
    opt = optimal_broadcast_cost(A, B, eps, budget, workers)
    if opt.regime == "uncovered":
        raise UncoveredRegimeError(
            "intersection is nontrivial and some receiver has rank <= 2eps; "
            "no optimal cost is known for this regime")
    if opt.regime == "trivial":
        return _trivial_scheme(A, B, eps, seed, max_tries, workers)

    theta = opt.theta.theta
    Ct = LinearCode(row_space_intersection(A, B))
    if route == "linearized":
        C_hat = construct_linearized_mrsc(Ct, theta) if theta else LinearCode.zero(A.field, A.cols)
        big = C_hat.field
    else:
        big = extension_of(A.field, extension_degree) if extension_degree > 1 else A.field
        Ct = lift_code(Ct, big)
        C_hat = construct_random_mrsc(Ct, theta, seed=seed, max_tries=max_tries, workers=workers)
    CA = lift_code(LinearCode(A), big)
    CB = lift_code(LinearCode(B), big)
    C_HA = construct_sandwiched_random(SandwichSpec(CA, C_hat, 2 * eps), seed=seed,
                                       max_tries=max_tries, workers=workers)
    C_HB = construct_sandwiched_random(SandwichSpec(CB, C_hat, 2 * eps), seed=seed + 1,
                                       max_tries=max_tries, workers=workers)
    H_A, H_B = C_HA.generator, C_HB.generator
    H = row_space_sum(H_A, H_B)
    H_hat = row_space_intersection(H_A, H_B)
    if not same_row_space(H_hat, C_hat.generator) or H.rows != opt.cost:
        raise ConstructionError(
            f"shared part has dimension {H_hat.rows}, expected {theta}; cost {H.rows} vs {opt.cost}")
    Abig, Bbig = CA.generator, CB.generator
    certs = {"C_hat": C_hat.certificate, "A": C_HA.certificate, "B": C_HB.certificate}
    return BroadcastScheme(
        Abig, Bbig, eps, H, H_A, H_B, solve_left(H, H_A), solve_left(H, H_B),
        solve_left(Abig, H_A), solve_left(Bbig, H_B), H_hat, "general", theta, seed,
        {k: v for k, v in certs.items() if v is not None})


def broadcast_encode(scheme: BroadcastScheme, x_new) -> np.ndarray:
    x_new = np.asarray(x_new, dtype=np.int64)
    if x_new.shape != (scheme.H.cols,):
        raise ValueError(f"message must have length {scheme.H.cols}")
    if scheme.H.rows == 0:
        return np.zeros(0, dtype=np.int64)
    return scheme.H @ x_new


def broadcast_decode(scheme: BroadcastScheme, receiver: str, y, side) -> np.ndarray:
    """Receiver X projects y onto H_X and runs the point-to-point decoder."""
    X, H_X, T_X, S_X = scheme.receiver(receiver)
    y = np.asarray(y, dtype=np.int64)
    if y.shape != (scheme.H.rows,):
        raise ValueError(f"broadcast must have length {scheme.H.rows}")
    y_X = T_X @ y if T_X.rows and T_X.cols else np.zeros(T_X.rows, dtype=np.int64)
    return syndrome_decode(H_X, S_X, X, scheme.eps, y_X, side)


@dataclass
class BroadcastSimulation:
    trials: int
    passed_A: int
    passed_B: int
    cost: int
    individual_cost: int
    seed: int

    @property
    def ok(self) -> bool:
        return self.passed_A == self.trials and self.passed_B == self.trials

    def to_json(self) -> dict:
        return {**self.__dict__, "ok": self.ok}


def broadcast_check(scheme: BroadcastScheme, x, e) -> tuple[bool, bool]:
    """Whether each receiver recovers its function of x + e."""
    field = scheme.field
    new = field.vadd(x, e)
    y = broadcast_encode(scheme, new)
    out = []
    for tag in RECEIVERS:
        X = scheme.receiver(tag)[0]
        try:
            got = broadcast_decode(scheme, tag, y, X @ x)
        except ValueError:
            out.append(False)
            continue
        out.append(bool(np.array_equal(got, X @ new)))
    return out[0], out[1]


def broadcast_simulate(scheme: BroadcastScheme, trials: int, seed: int = 0) -> BroadcastSimulation:
    rng = np.random.default_rng(seed)
    field = scheme.field
    n = scheme.H.cols
    pa = pb = 0
    for _ in range(trials):
        x = rng.integers(0, field.order, size=n, dtype=np.int64)
        e = random_sparse(n, scheme.eps, field, rng)
        a, b = broadcast_check(scheme, x, e)
        pa += a
        pb += b
    return BroadcastSimulation(trials, pa, pb, scheme.cost, scheme.individual_cost, seed)
