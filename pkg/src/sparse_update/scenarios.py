"""Storage scenarios: striped MDS updates and product-matrix MBR broadcast.

The MBR instance has N = 5 nodes, K = 3, D = 4 and alpha = 4, beta = 1.  Its
nine message symbols fill a symmetric 4 x 4 matrix M; node i stores
``psi_i @ M`` with ``psi_i = (1, g^i, g^2i, g^3i)``.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field as dc_field
from pathlib import Path

import numpy as np

from .broadcast import broadcast_simulate, build_broadcast_scheme
from .codes import build_striped_matrix
from .gf import FieldSpec, field_of_order, smallest_primitive_element
from .linalg import FieldMatrix, rank
from .mrsc import ConstructionError
from .update import build_p2p_scheme, lower_bound, p2p_simulate

SCENARIOS = ("striped-p2p", "mds-broadcast", "mbr-broadcast")

# message-matrix layout: entry -> symbol index (0-based), -1 for the zero entry
MBR_INDEX = ((0, 1, 2, 6),
             (1, 3, 4, 7),
             (2, 4, 5, 8),
             (6, 7, 8, -1))
MBR_N, MBR_K, MBR_D, MBR_ALPHA, MBR_BETA = 5, 3, 4, 4, 1
MBR_SYMBOLS = 9


@dataclass(frozen=True)
class MBRLayout:
    field: FieldSpec
    gamma: int

    @property
    def psi(self) -> np.ndarray:
        F, g = self.field, self.gamma
        return np.array([[F.pow(g, i * d) for d in range(MBR_D)] for i in range(1, MBR_N + 1)],
                        dtype=np.int64)

    def node_block(self, i: int) -> np.ndarray:
        """4 x 9 coefficients of psi_i @ M in terms of the message symbols."""
        if not 1 <= i <= MBR_N:
            raise ValueError(f"node index must be in 1..{MBR_N}, got {i}")
        F = self.field
        psi = self.psi[i - 1]
        block = np.zeros((MBR_ALPHA, MBR_SYMBOLS), dtype=np.int64)
        for r in range(MBR_ALPHA):
            for a in range(MBR_D):
                sym = MBR_INDEX[a][r]
                if sym >= 0:
                    block[r, sym] = F.add(int(block[r, sym]), int(psi[a]))
        return block

    def common_codeword(self, i: int, j: int) -> np.ndarray:
        """Coefficients of psi_i M psi_j^T, a symbol both nodes can compute."""
        if i == j:
            raise ValueError("nodes must differ")
        F = self.field
        pi, pj = self.psi[i - 1], self.psi[j - 1]
        c = np.zeros(MBR_SYMBOLS, dtype=np.int64)
        for a in range(MBR_D):
            for b in range(MBR_D):
                sym = MBR_INDEX[a][b]
                if sym >= 0:
                    c[sym] = F.add(int(c[sym]), F.mul(int(pi[a]), int(pj[b])))
        return c


def build_mbr_node_matrix(i: int, m: int, field: FieldSpec, gamma: int | None = None) -> FieldMatrix:
    """Node i's (4m x 9m) function of an m-stripe file."""
    if m < 1:
        raise ValueError("need at least one stripe")
    if gamma is None:
        gamma = smallest_primitive_element(field)
    block = MBRLayout(field, gamma).node_block(i)
    out = np.zeros((MBR_ALPHA * m, MBR_SYMBOLS * m), dtype=np.int64)
    for s in range(m):
        out[s * MBR_ALPHA:(s + 1) * MBR_ALPHA, s * MBR_SYMBOLS:(s + 1) * MBR_SYMBOLS] = block
    return FieldMatrix(field, out)


def mbr_common_codeword(i: int, j: int, field: FieldSpec, gamma: int | None = None) -> np.ndarray:
    if gamma is None:
        gamma = smallest_primitive_element(field)
    return MBRLayout(field, gamma).common_codeword(i, j)


# ----------------------------------------------------------------------
# scenario runner
# ----------------------------------------------------------------------

@dataclass
class ScenarioConfig:
    scenario: str
    q: int = 8
    eps: int = 1
    m: int = 4
    seed: int = 0
    trials: int = 100
    a: list[int] | None = None
    b: list[int] | None = None
    nodes: tuple[int, int] = (1, 2)
    extension_degree: int = 1
    max_tries: int = 100
    workers: int = 1
    escalate: bool = True
    max_q: int = 4096

    def validate(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}; expected one of {SCENARIOS}")
        if self.eps < 0 or self.m < 1 or self.trials < 0:
            raise ValueError("eps >= 0, m >= 1 and trials >= 0 required")
        if self.scenario == "striped-p2p" and self.eps > 0 and 2 * self.eps < self.m \
                and self.q <= self.m:
            raise ValueError(f"striped construction needs q > m, got q={self.q}, m={self.m}")
        if self.scenario == "mds-broadcast" and (self.a is None or self.b is None):
            raise ValueError("mds-broadcast needs coding vectors a and b")
        if self.scenario == "mbr-broadcast":
            i, j = self.nodes
            if i == j or not (1 <= i <= MBR_N and 1 <= j <= MBR_N):
                raise ValueError("mbr-broadcast needs two distinct nodes in 1..5")

    @classmethod
    def from_json(cls, obj: dict) -> "ScenarioConfig":
        known = {k: v for k, v in obj.items() if k in cls.__dataclass_fields__}
        if "nodes" in known:
            known["nodes"] = tuple(known["nodes"])
        cfg = cls(**known)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path: str | Path) -> "ScenarioConfig":
        return cls.from_json(json.loads(Path(path).read_text()))


@dataclass
class ScenarioReport:
    scenario: str
    q: int
    field_used: str
    q_requested: int
    seed: int
    cost: int
    bound: int
    individual_cost: int
    trials: int
    passed: dict = dc_field(default_factory=dict)
    certificates: dict = dc_field(default_factory=dict)
    gamma: int | None = None
    theta: int | None = None
    seconds: float = 0.0

    @property
    def saving(self) -> float:
        return 1.0 - self.cost / self.individual_cost if self.individual_cost else 0.0

    @property
    def ok(self) -> bool:
        return self.cost >= self.bound and all(v == self.trials for v in self.passed.values())

    def to_json(self) -> dict:
        out = asdict(self)
        out["saving_percent"] = round(100 * self.saving, 3)
        out["ok"] = self.ok
        return out


def run_scenario(cfg: ScenarioConfig) -> ScenarioReport:
    cfg.validate()
    field = field_of_order(cfg.q)
    t0 = time.perf_counter()
    if cfg.scenario == "striped-p2p":
        a = cfg.a if cfg.a is not None else [1] * 3
        A = build_striped_matrix(a, cfg.m, field)
        scheme = build_p2p_scheme(A, cfg.eps, "auto", seed=cfg.seed, max_tries=cfg.max_tries,
                                  workers=cfg.workers)
        sim = p2p_simulate(scheme, cfg.trials, cfg.seed)
        certs = {"H": scheme.certificate.to_json()} if scheme.certificate else {}
        return ScenarioReport(cfg.scenario, cfg.q, repr(scheme.field), cfg.q, cfg.seed, scheme.cost,
                              lower_bound(A.rows, cfg.eps), scheme.cost, cfg.trials,
                              {"receiver": sim.passed}, certs,
                              seconds=time.perf_counter() - t0)

    while True:
        try:
            return _run_broadcast(cfg, field, t0)
        except ConstructionError:
            bigger = field.order * field.p
            if not (cfg.escalate and cfg.scenario == "mbr-broadcast" and bigger <= cfg.max_q):
                raise
            field = field_of_order(bigger)


def _run_broadcast(cfg: ScenarioConfig, field: FieldSpec, t0: float) -> ScenarioReport:
    gamma = None
    if cfg.scenario == "mds-broadcast":
        A = build_striped_matrix(cfg.a, cfg.m, field)
        B = build_striped_matrix(cfg.b, cfg.m, field)
    else:
        gamma = smallest_primitive_element(field)
        A = build_mbr_node_matrix(cfg.nodes[0], cfg.m, field, gamma)
        B = build_mbr_node_matrix(cfg.nodes[1], cfg.m, field, gamma)
    if rank(A) != A.rows or rank(B) != B.rows:
        raise ValueError("node functions are rank deficient over this field")
    scheme = build_broadcast_scheme(A, B, cfg.eps, cfg.seed, extension_degree=cfg.extension_degree,
                                    max_tries=cfg.max_tries, workers=cfg.workers)
    sim = broadcast_simulate(scheme, cfg.trials, cfg.seed)
    bound = 4 * cfg.eps - scheme.theta if scheme.regime == "general" else scheme.individual_cost
    return ScenarioReport(cfg.scenario, field.order, repr(scheme.field), cfg.q, cfg.seed,
                          scheme.cost, bound, scheme.individual_cost, cfg.trials,
                          {"A": sim.passed_A, "B": sim.passed_B},
                          {k: v.to_json() for k, v in scheme.certificates.items()},
                          gamma=gamma, theta=scheme.theta, seconds=time.perf_counter() - t0)
