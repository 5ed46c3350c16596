"""Optimal linear schemes for updating functions of sparsely edited messages."""

from .gf import FieldError, FieldSpec, field_of_order, make_field, smallest_primitive_element
from .linalg import FieldMatrix, SparseVector, SupportSet, kernel_basis, rank, rref, solve
from .codes import LinearCode, build_striped_matrix, dual, enumerate_k_cores, is_mrsc, puncture, shorten
from .mrsc import (
    ConstructionError,
    SandwichSpec,
    construct_linearized_mrsc,
    construct_random_mrsc,
    construct_sandwiched_linearized,
    construct_sandwiched_random,
    construct_striped_mrsc,
)
from .update import P2PScheme, build_p2p_scheme, find_counterexample, p2p_decode, p2p_encode
from .broadcast import (
    BroadcastScheme,
    broadcast_decode,
    broadcast_encode,
    build_broadcast_scheme,
    compute_theta,
    optimal_broadcast_cost,
)
from .scenarios import ScenarioConfig, run_scenario

__version__ = "0.1.0"
