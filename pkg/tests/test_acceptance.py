"""Acceptance criteria, one test each.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import itertools
import math
import time

import numpy as np
import pytest

from sparse_update.broadcast import (
    broadcast_check,
    build_broadcast_scheme,
    compute_theta,
    optimal_broadcast_cost,
)
from sparse_update.codes import (
    LinearCode,
    build_striped_matrix,
    enumerate_k_cores,
    is_mrsc,
    is_subcode,
)
from sparse_update.gf import (
    field_of_order,
    is_independent_over_subfield,
    make_field,
    smallest_primitive_element,
    subfield_elements,
)
from sparse_update.linalg import FieldMatrix, rank, same_row_space
from sparse_update.mrsc import (
    ConstructionError,
    MooreMatrix,
    SandwichConditionError,
    SandwichSpec,
    check_extension_property,
    check_sandwich_necessary,
    construct_linearized_mrsc,
    construct_random_mrsc,
    construct_sandwiched_linearized,
    construct_sandwiched_random,
    construct_striped_mrsc,
    extend_code,
    extension_from_mrsc,
    lift_code,
    shorten_extension,
)
from sparse_update.scenarios import build_mbr_node_matrix, mbr_common_codeword
from sparse_update.update import (
    build_p2p_scheme,
    find_counterexample,
    p2p_decode,
    p2p_encode,
    random_sparse,
    sparse_vectors,
)

from oracles import brute_is_mrsc

F2 = make_field(2)
F8 = make_field(2, 3)
G0_ROWS = [[1, 1, 1, 0, 0, 0, 0, 0, 0], [0, 0, 0, 1, 1, 1, 0, 0, 0], [0, 0, 0, 0, 0, 0, 1, 1, 1]]
G_ROWS = [[1, 1, 1, 0, 0, 0, 1, 1, 1], [0, 0, 0, 1, 1, 1, 1, 1, 1]]
MODES = ("definition1", "cores", "parity", "all_sizes")


def random_code(F, n, k, rng):
    while True:
        M = FieldMatrix.random(F, k, n, rng)
        if rank(M) == k:
            return LinearCode(M)


def random_subcode(C0, k, rng):
    if k == 0:
        return LinearCode.zero(C0.field, C0.n)
    while True:
        R = FieldMatrix.random(C0.field, k, C0.k, rng)
        if rank(R) == k:
            return LinearCode(R @ C0.generator)


@pytest.mark.acceptance(1, "intro [9,2] code is an MRSC of the [9,3] code in all four modes")
def test_criterion_01_intro_example():
    start = time.perf_counter()
    C0 = LinearCode.from_rows(F2, G0_ROWS)
    C = LinearCode.from_rows(F2, G_ROWS)
    for mode in MODES:
        assert is_mrsc(C, C0, mode).is_mrsc
    assert is_mrsc(C, C0, "definition1").subsets_checked == math.comb(9, 2) == 36
    assert is_mrsc(C, C0, "all").subsets_checked == 36
    assert time.perf_counter() - start < 1.0


@pytest.mark.acceptance(2, "four MRSC tests agree on 100 random pairs")
def test_criterion_02_mode_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    orders = (2, 4, 8, 251)
    outcomes = set()
    for trial in range(100):
        F = field_of_order(orders[trial % 4])
        n = int(rng.integers(3, 11))
        t = int(rng.integers(1, min(n, 5) + 1))
        k = int(rng.integers(0, t + 1))
        C0 = random_code(F, n, t, rng)
        C = random_subcode(C0, k, rng)
        v = is_mrsc(C, C0, "all")
        assert len(set(v.per_mode.values())) == 1, (trial, v.per_mode)
        outcomes.add(v.is_mrsc)
        if F.order == 2 and n <= 8:
            assert v.is_mrsc == brute_is_mrsc(F, C0.generator.tolist(), C.generator.tolist(), n)
    assert outcomes == {True, False}
    assert time.perf_counter() - start < 30.0


@pytest.mark.acceptance(3, "linearized construction certified over GF(q^t) on 20 random codes")
def test_criterion_03_linearized():
    start = time.perf_counter()
    rng = np.random.default_rng(3)
    for trial in range(20):
        F = field_of_order((2, 4)[trial % 2])
        n = int(rng.integers(3, 10))
        t = int(rng.integers(1, min(n, 4) + 1))
        k = int(rng.integers(1, t + 1))
        C0 = random_code(F, n, t, rng)
        C = construct_linearized_mrsc(C0, k)
        assert C.field.order == F.order ** t and C.k == k
        # independent Definition-1 scan over the big field
        v = is_mrsc(C, lift_code(C0, C.field), "definition1")
        assert v.is_mrsc and v.subsets_checked == math.comb(n, k)
    assert time.perf_counter() - start < 60.0


@pytest.mark.acceptance(4, "striped [12,2] construction over GF(8), including a zero coefficient")
def test_criterion_04_striped():
    start = time.perf_counter()
    for a in ([1, 1, 1], [1, 0, 1]):
        C = construct_striped_mrsc(a, 4, 1, F8)
        CA = LinearCode(build_striped_matrix(a, 4, F8))
        assert (C.n, C.k, CA.k) == (12, 2, 4)
        v = is_mrsc(C, CA, "definition1")
        assert v.is_mrsc and v.subsets_checked == 66
    assert time.perf_counter() - start < 5.0


@pytest.mark.acceptance(5, "extension property and MRSC property imply each other on 20 instances")
def test_criterion_05_extension_round_trip():
    rng = np.random.default_rng(5)
    forward = converse = 0
    while forward < 20 or converse < 20:
        F = field_of_order((16, 32, 8)[(forward + converse) % 3])
        n = int(rng.integers(4, 10))
        t = int(rng.integers(2, min(n, 4) + 1))
        delta = int(rng.integers(1, t))
        C0 = random_code(F, n, t, rng)
        if forward < 20:
            C0e = extend_code(C0, FieldMatrix.random(F, t, delta, rng))
            if check_extension_property(C0e, delta):
                C = shorten_extension(C0e, delta)
                assert C.k == t - delta and is_mrsc(C, C0, "definition1")
                forward += 1
        if converse < 20:
            try:
                C = construct_random_mrsc(C0, t - delta, seed=int(rng.integers(1 << 30)), max_tries=5)
            except ConstructionError:
                continue
            Qmat = extension_from_mrsc(C0, C)
            C0e = extend_code(C0, Qmat)
            assert check_extension_property(C0e, delta)
            assert shorten_extension(C0e, delta).same_as(C)
            converse += 1


@pytest.mark.acceptance(6, "point-to-point decoding exact for all 85 single updates x 20 messages")
def test_criterion_06_p2p_end_to_end():
    start = time.perf_counter()
    A = build_striped_matrix([1, 1, 1], 4, F8)
    scheme = build_p2p_scheme(A, 1)
    assert scheme.cost == 2 == min(4, 2) and scheme.certificate.verified
    updates = list(sparse_vectors(12, 1, F8))
    assert len(updates) == 85
    rng = np.random.default_rng(6)
    for _ in range(20):
        x = rng.integers(0, 8, size=12)
        for e in updates:
            new = F8.vadd(x, e)
            assert np.array_equal(p2p_decode(scheme, p2p_encode(scheme, new), A @ x), A @ new)
    assert time.perf_counter() - start < 10.0


@pytest.mark.acceptance(7, "a rank-1 encoder yields a self-validating confusable pair")
def test_criterion_07_converse():
    A = build_striped_matrix([1, 1, 1], 4, F8)
    scheme = build_p2p_scheme(A, 1)
    assert find_counterexample(scheme.H, A, 1) is None
    H1 = FieldMatrix(F8, scheme.H.data[:1])
    assert rank(H1) == 1
    pair = find_counterexample(H1, A, 1)
    assert pair is not None
    assert pair.h_images_equal and pair.side_equal and pair.updates_differ
    assert np.array_equal(H1 @ F8.vadd(pair.x1, pair.e1), H1 @ F8.vadd(pair.x2, pair.e2))
    assert np.array_equal(A @ pair.x1, A @ pair.x2)
    assert not np.array_equal(A @ pair.e1, A @ pair.e2)


@pytest.mark.acceptance(8, "theta of the MBR pair equals ceil(2eps/4); common codeword matches c")
def test_criterion_08_theta():
    start = time.perf_counter()
    F = field_of_order(8)
    g = smallest_primitive_element(F)
    A = build_mbr_node_matrix(1, 2, F)
    B = build_mbr_node_matrix(2, 2, F)
    for eps in (1, 2):
        rep = compute_theta(A, B, eps)
        want = math.ceil(2 * eps / 4)
        assert rep.theta_A == rep.theta_B == rep.theta == want
        # every 2eps-subset is scanned; only the cores count as checked
        cores = sum(1 for _ in enumerate_k_cores(LinearCode(A), 2 * eps))
        cores += sum(1 for _ in enumerate_k_cores(LinearCode(B), 2 * eps))
        assert rep.subsets_checked == cores <= 2 * math.comb(18, 2 * eps)
    P = lambda e: F.pow(g, e)  # noqa: E731
    printed = [1, F.add(P(1), P(2)), F.add(P(2), P(4)), P(3), F.add(P(4), P(5)), P(6),
               F.add(P(3), P(6)), F.add(P(5), P(7)), F.add(P(7), P(8))]
    c = mbr_common_codeword(1, 2, F)
    assert c.tolist() == printed and all(printed)
    for e in (1, 2, 3):
        assert F.add(1, P(e)) != 0
    assert time.perf_counter() - start < 60.0


@pytest.mark.acceptance(9, "MBR broadcast with eps = 2: cost 7 vs 8, both receivers decode")
def test_criterion_09_mbr_broadcast():
    start = time.perf_counter()
    eps = 2
    scheme = None
    for q in (64, 128, 256, 512):
        F = field_of_order(q)
        A = build_mbr_node_matrix(1, 2, F)
        B = build_mbr_node_matrix(2, 2, F)
        try:
            scheme = build_broadcast_scheme(A, B, eps, seed=0, max_tries=30)
            break
        except ConstructionError:
            continue
    assert scheme is not None
    assert scheme.cost == 7 == 4 * eps - 1 and scheme.individual_cost == 8
    assert scheme.saving == pytest.approx(0.125) and abs(scheme.saving - 0.12) < 0.01
    assert all(c.verified for c in scheme.certificates.values())
    assert optimal_broadcast_cost(A, B, eps).cost == 7

    F = scheme.field
    n = 18
    exhaustive = 1 + n * (F.order - 1) + math.comb(n, 2) * (F.order - 1) ** 2
    rng = np.random.default_rng(9)
    x = rng.integers(0, F.order, size=n)
    singles = 0
    for e in sparse_vectors(n, 1, F):
        assert broadcast_check(scheme, x, e) == (True, True)
        singles += 1
    assert singles == 1 + n * (F.order - 1)
    # full weight-2 exhaustion (~10^7 updates at q = 256) is far beyond budget
    assert exhaustive > 10 ** 6
    for _ in range(10_000):
        x = rng.integers(0, F.order, size=n)
        e = random_sparse(n, eps, F, rng, exact=True)
        assert broadcast_check(scheme, x, e) == (True, True)
    assert time.perf_counter() - start < 600.0


@pytest.mark.acceptance(10, "independent striped functions: no broadcast gain, two stacked encoders")
def test_criterion_10_trivial_intersection():
    for m, eps in ((4, 1), (2, 1), (6, 2)):
        A = build_striped_matrix([1, 1, 1], m, F8)
        B = build_striped_matrix([1, 2, 4], m, F8)
        rep = compute_theta(A, B, eps)
        assert rep.trivial and rep.theta == 0 and rep.intersection_dim == 0
        scheme = build_broadcast_scheme(A, B, eps)
        assert scheme.regime == "trivial"
        assert scheme.cost == min(m, 2 * eps) + min(m, 2 * eps)
        pA = build_p2p_scheme(A, eps, seed=0)
        pB = build_p2p_scheme(B, eps, seed=1)
        assert same_row_space(scheme.H, pA.H.vstack(pB.H))


@pytest.mark.acceptance(11, "both sandwich routes succeed when the necessary condition holds, refuse otherwise")
def test_criterion_11_sandwich():
    rng = np.random.default_rng(11)
    passing = failing = 0
    while passing < 10 or failing < 10:
        q = (2, 4)[(passing + failing) % 2]
        F = field_of_order(q)
        n = int(rng.integers(4, 8))
        t = int(rng.integers(3, min(n, 4) + 1))
        s = int(rng.integers(1, t - 1))
        k = int(rng.integers(s + 1, t))
        C0 = random_code(F, n, t, rng)
        Chat = random_subcode(C0, s, rng)
        spec = SandwichSpec(C0, Chat, k)
        if check_sandwich_necessary(spec):
            if passing >= 10:
                continue
            lin = construct_sandwiched_linearized(spec)
            ran = construct_sandwiched_random(spec, seed=passing, extension_degree={2: 6, 4: 3}[q])
            for C in (lin, ran):
                assert C.k == k and C.certificate.verified
                assert is_subcode(lift_code(Chat, C.field), C)
                assert is_mrsc(C, lift_code(C0, C.field), "definition1")
            passing += 1
        else:
            if failing >= 10:
                continue
            with pytest.raises(SandwichConditionError):
                construct_sandwiched_linearized(spec)
            with pytest.raises(SandwichConditionError):
                construct_sandwiched_random(spec, extension_degree=3)
            failing += 1


def _moore_invertible(F, q, betas):
    return rank(MooreMatrix(F, q, np.array(betas), len(betas)).matrix()) == len(betas)


@pytest.mark.acceptance(12, "Moore matrices of independent evaluations are invertible up to order 512")
def test_criterion_12_moore():
    F = field_of_order(8)
    for k in (1, 2, 3):
        count = 0
        for betas in itertools.permutations(range(1, 8), k):
            if is_independent_over_subfield(F, betas, 2):
                assert _moore_invertible(F, 2, betas)
                count += 1
        assert count == math.prod(8 - 2 ** i for i in range(k))
    rng = np.random.default_rng(12)
    pairs = [(q, t) for q in range(2, 512) for t in range(2, 10)
             if q ** t <= 512 and len(_factor(q)) == 1 and (q, t) != (2, 3)]
    assert (2, 9) in pairs and (4, 4) in pairs and (19, 2) in pairs and (22, 2) not in pairs
    for q, t in pairs:
        big = field_of_order(q ** t)
        sub = subfield_elements(big, q)
        assert len(sub) == q
        k = min(3, t)
        done = 0
        while done < 1000:
            betas = [int(b) for b in rng.integers(1, big.order, size=k)]
            if is_independent_over_subfield(big, betas, q):
                assert _moore_invertible(big, q, betas), (q, t, betas)
                done += 1


def _factor(q):
    return {p for p in range(2, q + 1) if q % p == 0 and all(p % d for d in range(2, p))}
