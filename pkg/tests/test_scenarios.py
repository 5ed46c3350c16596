import json

import numpy as np
import pytest

from sparse_update.gf import field_of_order, smallest_primitive_element
from sparse_update.linalg import FieldMatrix, in_row_space, rank, row_space_intersection
from sparse_update.mrsc import ConstructionError
from sparse_update.scenarios import (
    MBRLayout,
    ScenarioConfig,
    build_mbr_node_matrix,
    mbr_common_codeword,
    run_scenario,
)

_ = None  # blank entry in the printed matrices

# exponents of gamma in the printed node blocks
A1_POWERS = [[0, 1, 2, _, _, _, 3, _, _],
             [_, 0, _, 1, 2, _, _, 3, _],
             [_, _, 0, _, 1, 2, _, _, 3],
             [_, _, _, _, _, _, 0, 1, 2]]
B1_POWERS = [[0, 2, 4, _, _, _, 6, _, _],
             [_, 0, _, 2, 4, _, _, 6, _],
             [_, _, 0, _, 2, 4, _, _, 6],
             [_, _, _, _, _, _, 0, 2, 4]]
# each entry of c is a sum of gamma powers
C_POWERS = [(0,), (1, 2), (2, 4), (3,), (4, 5), (6,), (3, 6), (5, 7), (7, 8)]


def from_powers(F, g, rows):
    return [[0 if e is None else F.pow(g, e) for e in row] for row in rows]


@pytest.mark.parametrize("q", [8, 16, 64, 256])
def test_node_blocks_match_printed_matrices(q):
    F = field_of_order(q)
    g = smallest_primitive_element(F)
    assert build_mbr_node_matrix(1, 1, F).tolist() == from_powers(F, g, A1_POWERS)
    assert build_mbr_node_matrix(2, 1, F).tolist() == from_powers(F, g, B1_POWERS)


@pytest.mark.parametrize("q", [8, 64, 256, 9, 25])
def test_common_codeword_formula(q):
    F = field_of_order(q)
    g = smallest_primitive_element(F)
    want = []
    for terms in C_POWERS:
        acc = 0
        for e in terms:
            acc = F.add(acc, F.pow(g, e))
        want.append(acc)
    c = mbr_common_codeword(1, 2, F)
    assert c.tolist() == want
    assert np.all(c != 0)
    A1 = build_mbr_node_matrix(1, 1, F)
    B1 = build_mbr_node_matrix(2, 1, F)
    assert in_row_space(A1, c) and in_row_space(B1, c)
    inter = row_space_intersection(A1, B1)
    assert inter.rows == 1 and rank(inter.vstack(FieldMatrix(F, [c]))) == 1


@pytest.mark.parametrize("i", range(1, 6))
def test_every_node_block_has_full_rank(i):
    F = field_of_order(8)
    assert rank(build_mbr_node_matrix(i, 1, F)) == 4
    M = build_mbr_node_matrix(i, 3, F)
    assert M.shape == (12, 27) and rank(M) == 12


def test_pairwise_intersections_are_one_dimensional():
    F = field_of_order(16)
    L = MBRLayout(F, smallest_primitive_element(F))
    for i in range(1, 6):
        for j in range(i + 1, 6):
            c = L.common_codeword(i, j)
            assert np.array_equal(c, L.common_codeword(j, i))
            Ai, Aj = (FieldMatrix(F, L.node_block(k)) for k in (i, j))
            assert row_space_intersection(Ai, Aj).rows == 1
            assert in_row_space(Ai, c) and in_row_space(Aj, c)


def test_layout_errors():
    F = field_of_order(8)
    with pytest.raises(ValueError):
        build_mbr_node_matrix(6, 1, F)
    with pytest.raises(ValueError):
        build_mbr_node_matrix(1, 0, F)
    with pytest.raises(ValueError):
        mbr_common_codeword(2, 2, F)


def test_config_validation(tmp_path):
    with pytest.raises(ValueError):
        ScenarioConfig("nope").validate()
    with pytest.raises(ValueError):
        ScenarioConfig("striped-p2p", q=4, m=4).validate()
    with pytest.raises(ValueError):
        ScenarioConfig("mds-broadcast").validate()
    with pytest.raises(ValueError):
        ScenarioConfig("mbr-broadcast", nodes=(1, 1)).validate()
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"scenario": "mbr-broadcast", "nodes": [2, 3], "comment": "x"}))
    cfg = ScenarioConfig.load(path)
    assert cfg.nodes == (2, 3) and cfg.q == 8


def test_striped_scenario():
    rep = run_scenario(ScenarioConfig("striped-p2p", q=8, eps=1, m=4, a=[1, 1, 1], trials=100))
    assert rep.cost == 2 == rep.bound and rep.ok
    assert rep.passed == {"receiver": 100}
    out = rep.to_json()
    assert out["seed"] == 0 and out["ok"] is True


def test_zero_sparsity_scenarios():
    for cfg in (ScenarioConfig("striped-p2p", eps=0, trials=10),
                ScenarioConfig("mbr-broadcast", eps=0, m=2, trials=10)):
        rep = run_scenario(cfg)
        assert rep.cost == 0 and rep.ok


def test_mds_broadcast_scenario():
    rep = run_scenario(ScenarioConfig("mds-broadcast", q=8, eps=1, m=4, a=[1, 1, 1],
                                      b=[1, 2, 4], trials=30))
    assert rep.cost == 4 == rep.individual_cost and rep.theta == 0
    assert rep.saving == 0 and rep.ok


def test_mbr_scenario_small_eps():
    rep = run_scenario(ScenarioConfig("mbr-broadcast", q=64, eps=1, m=2, trials=30))
    assert (rep.cost, rep.bound, rep.individual_cost, rep.theta) == (3, 3, 4, 1)
    assert rep.q == 64 and rep.gamma == 2
    assert rep.to_json()["saving_percent"] == 25.0 and rep.ok


def test_mbr_scenario_escalates_field(monkeypatch):
    from sparse_update import scenarios

    calls = []
    real = scenarios._run_broadcast

    def flaky(cfg, field, t0):
        calls.append(field.order)
        if field.order < 64:
            raise ConstructionError("field too small")
        return real(cfg, field, t0)

    monkeypatch.setattr(scenarios, "_run_broadcast", flaky)
    rep = run_scenario(ScenarioConfig("mbr-broadcast", q=8, eps=1, m=2, trials=5))
    assert calls == [8, 16, 32, 64]
    assert (rep.q, rep.q_requested) == (64, 8) and rep.ok
    with pytest.raises(ConstructionError):
        run_scenario(ScenarioConfig("mbr-broadcast", q=8, eps=1, m=2, trials=5, escalate=False))
    with pytest.raises(ConstructionError):
        run_scenario(ScenarioConfig("mbr-broadcast", q=8, eps=1, m=2, trials=5, max_q=16))
