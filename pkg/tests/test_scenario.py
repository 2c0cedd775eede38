import numpy as np
import pytest

from sfcplace.model import VNF, VSF, expand_pairs, validate_problem
from sfcplace.scenario import (
    VEPC_CENSUS,
    ScenarioParams,
    census,
    random_problem,
    vepc_problem,
)
from sfcplace.serialize import dumps_canonical, problem_to_dict


def canon(problem):
    return dumps_canonical(problem_to_dict(problem))


def test_params_validation():
    ScenarioParams(seed=1, node_count=1)
    with pytest.raises(ValueError):
        ScenarioParams(node_count=0)
    with pytest.raises(ValueError):
        ScenarioParams(latency_range=(10, 5))
    with pytest.raises(ValueError):
        ScenarioParams(demand_range=(-1, 3))


def test_vepc_census():
    p = vepc_problem(ScenarioParams(seed=0))
    assert len(p.instances) == 14
    counts = census(p)
    assert counts == VEPC_CENSUS
    assert sum(counts.values()) == 13


def test_vepc_user_endpoint():
    p = vepc_problem(ScenarioParams(seed=9, node_count=3))
    user = p.instance("USER")
    assert user.demand.cpu == 0 and user.demand.memory == 0
    assert p.pinned == {"USER": "n1"}
    assert any({e.a, e.b} == {"USER", "FW-1"} for e in p.edges)


def test_vepc_policy_structure():
    p = vepc_problem(ScenarioParams(seed=2, node_count=5))
    assert p.policy.anti_affinity == (("IDS-1", "IDS-2"), ("DPI-1", "DPI-2"))
    assert p.policy.conflicts == () and p.policy.colocate == ()
    assert len(p.policy.proximity) == 5
    declared = {e.pair for e in p.edges}
    for a, b in p.policy.proximity:
        assert ((a, b) if a <= b else (b, a)) in declared
    assert any({e.a, e.b} == {"IDS-1", "IDS-2"} and e.tolerance is None for e in p.edges)


def test_vepc_proximity_tolerance_is_minimum_latency():
    p = vepc_problem(ScenarioParams(seed=4, node_count=6))
    lat = p.topology.latency
    expected = int(lat[~np.eye(lat.shape[0], dtype=bool)].min())
    prox = {tuple(sorted(pair)) for pair in p.policy.proximity}
    for e in p.edges:
        if e.pair in prox:
            assert e.tolerance == expected
        else:
            assert e.tolerance is None
    assert len(p.edges) == 24


def test_vepc_rejects_single_node():
    with pytest.raises(ValueError):
        vepc_problem(ScenarioParams(node_count=1))


def test_vepc_determinism():
    a = vepc_problem(ScenarioParams(seed=11, node_count=7))
    b = vepc_problem(ScenarioParams(seed=11, node_count=7))
    assert canon(a) == canon(b)
    c = vepc_problem(ScenarioParams(seed=12, node_count=7))
    assert canon(a) != canon(c)


def test_vepc_validates_over_seeds():
    for seed in range(20):
        p = vepc_problem(ScenarioParams(seed=seed, node_count=4))
        assert validate_problem(p) == []


def test_topology_symmetric_zero_diagonal():
    for seed in range(10):
        p = random_problem(ScenarioParams(seed=seed, node_count=5), 4)
        lat = p.topology.latency
        assert np.array_equal(lat, lat.T)
        assert not lat.diagonal().any()
        off = lat[~np.eye(lat.shape[0], dtype=bool)]
        assert off.min() >= 100 and off.max() <= 1000


def test_random_problem_shape():
    p = random_problem(ScenarioParams(seed=5, node_count=4), 7)
    assert p.instance_ids() == tuple(f"i{k}" for k in range(1, 8))
    for spec in p.instances:
        if spec.kind == VNF:
            assert spec.function in ("MME", "HSS", "SGW", "PGW")
        else:
            assert spec.kind == VSF and spec.function in ("FW", "DPI", "IDS")
        assert 1 <= spec.demand.cpu <= 4 and 1 <= spec.demand.memory <= 4


def test_random_problem_determinism():
    params = ScenarioParams(seed=21, node_count=4)
    assert canon(random_problem(params, 6)) == canon(random_problem(params, 6))
    assert canon(random_problem(params, 6)) != canon(
        random_problem(ScenarioParams(seed=22, node_count=4), 6)
    )


def test_random_problem_rejections():
    params = ScenarioParams(seed=0, node_count=4)
    with pytest.raises(ValueError):
        random_problem(params, 0)
    with pytest.raises(ValueError):
        random_problem(params, 4, edge_density=1.5)
    with pytest.raises(ValueError):
        random_problem(params, 4, rule_density=-0.1)
    with pytest.raises(ValueError):
        random_problem(ScenarioParams(seed=0, node_count=1), 4, rule_density=0.5)
    random_problem(ScenarioParams(seed=0, node_count=1), 4, rule_density=0.0)


def test_edge_density_zero_means_no_edges():
    from sfcplace.exact import solve

    p = random_problem(ScenarioParams(seed=3, node_count=4), 5, edge_density=0.0)
    assert p.edges == ()
    rep = solve(p)
    if rep.placement is not None:
        assert rep.objective == 0


def test_policy_pools_stay_disjoint():
    for seed in range(40):
        p = random_problem(ScenarioParams(seed=seed, node_count=3), 8, rule_density=0.6)
        colocated = {m for g in p.policy.colocate for m in g}
        separated = {m for g in p.policy.anti_affinity for m in g}
        separated |= {m for g in p.policy.conflicts for m in g}
        assert not (colocated & separated)
        for g in list(p.policy.anti_affinity) + list(p.policy.conflicts):
            assert len(g) <= 3
            assert len(g) <= p.topology.latency.shape[0]
        assert expand_pairs(p.policy.colocate) is not None
        assert validate_problem(p) == []
