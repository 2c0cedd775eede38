import pytest

from conftest import TRI_LATENCY, make_problem
from sfcplace.model import (
    Placement,
    SecurityPolicy,
    check_feasibility,
    evaluate_objective,
)
from sfcplace.oracle import EnumerationLimitError, enumerate_optimal
from sfcplace.scenario import ScenarioParams, random_problem


def test_tri_optimum(tri_problem):
    rep = enumerate_optimal(tri_problem)
    assert rep.status == "optimal"
    assert rep.objective == 15
    assert rep.placement == Placement({"a": "n1", "b": "n2", "c": "n3"})
    assert rep.stats.nodes_explored == 27


def test_ties_resolve_to_first_in_enumeration_order():
    # both instances on n1 and both on n2 cost 0; first wins
    p = make_problem(
        [[0, 7], [7, 0]],
        [("a", (1, 1)), ("b", (1, 1))],
        edges=[("a", "b")],
    )
    rep = enumerate_optimal(p)
    assert rep.objective == 0
    assert rep.placement == Placement({"a": "n1", "b": "n1"})


def test_infeasible_by_separation():
    p = make_problem(
        [[0]],
        [("a", (1, 1)), ("b", (1, 1))],
        policy=SecurityPolicy(anti_affinity=(("a", "b"),)),
    )
    rep = enumerate_optimal(p)
    assert rep.status == "infeasible"
    assert rep.placement is None and rep.objective is None


def test_infeasible_by_capacity():
    p = make_problem([[0, 1], [1, 0]], [("a", (9, 1)), ("b", (9, 1))], caps=[(9, 9), (8, 9)])
    rep = enumerate_optimal(p)
    assert rep.status == "infeasible"


def test_tolerance_prunes_solutions():
    p = make_problem(
        TRI_LATENCY,
        [("a", (1, 1)), ("b", (1, 1))],
        edges=[("a", "b", 5)],
        caps=[(1, 1)] * 3,
    )
    rep = enumerate_optimal(p)
    assert rep.objective == 5
    assert rep.placement == Placement({"a": "n2", "b": "n3"})


def test_pins_respected(tri_problem):
    p = make_problem(
        TRI_LATENCY,
        [("a", (1, 1)), ("b", (1, 1)), ("c", (1, 1))],
        edges=[("a", "b"), ("b", "c")],
        caps=[(1, 1)] * 3,
        pinned={"a": "n3"},
    )
    rep = enumerate_optimal(p)
    assert rep.placement.of("a") == "n3"
    # a@n3: best chain is 5 (b@n2) + 10 (c@n1)
    assert rep.objective == 15
    assert rep.placement == Placement({"a": "n3", "b": "n2", "c": "n1"})


def test_refuses_oversized_spaces(tri_problem):
    with pytest.raises(EnumerationLimitError):
        enumerate_optimal(tri_problem, limit=26)
    enumerate_optimal(tri_problem, limit=27)


def test_reports_are_internally_consistent():
    for seed in range(30):
        p = random_problem(ScenarioParams(seed=seed, node_count=3), 4)
        rep = enumerate_optimal(p)
        if rep.placement is None:
            assert rep.status == "infeasible"
            continue
        assert rep.status == "optimal"
        assert check_feasibility(p, rep.placement) == []
        assert evaluate_objective(p, rep.placement) == rep.objective
        assert rep.stats.nodes_explored == 3 ** 4


def test_optimum_not_beaten_by_any_feasible_assignment():
    import itertools

    for seed in (0, 5, 9):
        p = random_problem(ScenarioParams(seed=seed, node_count=3), 3)
        rep = enumerate_optimal(p)
        nodes = p.topology.node_ids()
        best = None
        for combo in itertools.product(nodes, repeat=3):
            pl = Placement(dict(zip(p.instance_ids(), combo)))
            if check_feasibility(p, pl):
                continue
            cost = evaluate_objective(p, pl)
            if best is None or cost < best:
                best = cost
        if best is None:
            assert rep.status == "infeasible"
        else:
            assert rep.objective == best
