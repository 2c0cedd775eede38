from conftest import TRI_LATENCY, make_problem
from sfcplace.greedy import solve_greedy
from sfcplace.model import (
    Placement,
    SecurityPolicy,
    check_feasibility,
    evaluate_objective,
)
from sfcplace.scenario import ScenarioParams, random_problem, vepc_problem


def test_tri_first_fit(tri_problem):
    rep = solve_greedy(tri_problem)
    assert rep.status == "feasible"
    assert rep.placement == Placement({"a": "n1", "b": "n2", "c": "n3"})
    assert rep.objective == 15


def test_first_fit_backfills_earlier_nodes():
    p = make_problem(
        [[0, 2], [2, 0]],
        [("a", (2, 2)), ("b", (2, 2)), ("c", (1, 1))],
        caps=[(3, 3), (9, 9)],
    )
    rep = solve_greedy(p)
    # c is small enough to slot back into n1 after b overflowed to n2
    assert rep.placement == Placement({"a": "n1", "b": "n2", "c": "n1"})


def test_capacity_only_ignores_separation_rules():
    p = make_problem(
        [[0, 4], [4, 0]],
        [("a", (1, 1)), ("b", (1, 1))],
        policy=SecurityPolicy(anti_affinity=(("a", "b"),)),
    )
    rep = solve_greedy(p)
    assert rep.placement == Placement({"a": "n1", "b": "n1"})
    assert [v.code for v in rep.violations] == ["AntiAffinity"]
    assert rep.status == "feasible"


def test_capacity_only_ignores_pins():
    p = make_problem(
        [[0, 4], [4, 0]],
        [("a", (1, 1))],
        pinned={"a": "n2"},
    )
    rep = solve_greedy(p)
    assert rep.placement == Placement({"a": "n1"})
    assert [v.code for v in rep.violations] == ["PinViolated"]


def test_infeasible_when_nothing_fits():
    # a consumes n1; b then fits neither n1 (0 cpu left) nor n2 (4 < 5)
    p = make_problem([[0, 1], [1, 0]], [("a", (5, 1)), ("b", (5, 1))], caps=[(5, 5), (4, 5)])
    rep = solve_greedy(p)
    assert rep.status == "infeasible"
    assert rep.placement is None and rep.objective is None


def test_report_matches_semantics():
    for seed in range(30):
        p = random_problem(ScenarioParams(seed=seed, node_count=4), 6)
        rep = solve_greedy(p)
        if rep.placement is None:
            assert rep.status == "infeasible"
            continue
        assert rep.status == "feasible"
        assert rep.objective == evaluate_objective(p, rep.placement)
        assert list(rep.violations) == check_feasibility(p, rep.placement)


def test_vepc_greedy_runs():
    p = vepc_problem(ScenarioParams(seed=0, node_count=6))
    rep = solve_greedy(p)
    assert rep.placement is not None
    assert rep.objective >= 0
