import json

import pytest

from conftest import TRI_LATENCY, make_problem
from sfcplace.model import Placement, SecurityPolicy, SolverStats, build_report
from sfcplace.scenario import ScenarioParams, random_problem, vepc_problem
from sfcplace.serialize import (
    SchemaError,
    dumps_canonical,
    load_problem,
    placement_from_dict,
    placement_to_dict,
    problem_from_dict,
    problem_to_dict,
    report_to_dict,
    save_problem,
    save_report,
)


def test_problem_round_trip(tri_problem):
    doc = problem_to_dict(tri_problem)
    again = problem_to_dict(problem_from_dict(doc))
    assert doc == again
    assert dumps_canonical(doc) == dumps_canonical(again)


def test_problem_round_trip_with_policy_and_pins():
    p = make_problem(
        TRI_LATENCY,
        [("a", (1, 2)), ("b", (2, 1)), ("c", (1, 1))],
        edges=[("a", "b", 12), ("b", "c")],
        policy=SecurityPolicy(
            anti_affinity=(("a", "b"),),
            conflicts=(("b", "c"),),
            colocate=(),
            proximity=(("a", "b"),),
        ),
        pinned={"c": "n2"},
    )
    doc = problem_to_dict(p)
    assert doc["pinned"] == {"c": "n2"}
    assert doc["edges"][1]["tolerance"] is None
    back = problem_from_dict(doc)
    assert problem_to_dict(back) == doc


def test_pinned_key_absent_when_empty(tri_problem):
    assert "pinned" not in problem_to_dict(tri_problem)


def test_placement_round_trip():
    pl = Placement({"a": "n1", "b": "n2"})
    assert placement_from_dict(placement_to_dict(pl)) == pl


def test_report_dict_shape(tri_problem):
    rep = build_report(
        tri_problem,
        Placement({"a": "n1", "b": "n2", "c": "n3"}),
        "optimal",
        SolverStats(nodes_explored=7, wall_time=1.23),
    )
    doc = report_to_dict(rep)
    assert doc["status"] == "optimal"
    assert doc["objective"] == 15
    assert doc["assignment"] == {"a": "n1", "b": "n2", "c": "n3"}
    assert doc["edge_latencies"] == [
        {"a": "a", "b": "b", "latency_us": 10},
        {"a": "b", "b": "c", "latency_us": 5},
    ]
    assert doc["violations"] == []
    assert doc["stats"] == {"nodes_explored": 7}
    assert "wall_time" not in json.dumps(doc)


def test_report_dict_infeasible(tri_problem):
    rep = build_report(tri_problem, None, "infeasible", SolverStats())
    doc = report_to_dict(rep)
    assert doc["objective"] is None and doc["assignment"] is None
    assert doc["edge_latencies"] == []


def test_dumps_canonical_is_stable(tri_problem):
    doc = problem_to_dict(tri_problem)
    s = dumps_canonical(doc)
    assert s.endswith("\n")
    assert s == dumps_canonical(json.loads(s))


def test_schema_rejects_malformed():
    with pytest.raises(SchemaError):
        problem_from_dict({"instances": []})
    with pytest.raises(SchemaError):
        problem_from_dict({"topology": {"nodes": [], "latency": []}, "instances": {}})
    good = problem_to_dict(
        make_problem([[0, 1], [1, 0]], [("a", (1, 1))], edges=[])
    )
    bad = json.loads(json.dumps(good))
    bad["topology"]["latency"][0][1] = True
    with pytest.raises(SchemaError):
        problem_from_dict(bad)
    bad = json.loads(json.dumps(good))
    bad["instances"][0]["cpu"] = "four"
    with pytest.raises(SchemaError):
        problem_from_dict(bad)


def test_file_round_trip(tmp_path, tri_problem):
    path = tmp_path / "p.json"
    save_problem(tri_problem, path)
    assert problem_to_dict(load_problem(path)) == problem_to_dict(tri_problem)
    rep = build_report(
        tri_problem, Placement({"a": "n1", "b": "n2", "c": "n3"}), "optimal", SolverStats()
    )
    rpath = tmp_path / "r.json"
    save_report(rep, rpath)
    assert json.loads(rpath.read_text())["objective"] == 15


def test_generated_problems_serialize_stably():
    for seed in range(20):
        p = random_problem(ScenarioParams(seed=seed, node_count=4), 6)
        doc = problem_to_dict(p)
        assert problem_to_dict(problem_from_dict(doc)) == doc
    v = vepc_problem(ScenarioParams(seed=3, node_count=5))
    doc = problem_to_dict(v)
    assert problem_to_dict(problem_from_dict(doc)) == doc
