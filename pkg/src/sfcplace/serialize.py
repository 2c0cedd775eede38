"""Canonical JSON serialization for problems, placements, and reports.

The writer emits keys in a fixed schema order with two-space indentation and
a trailing newline, so identical in-memory objects always produce identical
bytes. The loader is strict: wrong shapes raise :class:`SchemaError` with the
offending path instead of guessing.

Problem schema::

    {
      "topology": {"nodes": [{"id", "cpu", "mem"}, ...], "latency": [[...], ...]},
      "instances": [{"id", "kind", "function", "cpu", "mem"}, ...],
      "edges": [{"a", "b", "tolerance"}, ...],          # tolerance: int or null
      "policy": {"antiAffinity": [[ids]], "conflicts": [[a, b]],
                 "colocate": [[ids]], "proximity": [[a, b]]},
      "pinned": {"<instance>": "<node>"}                # only when nonempty
    }

Placement files are ``{"assignment": {"<instance>": "<node>"}}``. Report
files mirror :class:`sfcplace.model.SolveReport` minus wall time, which is
deliberately left out to keep repeated runs byte-identical.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .model import (
    InstanceSpec,
    InteractionEdge,
    Placement,
    PlacementProblem,
    ResourceVector,
    SecurityPolicy,
    ServerNode,
    SolveReport,
    Topology,
)


class SchemaError(ValueError):
    """Input JSON does not match the documented schema."""


def _expect(cond: bool, path: str, why: str) -> None:
    if not cond:
        raise SchemaError(f"{path}: {why}")


def _get(d: Any, key: str, path: str) -> Any:
    _expect(isinstance(d, dict), path, f"expected object, got {type(d).__name__}")
    _expect(key in d, path, f"missing key {key!r}")
    return d[key]


def _as_int(v: Any, path: str) -> int:
    _expect(isinstance(v, int) and not isinstance(v, bool), path, f"expected integer, got {v!r}")
    return v


def _as_str(v: Any, path: str) -> str:
    _expect(isinstance(v, str), path, f"expected string, got {v!r}")
    return v


def _as_list(v: Any, path: str) -> list:
    _expect(isinstance(v, list), path, f"expected array, got {type(v).__name__}")
    return v


# ---------------------------------------------------------------------------
# problems


def problem_to_dict(problem: PlacementProblem) -> dict:
    doc: dict[str, Any] = {
        "topology": {
            "nodes": [
                {"id": n.id, "cpu": n.capacity.cpu, "mem": n.capacity.memory}
                for n in problem.topology.nodes
            ],
            "latency": [[int(v) for v in row] for row in problem.topology.latency.tolist()],
        },
        "instances": [
            {
                "id": s.id,
                "kind": s.kind,
                "function": s.function,
                "cpu": s.demand.cpu,
                "mem": s.demand.memory,
            }
            for s in problem.instances
        ],
        "edges": [{"a": e.a, "b": e.b, "tolerance": e.tolerance} for e in problem.edges],
        "policy": {
            "antiAffinity": [list(g) for g in problem.policy.anti_affinity],
            "conflicts": [list(g) for g in problem.policy.conflicts],
            "colocate": [list(g) for g in problem.policy.colocate],
            "proximity": [list(p) for p in problem.policy.proximity],
        },
    }
    if problem.pinned:
        doc["pinned"] = dict(problem.pinned)
    return doc


def problem_from_dict(doc: Any) -> PlacementProblem:
    topo_doc = _get(doc, "topology", "$")
    nodes = []
    for k, nd in enumerate(_as_list(_get(topo_doc, "nodes", "$.topology"), "$.topology.nodes")):
        path = f"$.topology.nodes[{k}]"
        nodes.append(
            ServerNode(
                id=_as_str(_get(nd, "id", path), path + ".id"),
                capacity=ResourceVector(
                    _as_int(_get(nd, "cpu", path), path + ".cpu"),
                    _as_int(_get(nd, "mem", path), path + ".mem"),
                ),
            )
        )
    lat_rows = _as_list(_get(topo_doc, "latency", "$.topology"), "$.topology.latency")
    latency = []
    for r, row in enumerate(lat_rows):
        row = _as_list(row, f"$.topology.latency[{r}]")
        latency.append([_as_int(v, f"$.topology.latency[{r}][{c}]") for c, v in enumerate(row)])
    _expect(
        all(len(row) == len(latency) for row in latency) and len(latency) == len(nodes),
        "$.topology.latency",
        f"expected a {len(nodes)}x{len(nodes)} matrix",
    )

    instances = []
    for k, sd in enumerate(_as_list(_get(doc, "instances", "$"), "$.instances")):
        path = f"$.instances[{k}]"
        instances.append(
            InstanceSpec(
                id=_as_str(_get(sd, "id", path), path + ".id"),
                kind=_as_str(_get(sd, "kind", path), path + ".kind"),
                function=_as_str(_get(sd, "function", path), path + ".function"),
                demand=ResourceVector(
                    _as_int(_get(sd, "cpu", path), path + ".cpu"),
                    _as_int(_get(sd, "mem", path), path + ".mem"),
                ),
            )
        )

    edges = []
    for k, ed in enumerate(_as_list(_get(doc, "edges", "$"), "$.edges")):
        path = f"$.edges[{k}]"
        tol = _get(ed, "tolerance", path)
        if tol is not None:
            tol = _as_int(tol, path + ".tolerance")
        edges.append(
            InteractionEdge(
                a=_as_str(_get(ed, "a", path), path + ".a"),
                b=_as_str(_get(ed, "b", path), path + ".b"),
                tolerance=tol,
            )
        )

    pol_doc = _get(doc, "policy", "$")

    def str_groups(key: str) -> tuple[tuple[str, ...], ...]:
        raw = _as_list(_get(pol_doc, key, "$.policy"), f"$.policy.{key}")
        groups = []
        for k, g in enumerate(raw):
            g = _as_list(g, f"$.policy.{key}[{k}]")
            groups.append(tuple(_as_str(m, f"$.policy.{key}[{k}][{j}]") for j, m in enumerate(g)))
        return tuple(groups)

    proximity = []
    for k, p in enumerate(_as_list(_get(pol_doc, "proximity", "$.policy"), "$.policy.proximity")):
        p = _as_list(p, f"$.policy.proximity[{k}]")
        _expect(len(p) == 2, f"$.policy.proximity[{k}]", "expected [a, b]")
        proximity.append((_as_str(p[0], "a"), _as_str(p[1], "b")))

    policy = SecurityPolicy(
        anti_affinity=str_groups("antiAffinity"),
        conflicts=str_groups("conflicts"),
        colocate=str_groups("colocate"),
        proximity=tuple(proximity),
    )

    pinned = {}
    if isinstance(doc, dict) and "pinned" in doc:
        raw = doc["pinned"]
        _expect(isinstance(raw, dict), "$.pinned", "expected object")
        pinned = {
            _as_str(k, "$.pinned key"): _as_str(v, f"$.pinned[{k}]") for k, v in raw.items()
        }

    try:
        topology = Topology(nodes=tuple(nodes), latency=latency)
    except ValueError as exc:
        raise SchemaError(f"$.topology.latency: {exc}") from exc
    return PlacementProblem(topology, tuple(instances), tuple(edges), policy, pinned)


# ---------------------------------------------------------------------------
# placements and reports


def placement_to_dict(placement: Placement) -> dict:
    return {"assignment": dict(placement.assignment)}


def placement_from_dict(doc: Any) -> Placement:
    raw = _get(doc, "assignment", "$")
    _expect(isinstance(raw, dict), "$.assignment", "expected object")
    return Placement({_as_str(k, "$.assignment key"): _as_str(v, f"$.assignment[{k}]") for k, v in raw.items()})


def report_to_dict(report: SolveReport) -> dict:
    return {
        "status": report.status,
        "objective": report.objective,
        "assignment": dict(report.placement.assignment) if report.placement else None,
        "edge_latencies": [
            {"a": e.a, "b": e.b, "latency_us": lat} for e, lat in report.edge_latencies
        ],
        "violations": [
            {"code": v.code, "subjects": list(v.subjects), "detail": v.detail}
            for v in report.violations
        ],
        "stats": {"nodes_explored": report.stats.nodes_explored},
    }


# ---------------------------------------------------------------------------
# bytes on disk


def dumps_canonical(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def load_problem(path: str | Path) -> PlacementProblem:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc
    return problem_from_dict(doc)


def save_problem(problem: PlacementProblem, path: str | Path) -> None:
    Path(path).write_text(dumps_canonical(problem_to_dict(problem)))


def load_placement(path: str | Path) -> Placement:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc
    return placement_from_dict(doc)


def save_report(report: SolveReport, path: str | Path) -> None:
    Path(path).write_text(dumps_canonical(report_to_dict(report)))
