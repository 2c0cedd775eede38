"""Problem generators: the vEPC chain and seeded random instances.

Everything here is a pure function of its parameters. Random draws go
through one ``random.Random(seed)`` per call in a fixed consumption order
(topology, then instances, then edges, then policy), so equal parameters
give byte-identical problems.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .model import (
    VNF,
    VSF,
    InstanceSpec,
    InteractionEdge,
    PlacementProblem,
    ResourceVector,
    SecurityPolicy,
    ServerNode,
    Topology,
    require_valid,
)

_VNF_LABELS = ("MME", "HSS", "SGW", "PGW")
_VSF_LABELS = ("FW", "DPI", "IDS")

# Desired per-function instance counts for the vEPC chain, user endpoint
# excluded. Used by tests and by `census` consumers.
VEPC_CENSUS = {"MME": 2, "HSS": 1, "SGW": 2, "PGW": 2, "FW": 2, "DPI": 2, "IDS": 2}

# (id, kind, function) in declaration order. USER is a zero-demand endpoint
# pinned to the first node; it anchors the ingress edge but is not part of
# the thirteen placeable instances.
_VEPC_ROSTER = (
    ("USER", VNF, "USER"),
    ("FW-1", VSF, "FW"),
    ("MME-1", VNF, "MME"),
    ("MME-2", VNF, "MME"),
    ("SGW-1", VNF, "SGW"),
    ("SGW-2", VNF, "SGW"),
    ("FW-2", VSF, "FW"),
    ("IDS-1", VSF, "IDS"),
    ("DPI-1", VSF, "DPI"),
    ("HSS", VNF, "HSS"),
    ("PGW-1", VNF, "PGW"),
    ("PGW-2", VNF, "PGW"),
    ("IDS-2", VSF, "IDS"),
    ("DPI-2", VSF, "DPI"),
)

# Edges that carry a proximity bound: each firewall must sit close to the
# instances it screens, and the user endpoint close to its firewall.
_VEPC_PROXIMITY = (
    ("USER", "FW-1"),
    ("FW-1", "MME-1"),
    ("FW-1", "MME-2"),
    ("SGW-1", "FW-2"),
    ("SGW-2", "FW-2"),
)

# Unbounded interaction edges of the chain. The IDS pair shares state
# (active-active), hence its direct edge; anti-affinity still keeps the two
# replicas apart.
_VEPC_EDGES = (
    ("MME-1", "IDS-1"),
    ("MME-1", "IDS-2"),
    ("MME-2", "IDS-1"),
    ("MME-2", "IDS-2"),
    ("IDS-1", "HSS"),
    ("IDS-2", "HSS"),
    ("IDS-1", "IDS-2"),
    ("MME-1", "SGW-1"),
    ("MME-1", "SGW-2"),
    ("MME-2", "SGW-1"),
    ("MME-2", "SGW-2"),
    ("SGW-1", "PGW-1"),
    ("SGW-1", "PGW-2"),
    ("SGW-2", "PGW-1"),
    ("SGW-2", "PGW-2"),
    ("DPI-1", "PGW-1"),
    ("DPI-1", "PGW-2"),
    ("DPI-2", "PGW-1"),
    ("DPI-2", "PGW-2"),
)


@dataclass(frozen=True)
class ScenarioParams:
    seed: int = 0
    node_count: int = 10
    latency_range: tuple[int, int] = (100, 1000)
    capacity_range: tuple[int, int] = (12, 24)
    demand_range: tuple[int, int] = (1, 4)

    def __post_init__(self):
        if self.node_count < 1:
            raise ValueError("node_count must be at least 1")
        for name in ("latency_range", "capacity_range", "demand_range"):
            lo, hi = getattr(self, name)
            if lo < 0 or lo > hi:
                raise ValueError(f"{name} must satisfy 0 <= min <= max, got {(lo, hi)}")


def _random_topology(rng: random.Random, params: ScenarioParams) -> Topology:
    nodes = []
    for k in range(params.node_count):
        cap = ResourceVector(rng.randint(*params.capacity_range), rng.randint(*params.capacity_range))
        nodes.append(ServerNode(f"n{k + 1}", cap))
    lat = np.zeros((params.node_count, params.node_count), dtype=np.int64)
    for i in range(params.node_count):
        for j in range(i + 1, params.node_count):
            lat[i, j] = lat[j, i] = rng.randint(*params.latency_range)
    return Topology(tuple(nodes), lat)


def _min_off_diagonal(topology: Topology) -> int:
    lat = topology.latency
    k = lat.shape[0]
    mask = ~np.eye(k, dtype=bool)
    return int(lat[mask].min())


def vepc_problem(params: ScenarioParams) -> PlacementProblem:
    """The mobile-core chain: 13 placeable instances plus a pinned user
    endpoint, redundancy splits on the IDS and DPI pairs, and proximity
    bounds on every firewall edge.

    The proximity tolerance is the smallest latency between distinct nodes,
    so the bound always binds but never makes the problem vacuously
    infeasible on its own.
    """
    if params.node_count < 2:
        raise ValueError("the chain needs node_count >= 2 for its separation rules")
    rng = random.Random(params.seed)
    topo = _random_topology(rng, params)
    instances = []
    for iid, kind, function in _VEPC_ROSTER:
        if iid == "USER":
            demand = ResourceVector.zero()
        else:
            demand = ResourceVector(rng.randint(*params.demand_range), rng.randint(*params.demand_range))
        instances.append(InstanceSpec(iid, kind, function, demand))
    tol = _min_off_diagonal(topo)
    edges = [InteractionEdge(a, b, tol) for a, b in _VEPC_PROXIMITY]
    edges.extend(InteractionEdge(a, b) for a, b in _VEPC_EDGES)
    policy = SecurityPolicy(
        anti_affinity=(("IDS-1", "IDS-2"), ("DPI-1", "DPI-2")),
        proximity=_VEPC_PROXIMITY,
    )
    problem = PlacementProblem(
        topology=topo,
        instances=tuple(instances),
        edges=tuple(edges),
        policy=policy,
        pinned={"USER": topo.nodes[0].id},
    )
    require_valid(problem)
    return problem


def census(problem: PlacementProblem) -> dict[str, int]:
    """Function-label counts over the placeable (unpinned) instances."""
    counts: dict[str, int] = {}
    for spec in problem.instances:
        if spec.id in problem.pinned:
            continue
        counts[spec.function] = counts.get(spec.function, 0) + 1
    return counts


def random_problem(
    params: ScenarioParams,
    instance_count: int,
    edge_density: float = 0.3,
    rule_density: float = 0.3,
) -> PlacementProblem:
    """A seeded problem with ``instance_count`` instances.

    Colocation and separation groups are drawn from disjoint id pools, so
    the generated policy can never contradict itself; separation groups are
    capped at ``node_count`` members. Roughly half the generated edges get
    a finite tolerance, which may or may not be satisfiable; callers that
    need guaranteed-feasible problems should check the solve status.
    """
    if instance_count < 1:
        raise ValueError("instance_count must be at least 1")
    if not (0.0 <= edge_density <= 1.0 and 0.0 <= rule_density <= 1.0):
        raise ValueError("densities must lie in [0, 1]")
    if rule_density > 0 and params.node_count < 2:
        raise ValueError("separation rules need node_count >= 2; use rule_density=0")
    rng = random.Random(params.seed)
    topo = _random_topology(rng, params)
    ids = [f"i{k + 1}" for k in range(instance_count)]
    instances = []
    for iid in ids:
        kind = rng.choice((VNF, VSF))
        label = rng.choice(_VNF_LABELS if kind == VNF else _VSF_LABELS)
        demand = ResourceVector(rng.randint(*params.demand_range), rng.randint(*params.demand_range))
        instances.append(InstanceSpec(iid, kind, label, demand))
    edges = []
    for a in range(instance_count):
        for b in range(a + 1, instance_count):
            if rng.random() < edge_density:
                tol = rng.randint(0, params.latency_range[1]) if rng.random() < 0.5 else None
                edges.append(InteractionEdge(ids[a], ids[b], tol))
    pool = list(ids)
    rng.shuffle(pool)
    colocate: list[tuple[str, ...]] = []
    anti: list[tuple[str, ...]] = []
    conflicts: list[tuple[str, ...]] = []
    while rng.random() < rule_density and len(pool) >= 2:
        size = rng.randint(2, min(3, len(pool)))
        colocate.append(tuple(pool[:size]))
        del pool[:size]
    while rng.random() < rule_density and len(pool) >= 2:
        size = rng.randint(2, min(3, len(pool), params.node_count))
        group = tuple(pool[:size])
        del pool[:size]
        if rng.random() < 0.5:
            anti.append(group)
        else:
            conflicts.append(group)
    policy = SecurityPolicy(
        anti_affinity=tuple(anti), conflicts=tuple(conflicts), colocate=tuple(colocate)
    )
    problem = PlacementProblem(
        topology=topo, instances=tuple(instances), edges=tuple(edges), policy=policy
    )
    require_valid(problem)
    return problem
