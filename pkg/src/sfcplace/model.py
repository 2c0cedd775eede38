"""Domain model for latency-aware service chain placement.

Holds the problem types (server topology, function instances, interaction
edges, security policy), strict validation, and the reference semantics every
solver in this package is measured against: feasibility checking and the
summed-latency objective. All latencies are integer microseconds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

VNF = "VNF"
VSF = "VSF"
KINDS = (VNF, VSF)

RESOURCES = ("cpu", "memory")


class ModelError(Exception):
    """Base class for errors raised by this package's model layer."""


class UnknownIdError(ModelError, KeyError):
    """An instance, node, or edge reference does not resolve."""

    def __str__(self) -> str:  # KeyError quotes its payload; keep it readable
        return self.args[0] if self.args else ""


class PartialPlacementError(ModelError):
    """A placement does not assign every instance exactly once."""


class InvalidProblemError(ModelError):
    """An operation was given a problem that fails validation."""

    def __init__(self, errors: Sequence["Violation"]):
        self.errors = list(errors)
        head = "; ".join(str(e) for e in self.errors[:4])
        more = "" if len(self.errors) <= 4 else f" (+{len(self.errors) - 4} more)"
        super().__init__(f"invalid problem: {head}{more}")


@dataclass(frozen=True)
class Violation:
    """One validation error or feasibility breach, machine readable.

    ``code`` names the rule, ``subjects`` the ids involved (instances, nodes,
    or resources, in rule-specific order) and ``detail`` carries the numbers
    when there are any, e.g. ``CapacityExceeded(n1,cpu): 5 > 4``.
    """

    code: str
    subjects: tuple[str, ...] = ()
    detail: str = ""

    def __str__(self) -> str:
        body = f"{self.code}({','.join(self.subjects)})"
        return f"{body}: {self.detail}" if self.detail else body


@dataclass(frozen=True)
class ResourceVector:
    """CPU and memory amounts in abstract non-negative integer units."""

    cpu: int
    memory: int

    def __post_init__(self) -> None:
        if self.cpu < 0 or self.memory < 0:
            raise ValueError(f"resource components must be >= 0, got ({self.cpu}, {self.memory})")

    def __add__(self, other: "ResourceVector") -> "ResourceVector":
        return ResourceVector(self.cpu + other.cpu, self.memory + other.memory)

    def covers(self, other: "ResourceVector") -> bool:
        """Component-wise ``self >= other``."""
        return self.cpu >= other.cpu and self.memory >= other.memory

    @staticmethod
    def zero() -> "ResourceVector":
        return ResourceVector(0, 0)


@dataclass(frozen=True)
class ServerNode:
    id: str
    capacity: ResourceVector


@dataclass(frozen=True, eq=False)
class Topology:
    """Server nodes plus the symmetric node-to-node latency matrix (us).

    The matrix is stored as an int64 numpy array indexed by node position in
    ``nodes``. Shape and symmetry are checked by :func:`validate_problem`,
    not at construction, so malformed inputs can be reported as error lists.
    """

    nodes: tuple[ServerNode, ...]
    latency: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "latency", np.asarray(self.latency, dtype=np.int64))
        object.__setattr__(self, "_pos", {n.id: k for k, n in enumerate(self.nodes)})

    def node_ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in self.nodes)

    def index_of(self, node_id: str) -> int:
        try:
            return self._pos[node_id]
        except KeyError:
            raise UnknownIdError(f"unknown node id {node_id!r}") from None

    def latency_between(self, a: str, b: str) -> int:
        return int(self.latency[self.index_of(a), self.index_of(b)])


@dataclass(frozen=True)
class InstanceSpec:
    """One placeable function instance.

    ``kind`` is ``"VNF"`` for chain functions or ``"VSF"`` for security
    functions; ``function`` is the free-form function label (e.g. ``"MME"``).
    """

    id: str
    kind: str
    function: str
    demand: ResourceVector


@dataclass(frozen=True)
class InteractionEdge:
    """Undirected traffic dependency between two instances.

    ``tolerance`` is the maximum admissible latency in us for this link, or
    ``None`` when the link only contributes to the objective (unbounded).
    """

    a: str
    b: str
    tolerance: int | None = None

    @property
    def pair(self) -> tuple[str, str]:
        """Order-insensitive identity of the edge."""
        return (self.a, self.b) if self.a <= self.b else (self.b, self.a)

    @property
    def name(self) -> str:
        return f"{self.a}/{self.b}"


def _pair_tuples(groups: Iterable[Iterable[str]]) -> tuple[tuple[str, ...], ...]:
    return tuple(tuple(g) for g in groups)


@dataclass(frozen=True)
class SecurityPolicy:
    """Placement rules layered on top of the edges.

    anti_affinity: groups whose members must sit pairwise on distinct nodes
        (redundant pairs of the same function).
    conflicts: instance pairs that must not share a node (cross-function
        distrust); enforced exactly like anti-affinity but reported under its
        own code.
    colocate: groups whose members must all share one node.
    proximity: edge references (a, b) flagged as proximity-critical; the
        latency bound itself lives on the edge's ``tolerance``.
    """

    anti_affinity: tuple[tuple[str, ...], ...] = ()
    conflicts: tuple[tuple[str, str], ...] = ()
    colocate: tuple[tuple[str, ...], ...] = ()
    proximity: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "anti_affinity", _pair_tuples(self.anti_affinity))
        object.__setattr__(self, "conflicts", _pair_tuples(self.conflicts))
        object.__setattr__(self, "colocate", _pair_tuples(self.colocate))
        object.__setattr__(self, "proximity", _pair_tuples(self.proximity))


@dataclass(frozen=True, eq=False)
class PlacementProblem:
    """A complete placement instance: topology, instances, edges, policy.

    ``pinned`` optionally fixes instances to nodes (used for immovable
    endpoints such as a user attachment point).
    """

    topology: Topology
    instances: tuple[InstanceSpec, ...]
    edges: tuple[InteractionEdge, ...] = ()
    policy: SecurityPolicy = field(default_factory=SecurityPolicy)
    pinned: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "instances", tuple(self.instances))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "pinned", dict(self.pinned))

    def instance_ids(self) -> tuple[str, ...]:
        return tuple(i.id for i in self.instances)

    def instance(self, instance_id: str) -> InstanceSpec:
        for spec in self.instances:
            if spec.id == instance_id:
                return spec
        raise UnknownIdError(f"unknown instance id {instance_id!r}")


@dataclass(frozen=True)
class Placement:
    """Total assignment of instance ids to node ids. Immutable."""

    assignment: Mapping[str, str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "assignment", dict(self.assignment))

    def of(self, instance_id: str) -> str:
        try:
            return self.assignment[instance_id]
        except KeyError:
            raise UnknownIdError(f"no assignment for instance {instance_id!r}") from None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Placement):
            return NotImplemented
        return dict(self.assignment) == dict(other.assignment)


@dataclass(frozen=True)
class SolverStats:
    """Search effort counters. ``wall_time`` is seconds and is the one field
    excluded from determinism comparisons and serialized reports."""

    nodes_explored: int = 0
    wall_time: float = 0.0


#: Report statuses shared by every solver.
OPTIMAL = "optimal"
FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
TIMEOUT = "timeout"
STATUSES = (OPTIMAL, FEASIBLE, INFEASIBLE, TIMEOUT)


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one solver run.

    ``objective`` always equals the sum of ``edge_latencies`` values;
    ``violations`` is empty for placements that satisfy every rule (the
    greedy baseline may report a placement together with its breaches).
    ``status`` is "optimal", "feasible" (placement found, optimality not
    proven), "timeout" (incumbent returned at the deadline, not proven
    optimal) or "infeasible".
    """

    status: str
    placement: Placement | None
    objective: int | None
    edge_latencies: tuple[tuple[InteractionEdge, int], ...]
    violations: tuple[Violation, ...]
    stats: SolverStats

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


# ---------------------------------------------------------------------------
# validation


def _check_latency_matrix(topology: Topology, errors: list[Violation]) -> None:
    ids = topology.node_ids()
    lat = topology.latency
    if lat.ndim != 2 or lat.shape[0] != lat.shape[1] or lat.shape[0] != len(ids):
        errors.append(Violation("LatencyShape", (), f"expected {len(ids)}x{len(ids)}, got {lat.shape}"))
        return
    for i in range(len(ids)):
        if lat[i, i] != 0:
            errors.append(Violation("NonzeroDiagonal", (ids[i],), f"{int(lat[i, i])}"))
        for j in range(i + 1, len(ids)):
            if lat[i, j] < 0 or lat[j, i] < 0:
                errors.append(Violation("NegativeLatency", (ids[i], ids[j])))
            if lat[i, j] != lat[j, i]:
                errors.append(
                    Violation("AsymmetricLatency", (ids[i], ids[j]), f"{int(lat[i, j])} != {int(lat[j, i])}")
                )


def validate_problem(problem: PlacementProblem) -> list[Violation]:
    """Check every structural invariant; return an empty list iff valid.

    Strict by design: nothing is repaired or defaulted. Solvers refuse
    problems for which this returns a non-empty list.
    """
    errors: list[Violation] = []

    node_ids = problem.topology.node_ids()
    seen: set[str] = set()
    for nid in node_ids:
        if nid in seen:
            errors.append(Violation("DuplicateNodeId", (nid,)))
        seen.add(nid)

    _check_latency_matrix(problem.topology, errors)

    inst_ids: list[str] = []
    seen = set()
    for spec in problem.instances:
        if spec.id in seen:
            errors.append(Violation("DuplicateInstanceId", (spec.id,)))
        seen.add(spec.id)
        inst_ids.append(spec.id)
        if spec.kind not in KINDS:
            errors.append(Violation("BadKind", (spec.id,), f"{spec.kind!r} not in {KINDS}"))
    known = set(inst_ids)

    pairs_seen: set[tuple[str, str]] = set()
    for edge in problem.edges:
        for ref in (edge.a, edge.b):
            if ref not in known:
                errors.append(Violation("UnknownInstance", (ref,), f"edge {edge.name}"))
        if edge.a == edge.b:
            errors.append(Violation("SelfLoopEdge", (edge.a,)))
            continue
        if edge.pair in pairs_seen:
            errors.append(Violation("DuplicateEdge", edge.pair))
        pairs_seen.add(edge.pair)
        if edge.tolerance is not None and edge.tolerance < 0:
            errors.append(Violation("NegativeTolerance", edge.pair, str(edge.tolerance)))

    policy = problem.policy
    for label, groups in (
        ("antiAffinity", policy.anti_affinity),
        ("conflicts", policy.conflicts),
        ("colocate", policy.colocate),
    ):
        for group in groups:
            for ref in group:
                if ref not in known:
                    errors.append(Violation("UnknownInstance", (ref,), f"policy {label}"))

    declared = {e.pair for e in problem.edges if e.a != e.b}
    for a, b in policy.proximity:
        for ref in (a, b):
            if ref not in known:
                errors.append(Violation("UnknownInstance", (ref,), "policy proximity"))
        key = (a, b) if a <= b else (b, a)
        if key not in declared:
            errors.append(Violation("UnknownProximityEdge", (a, b)))

    separated = set(expand_pairs(policy.anti_affinity)) | set(expand_pairs(policy.conflicts))
    for pair in expand_pairs(policy.colocate):
        if pair in separated:
            errors.append(Violation("PolicyContradiction", pair))

    for ref, node in problem.pinned.items():
        if ref not in known:
            errors.append(Violation("UnknownInstance", (ref,), "pinned"))
        if node not in node_ids:
            errors.append(Violation("UnknownNode", (node,), f"pinned[{ref}]"))

    return errors


def require_valid(problem: PlacementProblem) -> None:
    """Raise :class:`InvalidProblemError` unless the problem validates clean."""
    errors = validate_problem(problem)
    if errors:
        raise InvalidProblemError(errors)


def expand_pairs(groups: Iterable[Sequence[str]]) -> list[tuple[str, str]]:
    """All unordered member pairs of each group, pair components sorted."""
    out: list[tuple[str, str]] = []
    for group in groups:
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                a, b = group[i], group[j]
                out.append((a, b) if a <= b else (b, a))
    return out


# ---------------------------------------------------------------------------
# indexed view used by the solver hot paths


@dataclass(frozen=True, eq=False)
class ProblemIndex:
    """Integer-indexed snapshot of a validated problem.

    Solvers work on positions, not ids: ``lat`` is a plain nested list for
    cheap row access, demands and capacities are (cpu, memory) tuples, and
    the policy is pre-expanded to index pairs.
    """

    instance_ids: tuple[str, ...]
    node_ids: tuple[str, ...]
    lat: list[list[int]]
    demands: list[tuple[int, int]]
    capacities: list[tuple[int, int]]
    edges: list[tuple[int, int, int | None]]
    edge_objs: tuple[InteractionEdge, ...]
    anti_pairs: list[tuple[int, int]]
    conflict_pairs: list[tuple[int, int]]
    colo_groups: list[list[int]]
    pins: dict[int, int]

    # per-instance adjacency, filled by index_problem
    sep_partners: list[list[int]]
    tol_edges: list[list[tuple[int, int]]]  # instance -> [(other, tolerance)]
    colo_of: list[int]  # colocation group index or -1
    inc_edges: list[list[tuple[int, int, int | None]]]  # instance -> [(edge_idx, other, tol)]


def index_problem(problem: PlacementProblem) -> ProblemIndex:
    """Build the indexed view. Assumes ``validate_problem`` passed."""
    inst_ids = problem.instance_ids()
    node_ids = problem.topology.node_ids()
    i_of = {iid: k for k, iid in enumerate(inst_ids)}
    n_of = {nid: k for k, nid in enumerate(node_ids)}

    demands = [(s.demand.cpu, s.demand.memory) for s in problem.instances]
    caps = [(n.capacity.cpu, n.capacity.memory) for n in problem.topology.nodes]
    lat = problem.topology.latency.tolist()

    edges = [(i_of[e.a], i_of[e.b], e.tolerance) for e in problem.edges]
    anti = [(i_of[a], i_of[b]) for a, b in expand_pairs(problem.policy.anti_affinity)]
    conf = [(i_of[a], i_of[b]) for a, b in expand_pairs(problem.policy.conflicts)]
    colo_groups = [[i_of[m] for m in g] for g in problem.policy.colocate if len(g) > 1]
    pins = {i_of[i]: n_of[n] for i, n in problem.pinned.items()}

    n = len(inst_ids)
    sep_partners: list[list[int]] = [[] for _ in range(n)]
    for a, b in anti + conf:
        sep_partners[a].append(b)
        sep_partners[b].append(a)

    tol_edges: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    inc_edges: list[list[tuple[int, int, int | None]]] = [[] for _ in range(n)]
    for k, (a, b, tol) in enumerate(edges):
        inc_edges[a].append((k, b, tol))
        inc_edges[b].append((k, a, tol))
        if tol is not None:
            tol_edges[a].append((b, tol))
            tol_edges[b].append((a, tol))

    colo_of = [-1] * n
    for g_idx, members in enumerate(colo_groups):
        for m in members:
            colo_of[m] = g_idx

    return ProblemIndex(
        instance_ids=inst_ids,
        node_ids=node_ids,
        lat=lat,
        demands=demands,
        capacities=caps,
        edges=edges,
        edge_objs=problem.edges,
        anti_pairs=anti,
        conflict_pairs=conf,
        colo_groups=colo_groups,
        pins=pins,
        sep_partners=sep_partners,
        tol_edges=tol_edges,
        colo_of=colo_of,
        inc_edges=inc_edges,
    )


# ---------------------------------------------------------------------------
# placement semantics


def _require_total(problem: PlacementProblem, placement: Placement) -> dict[str, str]:
    assignment = dict(placement.assignment)
    expected = set(problem.instance_ids())
    got = set(assignment)
    missing = expected - got
    extra = got - expected
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"missing {sorted(missing)}")
        if extra:
            parts.append(f"unknown {sorted(extra)}")
        raise PartialPlacementError(f"placement is not total: {', '.join(parts)}")
    known_nodes = set(problem.topology.node_ids())
    for iid, nid in assignment.items():
        if nid not in known_nodes:
            raise UnknownIdError(f"placement maps {iid!r} to unknown node {nid!r}")
    return assignment


def edge_latency(problem: PlacementProblem, placement: Placement, edge: InteractionEdge) -> int:
    """Latency in us between the hosts of the edge's endpoints (0 if shared)."""
    if edge.pair not in {e.pair for e in problem.edges}:
        raise UnknownIdError(f"edge {edge.name} is not declared in this problem")
    return problem.topology.latency_between(placement.of(edge.a), placement.of(edge.b))


def evaluate_objective(problem: PlacementProblem, placement: Placement) -> int:
    """Total latency over declared edges, each counted once."""
    _require_total(problem, placement)
    topo = problem.topology
    return sum(topo.latency_between(placement.of(e.a), placement.of(e.b)) for e in problem.edges)


def check_feasibility(problem: PlacementProblem, placement: Placement) -> list[Violation]:
    """Every rule breach of a total placement, in deterministic order.

    Order: edge tolerances (edge declaration order), anti-affinity,
    conflicts, colocation splits, node capacity (node order, cpu before
    memory), pins. Empty list means the placement is feasible.
    """
    assignment = _require_total(problem, placement)
    topo = problem.topology
    out: list[Violation] = []

    for e in problem.edges:
        if e.tolerance is None:
            continue
        lat = topo.latency_between(assignment[e.a], assignment[e.b])
        if lat > e.tolerance:
            out.append(Violation("ToleranceExceeded", (e.a, e.b), f"{lat} > {e.tolerance}"))

    for a, b in expand_pairs(problem.policy.anti_affinity):
        if assignment[a] == assignment[b]:
            out.append(Violation("AntiAffinity", (a, b, assignment[a])))

    for a, b in expand_pairs(problem.policy.conflicts):
        if assignment[a] == assignment[b]:
            out.append(Violation("Conflict", (a, b, assignment[a])))

    for group in problem.policy.colocate:
        for a, b in expand_pairs([group]):
            if assignment[a] != assignment[b]:
                out.append(Violation("ColocationSplit", (a, b), f"{assignment[a]} vs {assignment[b]}"))

    use: dict[str, list[int]] = {nid: [0, 0] for nid in topo.node_ids()}
    for spec in problem.instances:
        u = use[assignment[spec.id]]
        u[0] += spec.demand.cpu
        u[1] += spec.demand.memory
    for node in topo.nodes:
        used = use[node.id]
        caps = (node.capacity.cpu, node.capacity.memory)
        for r, rname in enumerate(RESOURCES):
            if used[r] > caps[r]:
                out.append(Violation("CapacityExceeded", (node.id, rname), f"{used[r]} > {caps[r]}"))

    for iid, nid in problem.pinned.items():
        if assignment[iid] != nid:
            out.append(Violation("PinViolated", (iid,), f"assigned {assignment[iid]}, pinned to {nid}"))

    return out


def build_report(
    problem: PlacementProblem,
    placement: Placement | None,
    status: str,
    stats: SolverStats,
) -> SolveReport:
    """Assemble a :class:`SolveReport`, deriving latencies and violations.

    The assignment is re-keyed in instance declaration order so serialized
    reports are byte-stable.
    """
    if status not in STATUSES:
        raise ValueError(f"unknown status {status!r}")
    if placement is None:
        return SolveReport(status, None, None, (), (), stats)
    ordered = Placement({iid: placement.of(iid) for iid in problem.instance_ids()})
    lats = tuple((e, edge_latency(problem, ordered, e)) for e in problem.edges)
    return SolveReport(
        status=status,
        placement=ordered,
        objective=sum(v for _, v in lats),
        edge_latencies=lats,
        violations=tuple(check_feasibility(problem, ordered)),
        stats=stats,
    )


def restrict_problem(problem: PlacementProblem, keep: Iterable[str]) -> PlacementProblem:
    """Sub-problem over a subset of instances, topology unchanged.

    Edges keep both endpoints or are dropped; policy groups are intersected
    with ``keep`` (groups shrinking below two members vanish); pins of
    dropped instances vanish.
    """
    keep_set = set(keep)
    unknown = keep_set - set(problem.instance_ids())
    if unknown:
        raise UnknownIdError(f"unknown instance ids {sorted(unknown)}")
    instances = tuple(s for s in problem.instances if s.id in keep_set)
    edges = tuple(e for e in problem.edges if e.a in keep_set and e.b in keep_set)
    kept_pairs = {e.pair for e in edges}

    def cut(groups: Iterable[Sequence[str]]) -> tuple[tuple[str, ...], ...]:
        out = []
        for g in groups:
            g2 = tuple(m for m in g if m in keep_set)
            if len(g2) >= 2:
                out.append(g2)
        return tuple(out)

    policy = SecurityPolicy(
        anti_affinity=cut(problem.policy.anti_affinity),
        conflicts=cut(problem.policy.conflicts),
        colocate=cut(problem.policy.colocate),
        proximity=tuple(
            (a, b)
            for a, b in problem.policy.proximity
            if ((a, b) if a <= b else (b, a)) in kept_pairs
        ),
    )
    pinned = {i: n for i, n in problem.pinned.items() if i in keep_set}
    return PlacementProblem(problem.topology, instances, edges, policy, pinned)
