"""Exact placement solver: depth-first branch and bound.

Search state is an assignment prefix plus, for every unassigned instance,
the set of nodes not yet ruled out. Ruling out happens by forward checking
against assigned instances (capacity, separation rules, colocation groups,
edge tolerances, pins). The admissible lower bound is the sum over edges of
the cheapest latency still achievable given the current domains, so pruning
never discards an optimal completion.

Determinism contract: among equal-objective optima the solver returns the
lexicographically smallest assignment vector (instance declaration order,
node declaration order). With the default dynamic branching this is done in
two phases: phase A proves the optimal value, phase B re-searches in input
order with that value as budget and stops at the first leaf reaching it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Mapping

from .model import (
    INFEASIBLE,
    OPTIMAL,
    TIMEOUT,
    Placement,
    PlacementProblem,
    ProblemIndex,
    ResourceVector,
    SolveReport,
    SolverStats,
    build_report,
    index_problem,
    require_valid,
)

INPUT_ORDER = "inputOrder"
MOST_CONSTRAINED_FIRST = "mostConstrainedFirst"
CHEAPEST_BOUND_FIRST = "cheapestBoundFirst"

_INF = float("inf")


@dataclass(frozen=True)
class SolverConfig:
    """Search knobs. The defaults are the fast path; the ``inputOrder``
    settings reproduce naive fixed-order search for tests."""

    time_limit: float | None = None
    instance_order: str = MOST_CONSTRAINED_FIRST
    node_order: str = CHEAPEST_BOUND_FIRST

    def __post_init__(self) -> None:
        if self.time_limit is not None and self.time_limit < 0:
            raise ValueError("time_limit must be >= 0 or None")
        if self.instance_order not in (INPUT_ORDER, MOST_CONSTRAINED_FIRST):
            raise ValueError(f"unknown instance_order {self.instance_order!r}")
        if self.node_order not in (INPUT_ORDER, CHEAPEST_BOUND_FIRST):
            raise ValueError(f"unknown node_order {self.node_order!r}")


@dataclass(frozen=True)
class SearchNode:
    """One branch-and-bound state in id space.

    ``assignment`` maps placed instances to nodes; ``domains`` holds the
    candidate nodes (in declaration order) for every unassigned instance;
    ``residual`` is per-node remaining capacity after the assignment.
    """

    assignment: Mapping[str, str]
    domains: Mapping[str, tuple[str, ...]]
    lower_bound: int
    residual: Mapping[str, ResourceVector]

    def __post_init__(self) -> None:
        object.__setattr__(self, "assignment", dict(self.assignment))
        object.__setattr__(self, "domains", {k: tuple(v) for k, v in self.domains.items()})
        object.__setattr__(self, "residual", dict(self.residual))


class _TimeoutSignal(Exception):
    pass


# ---------------------------------------------------------------------------
# id-space operations (public API, also exercised directly by tests)


def root_node(problem: PlacementProblem) -> SearchNode:
    """Empty assignment, full domains, untouched capacities."""
    nodes = problem.topology.node_ids()
    domains = {iid: nodes for iid in problem.instance_ids()}
    residual = {n.id: n.capacity for n in problem.topology.nodes}
    node = SearchNode({}, domains, 0, residual)
    return replace(node, lower_bound=lower_bound(problem, node))


def lower_bound(problem: PlacementProblem, node: SearchNode) -> int:
    """Sum over edges of the cheapest latency any domain pair still allows.

    Assigned endpoints are fixed; unassigned ones range over their domain.
    Admissible: never exceeds the objective of any feasible completion below
    ``node``. Raises ``ValueError`` on an empty domain (dead-end state).
    """
    topo = problem.topology

    def dom(iid: str) -> tuple[str, ...]:
        got = node.assignment.get(iid)
        return (got,) if got is not None else node.domains[iid]

    total = 0
    for e in problem.edges:
        da, db = dom(e.a), dom(e.b)
        if not da or not db:
            raise ValueError(f"empty domain on edge {e.name}")
        total += min(topo.latency_between(x, y) for x in da for y in db)
    return total


def propagate(problem: PlacementProblem, node: SearchNode) -> SearchNode | None:
    """Forward-check every unassigned domain against the assigned instances.

    Removes nodes that would break capacity, a separation rule, colocation
    with an already placed group member, a finite edge tolerance toward an
    assigned neighbor, or a pin. Returns ``None`` on a dead end (an emptied
    domain). Sound: a node participating in some feasible completion is
    never removed.
    """
    idx = index_problem(problem)
    assignment = node.assignment
    topo = problem.topology
    pos = {iid: k for k, iid in enumerate(idx.instance_ids)}

    new_domains: dict[str, tuple[str, ...]] = {}
    for iid, dom in node.domains.items():
        if iid in assignment:
            continue
        i = pos[iid]
        demand = problem.instances[i].demand
        keep = []
        for nid in dom:
            if not node.residual[nid].covers(demand):
                continue
            if any(
                assignment.get(idx.instance_ids[j]) == nid for j in idx.sep_partners[i]
            ):
                continue
            g = idx.colo_of[i]
            if g >= 0:
                anchors = {
                    assignment[idx.instance_ids[m]]
                    for m in idx.colo_groups[g]
                    if idx.instance_ids[m] in assignment
                }
                if anchors and nid not in anchors:
                    continue
            bad_tol = False
            for j, tol in idx.tol_edges[i]:
                other = assignment.get(idx.instance_ids[j])
                if other is not None and topo.latency_between(nid, other) > tol:
                    bad_tol = True
                    break
            if bad_tol:
                continue
            pin = idx.pins.get(i)
            if pin is not None and nid != idx.node_ids[pin]:
                continue
            keep.append(nid)
        if not keep:
            return None
        new_domains[iid] = tuple(keep)

    pruned = SearchNode(assignment, new_domains, node.lower_bound, node.residual)
    return replace(pruned, lower_bound=lower_bound(problem, pruned))


def assign(problem: PlacementProblem, node: SearchNode, instance_id: str, node_id: str) -> SearchNode:
    """Extend the assignment by one instance and update the residuals.

    Does not propagate; chain with :func:`propagate` to prune. Raises
    ``ValueError`` if the node lacks capacity or the instance is already
    placed.
    """
    if instance_id in node.assignment:
        raise ValueError(f"{instance_id!r} is already assigned")
    demand = problem.instance(instance_id).demand
    residual = node.residual[node_id]
    if not residual.covers(demand):
        raise ValueError(f"{node_id!r} cannot fit {instance_id!r}")
    assignment = {**node.assignment, instance_id: node_id}
    domains = {k: v for k, v in node.domains.items() if k != instance_id}
    residuals = {
        **node.residual,
        node_id: ResourceVector(residual.cpu - demand.cpu, residual.memory - demand.memory),
    }
    out = SearchNode(assignment, domains, node.lower_bound, residuals)
    return replace(out, lower_bound=lower_bound(problem, out))


# ---------------------------------------------------------------------------
# index-space engine


class _Engine:
    def __init__(self, ctx: ProblemIndex, deadline: float | None):
        self.ctx = ctx
        self.deadline = deadline
        self.n_inst = len(ctx.instance_ids)
        self.n_nodes = len(ctx.node_ids)
        self.nodes = 0
        self.best_obj: int | None = None
        self.best: list[int] | None = None

    def _root(self) -> tuple[list[int], list[list[int]] | None, list[int], list[int], list[int]]:
        ctx = self.ctx
        assignment = [-1] * self.n_inst
        res_cpu = [c for c, _ in ctx.capacities]
        res_mem = [m for _, m in ctx.capacities]
        domains: list[list[int] | None] = []
        for i in range(self.n_inst):
            dc, dm = ctx.demands[i]
            pin = ctx.pins.get(i)
            dom = [
                n
                for n in range(self.n_nodes)
                if dc <= res_cpu[n] and dm <= res_mem[n] and (pin is None or n == pin)
            ]
            if not dom:
                return assignment, None, [], res_cpu, res_mem
            domains.append(dom)
        terms = [self._term(e, assignment, domains) for e in range(len(ctx.edges))]
        return assignment, domains, terms, res_cpu, res_mem

    def _term(self, e: int, assignment: list[int], domains: list) -> int:
        a, b, _tol = self.ctx.edges[e]
        lat = self.ctx.lat
        aa, ab = assignment[a], assignment[b]
        if aa >= 0 and ab >= 0:
            return lat[aa][ab]
        if aa >= 0:
            row = lat[aa]
            return min(row[m] for m in domains[b])
        if ab >= 0:
            row = lat[ab]
            return min(row[m] for m in domains[a])
        best = None
        for x in domains[a]:
            row = lat[x]
            for y in domains[b]:
                v = row[y]
                if best is None or v < best:
                    best = v
        return best  # domains are never empty here

    def _pick(self, assignment: list[int], domains: list, by_input: bool) -> int:
        if by_input:
            for i in range(self.n_inst):
                if assignment[i] < 0:
                    return i
        best_i, best_len = -1, None
        for i in range(self.n_inst):
            if assignment[i] < 0:
                size = len(domains[i])
                if best_len is None or size < best_len:
                    best_i, best_len = i, size
        return best_i

    def _node_order(self, i: int, assignment: list[int], domains: list, by_input: bool) -> list[int]:
        dom = domains[i]
        if by_input:
            return dom
        lat = self.ctx.lat
        inc = self.ctx.inc_edges[i]

        def key(n: int) -> int:
            row = lat[n]
            total = 0
            for _e, j, _tol in inc:
                aj = assignment[j]
                if aj >= 0:
                    total += row[aj]
                else:
                    total += min(row[m] for m in domains[j])
            return total

        return sorted(dom, key=key)  # stable: ties keep declaration order

    def _descend(
        self,
        i: int,
        n: int,
        assignment: list[int],
        domains: list,
        terms: list[int],
        bound: int,
        res_cpu: list[int],
        res_mem: list[int],
    ) -> tuple[list, list[int], int] | None:
        """Apply ``i -> n``: prune affected domains, refresh affected edge
        terms, and return (child_domains, child_terms, child_bound) or None
        on a dead end. Caller has already mutated assignment/residuals."""
        ctx = self.ctx
        lat = self.ctx.lat
        child = domains.copy()
        child[i] = None
        changed = [i]

        for j in ctx.sep_partners[i]:
            dom = child[j]
            if dom is not None and n in dom:
                dom = [m for m in dom if m != n]
                if not dom:
                    return None
                child[j] = dom
                changed.append(j)

        g = ctx.colo_of[i]
        if g >= 0:
            for j in ctx.colo_groups[g]:
                dom = child[j]
                if dom is None:
                    continue
                if n not in dom:
                    return None
                if len(dom) > 1:
                    child[j] = [n]
                    changed.append(j)

        for j, tol in ctx.tol_edges[i]:
            dom = child[j]
            if dom is None:
                continue
            dom = [m for m in dom if lat[m][n] <= tol]
            if not dom:
                return None
            child[j] = dom
            changed.append(j)

        rc, rm = res_cpu[n], res_mem[n]
        for j in range(self.n_inst):
            dom = child[j]
            if dom is None or n not in dom:
                continue
            dc, dm = ctx.demands[j]
            if dc > rc or dm > rm:
                dom = [m for m in dom if m != n]
                if not dom:
                    return None
                child[j] = dom
                changed.append(j)

        affected: set[int] = set()
        for j in changed:
            for e, _other, _tol in ctx.inc_edges[j]:
                affected.add(e)
        if not affected:
            return child, terms, bound
        child_terms = terms.copy()
        for e in affected:
            new = self._term(e, assignment, child)
            bound += new - child_terms[e]
            child_terms[e] = new
        return child, child_terms, bound

    def search(
        self,
        assignment: list[int],
        domains: list,
        terms: list[int],
        bound: int,
        res_cpu: list[int],
        res_mem: list[int],
        n_assigned: int,
        input_instances: bool,
        input_nodes: bool,
        budget: int | None,
    ) -> bool:
        """DFS. With ``budget=None`` (phase A) improves ``self.best``;
        with a budget (phase B) returns True at the first leaf within it."""
        if n_assigned == self.n_inst:
            if budget is not None:
                self.best_obj = bound
                self.best = assignment.copy()
                return True
            if self.best_obj is None or bound < self.best_obj:
                self.best_obj = bound
                self.best = assignment.copy()
            return False

        i = self._pick(assignment, domains, input_instances)
        ctx = self.ctx
        dc, dm = ctx.demands[i]
        for n in self._node_order(i, assignment, domains, input_nodes):
            self.nodes += 1
            if self.deadline is not None and time.monotonic() > self.deadline:
                raise _TimeoutSignal
            assignment[i] = n
            res_cpu[n] -= dc
            res_mem[n] -= dm
            try:
                got = self._descend(i, n, assignment, domains, terms, bound, res_cpu, res_mem)
                if got is not None:
                    c_dom, c_terms, c_bound = got
                    if budget is None:
                        admit = self.best_obj is None or c_bound < self.best_obj
                    else:
                        admit = c_bound <= budget
                    if admit and self.search(
                        assignment,
                        c_dom,
                        c_terms,
                        c_bound,
                        res_cpu,
                        res_mem,
                        n_assigned + 1,
                        input_instances,
                        input_nodes,
                        budget,
                    ):
                        return True
            finally:
                assignment[i] = -1
                res_cpu[n] += dc
                res_mem[n] += dm
        return False


def solve(problem: PlacementProblem, config: SolverConfig | None = None) -> SolveReport:
    """Minimize total edge latency subject to every placement rule.

    Returns a report with status "optimal" (proven), "infeasible", or, when
    the time limit expires first, "timeout" carrying the best incumbent
    found so far (no claim of optimality). Identical problem and config give
    identical placement and node counts on repeat runs.
    """
    config = config or SolverConfig()
    require_valid(problem)
    ctx = index_problem(problem)
    started = time.monotonic()
    deadline = None if config.time_limit is None else started + config.time_limit
    engine = _Engine(ctx, deadline)

    def report(placement_vec: list[int] | None, status: str) -> SolveReport:
        stats = SolverStats(engine.nodes, time.monotonic() - started)
        if placement_vec is None:
            return build_report(problem, None, status, stats)
        placement = Placement(
            {ctx.instance_ids[i]: ctx.node_ids[placement_vec[i]] for i in range(len(placement_vec))}
        )
        return build_report(problem, placement, status, stats)

    assignment, domains, terms, res_cpu, res_mem = engine._root()
    if domains is None:
        return report(None, INFEASIBLE)

    by_input_i = config.instance_order == INPUT_ORDER
    by_input_n = config.node_order == INPUT_ORDER
    try:
        engine.search(
            assignment, domains, terms, sum(terms), res_cpu, res_mem, 0, by_input_i, by_input_n, None
        )
    except _TimeoutSignal:
        return report(engine.best, TIMEOUT)

    if engine.best is None:
        return report(None, INFEASIBLE)
    if by_input_i and by_input_n:
        # fixed-order phase A already visits leaves lexicographically, so the
        # first optimum kept is the lexicographically smallest one
        return report(engine.best, OPTIMAL)

    budget = engine.best_obj
    phase_a_best = engine.best
    engine.best = None
    engine.best_obj = None
    try:
        found = engine.search(
            assignment, domains, terms, sum(terms), res_cpu, res_mem, 0, True, True, budget
        )
    except _TimeoutSignal:
        return report(phase_a_best, TIMEOUT)
    # budget equals the proven optimum, so phase B always finds a leaf
    return report(engine.best if found else phase_a_best, OPTIMAL)
