"""Exhaustive reference solver.

Enumerates every total assignment of instances to nodes in lexicographic
order (instance declaration order major, node declaration order minor),
keeps the first strict improvement, and therefore returns the same
lexicographically smallest optimum as the branch-and-bound solver. No
pruning, no shortcuts; above ``limit`` assignments it refuses outright
instead of truncating.
"""

from __future__ import annotations

import itertools
import time

from .model import (
    INFEASIBLE,
    OPTIMAL,
    Placement,
    PlacementProblem,
    SolveReport,
    SolverStats,
    build_report,
    index_problem,
    require_valid,
)

DEFAULT_LIMIT = 2_000_000


class EnumerationLimitError(ValueError):
    """The assignment space exceeds the configured enumeration limit."""


def enumerate_optimal(problem: PlacementProblem, limit: int = DEFAULT_LIMIT) -> SolveReport:
    """Brute-force optimum over all |nodes| ** |instances| assignments."""
    require_valid(problem)
    idx = index_problem(problem)
    n_nodes = len(idx.node_ids)
    n_inst = len(idx.instance_ids)
    space = n_nodes**n_inst
    if space > limit:
        raise EnumerationLimitError(
            f"{n_nodes} nodes ** {n_inst} instances = {space} assignments exceeds limit {limit}"
        )

    started = time.monotonic()
    lat = idx.lat
    demands = idx.demands
    caps = idx.capacities
    edges = idx.edges
    sep = idx.anti_pairs + idx.conflict_pairs
    colo = [pair for g in idx.colo_groups for pair in itertools.combinations(g, 2)]
    pins = list(idx.pins.items())

    best: tuple[int, ...] | None = None
    best_obj: int | None = None
    count = 0
    for assign in itertools.product(range(n_nodes), repeat=n_inst):
        count += 1
        ok = True
        for i, n in pins:
            if assign[i] != n:
                ok = False
                break
        if not ok:
            continue
        for a, b in sep:
            if assign[a] == assign[b]:
                ok = False
                break
        if not ok:
            continue
        for a, b in colo:
            if assign[a] != assign[b]:
                ok = False
                break
        if not ok:
            continue
        used = [[0, 0] for _ in range(n_nodes)]
        for i in range(n_inst):
            u = used[assign[i]]
            d = demands[i]
            u[0] += d[0]
            u[1] += d[1]
        for n in range(n_nodes):
            if used[n][0] > caps[n][0] or used[n][1] > caps[n][1]:
                ok = False
                break
        if not ok:
            continue
        obj = 0
        for a, b, tol in edges:
            d = lat[assign[a]][assign[b]]
            if tol is not None and d > tol:
                ok = False
                break
            obj += d
        if not ok:
            continue
        if best_obj is None or obj < best_obj:
            best_obj = obj
            best = assign

    stats = SolverStats(nodes_explored=count, wall_time=time.monotonic() - started)
    if best is None:
        return build_report(problem, None, INFEASIBLE, stats)
    placement = Placement(
        {idx.instance_ids[i]: idx.node_ids[best[i]] for i in range(n_inst)}
    )
    return build_report(problem, placement, OPTIMAL, stats)
