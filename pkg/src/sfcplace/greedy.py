"""Latency-agnostic first-fit baseline.

Walks instances in declaration order and drops each onto the first node (in
declaration order) with enough residual capacity. Capacity is the only rule
it honors; any security rule it tramples shows up in the report's
``violations`` instead of stopping the run, which is exactly what makes it a
useful comparison column against the exact solver.
"""

from __future__ import annotations

import time

from .model import (
    FEASIBLE,
    INFEASIBLE,
    Placement,
    PlacementProblem,
    SolveReport,
    SolverStats,
    build_report,
    index_problem,
    require_valid,
)


def solve_greedy(problem: PlacementProblem) -> SolveReport:
    """First-fit by capacity. Status "infeasible" iff some instance fits on
    no node; otherwise "feasible" with whatever violations the placement
    incurs."""
    require_valid(problem)
    idx = index_problem(problem)
    started = time.monotonic()

    res = [[c, m] for c, m in idx.capacities]
    assignment: dict[str, str] = {}
    checks = 0
    for i, iid in enumerate(idx.instance_ids):
        dc, dm = idx.demands[i]
        placed = False
        for n, nid in enumerate(idx.node_ids):
            checks += 1
            if dc <= res[n][0] and dm <= res[n][1]:
                res[n][0] -= dc
                res[n][1] -= dm
                assignment[iid] = nid
                placed = True
                break
        if not placed:
            stats = SolverStats(checks, time.monotonic() - started)
            return build_report(problem, None, INFEASIBLE, stats)

    stats = SolverStats(checks, time.monotonic() - started)
    return build_report(problem, Placement(assignment), FEASIBLE, stats)
