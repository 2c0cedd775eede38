"""Solve the mobile-core chain with both solvers and compare per edge.

The greedy baseline packs first-fit by capacity and ignores every other
rule, so it lands on a legal-looking but expensive placement (and may
break separation rules outright). The exact solver minimizes the summed
latency subject to all of them.
"""

import sys

from sfcplace import ScenarioParams, solve, solve_greedy, vepc_problem
from sfcplace.report import comparison_rows, render_comparison_table

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 7
problem = vepc_problem(ScenarioParams(seed=seed, node_count=8))

exact = solve(problem)
greedy = solve_greedy(problem)

print(f"seed {seed}, 8 nodes, {len(problem.instances)} instances")
print(f"exact : {exact.status}, total {exact.objective} us, "
      f"{exact.stats.nodes_explored} search nodes")
print(f"greedy: {greedy.status}, total {greedy.objective} us, "
      f"{len(greedy.violations)} rule violations")
for violation in greedy.violations:
    print("   greedy broke:", violation)

print()
print(render_comparison_table(comparison_rows(exact, greedy)))
