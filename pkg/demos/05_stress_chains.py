"""Stress run: solve many seeded chain instances back to back.

Not a benchmark with any target to hit; it just shows solve times and
search sizes staying sane as the topology grows, and totals the batch.
Pass a chain count to scale it up (the spirit of a much larger batch run
on server hardware; the default keeps a laptop happy).

    python3 demos/05_stress_chains.py 64
"""

import sys
import time

from sfcplace import ScenarioParams, solve, vepc_problem

chains = int(sys.argv[1]) if len(sys.argv) > 1 else 16
node_counts = (5, 10, 15)

grand_total = 0.0
for nodes in node_counts:
    worst = 0.0
    explored = 0
    started = time.monotonic()
    for seed in range(chains):
        problem = vepc_problem(ScenarioParams(seed=seed, node_count=nodes))
        t0 = time.monotonic()
        report = solve(problem)
        dt = time.monotonic() - t0
        assert report.status == "optimal", (nodes, seed)
        worst = max(worst, dt)
        explored += report.stats.nodes_explored
    elapsed = time.monotonic() - started
    grand_total += elapsed
    print(
        f"{nodes:>2} nodes: {chains} chains in {elapsed:6.2f}s "
        f"(worst single {worst:5.2f}s, {explored} search nodes total)"
    )

print(f"\n{len(node_counts) * chains} chains solved to optimality in {grand_total:.2f}s")
