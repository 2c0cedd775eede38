"""Build a small placement problem by hand and poke at its semantics.

Three servers, four instances, a handful of rules. Shows validation,
objective evaluation, and what the feasibility checker reports when a
placement breaks the rules.
"""

import numpy as np

from sfcplace import (
    InstanceSpec,
    InteractionEdge,
    Placement,
    PlacementProblem,
    ResourceVector,
    SecurityPolicy,
    ServerNode,
    Topology,
    check_feasibility,
    evaluate_objective,
    validate_problem,
)

topology = Topology(
    nodes=(
        ServerNode("rack-a", ResourceVector(cpu=8, memory=16)),
        ServerNode("rack-b", ResourceVector(cpu=8, memory=16)),
        ServerNode("rack-c", ResourceVector(cpu=4, memory=8)),
    ),
    latency=np.array(
        [
            [0, 120, 300],
            [120, 0, 180],
            [300, 180, 0],
        ]
    ),
)

problem = PlacementProblem(
    topology=topology,
    instances=(
        InstanceSpec("gw", "VNF", "SGW", ResourceVector(2, 4)),
        InstanceSpec("core", "VNF", "MME", ResourceVector(4, 8)),
        InstanceSpec("fw", "VSF", "FW", ResourceVector(1, 2)),
        InstanceSpec("ids", "VSF", "IDS", ResourceVector(2, 2)),
    ),
    edges=(
        InteractionEdge("gw", "core"),
        InteractionEdge("fw", "core", tolerance=150),
        InteractionEdge("ids", "gw"),
    ),
    policy=SecurityPolicy(
        anti_affinity=(("fw", "ids"),),
        proximity=(("fw", "core"),),
    ),
)

print("validation errors:", validate_problem(problem))

good = Placement({"gw": "rack-a", "core": "rack-a", "fw": "rack-b", "ids": "rack-a"})
print("\nplacement:", good.assignment)
print("objective:", evaluate_objective(problem, good), "us")
print("violations:", check_feasibility(problem, good))

bad = Placement({"gw": "rack-a", "core": "rack-c", "fw": "rack-c", "ids": "rack-c"})
print("\nplacement:", bad.assignment)
print("objective:", evaluate_objective(problem, bad), "us")
for violation in check_feasibility(problem, bad):
    print("  broken:", violation)
