import numpy as np
import pytest

from sfcplace.model import (
    VNF,
    VSF,
    InstanceSpec,
    InteractionEdge,
    PlacementProblem,
    ResourceVector,
    SecurityPolicy,
    ServerNode,
    Topology,
)


def make_topology(latency, caps=None):
    lat = np.asarray(latency)
    k = lat.shape[0]
    if caps is None:
        caps = [(10, 10)] * k
    nodes = tuple(ServerNode(f"n{i + 1}", ResourceVector(*caps[i])) for i in range(k))
    return Topology(nodes, lat)


def make_instances(*specs):
    """specs: (id, (cpu, mem)) pairs; kind/function filled with defaults."""
    out = []
    for k, (iid, demand) in enumerate(specs):
        kind = VNF if k % 2 == 0 else VSF
        out.append(InstanceSpec(iid, kind, "F", ResourceVector(*demand)))
    return tuple(out)


def make_problem(latency, specs, edges=(), policy=None, pinned=None, caps=None):
    return PlacementProblem(
        topology=make_topology(latency, caps),
        instances=make_instances(*specs),
        edges=tuple(InteractionEdge(*e) for e in edges),
        policy=policy or SecurityPolicy(),
        pinned=pinned or {},
    )


TRI_LATENCY = [[0, 10, 20], [10, 0, 5], [20, 5, 0]]


@pytest.fixture
def tri_problem():
    """Three unit-demand instances on three unit-capacity nodes, chained
    a-b-c. One instance per node is forced, optimum 15 at (n1, n2, n3)."""
    return make_problem(
        TRI_LATENCY,
        [("a", (1, 1)), ("b", (1, 1)), ("c", (1, 1))],
        edges=[("a", "b"), ("b", "c")],
        caps=[(1, 1)] * 3,
    )
