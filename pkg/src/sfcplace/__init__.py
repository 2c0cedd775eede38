"""Latency-aware placement of service function chains on server nodes.

The model module defines problems and what feasibility means; exact and
greedy are the two solvers, oracle the brute-force reference; milp exports
the problem for external MILP solvers; scenario generates the mobile-core
chain and random test problems.
"""

from .exact import (
    CHEAPEST_BOUND_FIRST,
    INPUT_ORDER,
    MOST_CONSTRAINED_FIRST,
    SearchNode,
    SolverConfig,
    solve,
)
from .greedy import solve_greedy
from .milp import (
    CORRECTED,
    FAITHFUL,
    LpParseError,
    MilpEncoding,
    MilpVar,
    Row,
    Term,
    default_big_m,
    encode_corrected,
    encode_faithful,
    induced_values,
    objective_value,
    parse_lp,
    violated_rows,
    write_lp,
)
from .model import (
    FEASIBLE,
    INFEASIBLE,
    OPTIMAL,
    RESOURCES,
    TIMEOUT,
    VNF,
    VSF,
    InstanceSpec,
    InteractionEdge,
    InvalidProblemError,
    ModelError,
    PartialPlacementError,
    Placement,
    PlacementProblem,
    ResourceVector,
    SecurityPolicy,
    ServerNode,
    SolveReport,
    SolverStats,
    Topology,
    UnknownIdError,
    Violation,
    build_report,
    check_feasibility,
    edge_latency,
    evaluate_objective,
    expand_pairs,
    require_valid,
    restrict_problem,
    validate_problem,
)
from .oracle import EnumerationLimitError, enumerate_optimal
from .scenario import ScenarioParams, census, random_problem, vepc_problem
from .serialize import (
    SchemaError,
    dumps_canonical,
    load_placement,
    load_problem,
    placement_from_dict,
    placement_to_dict,
    problem_from_dict,
    problem_to_dict,
    report_to_dict,
    save_problem,
    save_report,
)

__version__ = "0.1.0"
