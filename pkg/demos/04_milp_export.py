"""Export a problem as LP text and sanity-check the encoding.

Writes both encodings of one small problem, shows their sizes, and then
substitutes the known optimum into the corrected encoding to confirm the
rows accept it and price it correctly. The faithful mode keeps the loose
big-M linking rows, which is useful for studying them but not for
optimizing; the corrected mode is the one an external MILP solver should
be given.
"""

from sfcplace import (
    ScenarioParams,
    encode_corrected,
    encode_faithful,
    induced_values,
    objective_value,
    parse_lp,
    solve,
    vepc_problem,
    violated_rows,
    write_lp,
)
from sfcplace.model import restrict_problem

full = vepc_problem(ScenarioParams(seed=1, node_count=3))
problem = restrict_problem(full, full.instance_ids()[:7])

for name, encoder in (("faithful", encode_faithful), ("corrected", encode_corrected)):
    encoding = encoder(problem)
    text = write_lp(encoding, f"/tmp/chain_{name}.lp")
    assert parse_lp(text) == encoding
    print(
        f"{name:>9}: {len(encoding.variables)} variables, "
        f"{len(encoding.constraints)} rows, big_m={encoding.big_m}, "
        f"{len(text.splitlines())} lines -> /tmp/chain_{name}.lp"
    )

best = solve(problem)
print(f"\noptimal placement costs {best.objective} us")

encoding = encode_corrected(problem)
values = induced_values(problem, best.placement, "corrected")
print("rows violated by the optimum:", violated_rows(encoding, values))
print("encoding objective at the optimum:", objective_value(encoding, values))
