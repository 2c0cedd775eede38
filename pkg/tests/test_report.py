import pytest

from conftest import make_problem
from sfcplace.exact import solve
from sfcplace.greedy import solve_greedy
from sfcplace.model import SecurityPolicy, SolverStats, build_report
from sfcplace.report import (
    CSV_HEADER,
    comparison_rows,
    render_comparison_csv,
    render_comparison_table,
    render_solve_table,
)

# Hand-picked per-link rows, used only to pin the rendering format.
FIXTURE_ROWS = [
    ("FW-1/MME-1", 399, 731),
    ("DPI-1/PGW-1", 394, 706),
]


def test_csv_rendering_fixture():
    text = render_comparison_csv(FIXTURE_ROWS)
    assert text == (
        "edge,exact_us,greedy_us\n"
        "FW-1/MME-1,399,731\n"
        "DPI-1/PGW-1,394,706\n"
        "total,793,1437\n"
    )
    assert text.startswith(CSV_HEADER + "\n")


def test_table_rendering_fixture():
    text = render_comparison_table(FIXTURE_ROWS)
    assert text == (
        "edge         exact_us  greedy_us\n"
        "FW-1/MME-1        399        731\n"
        "DPI-1/PGW-1       394        706\n"
        "total             793       1437\n"
    )


def test_comparison_rows_from_solvers():
    p = make_problem(
        [[0, 8], [8, 0]],
        [("a", (1, 1)), ("b", (1, 1))],
        edges=[("a", "b")],
    )
    rows = comparison_rows(solve(p), solve_greedy(p))
    assert rows == [("a/b", 0, 0)]


def test_comparison_rows_guardrails(tri_problem):
    infeasible = build_report(tri_problem, None, "infeasible", SolverStats())
    ok = solve(tri_problem)
    with pytest.raises(ValueError):
        comparison_rows(ok, infeasible)
    with pytest.raises(ValueError):
        comparison_rows(infeasible, ok)
    other = make_problem(
        [[0, 8], [8, 0]], [("a", (1, 1)), ("b", (1, 1))], edges=[("a", "b")]
    )
    with pytest.raises(ValueError):
        comparison_rows(ok, solve(other))


def test_exact_column_dominates_on_chain(tri_problem):
    rows = comparison_rows(solve(tri_problem), solve_greedy(tri_problem))
    assert [name for name, _, _ in rows] == ["a/b", "b/c"]
    assert sum(r[1] for r in rows) <= sum(r[2] for r in rows)


def test_solve_table_rendering(tri_problem):
    rep = solve(tri_problem)
    text = render_solve_table(rep)
    assert "status     optimal" in text
    assert "objective  15 us" in text
    assert "  a -> n1" in text
    assert "violations none" in text
    infeasible = build_report(tri_problem, None, "infeasible", SolverStats(3))
    text = render_solve_table(infeasible)
    assert "objective  - us" in text
    assert "placement  none" in text


def test_solve_table_lists_violations():
    p = make_problem(
        [[0, 4], [4, 0]],
        [("a", (1, 1)), ("b", (1, 1))],
        policy=SecurityPolicy(anti_affinity=(("a", "b"),)),
    )
    rep = solve_greedy(p)
    text = render_solve_table(rep)
    assert "violations:" in text
    assert "AntiAffinity(a,b,n1)" in text
