"""Text renderings: per-edge latency comparisons and solve summaries.

The comparison layout is one row per interaction edge with the exact and
greedy latencies side by side, plus a closing total row. Both a CSV form
(header ``edge,exact_us,greedy_us``) and an aligned human table are
provided; given equal reports the renderings are byte-identical.
"""

from __future__ import annotations

from .model import SolveReport

CSV_HEADER = "edge,exact_us,greedy_us"


def comparison_rows(exact: SolveReport, greedy: SolveReport) -> list[tuple[str, int, int]]:
    """Per-edge (name, exact latency, greedy latency) in edge declaration
    order. Both reports must carry placements over the same edge set."""
    if exact.placement is None or greedy.placement is None:
        raise ValueError("both reports need a placement to compare")
    greedy_lat = {edge.name: lat for edge, lat in greedy.edge_latencies}
    if len(greedy_lat) != len(exact.edge_latencies):
        raise ValueError("reports cover different edge sets")
    rows = []
    for edge, lat in exact.edge_latencies:
        if edge.name not in greedy_lat:
            raise ValueError(f"greedy report lacks edge {edge.name}")
        rows.append((edge.name, lat, greedy_lat[edge.name]))
    return rows


def render_comparison_csv(rows: list[tuple[str, int, int]]) -> str:
    lines = [CSV_HEADER]
    lines.extend(f"{name},{ex},{gr}" for name, ex, gr in rows)
    lines.append(f"total,{sum(r[1] for r in rows)},{sum(r[2] for r in rows)}")
    return "\n".join(lines) + "\n"


def render_comparison_table(rows: list[tuple[str, int, int]]) -> str:
    total = ("total", sum(r[1] for r in rows), sum(r[2] for r in rows))
    body = [(name, str(ex), str(gr)) for name, ex, gr in rows + [total]]
    head = ("edge", "exact_us", "greedy_us")
    widths = [
        max(len(head[c]), max((len(r[c]) for r in body), default=0)) for c in range(3)
    ]
    lines = [f"{head[0]:<{widths[0]}}  {head[1]:>{widths[1]}}  {head[2]:>{widths[2]}}"]
    for name, ex, gr in body:
        lines.append(f"{name:<{widths[0]}}  {ex:>{widths[1]}}  {gr:>{widths[2]}}")
    return "\n".join(lines) + "\n"


def render_solve_table(report: SolveReport) -> str:
    lines = [
        f"status     {report.status}",
        f"objective  {'-' if report.objective is None else report.objective} us",
        f"explored   {report.stats.nodes_explored} nodes",
    ]
    if report.placement is None:
        lines.append("placement  none")
    else:
        lines.append("placement:")
        lines.extend(f"  {iid} -> {nid}" for iid, nid in report.placement.assignment.items())
    if report.violations:
        lines.append("violations:")
        lines.extend(f"  {v}" for v in report.violations)
    else:
        lines.append("violations none")
    return "\n".join(lines) + "\n"
