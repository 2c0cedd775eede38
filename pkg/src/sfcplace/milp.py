"""Mixed-integer linear encodings of a placement problem plus LP file IO.

Two encodings of the same problem are offered:

``faithful``
    An indicator formulation with loose big-M linking: per edge and
    ordered node pair a binary ``Y`` plus two big-M rows (families ``lk1``
    and ``lk2``) intended to tie the edge latency variable to the hosting
    pair, and per colocation pair the never-binding ``D + D <= 2`` rows
    (family ``coll``). Redundancies are left in place so the formulation
    itself can be studied; its linking rows do not actually pin the
    latency variables.

``corrected``
    A sound formulation: per edge and ordered node pair a binary ``Z``
    constrained to the product of the two host indicators (families
    ``and1`` to ``and3``), each edge latency pinned by an equality over
    ``Z`` (family ``lat``), and colocation enforced through pairwise
    equalities (family ``colo``).

Row families shared by both modes: ``tol`` (finite edge tolerances),
``anti`` and ``conf`` (separation pairs, one row per pair per node),
``one`` (each instance hosted exactly once), ``cap`` (per node and
resource; zero-demand instances contribute no terms and an all-zero row is
omitted), ``pin`` (fixed instances).

Variables are ``D_<instance>_<node>`` (binary host indicator),
``L_<a>_<b>`` (integer edge latency in us, lower bound 0), and the
four-index binaries ``Y``/``Z``. Ids are sanitized to ``[A-Za-z0-9_]``;
a sanitization collision is rejected rather than repaired.

``write_lp`` emits deterministic CPLEX-style LP text (sections Minimize /
Subject To / Bounds / Binary / General / End; rows grouped by family, each
family sorted by its index tuple) and ``parse_lp`` reads such a file back
into a structurally equal :class:`MilpEncoding`.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .model import (
    RESOURCES,
    PlacementProblem,
    Placement,
    edge_latency,
    expand_pairs,
    require_valid,
)

FAITHFUL = "faithful"
CORRECTED = "corrected"
MODES = (FAITHFUL, CORRECTED)

BINARY = "binary"
INTEGER = "integer"  # integer variable with implicit bounds [0, inf)

_LINE_WIDTH = 76


class LpParseError(ValueError):
    """An LP file does not match the subset this module writes."""


@dataclass(frozen=True)
class Term:
    coef: int
    var: str


@dataclass(frozen=True)
class Row:
    name: str
    terms: tuple[Term, ...]
    sense: str  # one of <=, >=, =
    rhs: int


@dataclass(frozen=True)
class MilpVar:
    name: str
    kind: str  # BINARY or INTEGER


@dataclass(frozen=True)
class MilpEncoding:
    mode: str
    variables: tuple[MilpVar, ...]
    constraints: tuple[Row, ...]
    objective: tuple[Term, ...]
    big_m: int


def default_big_m(problem: PlacementProblem) -> int:
    """One past the largest latency entry; any value at or above this leaves
    the big-M rows equally slack for every realizable latency."""
    lat = problem.topology.latency
    return int(lat.max()) + 1 if lat.size else 1


def _sanitize(ids: Iterable[str]) -> dict[str, str]:
    out: dict[str, str] = {}
    taken: dict[str, str] = {}
    for raw in ids:
        token = re.sub(r"[^A-Za-z0-9_]", "_", raw)
        if taken.get(token, raw) != raw:
            raise ValueError(f"ids {taken[token]!r} and {raw!r} both sanitize to {token!r}")
        taken[token] = raw
        out[raw] = token
    return out


class _Namer:
    def __init__(self, problem: PlacementProblem):
        self.inst = _sanitize(problem.instance_ids())
        self.node = _sanitize(problem.topology.node_ids())

    def d(self, iid: str, nid: str) -> str:
        return f"D_{self.inst[iid]}_{self.node[nid]}"

    def l(self, a: str, b: str) -> str:
        return f"L_{self.inst[a]}_{self.inst[b]}"

    def yz(self, prefix: str, a: str, b: str, n: str, m: str) -> str:
        return f"{prefix}_{self.inst[a]}_{self.inst[b]}_{self.node[n]}_{self.node[m]}"


def _sorted_rows(rows: list[tuple[tuple[str, ...], Row]]) -> list[Row]:
    rows.sort(key=lambda kv: kv[0])
    return [r for _, r in rows]


def _encode(problem: PlacementProblem, mode: str, big_m: int | None) -> MilpEncoding:
    require_valid(problem)
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    m_val = default_big_m(problem) if big_m is None else int(big_m)
    if m_val <= 0:
        raise ValueError("big_m must be positive")

    names = _Namer(problem)
    topo = problem.topology
    node_ids = topo.node_ids()
    inst_ids = problem.instance_ids()
    pair_prefix = "Y" if mode == FAITHFUL else "Z"

    variables: list[MilpVar] = []
    for iid in inst_ids:
        for nid in node_ids:
            variables.append(MilpVar(names.d(iid, nid), BINARY))
    for e in problem.edges:
        for n, m in itertools.product(node_ids, node_ids):
            variables.append(MilpVar(names.yz(pair_prefix, e.a, e.b, n, m), BINARY))
    for e in problem.edges:
        variables.append(MilpVar(names.l(e.a, e.b), INTEGER))
    seen_names = {v.name for v in variables}
    if len(seen_names) != len(variables):
        raise ValueError("variable name collision after id sanitization")

    constraints: list[Row] = []

    def family(rows: list[tuple[tuple[str, ...], Row]]) -> None:
        constraints.extend(_sorted_rows(rows))

    anti_pairs = list(dict.fromkeys(expand_pairs(problem.policy.anti_affinity)))
    conflict_pairs = list(dict.fromkeys(expand_pairs(problem.policy.conflicts)))
    colo_pairs = list(dict.fromkeys(expand_pairs(problem.policy.colocate)))

    if mode == FAITHFUL:
        lk1, lk2 = [], []
        for e in problem.edges:
            lname = names.l(e.a, e.b)
            for n, m in itertools.product(node_ids, node_ids):
                y = names.yz("Y", e.a, e.b, n, m)
                key = (e.a, e.b, n, m)
                lk1.append(
                    (
                        key,
                        Row(
                            f"lk1_{y[2:]}",
                            (Term(-1, lname), Term(-m_val, y)),
                            "<=",
                            -topo.latency_between(n, m),
                        ),
                    )
                )
                lk2.append(
                    (
                        key,
                        Row(
                            f"lk2_{y[2:]}",
                            (Term(1, names.d(e.a, n)), Term(-1, names.d(e.b, m)), Term(m_val, y)),
                            "<=",
                            m_val,
                        ),
                    )
                )
        family(lk1)
        family(lk2)
    else:
        and1, and2, and3, lat_rows = [], [], [], []
        for e in problem.edges:
            lname = names.l(e.a, e.b)
            lat_terms = [Term(1, lname)]
            for n, m in itertools.product(node_ids, node_ids):
                z = names.yz("Z", e.a, e.b, n, m)
                da, db = names.d(e.a, n), names.d(e.b, m)
                key = (e.a, e.b, n, m)
                and1.append((key, Row(f"and1_{z[2:]}", (Term(1, da), Term(1, db), Term(-1, z)), "<=", 1)))
                and2.append((key, Row(f"and2_{z[2:]}", (Term(1, z), Term(-1, da)), "<=", 0)))
                and3.append((key, Row(f"and3_{z[2:]}", (Term(1, z), Term(-1, db)), "<=", 0)))
                w = topo.latency_between(n, m)
                if w != 0:
                    lat_terms.append(Term(-w, z))
            lat_rows.append(((e.a, e.b), Row(f"lat_{lname[2:]}", tuple(lat_terms), "=", 0)))
        family(and1)
        family(and2)
        family(and3)
        family(lat_rows)

    tol_rows = []
    for e in problem.edges:
        if e.tolerance is not None:
            lname = names.l(e.a, e.b)
            tol_rows.append(((e.a, e.b), Row(f"tol_{lname[2:]}", (Term(1, lname),), "<=", e.tolerance)))
    family(tol_rows)

    def separation(tag: str, pairs: Sequence[tuple[str, str]], limit: int) -> None:
        rows = []
        for a, b in pairs:
            for nid in node_ids:
                rows.append(
                    (
                        (a, b, nid),
                        Row(
                            f"{tag}_{names.inst[a]}_{names.inst[b]}_{names.node[nid]}",
                            (Term(1, names.d(a, nid)), Term(1, names.d(b, nid))),
                            "<=",
                            limit,
                        ),
                    )
                )
        family(rows)

    separation("anti", anti_pairs, 1)
    separation("conf", conflict_pairs, 1)
    if mode == FAITHFUL:
        separation("coll", colo_pairs, 2)
    else:
        rows = []
        for a, b in colo_pairs:
            for nid in node_ids:
                rows.append(
                    (
                        (a, b, nid),
                        Row(
                            f"colo_{names.inst[a]}_{names.inst[b]}_{names.node[nid]}",
                            (Term(1, names.d(a, nid)), Term(-1, names.d(b, nid))),
                            "=",
                            0,
                        ),
                    )
                )
        family(rows)

    one_rows = []
    for iid in inst_ids:
        one_rows.append(
            (
                (iid,),
                Row(
                    f"one_{names.inst[iid]}",
                    tuple(Term(1, names.d(iid, nid)) for nid in node_ids),
                    "=",
                    1,
                ),
            )
        )
    family(one_rows)

    cap_rows = []
    for node in topo.nodes:
        caps = (node.capacity.cpu, node.capacity.memory)
        for r, rname in enumerate(RESOURCES):
            terms = tuple(
                Term((spec.demand.cpu, spec.demand.memory)[r], names.d(spec.id, node.id))
                for spec in problem.instances
                if (spec.demand.cpu, spec.demand.memory)[r] != 0
            )
            if terms:
                cap_rows.append(
                    ((node.id, rname), Row(f"cap_{names.node[node.id]}_{rname}", terms, "<=", caps[r]))
                )
    family(cap_rows)

    pin_rows = []
    for iid, nid in problem.pinned.items():
        pin_rows.append(
            ((iid,), Row(f"pin_{names.inst[iid]}", (Term(1, names.d(iid, nid)),), "=", 1))
        )
    family(pin_rows)

    row_names = {r.name for r in constraints}
    if len(row_names) != len(constraints):
        raise ValueError("constraint name collision after id sanitization")

    objective = tuple(Term(1, names.l(e.a, e.b)) for e in problem.edges)
    return MilpEncoding(mode, tuple(variables), tuple(constraints), objective, m_val)


def encode_faithful(problem: PlacementProblem, big_m: int | None = None) -> MilpEncoding:
    """Literal big-M indicator transcription, redundant rows included."""
    return _encode(problem, FAITHFUL, big_m)


def encode_corrected(problem: PlacementProblem, big_m: int | None = None) -> MilpEncoding:
    """Sound product-linearized encoding; its feasible assignments are
    exactly the placements :func:`sfcplace.model.check_feasibility` accepts."""
    return _encode(problem, CORRECTED, big_m)


# ---------------------------------------------------------------------------
# evaluating encodings against concrete placements


def induced_values(problem: PlacementProblem, placement: Placement, mode: str) -> dict[str, int]:
    """The variable values a total placement induces under ``mode``.

    ``D`` from the assignment, ``L`` the realized edge latency, ``Z`` the
    host-indicator product, and ``Y`` the tolerance indicator (1 when the
    realized latency is within the edge tolerance, 1 for unbounded edges).
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    names = _Namer(problem)
    node_ids = problem.topology.node_ids()
    values: dict[str, int] = {}
    for iid in problem.instance_ids():
        host = placement.of(iid)
        for nid in node_ids:
            values[names.d(iid, nid)] = 1 if nid == host else 0
    for e in problem.edges:
        lat = edge_latency(problem, placement, e)
        values[names.l(e.a, e.b)] = lat
        if mode == FAITHFUL:
            y = 1 if e.tolerance is None or lat <= e.tolerance else 0
            for n, m in itertools.product(node_ids, node_ids):
                values[names.yz("Y", e.a, e.b, n, m)] = y
        else:
            ha, hb = placement.of(e.a), placement.of(e.b)
            for n, m in itertools.product(node_ids, node_ids):
                values[names.yz("Z", e.a, e.b, n, m)] = 1 if (n == ha and m == hb) else 0
    return values


def violated_rows(encoding: MilpEncoding, values: Mapping[str, int]) -> list[str]:
    """Names of constraint rows the value vector does not satisfy."""
    out = []
    for row in encoding.constraints:
        lhs = sum(t.coef * values[t.var] for t in row.terms)
        ok = lhs <= row.rhs if row.sense == "<=" else lhs >= row.rhs if row.sense == ">=" else lhs == row.rhs
        if not ok:
            out.append(row.name)
    return out


def objective_value(encoding: MilpEncoding, values: Mapping[str, int]) -> int:
    return sum(t.coef * values[t.var] for t in encoding.objective)


def row_matrix(encoding: MilpEncoding) -> tuple[np.ndarray, list[str], np.ndarray, dict[str, int]]:
    """Dense (rows x vars) coefficient matrix for batch checking.

    Returns (A, senses, rhs, var_pos); a value matrix V of shape
    (k, vars) satisfies row r of assignment j iff ``A[r] @ V[j]`` respects
    ``senses[r]`` against ``rhs[r]``. Intended for enumeration-scale
    problems; the matrix is dense.
    """
    var_pos = {v.name: k for k, v in enumerate(encoding.variables)}
    a = np.zeros((len(encoding.constraints), len(encoding.variables)), dtype=np.int64)
    rhs = np.zeros(len(encoding.constraints), dtype=np.int64)
    senses = []
    for r, row in enumerate(encoding.constraints):
        for t in row.terms:
            a[r, var_pos[t.var]] += t.coef
        rhs[r] = row.rhs
        senses.append(row.sense)
    return a, senses, rhs, var_pos


def values_vector(encoding: MilpEncoding, values: Mapping[str, int]) -> np.ndarray:
    """Order ``values`` like ``encoding.variables`` for matrix checking."""
    return np.array([values[v.name] for v in encoding.variables], dtype=np.int64)


# ---------------------------------------------------------------------------
# LP text


def _format_terms(terms: Sequence[Term]) -> list[str]:
    if not terms:
        return ["0"]
    tokens: list[str] = []
    for k, t in enumerate(terms):
        mag = abs(t.coef)
        sign = "-" if t.coef < 0 else "+"
        if k == 0:
            lead = [] if t.coef >= 0 else ["-"]
        else:
            lead = [sign]
        body = [t.var] if mag == 1 else [str(mag), t.var]
        tokens.extend(lead + body)
    return tokens


def _wrap(tokens: Sequence[str], first_indent: str, cont_indent: str = "  ") -> list[str]:
    lines: list[str] = []
    cur = first_indent
    for tok in tokens:
        cand = tok if cur in (first_indent, cont_indent) else " " + tok
        if len(cur) + len(cand) > _LINE_WIDTH and cur not in (first_indent, cont_indent):
            lines.append(cur)
            cur = cont_indent + tok
        else:
            cur += cand
    lines.append(cur)
    return lines


def write_lp(encoding: MilpEncoding, path: str | Path | None = None) -> str:
    """Render the encoding as LP text; byte-identical for equal encodings."""
    out: list[str] = [
        "\\ sfcplace placement model",
        f"\\ mode: {encoding.mode}",
        f"\\ big_m: {encoding.big_m}",
        "Minimize",
    ]
    out.extend(_wrap(["obj:"] + _format_terms(encoding.objective), " "))
    out.append("Subject To")
    for row in encoding.constraints:
        tokens = [f"{row.name}:"] + _format_terms(row.terms) + [row.sense, str(row.rhs)]
        out.extend(_wrap(tokens, " "))
    out.append("Bounds")
    for v in encoding.variables:
        if v.kind == INTEGER:
            out.append(f" {v.name} >= 0")
    out.append("Binary")
    binaries = [v.name for v in encoding.variables if v.kind == BINARY]
    if binaries:
        out.extend(_wrap(binaries, " "))
    out.append("General")
    integers = [v.name for v in encoding.variables if v.kind == INTEGER]
    if integers:
        out.extend(_wrap(integers, " "))
    out.append("End")
    text = "\n".join(out) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


_TOKEN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|\d+|<=|>=|=|[+\-:]")
_SECTIONS = ("Minimize", "Subject To", "Bounds", "Binary", "General", "End")


def _tokenize(text: str) -> list[str]:
    tokens = _TOKEN.findall(text)
    leftover = _TOKEN.sub("", text)
    if leftover.strip():
        raise LpParseError(f"unexpected characters {leftover.split()[:3]!r}")
    return tokens


def _parse_expression(tokens: list[str], pos: int, stop: set[str]) -> tuple[list[Term], int]:
    terms: list[Term] = []
    sign = 1
    coef: int | None = None
    while pos < len(tokens) and tokens[pos] not in stop:
        tok = tokens[pos]
        if tok == "+":
            sign, coef = 1, None
        elif tok == "-":
            sign, coef = -1, None
        elif tok.isdigit():
            if coef is not None:
                raise LpParseError(f"two coefficients in a row near token {pos}")
            coef = int(tok)
        else:
            terms.append(Term(sign * (1 if coef is None else coef), tok))
            sign, coef = 1, None
        pos += 1
    if coef is not None and coef != 0:
        raise LpParseError("dangling numeric constant in expression")
    return terms, pos


def parse_lp(text: str) -> MilpEncoding:
    """Read LP text written by :func:`write_lp` back into an encoding."""
    mode = None
    big_m = None
    body_lines = []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("\\"):
            comment = stripped[1:].strip()
            if comment.startswith("mode:"):
                mode = comment.split(":", 1)[1].strip()
            elif comment.startswith("big_m:"):
                big_m = int(comment.split(":", 1)[1].strip())
            continue
        body_lines.append(line)
    if mode not in MODES:
        raise LpParseError(f"missing or unknown mode header, got {mode!r}")
    if big_m is None:
        raise LpParseError("missing big_m header")

    sections: dict[str, list[str]] = {}
    current: str | None = None
    for line in body_lines:
        name = line.strip()
        if name in _SECTIONS:
            current = name
            sections.setdefault(current, [])
            continue
        if not name:
            continue
        if current is None:
            raise LpParseError(f"content before first section: {line!r}")
        sections[current].append(line)
    for required in ("Minimize", "Subject To", "Binary", "General", "End"):
        if required not in sections:
            raise LpParseError(f"missing section {required}")
    if sections["End"]:
        raise LpParseError(f"content after End: {sections['End'][0]!r}")

    obj_tokens = _tokenize("\n".join(sections["Minimize"]))
    if len(obj_tokens) < 2 or obj_tokens[0] != "obj" or obj_tokens[1] != ":":
        raise LpParseError("objective must start with 'obj:'")
    if obj_tokens[2:] == ["0"]:
        objective: tuple[Term, ...] = ()
    else:
        terms, pos = _parse_expression(obj_tokens, 2, stop=set())
        if pos != len(obj_tokens):
            raise LpParseError("trailing tokens in objective")
        objective = tuple(terms)

    tokens = _tokenize("\n".join(sections["Subject To"]))
    rows: list[Row] = []
    pos = 0
    senses = {"<=", ">=", "="}
    while pos < len(tokens):
        name = tokens[pos]
        if pos + 1 >= len(tokens) or tokens[pos + 1] != ":":
            raise LpParseError(f"expected 'name:' at constraint start, got {tokens[pos:pos + 2]!r}")
        pos += 2
        terms, pos = _parse_expression(tokens, pos, stop=senses)
        if pos >= len(tokens):
            raise LpParseError(f"constraint {name!r} has no sense")
        sense = tokens[pos]
        pos += 1
        neg = False
        if pos < len(tokens) and tokens[pos] == "-":
            neg = True
            pos += 1
        if pos >= len(tokens) or not tokens[pos].isdigit():
            raise LpParseError(f"constraint {name!r} has no numeric rhs")
        rhs = -int(tokens[pos]) if neg else int(tokens[pos])
        pos += 1
        rows.append(Row(name, tuple(terms), sense, rhs))

    binary_names = _tokenize("\n".join(sections.get("Binary", [])))
    general_names = _tokenize("\n".join(sections.get("General", [])))
    for name in binary_names + general_names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise LpParseError(f"bad variable name {name!r}")

    general_set = set(general_names)
    for line in sections.get("Bounds", []):
        toks = _tokenize(line)
        if len(toks) != 3 or toks[1] != ">=" or toks[2] != "0":
            raise LpParseError(f"unsupported bound {line.strip()!r}")
        if toks[0] not in general_set:
            raise LpParseError(f"bound on undeclared integer {toks[0]!r}")

    variables = tuple(
        [MilpVar(n, BINARY) for n in binary_names] + [MilpVar(n, INTEGER) for n in general_names]
    )
    return MilpEncoding(mode, variables, tuple(rows), objective, big_m)
