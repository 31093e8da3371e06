"""Instance file formats.

CNF travels as DIMACS (`p cnf n m`, clauses 0-terminated, 1-indexed signed
literals). Graphs travel as JSON: multigraphs and digraphs as
{"n": int, "edges": [[u, v, mult], ...]} (pairs unordered u <= v for graphs,
ordered for digraphs, 0-indexed), bipartite graphs as
{"a": int, "b": int, "edges": [[a, b], ...]}. Solution objects are JSON
arrays. Every writer emits canonical bytes so reruns are byte-identical.
"""

from __future__ import annotations

import json

from .errors import ParseError
from .model import (
    Assignment,
    BipartiteGraph,
    CnfFormula,
    Digraph,
    MultiGraph,
    Ordering,
    VertexPartition,
)


def cnf_to_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.var_count} {f.m}"]
    for clause in f.clauses:
        lits = " ".join(str(v + 1 if pol else -(v + 1)) for v, pol in clause)
        lines.append(f"{lits} 0")
    return "\n".join(lines) + "\n"


def dimacs_to_cnf(text: str) -> CnfFormula:
    var_count = None
    declared_m = None
    clauses = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"line {lineno}: bad problem line {line!r}")
            try:
                var_count, declared_m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"line {lineno}: bad problem line {line!r}") from None
            continue
        if var_count is None:
            raise ParseError(f"line {lineno}: clause before problem line")
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer literal in {line!r}") from None
        if not nums or nums[-1] != 0:
            raise ParseError(f"line {lineno}: clause is not 0-terminated")
        lits = nums[:-1]
        if any(x == 0 for x in lits):
            raise ParseError(f"line {lineno}: embedded 0 inside clause")
        if not lits:
            raise ParseError(f"line {lineno}: empty clause")
        if any(abs(x) > var_count for x in lits):
            raise ParseError(f"line {lineno}: literal out of declared range")
        clauses.append(tuple((abs(x) - 1, x > 0) for x in lits))
    if var_count is None:
        raise ParseError("missing problem line")
    if declared_m is not None and declared_m != len(clauses):
        raise ParseError(
            f"problem line declares {declared_m} clauses, found {len(clauses)}"
        )
    return CnfFormula(var_count, tuple(clauses))


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def multigraph_to_json(g: MultiGraph) -> str:
    return _dump({"n": g.n, "edges": [[u, v, m] for u, v, m in g.edges]})


def digraph_to_json(d: Digraph) -> str:
    return _dump({"n": d.n, "edges": [[u, v, m] for u, v, m in d.arcs]})


def bipartite_to_json(h: BipartiteGraph) -> str:
    return _dump(
        {"a": h.a_size, "b": h.b_size, "edges": [[a, b] for a, b in h.edges]}
    )


def _load(text: str, what: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what}: invalid JSON at line {exc.lineno}: {exc.msg}")
    if not isinstance(obj, dict):
        raise ParseError(f"{what}: expected a JSON object")
    return obj


def _edge_triples(obj: dict, what: str):
    edges = obj.get("edges")
    if not isinstance(edges, list):
        raise ParseError(f"{what}: missing edge list")
    out = []
    for i, e in enumerate(edges):
        if not isinstance(e, list) or len(e) not in (2, 3):
            raise ParseError(f"{what}: edge {i} must be [u, v] or [u, v, mult]")
        if not all(isinstance(x, int) for x in e):
            raise ParseError(f"{what}: edge {i} has non-integer entries")
        out.append(tuple(e))
    return out


def json_to_multigraph(text: str) -> MultiGraph:
    obj = _load(text, "multigraph")
    if not isinstance(obj.get("n"), int):
        raise ParseError("multigraph: missing vertex count 'n'")
    return MultiGraph(obj["n"], tuple(_edge_triples(obj, "multigraph")))


def json_to_digraph(text: str) -> Digraph:
    obj = _load(text, "digraph")
    if not isinstance(obj.get("n"), int):
        raise ParseError("digraph: missing vertex count 'n'")
    return Digraph(obj["n"], tuple(_edge_triples(obj, "digraph")))


def json_to_bipartite(text: str) -> BipartiteGraph:
    obj = _load(text, "bipartite")
    if not isinstance(obj.get("a"), int) or not isinstance(obj.get("b"), int):
        raise ParseError("bipartite: missing side sizes 'a' and 'b'")
    pairs = []
    for e in _edge_triples(obj, "bipartite"):
        if len(e) != 2:
            raise ParseError("bipartite: edges are simple [a, b] pairs")
        pairs.append(e)
    return BipartiteGraph(obj["a"], obj["b"], tuple(pairs))


def witness_to_json(witness) -> str:
    if isinstance(witness, Ordering):
        return _dump(list(witness.perm))
    if isinstance(witness, Assignment):
        return _dump([bool(v) for v in witness.values])
    if isinstance(witness, VertexPartition):
        return _dump([bool(s) for s in witness.side])
    if isinstance(witness, tuple):
        return _dump([list(x) if isinstance(x, tuple) else x for x in witness])
    raise ParseError(f"no serialization for witness type {type(witness).__name__}")
