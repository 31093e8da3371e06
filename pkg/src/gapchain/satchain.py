"""Gap-preserving reductions from exact-3-CNF down to simple MaxCut.

Each reduction returns (output GapInstance, lifter). The lifter maps any
feasible witness of the output instance back to a witness of the input whose
value meets the reduction's exact correspondence; applied to an optimal
output witness it recovers an optimal input witness.

Gap bookkeeping is exact rational arithmetic throughout:

    E3SAT [a,b] -> NAE4SAT [a,b] -> NAE3SAT [(1+a)/2,(1+b)/2]
        -> multigraph MaxCut [(3+2a)/6,(3+2b)/6] -> MaxCut [(2+a)/3,(2+b)/3]

which composes to [(16+a)/18, (16+b)/18] end to end.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionError, DomainError
from .model import (
    Assignment,
    CnfFormula,
    Digraph,
    GapParams,
    MultiGraph,
    VertexPartition,
)

_UNIT_KINDS = ("clauses", "edges", "vertices", "arcs")


@dataclass(frozen=True)
class GapInstance:
    """An instance bundled with the gap its thresholds refer to.

    unit_kind names the count the gap fractions multiply: clause count for
    formulas, edge count for undirected graphs, vertex or arc count for
    digraph problems.
    """

    instance: object
    gap: GapParams
    unit_kind: str = "clauses"

    def __post_init__(self):
        if self.unit_kind not in _UNIT_KINDS:
            raise DomainError(f"unknown unit kind {self.unit_kind!r}")
        self.unit  # noqa: B018 - validates kind/instance agreement

    @property
    def unit(self) -> int:
        inst = self.instance
        if self.unit_kind == "clauses":
            if not isinstance(inst, CnfFormula):
                raise DomainError("clause unit on a non-formula instance")
            return inst.m
        if self.unit_kind == "edges":
            if not isinstance(inst, MultiGraph):
                raise DomainError("edge unit on a non-graph instance")
            return inst.m
        if self.unit_kind == "arcs":
            if not isinstance(inst, Digraph):
                raise DomainError("arc unit on a non-digraph instance")
            return inst.m
        if not isinstance(inst, (Digraph, MultiGraph)):
            raise DomainError("vertex unit on a non-graph instance")
        return inst.n


def e3sat_to_nae4sat(gi: GapInstance):
    """Append one fresh variable z to every clause; gap is unchanged.

    Lifting: NAE satisfaction is symmetric under global negation, so
    normalize z to false by negating if needed, then drop z.
    """
    f: CnfFormula = gi.instance
    if not f.is_exact_cnf(3):
        raise DomainError("e3sat_to_nae4sat requires an exact-3-CNF input")
    z = f.var_count
    out = CnfFormula(
        f.var_count + 1,
        tuple(clause + ((z, True),) for clause in f.clauses),
    )
    out_gi = GapInstance(out, gi.gap, "clauses")

    def lift(a: Assignment) -> Assignment:
        if len(a) != out.var_count:
            raise DimensionError("assignment does not match the NAE4 instance")
        vals = a.values
        if vals[z]:
            vals = tuple(not v for v in vals)
        return Assignment(vals[:z])

    return out_gi, lift


def nae4sat_to_nae3sat(gi: GapInstance):
    """Split every 4-clause in two with a fresh pivot variable.

    Clause l1|l2|l3|l4 becomes (l1|l2|z_i) and (l3|l4|~z_i); exactly one of
    the pair is NAE-satisfied when the original is not, both when it is, so
    the optimum shifts k -> m + k and the gap maps to [(1+a)/2, (1+b)/2].
    Lifting restricts to the original variables: whenever both halves are
    NAE-satisfied, the restriction NAE-satisfies the original clause.
    """
    f: CnfFormula = gi.instance
    if not f.is_exact_cnf(4):
        raise DomainError("nae4sat_to_nae3sat requires an exact-4-CNF input")
    n = f.var_count
    clauses = []
    for i, (l1, l2, l3, l4) in enumerate(f.clauses):
        zi = n + i
        clauses.append((l1, l2, (zi, True)))
        clauses.append((l3, l4, (zi, False)))
    out = CnfFormula(n + f.m, tuple(clauses))
    gap = gi.gap.map(lambda x: (1 + x) / 2)
    out_gi = GapInstance(out, gap, "clauses")

    def lift(a: Assignment) -> Assignment:
        if len(a) != out.var_count:
            raise DimensionError("assignment does not match the NAE3 instance")
        return Assignment(a.values[:n])

    return out_gi, lift


def nae3sat_to_multicut(gi: GapInstance):
    """NAE-3-SAT to MaxCut on a multigraph.

    Vertices 2i / 2i+1 carry literal x_i / ~x_i, joined by n_i parallel edges
    (n_i = occurrences of x_i); every clause adds a triangle on its literal
    vertices. maxcut = 3m + 2*maxNAE, gap -> [(3+2a)/6, (3+2b)/6].
    """
    f: CnfFormula = gi.instance
    if not f.is_exact_cnf(3):
        raise DomainError("nae3sat_to_multicut requires an exact-3-CNF input")
    if f.repeated_variable_clauses():
        raise DomainError(
            "clause with a repeated variable: the clause triangle would degenerate"
        )
    n = f.var_count

    def lit_vertex(lit):
        var, pol = lit
        return 2 * var if pol else 2 * var + 1

    edges = []
    for var, count in enumerate(f.occurrence_counts()):
        if count:
            edges.append((2 * var, 2 * var + 1, count))
    for clause in f.clauses:
        a, b, c = (lit_vertex(lit) for lit in clause)
        edges.append((a, b, 1))
        edges.append((b, c, 1))
        edges.append((a, c, 1))
    out = MultiGraph(2 * n, tuple(edges))
    gap = gi.gap.map(lambda x: (3 + 2 * x) / 6)
    out_gi = GapInstance(out, gap, "edges")

    weights = out.edge_weight()

    def flip_delta(side: list[bool], w: int) -> int:
        """Cut change from flipping vertex w."""
        delta = 0
        for (u, v), mult in weights.items():
            if u == v:
                continue
            if u == w or v == w:
                other = v if u == w else u
                delta += mult if side[other] == side[w] else -mult
        return delta

    def lift(p: VertexPartition) -> Assignment:
        if len(p) != out.n:
            raise DimensionError("partition does not match the cut instance")
        side = list(p.side)
        # exchange step: split every literal pair without decreasing the cut
        for var in range(n):
            pos, neg = 2 * var, 2 * var + 1
            if side[pos] == side[neg]:
                if flip_delta(side, pos) >= flip_delta(side, neg):
                    side[pos] = not side[pos]
                else:
                    side[neg] = not side[neg]
        return Assignment(tuple(side[2 * var] for var in range(n)))

    return out_gi, lift


def multicut_to_simplecut(gi: GapInstance):
    """Replace every edge copy uv by a path u - w_e - z_e - v.

    The output is simple; maxcut = 2m + maxcut(input), gap -> [(2+a)/3, (2+b)/3].
    Lifting restricts the cut to the original vertices.
    """
    g: MultiGraph = gi.instance
    if not g.is_loop_free():
        raise DomainError("multicut_to_simplecut requires a loop-free multigraph")
    n = g.n
    edges = []
    nxt = n
    for u, v, mult in g.edges:
        for _ in range(mult):
            w, z = nxt, nxt + 1
            nxt += 2
            edges.append((u, w, 1))
            edges.append((w, z, 1))
            edges.append((z, v, 1))
    out = MultiGraph(nxt, tuple(edges))
    gap = gi.gap.map(lambda x: (2 + x) / 3)
    out_gi = GapInstance(out, gap, "edges")

    def lift(p: VertexPartition) -> VertexPartition:
        if len(p) != out.n:
            raise DimensionError("partition does not match the simple-cut instance")
        return VertexPartition(p.side[:n])

    return out_gi, lift


def compose_gap(gap: GapParams) -> GapParams:
    """Closed form of the four-step composition: [a,b] -> [(16+a)/18, (16+b)/18]."""
    return gap.map(lambda x: (Fraction(16) + x) / 18)


def run_satchain(gi: GapInstance):
    """All four steps; returns the intermediate instances and lifters."""
    steps = []
    cur = gi
    for op in (e3sat_to_nae4sat, nae4sat_to_nae3sat, nae3sat_to_multicut, multicut_to_simplecut):
        cur, lift = op(cur)
        steps.append((cur, lift))
    return steps
