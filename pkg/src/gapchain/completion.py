"""Arrangement to chain completion, and chain completion to the five
chordal-family completion problems.

The first construction gives an exact per-ordering correspondence: for any
left order pi of A, the minimal chain completion costs
cost(source, pi) + Delta*n(n-1)/2 - 2|E|. The second adds cliques on one or
both sides of the bipartition, leaving the budget unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionError, DomainError
from .model import BipartiteGraph, MultiGraph, Ordering
from .oracle import recognizer_for

# edge_origin entry tags
EDGE_SLOT = "edge"
PAD_SLOT = "pad"


@dataclass(frozen=True)
class ChainInstance:
    """Chain-completion instance produced from an arrangement instance.

    A is the source vertex set; every source vertex owns a block S_v of
    exactly Delta B-vertices: one per incident edge copy (those have degree 2,
    joined to both endpoints) padded up with degree-1 vertices. edge_origin
    records, per B-vertex, either ("edge", (u, v, copy)) or ("pad", (v, slot)).
    """

    graph: BipartiteGraph
    budget: int
    source_delta: int
    source_edges: int
    edge_origin: tuple[tuple[str, tuple], ...]

    @property
    def a_size(self) -> int:
        return self.graph.a_size


def ola_to_chain(g: MultiGraph, k: int):
    """Build the chain instance for arrangement budget k; lifter is identity.

    Works for multigraphs: parallel copies get their own B-vertices. Budget:
    k' = k + Delta * n(n-1)/2 - 2|E|.
    """
    if not g.is_loop_free():
        raise DomainError("ola_to_chain requires a loop-free source")
    n = g.n
    delta = g.max_degree
    m = g.m
    slots_used = [0] * n
    origin: list[tuple[str, tuple]] = [None] * (delta * n)  # type: ignore[list-item]
    edges: list[tuple[int, int]] = []

    def take_slot(v: int, tag: str, payload: tuple) -> int:
        b = v * delta + slots_used[v]
        slots_used[v] += 1
        origin[b] = (tag, payload)
        edges.append((v, b))
        return b

    for u, v, mult in g.edges:
        for copy in range(mult):
            bu = take_slot(u, EDGE_SLOT, (u, v, copy))
            edges.append((v, bu))
            bv = take_slot(v, EDGE_SLOT, (u, v, copy))
            edges.append((u, bv))
    for v in range(n):
        for slot in range(slots_used[v], delta):
            take_slot(v, PAD_SLOT, (v, slot))
    graph = BipartiteGraph(n, delta * n, tuple(edges))
    budget = k + delta * n * (n - 1) // 2 - 2 * m
    ci = ChainInstance(
        graph=graph,
        budget=budget,
        source_delta=delta,
        source_edges=m,
        edge_origin=tuple(origin),
    )

    def lift(pi: Ordering) -> Ordering:
        """Left orders of A are the arrangement orderings, verbatim."""
        return pi

    return ci, lift


def chain_cost_for_order(ci: ChainInstance, pi: Ordering) -> int:
    """Minimal added edges for a chain completion whose left order is pi.

    Independent suffix-closure count: each B-vertex must see the suffix of pi
    starting at its earliest neighbor. The equality against the source
    arrangement cost (plus the closed-form constant) is asserted by tests,
    not here, so this stays an independent count.
    """
    a_size = ci.graph.a_size
    if len(pi) != a_size:
        raise DimensionError("left order does not match side A")
    pos = pi.positions()
    total = 0
    for nbrs in ci.graph.b_neighborhoods():
        if not nbrs:
            continue
        earliest = min(pos[a] for a in nbrs)
        total += (a_size - earliest) - len(nbrs)
    return total


def two_clique_cover(h: BipartiteGraph) -> MultiGraph:
    """H plus complete cliques on both sides (Ch(H)); B ids shifted by a_size."""
    edges = [(a, h.a_size + b, 1) for a, b in h.edges]
    for u in range(h.a_size):
        for v in range(u + 1, h.a_size):
            edges.append((u, v, 1))
    for u in range(h.b_size):
        for v in range(u + 1, h.b_size):
            edges.append((h.a_size + u, h.a_size + v, 1))
    return MultiGraph(h.a_size + h.b_size, tuple(edges))


def a_clique_cover(h: BipartiteGraph) -> MultiGraph:
    """H plus a complete clique on side A only."""
    edges = [(a, h.a_size + b, 1) for a, b in h.edges]
    for u in range(h.a_size):
        for v in range(u + 1, h.a_size):
            edges.append((u, v, 1))
    return MultiGraph(h.a_size + h.b_size, tuple(edges))


def chain_to_fillin(ci: ChainInstance) -> tuple[MultiGraph, int]:
    """Chain completion to minimum fill-in: clique both sides, same budget."""
    return two_clique_cover(ci.graph), ci.budget


def chain_to_interval(ci: ChainInstance) -> tuple[MultiGraph, int]:
    """Same graph as chain_to_fillin: on a union of two cliques, chordal,
    interval and proper interval completions coincide."""
    return chain_to_fillin(ci)


def chain_to_proper_interval(ci: ChainInstance) -> tuple[MultiGraph, int]:
    return chain_to_fillin(ci)


def chain_to_threshold(ci: ChainInstance) -> tuple[MultiGraph, int]:
    """Chain completion to threshold completion: clique side A only."""
    return a_clique_cover(ci.graph), ci.budget


def chain_to_trivially_perfect(ci: ChainInstance) -> tuple[MultiGraph, int]:
    return chain_to_threshold(ci)


def verify_completion(g: MultiGraph, added, cls: str) -> bool:
    """True iff g plus the added edges lands in the named graph class."""
    present = {(u, v) for u, v, _ in g.edges}
    canon = []
    for u, v in added:
        if u > v:
            u, v = v, u
        if (u, v) in present:
            raise DomainError(f"added edge ({u}, {v}) already present")
        canon.append((u, v, 1))
    combined = MultiGraph(g.n, g.edges + tuple(canon))
    return recognizer_for(cls)(combined)
