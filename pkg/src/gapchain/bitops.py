"""Subset-indexed tables used by the exponential-time solvers.

Every table indexes subsets of vertices by bitmask. Vertex v occupies bit
position (n - 1 - v), so the numeric order of masks coincides with the
lexicographic order of the corresponding tuples (side of vertex 0 first).
np.argmin / np.argmax then return lexicographically smallest witnesses
for free.
"""

from __future__ import annotations

import numpy as np

from .model import Digraph, MultiGraph


def bitpos(n: int, v: int) -> int:
    return n - 1 - v


def mask_to_side_tuple(mask: int, n: int) -> tuple[bool, ...]:
    return tuple(bool((mask >> (n - 1 - v)) & 1) for v in range(n))


def popcount_table(n: int) -> np.ndarray:
    size = 1 << n
    pc = np.zeros(size, dtype=np.int64)
    for b in range(n):
        pc.reshape(1 << (n - 1 - b), 2, 1 << b)[:, 1, :] += 1
    return pc


def _pair_view(table: np.ndarray, n: int, hi: int, lo: int) -> np.ndarray:
    """View of table entries whose masks have both bit hi and bit lo set."""
    view = table.reshape(1 << (n - 1 - hi), 2, 1 << (hi - lo - 1), 2, 1 << lo)
    return view[:, 1, :, 1, :]


def cut_weight_table(g: MultiGraph) -> np.ndarray:
    """T[mask] = total multiplicity of edges with exactly one endpoint in mask.

    Self-loops never cross. O(2^n) memory; callers enforce their caps.
    """
    n = g.n
    table = np.zeros(1 << n, dtype=np.int64)
    if n == 0:
        return table
    wdeg = [0] * n
    for u, v, mult in g.edges:
        if u != v:
            wdeg[u] += mult
            wdeg[v] += mult
    for v in range(n):
        if wdeg[v]:
            b = bitpos(n, v)
            table.reshape(1 << (n - 1 - b), 2, 1 << b)[:, 1, :] += wdeg[v]
    for u, v, mult in g.edges:
        if u == v:
            continue
        bu, bv = bitpos(n, u), bitpos(n, v)
        hi, lo = max(bu, bv), min(bu, bv)
        _pair_view(table, n, hi, lo)[...] -= 2 * mult
    return table


def into_vertex_tables(d: Digraph) -> np.ndarray:
    """W[v][mask] = total weight of arcs (u -> v) with u in mask; loops skipped."""
    n = d.n
    tables = np.zeros((n, 1 << n), dtype=np.int64)
    for u, v, mult in d.arcs:
        if u == v:
            continue
        b = bitpos(n, u)
        tables[v].reshape(1 << (n - 1 - b), 2, 1 << b)[:, 1, :] += mult
    return tables


def masks_by_popcount(n: int) -> list[np.ndarray]:
    pc = popcount_table(n)
    order = np.argsort(pc, kind="stable")
    boundaries = np.searchsorted(pc[order], np.arange(n + 2))
    return [order[boundaries[k] : boundaries[k + 1]] for k in range(n + 1)]
