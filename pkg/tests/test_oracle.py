import itertools
import random

import pytest

from gapchain.errors import CapExceededError, DomainError
from gapchain.model import (
    Assignment,
    BipartiteGraph,
    CnfFormula,
    Digraph,
    MultiGraph,
    Ordering,
    VertexPartition,
    cost_of_ordering,
    count_nae_satisfied,
    count_satisfied,
    cut_size,
)
from gapchain.oracle import (
    backward_arc_weight,
    is_chain,
    is_chordal,
    is_interval,
    is_proper_interval,
    is_threshold,
    is_trivially_perfect,
    max_cut_exact,
    max_nae_exact,
    max_sat_exact,
    min_bisection_exact,
    min_chain_completion_exact,
    min_completion_exact,
    min_fas_exact,
    min_fill_in_exact,
    min_fvs_exact,
    ola_exact,
)

P3 = MultiGraph(3, [(0, 1), (1, 2)])
K3 = MultiGraph(3, [(0, 1), (0, 2), (1, 2)])
K4 = MultiGraph(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])
C4 = MultiGraph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
C5 = MultiGraph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
C6 = MultiGraph(6, [(i, (i + 1) % 6) for i in range(6)])
PAW = MultiGraph(4, [(0, 1), (1, 2), (1, 3), (2, 3)])


def random_multigraph(rng, n_max=6, loops=True):
    n = rng.randint(1, n_max)
    edges = []
    for _ in range(rng.randint(0, 9)):
        u = rng.randint(0, n - 1)
        v = rng.randint(0, n - 1)
        if not loops and u == v:
            continue
        edges.append((u, v, rng.randint(1, 3)))
    return MultiGraph(n, edges)


def test_ola_examples():
    assert ola_exact(P3).value == 2
    assert ola_exact(K3).value == 4
    assert ola_exact(PAW).value == 5  # frozen from 4! permutation enumeration


def test_ola_matches_permutation_enumeration():
    rng = random.Random(101)
    for _ in range(30):
        g = random_multigraph(rng)
        res = ola_exact(g)
        brute = min(
            cost_of_ordering(g, Ordering(p))
            for p in itertools.permutations(range(g.n))
        )
        assert res.value == brute
        assert cost_of_ordering(g, res.witness) == res.value


def test_ola_lexicographic_witness():
    rng = random.Random(102)
    for _ in range(15):
        g = random_multigraph(rng, n_max=5)
        res = ola_exact(g)
        best = res.value
        lex = next(
            p
            for p in itertools.permutations(range(g.n))
            if cost_of_ordering(g, Ordering(p)) == best
        )
        assert res.witness.perm == lex


def test_ola_cap():
    with pytest.raises(CapExceededError):
        ola_exact(MultiGraph(21, []), cap=20)


def test_max_cut_examples():
    assert max_cut_exact(K3).value == 2
    assert max_cut_exact(C4).value == 4
    assert max_cut_exact(K4).value == 4


def test_max_cut_matches_enumeration():
    rng = random.Random(103)
    for _ in range(30):
        g = random_multigraph(rng)
        res = max_cut_exact(g)
        brute = max(
            cut_size(g, VertexPartition(tuple(bool(m >> i & 1) for i in range(g.n))))
            for m in range(1 << g.n)
        )
        assert res.value == brute
        assert cut_size(g, res.witness) == res.value


def test_min_bisection():
    assert min_bisection_exact(K4).value == 4
    assert min_bisection_exact(C6).value == 2
    two_triangles = MultiGraph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    # frozen from enumeration over C(6,3) balanced splits
    assert min_bisection_exact(two_triangles).value == 0
    with pytest.raises(DomainError):
        min_bisection_exact(K3)


def test_min_bisection_witness_balanced():
    rng = random.Random(104)
    for _ in range(20):
        n = rng.choice([2, 4, 6])
        g = MultiGraph(
            n,
            [
                (rng.randint(0, n - 1), rng.randint(0, n - 1), 1)
                for _ in range(rng.randint(0, 8))
            ],
        )
        res = min_bisection_exact(g)
        assert res.witness.sizes()[0] == res.witness.sizes()[1]
        assert cut_size(g, res.witness) == res.value


def test_sat_oracles():
    f = CnfFormula(3, [((0, True), (1, True), (2, True))])
    assert max_nae_exact(f).value == 1
    g = CnfFormula(1, [((0, True),), ((0, False),)])
    assert max_sat_exact(g).value == 1


def test_nae_oracle_against_half_enumeration():
    # NAE symmetry: enumerating assignments with variable 0 fixed false suffices
    rng = random.Random(105)
    for _ in range(10):
        n = 6
        clauses = []
        for _ in range(10):
            vars_ = rng.sample(range(n), 3)
            clauses.append(tuple((v, rng.random() < 0.5) for v in vars_))
        f = CnfFormula(n, clauses)
        best = 0
        for mask in range(1 << (n - 1)):
            a = Assignment(tuple(bool(mask >> i & 1) for i in range(n - 1)) + (False,))
            best = max(best, count_nae_satisfied(f, a))
        assert max_nae_exact(f).value == best


def test_min_fas_examples():
    assert min_fas_exact(Digraph(3, [(0, 1), (1, 2), (2, 0)])).value == 1
    assert min_fas_exact(Digraph(3, [(0, 1), (0, 2), (1, 2)])).value == 0
    assert min_fas_exact(Digraph(2, [(0, 1), (1, 0)])).value == 1


def test_min_fas_matches_permutation_enumeration():
    rng = random.Random(106)
    for _ in range(30):
        n = rng.randint(1, 6)
        arcs = [
            (rng.randint(0, n - 1), rng.randint(0, n - 1), rng.randint(1, 2))
            for _ in range(rng.randint(0, 10))
        ]
        d = Digraph(n, arcs)
        res = min_fas_exact(d)
        brute = min(
            backward_arc_weight(d, Ordering(p))
            for p in itertools.permutations(range(n))
        )
        assert res.value == brute
        assert backward_arc_weight(d, res.witness) == res.value


def test_min_fas_multiplicities_as_weights():
    d = Digraph(2, [(0, 1, 1), (1, 0, 5)])
    assert min_fas_exact(d).value == 1


def test_min_fvs():
    assert min_fvs_exact(Digraph(3, [(0, 1), (1, 2), (2, 0)])).value == 1
    assert min_fvs_exact(Digraph(3, [(0, 1), (0, 2), (1, 2)])).value == 0
    loop = Digraph(2, [(0, 0), (0, 1)])
    res = min_fvs_exact(loop)
    assert res.value == 1 and res.witness == (0,)


def test_min_fvs_witness_acyclic():
    rng = random.Random(107)
    for _ in range(20):
        n = rng.randint(1, 6)
        arcs = [
            (rng.randint(0, n - 1), rng.randint(0, n - 1), 1)
            for _ in range(rng.randint(0, 9))
        ]
        d = Digraph(n, arcs)
        res = min_fvs_exact(d)
        removed = set(res.witness)
        kept = [v for v in range(n) if v not in removed]
        idx = {v: i for i, v in enumerate(kept)}
        sub = Digraph(
            len(kept),
            [(idx[u], idx[v], 1) for u, v, _ in d.arcs if u in idx and v in idx],
        )
        assert min_fas_exact(sub).value == 0


def test_min_chain_completion():
    two_k2 = BipartiteGraph(2, 2, [(0, 0), (1, 1)])
    assert min_chain_completion_exact(two_k2).value == 1
    chain = BipartiteGraph(2, 2, [(0, 0), (1, 0), (1, 1)])
    assert min_chain_completion_exact(chain).value == 0
    assert min_chain_completion_exact(BipartiteGraph(3, 2, [])).value == 0


def test_min_chain_witness_and_minimality():
    rng = random.Random(108)
    for _ in range(20):
        a, b = rng.randint(1, 4), rng.randint(1, 4)
        pool = [(x, y) for x in range(a) for y in range(b)]
        edges = rng.sample(pool, rng.randint(0, len(pool)))
        h = BipartiteGraph(a, b, edges)
        res = min_chain_completion_exact(h)
        completed = BipartiteGraph(a, b, tuple(edges) + res.witness)
        assert is_chain(completed)
        if res.value <= 4:
            missing = [e for e in pool if e not in set(edges)]
            for k in range(res.value):
                for combo in itertools.combinations(missing, k):
                    assert not is_chain(BipartiteGraph(a, b, tuple(edges) + combo))


def test_min_fill_in():
    assert min_fill_in_exact(C4).value == 1
    assert min_fill_in_exact(C5).value == 2  # frozen from chord-subset brute force
    tree = MultiGraph(4, [(0, 1), (1, 2), (1, 3)])
    assert min_fill_in_exact(tree).value == 0
    with pytest.raises(DomainError):
        min_fill_in_exact(MultiGraph(2, [(0, 1, 2)]))


def test_min_fill_in_witness_chordal():
    rng = random.Random(109)
    for _ in range(20):
        n = rng.randint(1, 7)
        pool = [(u, v) for u in range(n) for v in range(u + 1, n)]
        g = MultiGraph(n, [(u, v, 1) for u, v in rng.sample(pool, rng.randint(0, len(pool)))])
        res = min_fill_in_exact(g)
        combined = MultiGraph(n, g.edges + tuple((u, v, 1) for u, v in res.witness))
        assert is_chordal(combined)


def test_recognizer_table_exemplars():
    two_k2 = MultiGraph(4, [(0, 1), (2, 3)])
    p4 = MultiGraph(4, [(0, 1), (1, 2), (2, 3)])
    claw = MultiGraph(4, [(0, 1), (0, 2), (0, 3)])
    tent3 = MultiGraph(
        6, [(0, 1), (0, 2), (1, 2), (3, 4), (4, 5), (3, 1), (4, 1), (4, 2), (5, 2)]
    )
    assert not is_chordal(C4)
    assert not is_threshold(C4)
    assert not is_trivially_perfect(C4)
    assert not is_interval(C4)
    assert not is_proper_interval(C4)

    assert not is_threshold(two_k2)
    assert is_chordal(two_k2) and is_interval(two_k2) and is_trivially_perfect(two_k2)

    assert not is_threshold(p4) and not is_trivially_perfect(p4)
    assert is_chordal(p4) and is_interval(p4) and is_proper_interval(p4)

    assert not is_proper_interval(claw)
    assert is_chordal(claw) and is_interval(claw) and is_threshold(claw)

    assert is_chordal(tent3)
    assert not is_interval(tent3)

    for n in (1, 2, 3, 5):
        k = MultiGraph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])
        assert is_chordal(k) and is_interval(k) and is_proper_interval(k)
        assert is_threshold(k) and is_trivially_perfect(k)


def test_is_chain():
    assert is_chain(BipartiteGraph(2, 2, [(0, 0), (1, 0), (1, 1)]))
    assert not is_chain(BipartiteGraph(2, 2, [(0, 0), (1, 1)]))
    assert is_chain(BipartiteGraph(3, 1, []))


def test_recognizers_reject_non_simple():
    with pytest.raises(DomainError):
        is_chordal(MultiGraph(2, [(0, 0)]))


def test_recognizer_caps():
    with pytest.raises(CapExceededError):
        is_interval(MultiGraph(65, []))
    with pytest.raises(CapExceededError):
        is_trivially_perfect(MultiGraph(33, []))


def test_min_completion_bruteforce():
    res = min_completion_exact(C4, "chordal")
    assert res.value == 1
    # a single chord gives the diamond, which is already trivially perfect
    assert min_completion_exact(C4, "trivially_perfect").value == 1
    two_k2 = MultiGraph(4, [(0, 1), (2, 3)])
    assert min_completion_exact(two_k2, "threshold").value == 2
    with pytest.raises(DomainError):
        min_completion_exact(C4, "no-such-class")


def test_witnesses_reevaluate():
    rng = random.Random(110)
    for _ in range(10):
        g = random_multigraph(rng, n_max=5)
        r = ola_exact(g)
        assert cost_of_ordering(g, r.witness) == r.value
        r = max_cut_exact(g)
        assert cut_size(g, r.witness) == r.value
    f = CnfFormula(4, [((0, True), (1, False), (2, True)), ((1, True), (3, False))])
    r = max_sat_exact(f)
    assert count_satisfied(f, r.witness) == r.value
    r = max_nae_exact(f)
    assert count_nae_satisfied(f, r.witness) == r.value


def test_min_fas_loops_are_forced():
    d = Digraph(3, [(0, 0, 2), (0, 1), (1, 2)])
    res = min_fas_exact(d)
    assert res.value == 2  # both loop copies must go; the rest is acyclic
    assert backward_arc_weight(d, res.witness) == 2


def test_min_completion_candidate_cap():
    big = MultiGraph(12, [])
    with pytest.raises(CapExceededError):
        min_completion_exact(big, "chordal", cap_missing=10)
