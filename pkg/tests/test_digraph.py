import random

import networkx as nx
import pytest

from dagwidth.digraph import (
    Digraph,
    add_pendant_terminals,
    bidirect,
    line_digraph,
    loop_erase,
    path_vertices,
    reach,
    scc,
    topological_order,
)
from dagwidth.cycles import circumference_bounded
from graphgen import random_dag


def _mutual_reach_oracle(D):
    n = D.n
    R = [[False] * n for _ in range(n)]
    for s in range(n):
        stack, seen = [s], {s}
        while stack:
            x = stack.pop()
            for w in D.successors(x):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        for t in seen:
            R[s][t] = True
    classes = {}
    for v in range(n):
        key = frozenset(w for w in range(n) if R[v][w] and R[w][v])
        classes[key] = True
    return set(classes)


def _random(rng, n, m):
    return Digraph(n, [tuple(rng.sample(range(n), 2)) for _ in range(m)])


def test_rejects_self_loop_and_bad_endpoint():
    with pytest.raises(ValueError):
        Digraph(2, [(0, 0)])
    with pytest.raises(ValueError):
        Digraph(2, [(0, 2)])


def test_arc_ids_survive_deletion():
    D = Digraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    E = D.remove_vertices([1])
    assert [a.id for a in E.arcs] == [2, 3]
    assert E.n == 4
    sub, old = D.induced([2, 3, 0])
    assert old == [0, 2, 3]
    assert sorted(a.id for a in sub.arcs) == [2, 3]


def test_parallel_arcs_and_simple():
    D = Digraph(2, [(0, 1), (0, 1), (1, 0)])
    assert D.multiplicity(0, 1) == 2
    assert D.simple().m == 2
    assert [a.id for a in D.simple().arcs] == [0, 2]


def test_scc_d32(d32, ids):
    cond = scc(d32)
    expected = [
        ids(1, 2), ids(27, 28), ids(5, 6), ids(3, 4),
        ids(7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18),
        ids(19, 20, 21, 22, 23, 24, 25, 26, 29, 30, 31, 32),
    ]
    assert sorted(map(sorted, cond.components)) == sorted(map(sorted, expected))
    # listed order is topological for the condensation
    pos = {i: k for k, i in enumerate(range(len(cond)))}
    assert all(pos[i] < pos[j] for i, j in cond.arcs)


def test_scc_path_is_singletons_in_order():
    cond = scc(Digraph(3, [(0, 1), (1, 2)]))
    assert [sorted(c) for c in cond.components] == [[0], [1], [2]]


@pytest.mark.parametrize("seed", range(40))
def test_scc_matches_mutual_reachability(seed):
    rng = random.Random(seed)
    D = _random(rng, rng.randint(2, 10), rng.randint(0, 20))
    assert set(scc(D).components) == _mutual_reach_oracle(D)


def test_reach_d32(d32, ids):
    assert reach(d32, ids(7), ids(15, 16, 17, 18)) == ids(7, 8, 11, 12)
    assert reach(d32, set(), set()) == set()


@pytest.mark.parametrize("seed", range(20))
def test_reach_matches_networkx(seed):
    rng = random.Random(100 + seed)
    D = _random(rng, 9, 16)
    forbidden = set(rng.sample(range(9), 2))
    src = {rng.choice([v for v in range(9) if v not in forbidden])}
    G = nx.DiGraph()
    G.add_nodes_from(range(9))
    G.add_edges_from((a.tail, a.head) for a in D.arcs if a.tail not in forbidden and a.head not in forbidden)
    want = set().union(*(nx.descendants(G, s) | {s} for s in src))
    assert reach(D, src, forbidden) == want


def test_topological_order():
    rng = random.Random(3)
    for _ in range(20):
        D = random_dag(rng, 8)
        order = topological_order(D)
        pos = {v: i for i, v in enumerate(order)}
        assert all(pos[a.tail] < pos[a.head] for a in D.arcs)
    assert topological_order(Digraph(2, [(0, 1), (1, 0)])) is None


def test_line_digraph_small_cases():
    L, _ = line_digraph(Digraph(2, [(0, 1)]))
    assert (L.n, L.m) == (1, 0)
    L, _ = line_digraph(Digraph(3, [(0, 1), (1, 2), (2, 0)]))
    assert L.n == 3 and circumference_bounded(L, 3) == 3 and L.m == 3


@pytest.mark.parametrize("seed", range(10))
def test_line_digraph_matches_networkx(seed):
    rng = random.Random(seed)
    D = _random(rng, 7, 12).simple()
    L, arc_of = line_digraph(D)
    G = nx.DiGraph((a.tail, a.head) for a in D.arcs)
    LG = nx.line_graph(G)
    ends = [(D.arc(a).tail, D.arc(a).head) for a in arc_of]
    mine = {(ends[a.tail], ends[a.head]) for a in L.arcs}
    assert mine == set(LG.edges)
    if D.is_acyclic():
        assert L.is_acyclic()


def test_bidirect():
    assert circumference_bounded(bidirect(2, [(0, 1)]), 4) == 2
    K4 = bidirect(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])
    assert circumference_bounded(K4, 4) == 4
    tree = bidirect(5, [(0, 1), (0, 2), (2, 3), (2, 4)])
    assert circumference_bounded(tree, 5) == 2


def test_pendant_terminals():
    D = Digraph(2, [(0, 1)])
    E, pairs, pend = add_pendant_terminals(D, [(0, 1)])
    assert (E.n, E.m) == (4, 3)
    assert pairs == [(2, 3)]
    assert path_vertices(E, [pend[0][0], 0, pend[0][1]]) == [2, 0, 1, 3]
    E, pairs, _ = add_pendant_terminals(D, [(0, 1), (0, 1)])
    assert (E.n, E.m) == (6, 5)
    assert sorted(E.successors(2) + E.successors(4)) == [0, 0]


def test_loop_erase():
    D = Digraph(4, [(0, 1), (1, 2), (2, 1), (1, 3)])
    assert loop_erase(D, [0, 1, 2, 3]) == [0, 3]
    assert loop_erase(D, []) == []
