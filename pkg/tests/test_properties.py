"""Property tests over generated digraphs."""

import hypothesis.strategies as st
from hypothesis import HealthCheck, given, settings

from dagwidth.cops import decompose, simulate_game
from dagwidth.cycles import EXCEEDS, circumference_bounded
from dagwidth.decomposition import add_unique_root, validate
from dagwidth.digraph import Digraph, add_pendant_terminals, line_digraph, loop_erase, scc
from dagwidth.linkage import (
    ARC,
    VERTEX,
    LinkageInstance,
    brute_force_linkage,
    reduce_circ2_vertex,
    reduce_circ2_weak,
    solve_vertex_linkage_circ2,
    solve_weak_linkage_circ2,
)

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def bounded(draw, p=None, n_max=10, mult=1):
    """Keep drawn arcs in order while circumference stays <= p."""
    p = p or draw(st.integers(2, 4))
    n = draw(st.integers(2, n_max))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=4 * n))
    arcs: list = []
    for u, v in pairs:
        if u == v or arcs.count((u, v)) >= mult:
            continue
        if circumference_bounded(Digraph(n, arcs + [(u, v)]), p) != EXCEEDS:
            arcs.append((u, v))
    return Digraph(n, arcs), p


@st.composite
def anydigraph(draw, n_max=9):
    n = draw(st.integers(1, n_max))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3 * n))
    return Digraph(n, [(u, v) for u, v in pairs if u != v])


@SETTINGS
@given(anydigraph())
def test_condensation_partitions_and_is_acyclic(D):
    cond = scc(D)
    assert sorted(v for c in cond.components for v in c) == list(range(D.n))
    assert all(i < j for i, j in cond.arcs)
    assert Digraph(len(cond), list(cond.arcs)).is_acyclic()


@SETTINGS
@given(bounded())
def test_width_at_most_circumference(case):
    D, p = case
    dec, _, traces = decompose(D, p)
    assert dec.width <= p
    assert validate(D, dec).ok
    assert len(add_unique_root(dec).roots()) == 1
    rep = simulate_game(D, dec)
    assert rep.caught and rep.robber_monotone


@SETTINGS
@given(anydigraph(), st.data())
def test_loop_erase_gives_simple_subpath(D, data):
    if not D.m:
        return
    walk = [data.draw(st.sampled_from(list(D.arcs))).id]
    for _ in range(data.draw(st.integers(0, 8))):
        outs = D.out_arcs(D.arc(walk[-1]).head)
        if not outs:
            break
        walk.append(data.draw(st.sampled_from(list(outs))).id)
    path = loop_erase(D, walk)
    assert set(path) <= set(walk)
    vs = [D.arc(path[0]).tail] + [D.arc(a).head for a in path] if path else []
    assert len(vs) == len(set(vs))
    if path:
        assert vs[0] == D.arc(walk[0]).tail and vs[-1] == D.arc(walk[-1]).head


@SETTINGS
@given(bounded(p=2, n_max=9), st.data())
def test_vertex_reduction_invariants(case, data):
    D, _ = case
    if D.n < 2:
        return
    k = data.draw(st.integers(1, min(2, D.n // 2)))
    vs = data.draw(st.permutations(range(D.n)))[: 2 * k]
    inst = LinkageInstance(D, [(vs[2 * i], vs[2 * i + 1]) for i in range(k)], VERTEX)
    reduced, rec = reduce_circ2_vertex(inst, check=True)
    assert reduced.digraph.is_acyclic()
    assert len(rec.events) <= D.n - 2 * k
    assert (solve_vertex_linkage_circ2(inst) is None) == (brute_force_linkage(inst) is None)


@SETTINGS
@given(bounded(p=2, n_max=8, mult=3), st.data())
def test_weak_reduction_invariants(case, data):
    D, _ = case
    pair = st.tuples(st.integers(0, D.n - 1), st.integers(0, D.n - 1)).filter(lambda x: x[0] != x[1])
    pairs = data.draw(st.lists(pair, min_size=1, max_size=2))
    inst = LinkageInstance(D, pairs, ARC)
    reduced, rec = reduce_circ2_weak(inst, check=True)
    assert reduced.digraph.n == D.n + len(rec.events)
    assert reduced.digraph.m == D.m + sum(e.d for e in rec.events)
    assert len(rec.events) <= max(D.n - 1, 0)
    assert (solve_weak_linkage_circ2(inst) is None) == (brute_force_linkage(inst) is None)


@SETTINGS
@given(bounded(n_max=7), st.integers(1, 3))
def test_pendant_then_line_keeps_acyclicity(case, k):
    D, _ = case
    pairs = [(i % D.n, (i + 1) % D.n) for i in range(k)]
    E, _, _ = add_pendant_terminals(D, pairs)
    assert (E.n, E.m) == (D.n + 2 * k, D.m + 2 * k)
    L, _ = line_digraph(E)
    assert L.is_acyclic() == D.is_acyclic()
