import random

import pytest

from dagwidth.cops import decompose
from dagwidth.decomposition import (
    DagDecomposition,
    add_unique_root,
    combine_components,
    guards,
    validate,
)
from dagwidth.digraph import Digraph, scc
from graphgen import bounded_digraph

# expected bags for the 32-vertex example, in printed vertex names
D32_BAGS = [
    set(),
    {1, 2}, {5, 6}, {3, 4}, {27, 28},
    {15, 16, 17, 18}, {12, 15}, {7, 8, 11, 12}, {13, 15}, {9, 10, 13, 14},
    {19, 20, 23, 24}, {24, 29}, {29, 30}, {20, 21}, {21, 22, 25, 26}, {25, 32}, {31, 32},
]


def _names(D, dec):
    return [{int(D.label(v)) for v in bag} for bag in dec.bags]


def test_guards_examples(d32, ids):
    assert guards(d32, set(), range(d32.n))
    assert guards(d32, ids(15), ids(7, 8, 11, 12))
    assert not guards(d32, set(), ids(7, 8, 11, 12))


@pytest.mark.parametrize("seed", range(15))
def test_guards_matches_arc_scan(seed):
    rng = random.Random(seed)
    D = Digraph(8, [tuple(rng.sample(range(8), 2)) for _ in range(14)])
    Vp, W = set(rng.sample(range(8), 3)), set(rng.sample(range(8), 2))
    want = all(a.head in Vp or a.head in W for a in D.arcs if a.tail in Vp)
    assert guards(D, W, Vp) == want


def test_d32_decomposition_bags(d32):
    dec, _, _ = decompose(d32, 4)
    assert sorted(map(sorted, _names(d32, dec))) == sorted(map(sorted, D32_BAGS))
    assert dec.width == 4
    assert validate(d32, dec).ok


def test_dropping_a_vertex_gives_d1(d32):
    dec, _, _ = decompose(d32, 4)
    v30 = d32.labels.index("30")
    bags = [b - {v30} for b in dec.bags]
    report = validate(d32, DagDecomposition(bags, dec.arcs))
    assert report.d1 == [v30]


def test_d2_and_d3_are_reported():
    D = Digraph(3, [(0, 1), (1, 2)])
    # 0 in the root and the leaf but not in the middle
    report = validate(D, DagDecomposition([{0}, {1}, {0, 2}], [(0, 1), (1, 2)]))
    assert (0, 1, 2, 0) in report.d2
    # arc 1->2 escapes the node holding {1} below an empty guard
    report = validate(D, DagDecomposition([{0}, {1}, {2}], [(0, 1), (0, 2)]))
    assert report.d3
    report = validate(D, DagDecomposition([{0}, {1}], [(0, 1), (1, 0)]))
    assert report.structural


def test_trivial_decomposition_is_valid():
    rng = random.Random(1)
    D = Digraph(6, [tuple(rng.sample(range(6), 2)) for _ in range(12)])
    dec = DagDecomposition([set(range(6))], [])
    assert validate(D, dec).ok and dec.width == 6


def test_add_unique_root():
    two = DagDecomposition([{0}, {1}], [])
    rooted = add_unique_root(two)
    assert len(rooted) == 3 and rooted.bags[2] == frozenset()
    assert rooted.roots() == [2]
    assert add_unique_root(rooted) == rooted


def test_combine_single_component():
    D = Digraph(2, [(0, 1), (1, 0)])
    part = DagDecomposition([{0, 1}], [])
    assert combine_components([({0, 1}, part)], scc(D)) == DagDecomposition([{0, 1}], [], {})


def test_combined_d32_root_has_empty_bag(d32):
    dec, _, _ = decompose(d32, 4)
    (root,) = dec.roots()
    assert dec.bags[root] == frozenset()
    kids = {frozenset(int(d32.label(v)) for v in dec.bags[c]) for c in dec.children(root)}
    assert kids == {frozenset({1, 2}), frozenset({27, 28})}
    assert dec.provenance == {"combine": "leaf-to-root"}


@pytest.mark.parametrize("seed", range(100))
def test_random_combined_decompositions_validate(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 12)
    D = bounded_digraph(rng, n, 3, rng.randint(n, 4 * n))
    dec, _, _ = decompose(D, 3)
    assert validate(D, dec).ok and dec.width <= 3


def test_json_roundtrip(d32):
    dec, _, _ = decompose(d32, 4)
    doc = dec.to_json(d32)
    back = DagDecomposition.from_json(doc, d32)
    assert back.bags == dec.bags and back.arcs == dec.arcs
