"""Directed multigraphs with stable arc ids, plus the transformations used by
the decomposition and linkage code.

Vertices are the dense integers ``0..n-1``.  Every arc carries an id that is
unique within its graph and survives subgraph operations, so solutions found
on a reduced graph can be traced back arc by arc.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence


class Arc(NamedTuple):
    id: int
    tail: int
    head: int


class Digraph:
    """Immutable directed multigraph.

    Parameters
    ----------
    n : int
        Number of vertices.
    arcs : iterable of (tail, head) or (id, tail, head)
        Arcs in order.  Without explicit ids, arcs are numbered by position.
    labels : sequence of str, optional
        External names for the vertices.
    """

    __slots__ = ("n", "arcs", "labels", "_out", "_in", "_by_id", "_succ", "_pred")

    def __init__(self, n: int, arcs: Iterable = (), labels: Sequence[str] | None = None):
        if n < 0:
            raise ValueError(f"vertex count must be non-negative, got {n}")
        built = []
        for pos, a in enumerate(arcs):
            if len(a) == 2:
                aid, (tail, head) = pos, a
            else:
                aid, tail, head = a
            tail, head = int(tail), int(head)
            if not (0 <= tail < n and 0 <= head < n):
                raise ValueError(f"arc {tail}->{head} has an endpoint outside 0..{n - 1}")
            if tail == head:
                raise ValueError(f"self-loop at vertex {tail} is not allowed")
            built.append(Arc(int(aid), tail, head))
        by_id = {a.id: a for a in built}
        if len(by_id) != len(built):
            raise ValueError("arc ids must be unique")
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise ValueError(f"expected {n} labels, got {len(labels)}")
        self.n = n
        self.arcs = tuple(built)
        self.labels = labels
        self._by_id = by_id
        out = [[] for _ in range(n)]
        inn = [[] for _ in range(n)]
        for a in built:
            out[a.tail].append(a)
            inn[a.head].append(a)
        self._out = tuple(tuple(sorted(x, key=lambda a: (a.head, a.id))) for x in out)
        self._in = tuple(tuple(sorted(x, key=lambda a: (a.tail, a.id))) for x in inn)
        self._succ = tuple(tuple(sorted({a.head for a in x})) for x in out)
        self._pred = tuple(tuple(sorted({a.tail for a in x})) for x in inn)

    # basic queries

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, m={len(self.arcs)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return (self.n, self.arcs, self.labels) == (other.n, other.arcs, other.labels)

    def __hash__(self) -> int:
        return hash((self.n, self.arcs))

    @property
    def m(self) -> int:
        return len(self.arcs)

    def arc(self, arc_id: int) -> Arc:
        return self._by_id[arc_id]

    def has_arc_id(self, arc_id: int) -> bool:
        return arc_id in self._by_id

    def successors(self, v: int) -> tuple[int, ...]:
        return self._succ[v]

    def predecessors(self, v: int) -> tuple[int, ...]:
        return self._pred[v]

    def out_arcs(self, v: int) -> tuple[Arc, ...]:
        return self._out[v]

    def in_arcs(self, v: int) -> tuple[Arc, ...]:
        return self._in[v]

    def multiplicity(self, u: int, v: int) -> int:
        """Number of parallel arcs from ``u`` to ``v``."""
        return sum(1 for a in self._out[u] if a.head == v)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._succ[u]

    def arcs_between(self, u: int, v: int) -> list[Arc]:
        return [a for a in self._out[u] if a.head == v]

    def label(self, v: int):
        return self.labels[v] if self.labels is not None else v

    def next_arc_id(self) -> int:
        return max((a.id for a in self.arcs), default=-1) + 1

    # derived graphs

    def remove_vertices(self, removed: Iterable[int]) -> "Digraph":
        """Drop every arc incident to ``removed``; vertex ids are unchanged."""
        gone = set(removed)
        return Digraph(
            self.n,
            [a for a in self.arcs if a.tail not in gone and a.head not in gone],
            self.labels,
        )

    def induced(self, vertices: Iterable[int]) -> tuple["Digraph", list[int]]:
        """Induced subgraph on ``vertices``, relabelled densely.

        Returns the subgraph and the list mapping new ids to old ids.  Arc ids
        are preserved.
        """
        old = sorted(set(vertices))
        new_of = {v: i for i, v in enumerate(old)}
        arcs = [
            (a.id, new_of[a.tail], new_of[a.head])
            for a in self.arcs
            if a.tail in new_of and a.head in new_of
        ]
        labels = None if self.labels is None else [self.labels[v] for v in old]
        return Digraph(len(old), arcs, labels), old

    def simple(self) -> "Digraph":
        """Collapse parallel arcs, keeping the lowest id of each bundle."""
        lowest: dict[tuple[int, int], int] = {}
        for a in self.arcs:
            key = (a.tail, a.head)
            lowest[key] = min(lowest.get(key, a.id), a.id)
        keep = [a for a in self.arcs if lowest[(a.tail, a.head)] == a.id]
        return Digraph(self.n, keep, self.labels)

    def reverse(self) -> "Digraph":
        return Digraph(self.n, [(a.id, a.head, a.tail) for a in self.arcs], self.labels)

    def is_acyclic(self) -> bool:
        return topological_order(self) is not None


@dataclass(frozen=True)
class Condensation:
    """Strongly connected components in a topological order."""

    components: tuple[frozenset, ...]
    component_of: tuple[int, ...]
    arcs: frozenset = field(default_factory=frozenset)

    def __len__(self) -> int:
        return len(self.components)

    def successors(self, i: int) -> list[int]:
        return sorted(b for (a, b) in self.arcs if a == i)

    def predecessors(self, i: int) -> list[int]:
        return sorted(a for (a, b) in self.arcs if b == i)

    def nontrivial(self) -> list[int]:
        return [i for i, c in enumerate(self.components) if len(c) > 1]


def scc(D: Digraph, vertices: Iterable[int] | None = None) -> Condensation:
    """Strongly connected components of ``D`` (optionally of ``D[vertices]``).

    Components are listed in a topological order of the condensation: every arc
    between two components goes from an earlier one to a later one.  Among the
    valid orders the one chosen is deterministic: ties are broken by smallest
    vertex id.
    """
    allowed = set(range(D.n)) if vertices is None else set(vertices)
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    raw: list[list[int]] = []
    counter = 0
    for root in sorted(allowed):
        if root in index:
            continue
        # iterative Tarjan
        work = [(root, iter(D.successors(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in allowed:
                    continue
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(D.successors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                raw.append(comp)

    comp_id = {}
    for i, comp in enumerate(raw):
        for v in comp:
            comp_id[v] = i
    succ = [set() for _ in raw]
    indeg = [0] * len(raw)
    for a in D.arcs:
        if a.tail in allowed and a.head in allowed:
            i, j = comp_id[a.tail], comp_id[a.head]
            if i != j and j not in succ[i]:
                succ[i].add(j)
                indeg[j] += 1
    # Kahn with a min-heap on the smallest member gives a canonical order
    import heapq

    key = [min(c) for c in raw]
    heap = [(key[i], i) for i in range(len(raw)) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, i = heapq.heappop(heap)
        order.append(i)
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, (key[j], j))
    pos = {old: new for new, old in enumerate(order)}
    components = tuple(frozenset(raw[i]) for i in order)
    component_of = [-1] * D.n
    for v, i in comp_id.items():
        component_of[v] = pos[i]
    arcs = frozenset((pos[i], pos[j]) for i in range(len(raw)) for j in succ[i])
    return Condensation(components, tuple(component_of), arcs)


def is_strong(D: Digraph) -> bool:
    return D.n > 0 and len(scc(D)) == 1


def reach(D: Digraph, sources: Iterable[int], forbidden: Iterable[int] = ()) -> set[int]:
    """Vertices reachable from ``sources`` by paths that avoid ``forbidden``."""
    sources = set(sources)
    blocked = set(forbidden)
    if sources & blocked:
        raise ValueError(f"sources and forbidden overlap: {sorted(sources & blocked)}")
    seen = set(sources)
    queue = deque(sorted(sources))
    while queue:
        v = queue.popleft()
        for w in D.successors(v):
            if w not in seen and w not in blocked:
                seen.add(w)
                queue.append(w)
    return seen


def topological_order(D: Digraph) -> list[int] | None:
    """Smallest-id-first topological order, or ``None`` if ``D`` has a cycle."""
    import heapq

    indeg = [len(D.predecessors(v)) for v in range(D.n)]
    heap = [v for v in range(D.n) if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in D.successors(v):
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    return order if len(order) == D.n else None


def line_digraph(D: Digraph) -> tuple[Digraph, list[int]]:
    """Line digraph L(D): one vertex per arc, ``a -> b`` when head(a) == tail(b).

    Vertex ``i`` of the result stands for ``D.arcs[i]``; the returned list maps
    each new vertex to the arc id it came from.
    """
    arc_ids = [a.id for a in D.arcs]
    pos = {a.id: i for i, a in enumerate(D.arcs)}
    new_arcs = []
    for a in D.arcs:
        for b in D.out_arcs(a.head):
            new_arcs.append((pos[a.id], pos[b.id]))
    new_arcs.sort()
    return Digraph(len(arc_ids), new_arcs), arc_ids


def bidirect(n: int, edges: Iterable[tuple[int, int]], labels=None) -> Digraph:
    """Replace each undirected edge ``{u, v}`` by the 2-cycle ``u -> v -> u``."""
    seen = set()
    arcs = []
    for u, v in edges:
        if u == v:
            raise ValueError(f"loop at vertex {u} is not allowed")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ValueError(f"edge {key} given twice; the graph must be simple")
        seen.add(key)
        arcs.append((u, v))
        arcs.append((v, u))
    return Digraph(n, arcs, labels)


def underlying_edges(D: Digraph) -> set[tuple[int, int]]:
    return {(min(a.tail, a.head), max(a.tail, a.head)) for a in D.arcs}


def add_pendant_terminals(D: Digraph, pairs: Sequence[tuple[int, int]]):
    """Attach a fresh source ``s'_i -> s_i`` and sink ``t_i -> t'_i`` per pair.

    Returns ``(D', new_pairs, pendant_arcs)`` where ``pendant_arcs[i]`` holds the
    ids of the two added arcs for pair ``i``.
    """
    for s, t in pairs:
        for x in (s, t):
            if not 0 <= x < D.n:
                raise ValueError(f"terminal {x} is not a vertex")
    n = D.n
    next_id = D.next_arc_id()
    arcs = [tuple(a) for a in D.arcs]
    new_pairs = []
    pendant = []
    labels = None if D.labels is None else list(D.labels)
    for i, (s, t) in enumerate(pairs):
        s2, t2 = n, n + 1
        n += 2
        arcs.append((next_id, s2, s))
        arcs.append((next_id + 1, t, t2))
        pendant.append((next_id, next_id + 1))
        next_id += 2
        new_pairs.append((s2, t2))
        if labels is not None:
            labels += [f"s'{i + 1}", f"t'{i + 1}"]
    return Digraph(n, arcs, labels), new_pairs, pendant


def path_vertices(D: Digraph, arc_path: Sequence[int], start: int | None = None) -> list[int]:
    """Vertex sequence of a walk given as arc ids (``start`` for empty walks)."""
    if not arc_path:
        return [] if start is None else [start]
    arcs = [D.arc(i) for i in arc_path]
    for a, b in zip(arcs, arcs[1:]):
        if a.head != b.tail:
            raise ValueError(f"arcs {a.id} and {b.id} are not consecutive")
    return [arcs[0].tail] + [a.head for a in arcs]


def loop_erase(D: Digraph, arc_walk: Sequence[int]) -> list[int]:
    """Shortcut a walk into a vertex-simple path over a subset of its arcs."""
    out: list[int] = []
    where: dict[int, int] = {}
    if not arc_walk:
        return out
    where[D.arc(arc_walk[0]).tail] = 0
    for aid in arc_walk:
        head = D.arc(aid).head
        if head in where:
            cut = where[head]
            for dropped in out[cut:]:
                where.pop(D.arc(dropped).head, None)
            del out[cut:]
        else:
            out.append(aid)
            where[head] = len(out)
    return out
