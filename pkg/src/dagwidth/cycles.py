"""Bounded-length cycle search: circumference, covering cycles, maximality.

Every search here explores simple paths of at most ``p_max`` vertices, so the
cost is polynomial in the graph for fixed ``p_max`` and exponential only in
``p_max`` itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .digraph import Digraph, scc
from .exceptions import CircumferenceError

#: Returned by :func:`circumference_bounded` when a cycle is longer than the bound.
EXCEEDS = "EXCEEDS"


@dataclass(frozen=True)
class Cycle:
    """A directed cycle, stored as its vertex sequence and realising arc ids."""

    vertices: tuple[int, ...]
    arcs: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    @classmethod
    def from_vertices(cls, D: Digraph, vertices) -> "Cycle":
        vertices = tuple(vertices)
        if len(vertices) < 2 or len(set(vertices)) != len(vertices):
            raise ValueError(f"not a simple cycle: {vertices}")
        arcs = []
        for a, b in zip(vertices, vertices[1:] + vertices[:1]):
            between = D.arcs_between(a, b)
            if not between:
                raise ValueError(f"no arc {a}->{b}")
            arcs.append(min(x.id for x in between))
        return cls(vertices, tuple(arcs))

    def segment(self, start: int, end: int) -> list[int]:
        """Vertices from ``start`` forward to ``end`` along the cycle, inclusive."""
        i = self.vertices.index(start)
        out = []
        L = len(self.vertices)
        for step in range(L):
            v = self.vertices[(i + step) % L]
            out.append(v)
            if v == end:
                return out
        raise ValueError(f"{end} not on cycle")


def _reaches(D: Digraph, src: int, dst: int, allowed: set, blocked: set) -> bool:
    if src == dst:
        return True
    seen = {src}
    stack = [src]
    while stack:
        v = stack.pop()
        for w in D.successors(v):
            if w == dst:
                return True
            if w in allowed and w not in blocked and w not in seen:
                seen.add(w)
                stack.append(w)
    return False


def circumference_bounded(D: Digraph, p_max: int):
    """Length of a longest cycle if it is at most ``p_max``, else ``EXCEEDS``.

    Acyclic digraphs have circumference 0.  For every start vertex ``s`` the
    search grows simple paths through larger vertices of the same strong
    component.  A path that reaches ``p_max + 1`` vertices is a witness of a long
    cycle exactly when its end can still get back to ``s`` avoiding the path.
    """
    if p_max < 2:
        raise ValueError(f"p_max must be at least 2, got {p_max}")
    cond = scc(D)
    best = 0
    for s in range(D.n):
        comp = cond.components[cond.component_of[s]]
        if len(comp) < 2:
            continue
        allowed = {v for v in comp if v > s}
        path = [s]
        on_path = {s}
        # explicit DFS stack of successor iterators
        stack = [iter(D.successors(s))]
        while stack:
            advanced = False
            for w in stack[-1]:
                if w == s:
                    if len(path) >= 2:
                        best = max(best, len(path))
                    continue
                if w not in allowed or w in on_path:
                    continue
                if len(path) == p_max:
                    if _reaches(D, w, s, allowed, on_path):
                        return EXCEEDS
                    continue
                path.append(w)
                on_path.add(w)
                stack.append(iter(D.successors(w)))
                advanced = True
                break
            if not advanced:
                stack.pop()
                on_path.discard(path.pop())
    return best


def find_cycle_containing(D: Digraph, X: Iterable[int], p_max: int) -> Cycle | None:
    """First cycle with at most ``p_max`` vertices whose vertex set contains ``X``.

    The cycle is reported starting at ``min(X)``; successors are tried in
    increasing order, so the answer is deterministic.
    """
    X = frozenset(X)
    if not X:
        raise ValueError("X must be non-empty")
    if len(X) > p_max:
        return None
    s = min(X)
    cond = scc(D)
    comp = cond.components[cond.component_of[s]]
    if not X <= comp or len(comp) < 2:
        return None
    path = [s]
    on_path = {s}
    missing = len(X) - 1
    stack = [iter(D.successors(s))]
    while stack:
        advanced = False
        for w in stack[-1]:
            if w == s:
                if missing == 0 and len(path) >= 2:
                    return Cycle.from_vertices(D, path)
                continue
            if w not in comp or w in on_path:
                continue
            need = missing - (1 if w in X else 0)
            if len(path) + 1 + need > p_max:
                continue
            path.append(w)
            on_path.add(w)
            missing = need
            stack.append(iter(D.successors(w)))
            advanced = True
            break
        if not advanced:
            stack.pop()
            v = path.pop()
            on_path.discard(v)
            if v in X and v != s:
                missing += 1
    return None


def is_maximal_cycle(D: Digraph, C: Cycle, p_max: int) -> bool:
    """True iff no cycle of length at most ``p_max`` strictly contains V(C)."""
    return _extension(D, C, p_max) is None


def _extension(D: Digraph, C: Cycle, p_max: int) -> Cycle | None:
    if len(C) >= p_max:
        return None
    cond = scc(D)
    comp = cond.components[cond.component_of[C.vertices[0]]]
    vs = C.vertex_set
    for w in sorted(comp - vs):
        bigger = find_cycle_containing(D, vs | {w}, p_max)
        if bigger is not None:
            return bigger
    return None


def extend_to_maximal_cycle(D: Digraph, C: Cycle, p_max: int) -> Cycle:
    """Grow ``C`` one vertex at a time until no larger cycle contains it."""
    if len(C) > p_max:
        raise CircumferenceError(f"cycle of length {len(C)} exceeds the bound {p_max}")
    for _ in range(p_max - len(C) + 1):
        bigger = _extension(D, C, p_max)
        if bigger is None:
            return C
        C = bigger
    raise CircumferenceError("extension did not stop within the bound")


def enumerate_cycles(D: Digraph, p_max: int):
    """All simple cycles with at most ``p_max`` vertices, each listed once.

    Each cycle starts at its smallest vertex; order is lexicographic in the
    DFS, which is deterministic.
    """
    cond = scc(D)
    for s in range(D.n):
        comp = cond.components[cond.component_of[s]]
        if len(comp) < 2:
            continue
        allowed = {v for v in comp if v > s}
        path = [s]
        on_path = {s}
        stack = [iter(D.successors(s))]
        while stack:
            advanced = False
            for w in stack[-1]:
                if w == s and len(path) >= 2:
                    yield Cycle.from_vertices(D, path)
                    continue
                if w not in allowed or w in on_path or len(path) == p_max:
                    continue
                path.append(w)
                on_path.add(w)
                stack.append(iter(D.successors(w)))
                advanced = True
                break
            if not advanced:
                stack.pop()
                on_path.discard(path.pop())


def maximal_cycles(D: Digraph, p_max: int) -> list[Cycle]:
    """Maximal cycles of ``D``, one representative per vertex set."""
    by_set = {}
    for C in enumerate_cycles(D, p_max):
        by_set.setdefault(C.vertex_set, C)
    sets = list(by_set)
    out = []
    for vs, C in by_set.items():
        if not any(vs < other for other in sets):
            out.append(C)
    return out
