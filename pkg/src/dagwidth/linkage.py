"""Disjoint paths: acyclic pebble solver, brute-force oracle and reductions.

Paths are reported as lists of arc ids of the input digraph.  Reductions keep
arc ids stable: an arc that is merely re-attached to a split vertex keeps its
id, and the arcs a reduction invents are recorded as synthetic, so lifting a
solution back is "drop synthetic arcs, then shortcut loops".
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Sequence

from .cycles import EXCEEDS, circumference_bounded
from .digraph import (
    Digraph,
    add_pendant_terminals,
    line_digraph,
    loop_erase,
    path_vertices,
    scc,
    topological_order,
)
from .exceptions import BudgetExceeded, CircumferenceError, InputError, InternalError

VERTEX = "vertex"
ARC = "arc"


@dataclass(frozen=True)
class LinkageInstance:
    """Digraph plus terminal pairs ``(s_i, t_i)``.

    In ``VERTEX`` mode the paths must be vertex-disjoint and the ``2k``
    terminals distinct; in ``ARC`` mode only arcs may not be shared and
    terminals may repeat across pairs.  ``s_i == t_i`` is rejected in both.
    """

    digraph: Digraph
    pairs: tuple
    mode: str = VERTEX

    def __post_init__(self):
        pairs = tuple((int(s), int(t)) for s, t in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if self.mode not in (VERTEX, ARC):
            raise InputError(f"mode must be {VERTEX!r} or {ARC!r}, got {self.mode!r}")
        for s, t in pairs:
            for x in (s, t):
                if not 0 <= x < self.digraph.n:
                    raise InputError(f"terminal {x} is not a vertex")
            if s == t:
                raise InputError(f"pair ({s}, {t}) has equal ends")
        if self.mode == VERTEX:
            flat = [x for pair in pairs for x in pair]
            if len(set(flat)) != len(flat):
                raise InputError("vertex-disjoint linkage needs 2k distinct terminals")

    @property
    def k(self) -> int:
        return len(self.pairs)


def verify_linkage(inst: LinkageInstance, paths) -> list[str]:
    """Independent witness check; returns a list of problems (empty if fine)."""
    D = inst.digraph
    problems = []
    if paths is None or len(paths) != inst.k:
        return [f"expected {inst.k} paths"]
    vertex_sets = []
    used_arcs: dict = {}
    for i, ((s, t), path) in enumerate(zip(inst.pairs, paths)):
        if any(not D.has_arc_id(a) for a in path):
            problems.append(f"path {i} uses unknown arcs")
            continue
        try:
            vs = path_vertices(D, path, s)
        except ValueError as exc:
            problems.append(f"path {i}: {exc}")
            continue
        if vs[0] != s or vs[-1] != t:
            problems.append(f"path {i} runs {vs[0]}->{vs[-1]}, wanted {s}->{t}")
        if len(set(vs)) != len(vs):
            problems.append(f"path {i} repeats a vertex")
        vertex_sets.append(set(vs))
        for a in path:
            if a in used_arcs:
                problems.append(f"arc {a} shared by paths {used_arcs[a]} and {i}")
            used_arcs[a] = i
    if inst.mode == VERTEX and not problems:
        for i, j in combinations(range(len(vertex_sets)), 2):
            common = vertex_sets[i] & vertex_sets[j]
            if common:
                problems.append(f"paths {i} and {j} share vertices {sorted(common)}")
    return problems


def _checked(inst: LinkageInstance, paths):
    if paths is None:
        return None
    problems = verify_linkage(inst, paths)
    if problems:
        raise InternalError("; ".join(problems))
    return paths


# acyclic solver


def dag_vertex_linkage(inst: LinkageInstance, budget: int = 2_000_000):
    """Vertex-disjoint linkage in an acyclic digraph by the pebble game.

    A state holds one pebble per pair.  Only the pebble on the topologically
    earliest vertex among those not yet at their target may move, one arc
    forward onto a free vertex.  The instance is a yes-instance iff the
    all-targets state is reachable.
    """
    if inst.mode != VERTEX:
        raise InputError("dag_vertex_linkage solves vertex-disjoint instances")
    D = inst.digraph
    order = topological_order(D)
    if order is None:
        raise InputError("dag_vertex_linkage needs an acyclic digraph")
    pos = {v: i for i, v in enumerate(order)}
    targets = tuple(t for _, t in inst.pairs)
    can_reach = []
    rev = D.reverse()
    for t in targets:
        seen = {t}
        queue = deque([t])
        while queue:
            x = queue.popleft()
            for w in rev.successors(x):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        can_reach.append(seen)

    start = tuple(s for s, _ in inst.pairs)
    if any(s not in can_reach[i] for i, s in enumerate(start)):
        return None
    prev = {start: None}
    queue = deque([start])
    k = len(start)
    while queue:
        state = queue.popleft()
        if state == targets:
            break
        i = min((j for j in range(k) if state[j] != targets[j]), key=lambda j: pos[state[j]])
        occupied = set(state)
        for a in D.out_arcs(state[i]):
            w = a.head
            if w in occupied or w not in can_reach[i]:
                continue
            nxt = state[:i] + (w,) + state[i + 1 :]
            if nxt in prev:
                continue
            prev[nxt] = (state, i, a.id)
            if len(prev) > budget:
                raise BudgetExceeded(f"pebble search passed {budget} states", used=len(prev))
            queue.append(nxt)
    if targets not in prev:
        return None
    paths = [[] for _ in range(k)]
    state = targets
    while prev[state] is not None:
        state, i, aid = prev[state]
        paths[i].append(aid)
    for p in paths:
        p.reverse()
    return _checked(inst, paths)


# oracle


def brute_force_linkage(inst: LinkageInstance, budget: int = 2_000_000):
    """Exhaustive backtracking over simple paths; exact when it finishes."""
    D = inst.digraph
    vertex_mode = inst.mode == VERTEX
    count = [0]
    used_v: set = set()
    used_a: set = set()
    if vertex_mode:
        used_v = {x for pair in inst.pairs for x in pair}
    chosen: list = []

    def tick():
        count[0] += 1
        if count[0] > budget:
            raise BudgetExceeded(f"brute force passed {budget} steps", used=count[0])

    def route(i):
        if i == inst.k:
            return True
        s, t = inst.pairs[i]
        path: list = []
        on_path = {s}

        def extend(v):
            tick()
            tried = set()
            for a in D.out_arcs(v):
                w = a.head
                if w in on_path or w in tried:
                    continue
                if vertex_mode:
                    if w in used_v and w != t:
                        continue
                elif a.id in used_a:
                    continue
                # parallel arcs are interchangeable: try one per head
                tried.add(w)
                path.append(a.id)
                on_path.add(w)
                if not vertex_mode:
                    used_a.add(a.id)
                if w == t:
                    if vertex_mode:
                        used_v.update(on_path)
                    chosen.append(list(path))
                    if route(i + 1):
                        return True
                    chosen.pop()
                    if vertex_mode:
                        used_v.difference_update(on_path - {s, t})
                elif extend(w):
                    return True
                path.pop()
                on_path.discard(w)
                if not vertex_mode:
                    used_a.discard(a.id)
            return False

        return extend(s)

    if route(0):
        return _checked(inst, chosen)
    return None


# reduction bookkeeping


@dataclass
class SplitEvent:
    v: int
    u: int
    component: list
    v1: int
    v2: int
    d: int
    synthetic: list
    # arc id -> (old tail, old head, new tail, new head) for arcs that moved
    moved: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "v": self.v,
            "u": self.u,
            "component": sorted(self.component),
            "v1": self.v1,
            "v2": self.v2,
            "d": self.d,
            "synthetic_arcs": list(self.synthetic),
            "moved_arcs": {str(a): list(ends) for a, ends in sorted(self.moved.items())},
        }


@dataclass
class ReductionRecord:
    """Ordered split events; arcs not in ``synthetic`` keep their original ids."""

    original: LinkageInstance
    events: list = field(default_factory=list)
    synthetic: set = field(default_factory=set)
    deleted: list = field(default_factory=list)

    def lift(self, paths):
        """Map paths of the reduced instance back to the original digraph."""
        if paths is None:
            return None
        D = self.original.digraph
        out = []
        for path in paths:
            walk = [a for a in path if a not in self.synthetic]
            out.append(loop_erase(D, walk))
        return out

    def to_json(self) -> list:
        doc = []
        if self.deleted:
            doc.append({"deleted_terminal_arcs": sorted(self.deleted)})
        doc.extend(e.to_json() for e in self.events)
        return doc


def _leaf(D: Digraph, S: frozenset):
    """Smallest vertex of ``S`` with exactly one neighbour inside ``S``."""
    for v in sorted(S):
        nbrs = ({w for w in D.successors(v)} | {w for w in D.predecessors(v)}) & S
        if len(nbrs) == 1:
            return v, next(iter(nbrs))
    raise InternalError(f"component {sorted(S)} has no leaf; circumference exceeds 2")


def _split(D: Digraph, v: int, u: int, bundle: int, next_id: int):
    """Replace ``v`` by ``v1 = v`` and a new ``v2``.

    In-arcs stay on ``v1``; out-arcs except those to ``u`` move to ``v2``;
    arcs ``u -> v`` are redirected to ``u -> v2``.  ``bundle`` fresh arcs
    ``v1 -> v2`` are added.
    """
    v2 = D.n
    arcs = []
    moved = {}
    for a in D.arcs:
        if a.tail == v and a.head != u:
            arcs.append((a.id, v2, a.head))
        elif a.tail == u and a.head == v:
            arcs.append((a.id, u, v2))
        else:
            arcs.append(tuple(a))
            continue
        moved[a.id] = (a.tail, a.head) + arcs[-1][1:]
    synthetic = list(range(next_id, next_id + bundle))
    arcs.extend((i, v, v2) for i in synthetic)
    labels = None if D.labels is None else list(D.labels) + [f"{D.labels[v]}~2"]
    return Digraph(D.n + 1, arcs, labels), v2, synthetic, moved


def _require_circ2(D: Digraph):
    if circumference_bounded(D, 2) == EXCEEDS:
        raise CircumferenceError("digraph has a cycle of length at least 3")


def reduce_circ2_vertex(inst: LinkageInstance, check: bool = False):
    """Equivalent acyclic vertex-disjoint instance for circumference <= 2.

    Arcs into sources and out of sinks are deleted first (no disjoint solution
    can use them); then a leaf of the smallest non-trivial strong component is
    split until no cycle remains.
    """
    if inst.mode != VERTEX:
        raise InputError("reduce_circ2_vertex needs a vertex-disjoint instance")
    D = inst.digraph.simple()
    _require_circ2(D)
    sources = {s for s, _ in inst.pairs}
    sinks = {t for _, t in inst.pairs}
    deleted = [a.id for a in D.arcs if a.head in sources or a.tail in sinks]
    gone = set(deleted)
    D = Digraph(D.n, [a for a in D.arcs if a.id not in gone], D.labels)
    record = ReductionRecord(inst, deleted=deleted)
    next_id = inst.digraph.next_arc_id()
    terminals = sources | sinks
    while True:
        cond = scc(D)
        big = cond.nontrivial()
        if not big:
            break
        S = min((cond.components[i] for i in big), key=min)
        if S & terminals:
            raise InternalError(f"terminal inside strong component {sorted(S)}")
        v, u = _leaf(D, S)
        D, v2, syn, moved = _split(D, v, u, 1, next_id)
        next_id += 1
        record.synthetic.update(syn)
        record.events.append(SplitEvent(v, u, sorted(S), v, v2, 1, syn, moved))
        if check:
            _require_circ2(D)
    return LinkageInstance(D, inst.pairs, VERTEX), record


def reduce_circ2_weak(inst: LinkageInstance, check: bool = False):
    """Equivalent acyclic arc-disjoint instance for circumference <= 2.

    Splitting a leaf ``v`` with neighbour ``u`` adds ``d`` parallel arcs
    ``v1 -> v2``, where ``d`` counts the arcs between ``v`` and the rest of the
    graph outside its component.  Sources at ``v`` stay on ``v1``; sinks at
    ``v`` move to ``v2``.
    """
    if inst.mode != ARC:
        raise InputError("reduce_circ2_weak needs an arc-disjoint instance")
    D = inst.digraph
    _require_circ2(D)
    record = ReductionRecord(inst)
    pairs = list(inst.pairs)
    next_id = D.next_arc_id()
    while True:
        cond = scc(D)
        big = cond.nontrivial()
        if not big:
            break
        S = min((cond.components[i] for i in big), key=min)
        v, u = _leaf(D, S)
        d = sum(1 for a in D.in_arcs(v) if a.tail not in S) + sum(1 for a in D.out_arcs(v) if a.head not in S)
        D, v2, syn, moved = _split(D, v, u, d, next_id)
        next_id += d
        record.synthetic.update(syn)
        record.events.append(SplitEvent(v, u, sorted(S), v, v2, d, syn, moved))
        pairs = [(s, v2 if t == v else t) for s, t in pairs]
        if check:
            _require_circ2(D)
    return LinkageInstance(D, pairs, ARC), record


@dataclass
class LineDigraphRecord:
    """How an arc-disjoint instance was turned into a vertex-disjoint one."""

    original: LinkageInstance
    padded: Digraph
    arc_of_vertex: list
    pendant: list

    def lift(self, paths):
        if paths is None:
            return None
        D = self.original.digraph
        L_arcs = self.line_arcs
        out = []
        for path in paths:
            if not path:
                raise InternalError("line-digraph path has no arcs")
            verts = [L_arcs[path[0]][0]] + [L_arcs[a][1] for a in path]
            walk = [self.arc_of_vertex[x] for x in verts[1:-1]]
            out.append(loop_erase(D, walk))
        return out


def weak_to_vertex_acyclic(inst: LinkageInstance):
    """Line-digraph construction: arc-disjoint in D iff vertex-disjoint in L(D').

    ``D'`` is ``D`` with a pendant source and sink arc per pair; the new
    terminals are the vertices of ``L(D')`` standing for those pendant arcs.
    Returns ``(vertex instance, record)``.
    """
    if inst.mode != ARC:
        raise InputError("weak_to_vertex_acyclic needs an arc-disjoint instance")
    padded, _, pendant = add_pendant_terminals(inst.digraph, inst.pairs)
    L, arc_of_vertex = line_digraph(padded)
    vertex_of_arc = {a: i for i, a in enumerate(arc_of_vertex)}
    pairs = [(vertex_of_arc[a], vertex_of_arc[b]) for a, b in pendant]
    record = LineDigraphRecord(inst, padded, arc_of_vertex, pendant)
    record.line_arcs = {a.id: (a.tail, a.head) for a in L.arcs}
    return LinkageInstance(L, pairs, VERTEX), record


# pipelines


def solve_vertex_linkage_circ2(inst: LinkageInstance, budget: int = 2_000_000, trace: list | None = None):
    """Vertex-disjoint linkage for circumference <= 2 via the acyclic solver."""
    reduced, record = reduce_circ2_vertex(inst)
    if trace is not None:
        trace.extend(record.to_json())
    paths = dag_vertex_linkage(reduced, budget)
    return _checked(inst, record.lift(paths))


def solve_weak_linkage_acyclic(inst: LinkageInstance, budget: int = 2_000_000):
    """Arc-disjoint linkage in an acyclic digraph through its line digraph."""
    if not inst.digraph.is_acyclic():
        raise InputError("solve_weak_linkage_acyclic needs an acyclic digraph")
    vinst, record = weak_to_vertex_acyclic(inst)
    return _checked(inst, record.lift(dag_vertex_linkage(vinst, budget)))


def solve_weak_linkage_circ2(inst: LinkageInstance, budget: int = 2_000_000, trace: list | None = None):
    """Arc-disjoint linkage for circumference <= 2 via the acyclic solver."""
    reduced, record = reduce_circ2_weak(inst)
    if trace is not None:
        trace.extend(record.to_json())
    vinst, lrec = weak_to_vertex_acyclic(reduced)
    paths = dag_vertex_linkage(vinst, budget)
    return _checked(inst, record.lift(lrec.lift(paths)))


# hitting-set pipeline


def find_hitting_set_circ2(D: Digraph, x_max: int, budget: int = 100_000):
    """Smallest (then lexicographically least) X with circumference(D - X) <= 2."""
    tried = 0
    for size in range(x_max + 1):
        for X in combinations(range(D.n), size):
            tried += 1
            if tried > budget:
                raise BudgetExceeded(f"tried {budget} candidate sets", used=tried)
            if circumference_bounded(D.remove_vertices(X), 2) != EXCEEDS:
                return set(X)
    return None


def plan_count_bound(D: Digraph, X, k: int) -> int:
    """Upper bound on the plans enumerated by the hitting-set solver.

    With ``a`` arcs entering and ``b`` arcs leaving ``X``, a single path makes at
    most ``|X|`` visits, so it has at most ``(1+a)(1+b) * sum_j (ab)^j`` crossing
    sequences (``j <= |X|``); the bound is that number to the power ``k``.
    """
    X = set(X)
    a = sum(1 for e in D.arcs if e.tail not in X and e.head in X)
    b = sum(1 for e in D.arcs if e.tail in X and e.head not in X)
    per_path = (1 + a) * (1 + b) * sum((a * b) ** j for j in range(len(X) + 1))
    return per_path**k


def _closure(D: Digraph, allowed: set) -> dict:
    out = {}
    for v in allowed:
        seen = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for w in D.successors(x):
                if w in allowed and w not in seen:
                    seen.add(w)
                    stack.append(w)
        out[v] = seen
    return out


def _crossing_sequences(D, X, s, t, into, outof, reach_in, reach_out):
    """Crossing-arc sequences a simple ``s -> t`` path could use, shortest first."""
    found = []
    limit = len(X)

    def go(cur, inside, seq, entered):
        if inside == (t in X) and t in (reach_in if inside else reach_out)[cur]:
            found.append(tuple(seq))
        if inside:
            for f in outof:
                if f.tail in reach_in[cur] and f.id not in seq:
                    go(f.head, False, seq + [f.id], entered)
        elif len(entered) < limit:
            for e in into:
                if e.tail in reach_out[cur] and e.id not in seq and e.head not in entered:
                    go(e.head, True, seq + [e.id], entered | {e.head})

    go(s, s in X, [], frozenset([s]) if s in X else frozenset())
    found.sort(key=lambda q: (len(q), q))
    return found


@dataclass(frozen=True)
class HittingPlan:
    """How every path crosses between ``X`` and the rest of the digraph.

    ``crossings[i]`` lists the arc ids path ``i`` uses to enter and leave ``X``,
    alternating.  ``segments[i]`` are the pieces in between as
    ``(region, start, end)`` with region ``"in"`` (inside ``D[X]``) or ``"out"``
    (inside ``D - X``); a piece with ``start == end`` uses no arcs.
    """

    X: frozenset
    crossings: tuple
    segments: tuple

    @classmethod
    def build(cls, D: Digraph, X, pairs, crossings) -> "HittingPlan":
        X = frozenset(X)
        segments = []
        for (s, t), q in zip(pairs, crossings):
            segs = []
            cur, inside = s, s in X
            for aid in q:
                a = D.arc(aid)
                segs.append(("in" if inside else "out", cur, a.tail))
                cur, inside = a.head, not inside
            segs.append(("in" if inside else "out", cur, t))
            segments.append(tuple(segs))
        return cls(X, tuple(tuple(q) for q in crossings), tuple(segments))

    @property
    def visits(self) -> list[int]:
        """``r_i``: number of inside pieces of path ``i``."""
        return [sum(1 for seg in segs if seg[0] == "in") for segs in self.segments]

    def requests(self, region: str) -> list[tuple[int, int]]:
        return [(x, y) for segs in self.segments for kind, x, y in segs if kind == region and x != y]

    def arcs_distinct(self) -> bool:
        flat = [a for q in self.crossings for a in q]
        return len(set(flat)) == len(flat)

    def stitch(self, D: Digraph, inside_paths, outside_paths) -> list[list[int]]:
        it_in, it_out = iter(inside_paths), iter(outside_paths)
        paths = []
        for segs, q in zip(self.segments, self.crossings):
            walk = []
            for j, (kind, x, y) in enumerate(segs):
                if x != y:
                    walk.extend(next(it_in) if kind == "in" else next(it_out))
                if j < len(q):
                    walk.append(q[j])
            paths.append(loop_erase(D, walk))
        return paths

    def to_json(self) -> dict:
        return {
            "X": sorted(self.X),
            "crossings": [list(q) for q in self.crossings],
            "visits": self.visits,
        }


def solve_weak_linkage_via_hitting_set(
    inst: LinkageInstance,
    x_max: int,
    budget: int = 100_000,
    X=None,
    trace: list | None = None,
):
    """Arc-disjoint linkage when few vertices meet every cycle of length >= 3.

    Finds (or takes) ``X`` with circumference(D - X) <= 2, enumerates how each
    path crosses between ``X`` and the rest, and solves the pieces: inside
    ``D[X]`` by brute force, outside with :func:`solve_weak_linkage_circ2`.
    Plans are tried by total number of crossings, then lexicographically.
    ``budget`` caps the number of plans; see :func:`plan_count_bound`.
    """
    if inst.mode != ARC:
        raise InputError("the hitting-set solver handles arc-disjoint instances")
    D = inst.digraph
    if X is None:
        X = find_hitting_set_circ2(D, x_max)
        if X is None:
            raise InputError(f"no set of at most {x_max} vertices leaves circumference <= 2")
    X = set(X)
    if circumference_bounded(D.remove_vertices(X), 2) == EXCEEDS:
        raise InputError(f"{sorted(X)} does not cut every cycle of length >= 3")
    if trace is not None:
        trace.append({"hitting_set": sorted(X)})
    if not X:
        return solve_weak_linkage_circ2(inst, trace=trace)

    outside_graph = D.remove_vertices(X)
    inside_graph = Digraph(D.n, [a for a in D.arcs if a.tail in X and a.head in X], D.labels)
    into = [a for a in D.arcs if a.tail not in X and a.head in X]
    outof = [a for a in D.arcs if a.tail in X and a.head not in X]
    reach_in = _closure(inside_graph, X)
    reach_out = _closure(outside_graph, set(range(D.n)) - X)

    per_pair = [
        _crossing_sequences(D, X, s, t, into, outof, reach_in, reach_out) for s, t in inst.pairs
    ]
    total = 1
    for seqs in per_pair:
        total *= len(seqs)
    if total > budget:
        raise BudgetExceeded(f"{total} crossing plans exceed budget {budget}", used=0, remaining=total)
    combos = sorted(product(*per_pair), key=lambda pl: (sum(len(q) for q in pl), pl))

    cache_out: dict = {}
    for tried, crossings in enumerate(combos, 1):
        plan = HittingPlan.build(D, X, inst.pairs, crossings)
        if not plan.arcs_distinct():
            continue
        if sum(len(segs) - v for segs, v in zip(plan.segments, plan.visits)) > inst.k * len(X) + inst.k:
            raise InternalError("plan has more outside pieces than paths can make")
        inside_req = plan.requests("in")
        inside_sol = []
        if inside_req:
            inside_sol = brute_force_linkage(LinkageInstance(inside_graph, inside_req, ARC))
            if inside_sol is None:
                continue
        key = tuple(plan.requests("out"))
        if key not in cache_out:
            cache_out[key] = solve_weak_linkage_circ2(LinkageInstance(outside_graph, key, ARC)) if key else []
        if cache_out[key] is None:
            continue
        paths = plan.stitch(D, inside_sol, cache_out[key])
        if trace is not None:
            trace.append({"plan": plan.to_json(), "plans_tried": tried})
        return _checked(inst, paths)
    if trace is not None:
        trace.append({"plans_tried": len(combos)})
    return None
