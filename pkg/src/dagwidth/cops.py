"""Cops-and-robber machinery.

``run_strategy`` executes the maximal-cycle strategy for digraphs of bounded
circumference and records it as a branching trace; ``strategy_to_decomposition``
and ``decompose`` turn traces into DAG-decompositions; ``simulate_game``
replays a trace or decomposition against a robber; ``game_cop_number`` solves
the helicopter game exactly on small graphs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable

from .cycles import (
    EXCEEDS,
    Cycle,
    circumference_bounded,
    enumerate_cycles,
    extend_to_maximal_cycle,
    find_cycle_containing,
)
from .decomposition import (
    DagDecomposition,
    add_unique_root,
    combine_components,
    validate,
)
from .digraph import Digraph, is_strong, reach, scc
from .exceptions import BudgetExceeded, CircumferenceError, InputError, InternalError, SimulationFault

DISTINCT_ENDS = "DISTINCT_ENDS"
SAME_END = "SAME_END"
START = "START"
TRANSITION = "TRANSITION"


@dataclass
class TraceNode:
    id: int
    parent: int | None
    bag: frozenset
    territory: frozenset
    case: str
    cycle: tuple = ()
    witnesses: dict = field(default_factory=dict)
    children: list = field(default_factory=list)


@dataclass
class StrategyTrace:
    """Branching record of the cop strategy on one strong digraph.

    ``territory`` of a node is the robber region it answers; its ``bag`` is the
    part of the occupied cycle that matters for that region (the region itself
    plus the vertices guarding its exits).
    """

    digraph: Digraph
    p: int
    nodes: list

    @property
    def root(self) -> TraceNode:
        return self.nodes[0]

    @property
    def width(self) -> int:
        return max(len(n.bag) for n in self.nodes)

    def to_json(self) -> dict:
        D = self.digraph

        def names(vs):
            return [D.label(v) for v in sorted(vs)]

        def seq(vs):
            return [D.label(v) for v in vs]

        out = []
        for node in self.nodes:
            w = {}
            for key, val in node.witnesses.items():
                if isinstance(val, (list, tuple)):
                    w[key] = seq(val)
                elif isinstance(val, (frozenset, set)):
                    w[key] = names(val)
                elif isinstance(val, int) and key not in ("z",):
                    w[key] = D.label(val)
                else:
                    w[key] = val
            out.append(
                {
                    "id": node.id,
                    "parent": node.parent,
                    "children": list(node.children),
                    "bag": names(node.bag),
                    "territory": names(node.territory),
                    "case": node.case,
                    "witnesses": w,
                }
            )
        return {"p": self.p, "nodes": out}


def _choose_start_cycle(D: Digraph, p: int) -> Cycle:
    """A longest cycle leaving the smallest largest robber territory.

    Ties are broken by the sorted vertex tuple.
    """
    best = None
    best_key = None
    seen = set()
    for C in enumerate_cycles(D, p):
        vs = C.vertex_set
        if vs in seen:
            continue
        seen.add(vs)
        largest = max((len(t) for t, _ in _territories(D, vs, frozenset(range(D.n)))), default=0)
        key = (-len(C), largest, tuple(sorted(vs)))
        if best_key is None or key < best_key:
            best, best_key = C, key
    return best


def _territories(D: Digraph, occupied: frozenset, region: frozenset):
    """Maximal robber regions inside ``region`` once ``occupied`` is held.

    Each is the reach-closure of a source component of ``D[region - occupied]``,
    returned with that source component, ordered by its smallest vertex.
    """
    rest = region - occupied
    if not rest:
        return []
    cond = scc(D, rest)
    has_pred = {b for _, b in cond.arcs}
    out = []
    for i, comp in enumerate(cond.components):
        if i in has_pred:
            continue
        closure = reach(D, comp, occupied)
        if not closure <= rest:
            raise InternalError(f"robber escapes region {sorted(rest)} via {sorted(closure - rest)}")
        out.append((frozenset(closure), frozenset(comp)))
    out.sort(key=lambda x: min(x[1]))
    return out


def _shortest_path(D: Digraph, start: int, goal: int, blocked: frozenset) -> list[int]:
    """Lexicographically least shortest ``start -> goal`` path; inner vertices avoid ``blocked``."""
    dist = {goal: 0}
    frontier = [goal]
    while frontier and start not in dist:
        nxt = []
        for x in frontier:
            for w in D.predecessors(x):
                if w in dist:
                    continue
                if w == start or w not in blocked:
                    dist[w] = dist[x] + 1
                    if w != start:
                        nxt.append(w)
        frontier = nxt
    if start not in dist:
        raise InternalError(f"no path {start}->{goal} avoiding {sorted(blocked)}")
    path = [start]
    v = start
    while v != goal:
        v = min(w for w in D.successors(v) if dist.get(w) == dist[v] - 1 and (w == goal or w not in blocked))
        path.append(v)
    return path


def _step(D: Digraph, p: int, C: Cycle, territory: frozenset, source: frozenset):
    """One move of the strategy against the robber region ``territory``."""
    occ = C.vertex_set
    r = min(source)
    rev = D.reverse()
    to_r = reach(rev, {r}, occ)
    exits = sorted(c for c in occ if any(w in to_r for w in D.successors(c)))
    entries = sorted(c for c in occ if any(w in territory for w in D.predecessors(c)))
    if not exits or not entries:
        raise InternalError("digraph is not strong around the robber region")

    if exits == entries and len(exits) == 1:
        case = SAME_END
        v = vp = exits[0]
        z = None
    else:
        case = DISTINCT_ENDS
        best = None
        for a in exits:
            for b in entries:
                if a == b:
                    continue
                key = (len(C.segment(a, b)), a, b)
                if best is None or key < best:
                    best = key
        _, v, vp = best
        z = best[0] - 1
        if z == 1:
            raise InternalError(f"cycle {C.vertices} is not maximal: {vp} follows {v}")

    p_cr = _shortest_path(D, v, r, occ)
    p_rc = _shortest_path(D, r, vp, occ)
    on_rc = set(p_rc) - occ
    k = next(i for i, x in enumerate(p_cr) if x in on_rc)
    u = p_cr[k]
    q = p_cr[: k + 1] + p_rc[p_rc.index(u) + 1 :]

    if case == DISTINCT_ENDS:
        kept = C.segment(vp, v)
        c_prime = Cycle.from_vertices(D, kept + q[1:-1])
    else:
        c_prime = Cycle.from_vertices(D, q[:-1])
    if len(c_prime) > p:
        raise CircumferenceError(f"cycle {c_prime.vertices} is longer than {p}")
    c_star = extend_to_maximal_cycle(D, c_prime, p)
    witnesses = {
        "C": list(C.vertices),
        "r": r,
        "v": v,
        "vprime": vp,
        "z": z,
        "u": u,
        "PCr": p_cr,
        "PrC": p_rc,
        "QC": q,
        "Cprime": list(c_prime.vertices),
        "Cstar": list(c_star.vertices),
        "lifted": sorted(occ - c_star.vertex_set),
        "placed": sorted(c_star.vertex_set - occ),
    }
    return case, c_prime, c_star, witnesses


def run_strategy(
    D: Digraph,
    p: int,
    start_cycle: Iterable[int] | None = None,
    intermediate_bags: bool = False,
) -> StrategyTrace:
    """Run the maximal-cycle cop strategy on a strong digraph of circumference <= p.

    Parameters
    ----------
    start_cycle : vertices, optional
        Vertex set of the first cycle to occupy; it is extended to a maximal
        cycle.  By default a longest cycle is used, chosen to leave the
        smallest largest robber territory.
    intermediate_bags : bool
        Also emit the occupied set right after each move, before the new cycle
        is extended to a maximal one, as its own node.
    """
    if not is_strong(D):
        raise InputError("run_strategy needs a strong digraph")
    if p < 2:
        raise InputError(f"p must be at least 2, got {p}")
    everything = frozenset(range(D.n))
    if D.n == 1:
        return StrategyTrace(D, p, [TraceNode(0, None, everything, everything, START)])
    circ = circumference_bounded(D, p)
    if circ == EXCEEDS:
        raise CircumferenceError(f"digraph has a cycle longer than {p}")

    if start_cycle is None:
        C = _choose_start_cycle(D, p)
    else:
        C = find_cycle_containing(D, start_cycle, p)
        if C is None:
            raise InputError(f"no cycle of length <= {p} through {sorted(start_cycle)}")
    C = extend_to_maximal_cycle(D, C, p)

    nodes: list[TraceNode] = []

    def add(parent, bag, territory, case, cycle, witnesses):
        node = TraceNode(len(nodes), parent, frozenset(bag), frozenset(territory), case, tuple(cycle), witnesses)
        nodes.append(node)
        if parent is not None:
            nodes[parent].children.append(node.id)
        return node.id

    root = add(None, C.vertex_set, everything, START, C.vertices, {"Cstar": list(C.vertices)})
    work = [(root, C)]
    while work:
        h, C = work.pop()
        node = nodes[h]
        occ = C.vertex_set
        pending = []
        for territory, source in _territories(D, occ, node.territory):
            guard = frozenset(w for t in territory for w in D.successors(t)) - territory
            if not guard <= occ:
                raise InternalError(f"guard {sorted(guard - occ)} of {sorted(territory)} left open")
            case, c_prime, c_star, wit = _step(D, p, C, territory, source)
            keep = territory | guard
            bag = c_star.vertex_set & keep
            if not bag & territory:
                raise InternalError("move made no progress")
            pending.append((territory, case, c_prime, c_star, wit, bag, keep))
        for territory, case, c_prime, c_star, wit, bag, keep in pending:
            parent = h
            mid = c_prime.vertex_set & keep
            if intermediate_bags and mid != bag:
                parent = add(h, mid, territory, TRANSITION, c_prime.vertices, {"Cprime": list(c_prime.vertices)})
            child = add(parent, bag, territory, case, c_star.vertices, wit)
            work.append((child, c_star))
    _renumber_preorder(nodes)
    return StrategyTrace(D, p, nodes)


def _renumber_preorder(nodes: list) -> None:
    order = []
    stack = [0]
    while stack:
        h = stack.pop()
        order.append(h)
        stack.extend(reversed(nodes[h].children))
    new_id = {old: new for new, old in enumerate(order)}
    renumbered = [nodes[old] for old in order]
    for node in renumbered:
        node.id = new_id[node.id]
        node.parent = None if node.parent is None else new_id[node.parent]
        node.children = [new_id[c] for c in node.children]
    nodes[:] = renumbered


def strategy_to_decomposition(trace: StrategyTrace, check: bool = True) -> DagDecomposition:
    """One decomposition node per trace node, arcs from parent to child."""
    bags = [n.bag for n in trace.nodes]
    arcs = [(n.parent, n.id) for n in trace.nodes if n.parent is not None]
    dec = DagDecomposition(bags, arcs)
    if check:
        report = validate(trace.digraph, dec)
        if not report.ok:
            raise InternalError(f"strategy produced an invalid decomposition: {report.to_json()}")
    return dec


def decompose(D: Digraph, p: int | None = None, intermediate_bags: bool = False, start_cycles=None):
    """DAG-decomposition of ``D`` with width at most ``p`` (its circumference by default).

    Runs the strategy on every non-trivial strong component and glues the
    pieces along the condensation.  Returns ``(decomposition, condensation,
    traces)`` where ``traces`` maps component index to the trace (in the ids
    of the induced subgraph, with ``old_ids`` to translate back).
    """
    if p is None:
        p = max(2, circumference_bounded(D, max(2, D.n)))
    elif circumference_bounded(D, max(p, 2)) == EXCEEDS:
        raise CircumferenceError(f"digraph has a cycle longer than {p}")
    cond = scc(D)
    parts = []
    traces = {}
    for i, comp in enumerate(cond.components):
        if len(comp) == 1:
            parts.append((comp, DagDecomposition([comp], [])))
            continue
        sub, old = D.induced(comp)
        start = None
        if start_cycles:
            for want in start_cycles:
                if set(want) <= comp:
                    start = [old.index(v) for v in want]
                    break
        trace = run_strategy(sub, p, start_cycle=start, intermediate_bags=intermediate_bags)
        local = strategy_to_decomposition(trace)
        bags = [frozenset(old[v] for v in bag) for bag in local.bags]
        parts.append((comp, DagDecomposition(bags, local.arcs)))
        traces[i] = (trace, old)
    dec = combine_components(parts, cond)
    report = validate(D, dec)
    if not report.ok:
        raise InternalError(f"combined decomposition is invalid: {report.to_json()}")
    return dec, cond, traces


# game replay


@dataclass
class SimulationReport:
    caught: bool
    capture_round: int | None
    robber_monotone: bool
    cop_monotone: bool
    plays: int
    policy: str
    history: list = field(default_factory=list)

    def to_json(self, D: Digraph | None = None) -> dict:
        doc = {
            "caught": self.caught,
            "capture_round": self.capture_round,
            "robber_monotone": self.robber_monotone,
            "cop_monotone": self.cop_monotone,
            "plays": self.plays,
            "policy": self.policy,
        }
        if self.history:
            name = (lambda v: D.label(v)) if D is not None else (lambda v: v)
            doc["history"] = [
                {
                    "round": rnd,
                    "node": h,
                    "bag": sorted(name(v) for v in bag) if D is None or D.labels is None else [name(v) for v in sorted(bag)],
                    "robber": None if r is None else name(r),
                }
                for rnd, h, bag, r in self.history
            ]
        return doc


class _Board:
    """Decomposition seen as a cop strategy: at node ``h`` the cops hold ``X_h``."""

    def __init__(self, D: Digraph, dec: DagDecomposition):
        roots = dec.roots()
        if len(roots) != 1:
            dec = add_unique_root(dec)
            roots = dec.roots()
        self.D = D
        self.bags = dec.bags
        self.kids = [dec.children(h) for h in range(len(dec))]
        self.down = dec.down_sets()
        self.root = roots[0]

    def next_node(self, h: int, region: set) -> int | None:
        for c in self.kids[h]:
            if region <= self.down[c] - self.bags[h]:
                return c
        return None


def simulate_game(
    D: Digraph,
    strategy,
    robber="adversarial",
    seed: int = 0,
    max_plays: int = 100_000,
) -> SimulationReport:
    """Replay a cop strategy (trace or decomposition) against a robber.

    ``robber`` is ``"adversarial"`` (every robber choice is explored),
    ``"random"`` (seeded), ``"greedy"`` (largest next territory), or a callable
    ``f(options, state) -> vertex``.
    """
    if isinstance(strategy, StrategyTrace):
        dec = strategy_to_decomposition(strategy, check=False)
    else:
        dec = strategy
    board = _Board(D, dec)
    everything = set(range(D.n))

    if robber == "adversarial":
        return _simulate_all(board, everything, max_plays)

    if robber == "random":
        rng = random.Random(seed)

        def choose(options, state):
            return rng.choice(options)

        name = f"random({seed})"
    elif robber == "greedy":

        def choose(options, state):
            X = state["announced"]
            return max(options, key=lambda v: (len(reach(D, {v}, X)), -v))

        name = "greedy"
    elif callable(robber):
        choose = robber
        name = getattr(robber, "__name__", "custom")
    else:
        raise InputError(f"unknown robber policy {robber!r}")

    h = board.root
    bag = board.bags[h]
    history = [(0, h, bag, None)]
    options = sorted(everything - bag)
    if not options:
        return SimulationReport(True, 0, True, True, 1, name, history)
    r = choose(options, {"node": h, "announced": bag, "territory": set(everything)})
    if r not in options:
        raise SimulationFault(f"robber chose {r}, not one of {options}")
    history[-1] = (0, h, bag, r)
    region = reach(D, {r}, bag)
    monotone = True
    vacated: set = set()
    cop_mono = True
    rnd = 0
    while True:
        c = board.next_node(h, region)
        if c is None:
            return SimulationReport(False, None, monotone, cop_mono, 1, name, history)
        new = board.bags[c]
        rnd += 1
        vacated |= bag - new
        if new & vacated:
            cop_mono = False
        flight = reach(D, {r}, bag & new)
        options = sorted(flight - new)
        if not flight - new <= region:
            monotone = False
        if not options:
            history.append((rnd, c, new, None))
            return SimulationReport(True, rnd, monotone, cop_mono, 1, name, history)
        r2 = choose(options, {"node": c, "announced": new, "territory": set(region)})
        if r2 not in options:
            raise SimulationFault(f"robber chose {r2}, not one of {options}")
        new_region = reach(D, {r2}, new)
        if not new_region <= region:
            monotone = False
        history.append((rnd, c, new, r2))
        h, bag, r, region = c, new, r2, new_region


def _simulate_all(board: _Board, everything: set, max_plays: int) -> SimulationReport:
    D = board.D
    stats = {"plays": 0, "caught": True, "round": 0, "mono": True, "copmono": True}
    memo = set()

    def play(h, r, region, vacated, rnd):
        key = (h, r, vacated)
        if key in memo:
            return
        memo.add(key)
        bag = board.bags[h]
        c = board.next_node(h, region)
        if c is None:
            stats["caught"] = False
            stats["plays"] += 1
            return
        new = board.bags[c]
        vac = vacated | (bag - new)
        if new & vac:
            stats["copmono"] = False
        flight = reach(D, {r}, bag & new) - new
        if not flight <= region:
            stats["mono"] = False
        if not flight:
            stats["plays"] += 1
            stats["round"] = max(stats["round"], rnd + 1)
            return
        for r2 in sorted(flight):
            if stats["plays"] > max_plays:
                raise BudgetExceeded(f"more than {max_plays} robber plays", used=stats["plays"])
            new_region = reach(D, {r2}, new)
            if not new_region <= region:
                stats["mono"] = False
            play(c, r2, new_region, frozenset(vac), rnd + 1)

    root_bag = board.bags[board.root]
    starts = sorted(everything - root_bag)
    if not starts:
        return SimulationReport(True, 0, True, True, 1, "adversarial")
    for r in starts:
        play(board.root, r, reach(D, {r}, root_bag), frozenset(), 0)
    caught = stats["caught"]
    return SimulationReport(
        caught,
        stats["round"] if caught else None,
        stats["mono"],
        stats["copmono"],
        stats["plays"],
        "adversarial",
    )


# exact game value


def game_cop_number(D: Digraph, c_max: int, budget: int = 500_000):
    """Least number of cops that win the helicopter game, or ``EXCEEDS``.

    No monotonicity is imposed on the cops, so this is a lower bound for the
    width of any decomposition.  Solved by a least fixed point over positions
    (cop set, robber vertex); ``budget`` caps the number of positions.
    """
    if D.n == 0:
        return 0
    for c in range(1, c_max + 1):
        if _cops_win(D, c, budget):
            return c
    return EXCEEDS


def _cops_win(D: Digraph, c: int, budget: int) -> bool:
    n = D.n
    c = min(c, n)
    sets = [sum(1 << v for v in combo) for size in range(c + 1) for combo in combinations(range(n), size)]
    positions = sum(n - bin(X).count("1") for X in sets)
    if positions > budget:
        raise BudgetExceeded(f"{positions} game positions exceed budget {budget}", used=0, remaining=positions)
    succ = [sum(1 << w for w in D.successors(v)) for v in range(n)]
    full = (1 << n) - 1
    reach_cache: dict = {}

    def reach_mask(r, blocked):
        key = (r, blocked)
        got = reach_cache.get(key)
        if got is None:
            seen = 1 << r
            frontier = seen
            while frontier:
                nxt = 0
                f = frontier
                while f:
                    low = f & -f
                    nxt |= succ[low.bit_length() - 1]
                    f ^= low
                nxt &= ~blocked & ~seen
                seen |= nxt
                frontier = nxt
            reach_cache[key] = got = seen
        return got

    win = {X: 0 for X in sets}
    changed = True
    while changed:
        changed = False
        for X in sets:
            todo = full & ~X & ~win[X]
            while todo:
                low = todo & -todo
                r = low.bit_length() - 1
                todo ^= low
                for Y in sets:
                    escape = reach_mask(r, X & Y) & ~Y
                    if escape & ~win[Y] == 0:
                        win[X] |= low
                        changed = True
                        break
    return win[0] == full
