"""DAG-decompositions: data model, validator, rooting and SCC combination."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .digraph import Condensation, Digraph, topological_order
from .exceptions import InputError


@dataclass(frozen=True)
class DagDecomposition:
    """A DAG ``H`` over nodes ``0..len(bags)-1`` with one vertex bag per node."""

    bags: tuple[frozenset, ...]
    arcs: tuple[tuple[int, int], ...]
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in self.bags))
        object.__setattr__(self, "arcs", tuple(sorted({(int(a), int(b)) for a, b in self.arcs})))
        for a, b in self.arcs:
            if not (0 <= a < len(self.bags) and 0 <= b < len(self.bags)):
                raise ValueError(f"decomposition arc ({a}, {b}) names an unknown node")

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0)

    def __len__(self) -> int:
        return len(self.bags)

    def graph(self) -> Digraph:
        return Digraph(len(self.bags), self.arcs)

    def children(self, h: int) -> list[int]:
        return [b for a, b in self.arcs if a == h]

    def roots(self) -> list[int]:
        has_parent = {b for _, b in self.arcs}
        return [h for h in range(len(self.bags)) if h not in has_parent]

    def leaves(self) -> list[int]:
        has_child = {a for a, _ in self.arcs}
        return [h for h in range(len(self.bags)) if h not in has_child]

    def is_acyclic(self) -> bool:
        return self.graph().is_acyclic()

    def below(self) -> list[set]:
        """``below()[h]`` is the set of nodes ``h'`` with ``h <=_H h'``."""
        order = topological_order(self.graph())
        if order is None:
            raise ValueError("decomposition graph has a cycle")
        down = [set([h]) for h in range(len(self.bags))]
        kids = [self.children(h) for h in range(len(self.bags))]
        for h in reversed(order):
            for c in kids[h]:
                down[h] |= down[c]
        return down

    def down_sets(self) -> list[frozenset]:
        """``X_{>=h}``: union of the bags of all nodes below ``h``, inclusive."""
        out = []
        for nodes in self.below():
            acc = set()
            for g in nodes:
                acc |= self.bags[g]
            out.append(frozenset(acc))
        return out

    def to_json(self, D: Digraph | None = None) -> dict:
        def name(v):
            return D.label(v) if D is not None else v

        def key(v):
            return (0, v) if isinstance(v, int) else (1, v)

        doc = {
            "nodes": [
                {"id": h, "bag": sorted((name(v) for v in bag), key=key)}
                for h, bag in enumerate(self.bags)
            ],
            "arcs": [list(a) for a in self.arcs],
            "width": self.width,
        }
        if self.provenance:
            doc["provenance"] = dict(self.provenance)
        return doc

    @classmethod
    def from_json(cls, doc: dict, D: Digraph | None = None) -> "DagDecomposition":
        ids = [node["id"] for node in doc["nodes"]]
        index = {h: i for i, h in enumerate(ids)}
        if len(index) != len(ids):
            raise InputError("duplicate node ids in decomposition")
        lookup = {}
        if D is not None and D.labels is not None:
            lookup = {name: v for v, name in enumerate(D.labels)}
        bags = []
        for node in doc["nodes"]:
            bag = set()
            for v in node["bag"]:
                if isinstance(v, str) and v in lookup:
                    bag.add(lookup[v])
                elif isinstance(v, int) and not lookup:
                    bag.add(v)
                elif isinstance(v, str) and not lookup and v.lstrip("-").isdigit():
                    bag.add(int(v))
                else:
                    raise InputError(f"unknown vertex {v!r} in node {node['id']}")
            bags.append(bag)
        try:
            arcs = [(index[a], index[b]) for a, b in doc.get("arcs", [])]
        except KeyError as exc:
            raise InputError(f"arc names unknown node {exc}") from None
        return cls(bags, arcs, dict(doc.get("provenance", {})))


@dataclass
class ValidationReport:
    """All violations of the three decomposition conditions.

    Each D1 entry is an uncovered vertex; D2 entries are ``(h, h', h'', v)``
    with ``v`` in ``X_h`` and ``X_h''`` but not ``X_h'``; D3 entries are
    ``(h, h', tail, head)`` for an arc escaping the guarded set (``h`` is
    ``None`` for the root condition).  ``structural`` lists problems with ``H``
    itself.
    """

    structural: list = field(default_factory=list)
    d1: list = field(default_factory=list)
    d2: list = field(default_factory=list)
    d3: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    @property
    def ok(self) -> bool:
        return not (self.structural or self.d1 or self.d2 or self.d3)

    def to_json(self) -> dict:
        return {
            "valid": self.ok,
            "structural": list(self.structural),
            "D1": list(self.d1),
            "D2": [list(x) for x in self.d2],
            "D3": [list(x) for x in self.d3],
        }


def guards(D: Digraph, W: Iterable[int], Vp: Iterable[int]) -> bool:
    """True iff every arc leaving ``Vp`` ends in ``W``."""
    return not _escaping(D, set(W), set(Vp))


def _escaping(D: Digraph, W: set, Vp: set) -> list[tuple[int, int]]:
    bad = []
    for v in sorted(Vp):
        for w in D.successors(v):
            if w not in Vp and w not in W:
                bad.append((v, w))
    return bad


def validate(D: Digraph, dec: DagDecomposition) -> ValidationReport:
    """Check D1, D2 and D3 and return every violation found."""
    report = ValidationReport()
    for h, bag in enumerate(dec.bags):
        stray = sorted(v for v in bag if not 0 <= v < D.n)
        if stray:
            report.structural.append(f"node {h} holds non-vertices {stray}")
    if not dec.is_acyclic():
        report.structural.append("H has a directed cycle")
    if report.structural:
        return report

    covered = set().union(*dec.bags) if dec.bags else set()
    report.d1 = [v for v in range(D.n) if v not in covered]

    below = dec.below()
    # v violates D2 at h <= h' <= h'' when v is in X_h and X_h'' but not X_h'
    for h in range(len(dec)):
        for h2 in sorted(below[h]):
            if h2 == h:
                continue
            common = dec.bags[h] & dec.bags[h2]
            if not common:
                continue
            for h1 in sorted(below[h] & _above(below, h2)):
                if h1 in (h, h2):
                    continue
                for v in sorted(common - dec.bags[h1]):
                    report.d2.append((h, h1, h2, v))

    down = dec.down_sets()
    for h, h1 in dec.arcs:
        guard = dec.bags[h] & dec.bags[h1]
        region = down[h1] - dec.bags[h]
        for tail, head in _escaping(D, guard, region):
            report.d3.append((h, h1, tail, head))
    for r in dec.roots():
        for tail, head in _escaping(D, set(), set(down[r])):
            report.d3.append((None, r, tail, head))
    return report


def _above(below: list[set], h: int) -> set:
    return {g for g in range(len(below)) if h in below[g]}


def add_unique_root(dec: DagDecomposition) -> DagDecomposition:
    """Add an empty-bag node above all roots when there is more than one."""
    roots = dec.roots()
    if len(roots) <= 1:
        return dec
    new = len(dec.bags)
    return DagDecomposition(
        dec.bags + (frozenset(),),
        dec.arcs + tuple((new, r) for r in roots),
        dict(dec.provenance),
    )


def combine_components(
    parts: Sequence[tuple[Iterable[int], DagDecomposition]], cond: Condensation
) -> DagDecomposition:
    """Glue per-component decompositions along the condensation.

    Each part must decompose the subdigraph induced by one component (bags in
    the ids of the whole graph) and is rooted first.  For every condensation
    arc ``S_i -> S_j`` an arc joins every leaf of part ``i`` to the root of part
    ``j``; a single empty root is then put on top.
    """
    if len(parts) != len(cond):
        raise InputError(f"{len(parts)} parts for {len(cond)} components")
    order = {frozenset(c): i for i, c in enumerate(cond.components)}
    slot: list = [None] * len(cond)
    for vertices, dec in parts:
        key = frozenset(vertices)
        if key not in order:
            raise InputError(f"part {sorted(key)} is not a strong component")
        if slot[order[key]] is not None:
            raise InputError(f"component {sorted(key)} given twice")
        slot[order[key]] = add_unique_root(dec)

    bags: list = []
    arcs: list = []
    root_of, leaves_of = [], []
    for dec in slot:
        off = len(bags)
        bags.extend(dec.bags)
        arcs.extend((a + off, b + off) for a, b in dec.arcs)
        (r,) = dec.roots()
        root_of.append(r + off)
        leaves_of.append([x + off for x in dec.leaves()])
    for i, j in sorted(cond.arcs):
        for leaf in leaves_of[i]:
            arcs.append((leaf, root_of[j]))
    combined = DagDecomposition(bags, arcs, {"combine": "leaf-to-root"})
    return add_unique_root(combined)
